#include "lcert/extract.hpp"

#include "lcert/combinators.hpp"
#include "lcert/error.hpp"

#include <set>

namespace lcert {

std::string ExtractKey::str() const {
    if (type_args.empty()) return name;
    std::string s = name + "[";
    for (std::size_t i = 0; i < type_args.size(); ++i) {
        if (i) s += ' ';
        s += type_args[i].str();
    }
    return s + "]";
}

IndexEnv IndexEnv::lift() const {
    IndexEnv out;
    out.map_.reserve(map_.size() + 1);
    out.map_.push_back(0);
    for (auto v : map_) out.map_.push_back(v + 1);
    out.offset_ = offset_;
    return out;
}

std::optional<Term> ExtractionEnv::find(const ExtractKey& key) const {
    auto it = entries_.find(key.str());
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

const Term& ExtractionEnv::at(const ExtractKey& key) const {
    auto it = entries_.find(key.str());
    if (it == entries_.end()) throw ExtractError("no extracted term for " + key.str());
    return it->second;
}

void ExtractionEnv::store(const ExtractKey& key, const Term& t) {
    if (!closed(t)) throw ExtractError("extracted term for " + key.str() + " is not closed");
    std::string k = key.str();
    if (entries_.emplace(k, t).second) order_.push_back(k);
}

std::string ExtractionEnv::dump() const {
    std::string out;
    for (const auto& k : order_) out += k + "\t" + print_term(entries_.at(k)) + "\n";
    return out;
}

void declare_datatypes(ExtractionEnv& env, const SourceProgram& program) {
    for (const auto& a : program.adts)
        if (!env.registry().declared(a.name)) env.registry().declare(a);
}

namespace {

void require_ground(const SrcExpr& e, const std::vector<SrcType>& targs) {
    for (const auto& t : targs)
        if (!t.is_ground())
            throw ExtractError(e.where() + ": the term contains variables as type parameters (" + t.str() + ")");
}

std::string ctor_name(const Registry& r, const std::string& adt, std::size_t i) {
    return adt + "." + r.adt(adt).ctors.at(i).name;
}

} // namespace

Term extract_expr(const ExtractionEnv& env, const IndexEnv& ienv, const SrcExpr& e) {
    using K = SrcExpr::Kind;
    switch (e.kind) {
    case K::var:
        return Term::var(ienv(e.index));
    case K::lam:
        return Term::lam(extract_expr(env, ienv.lift(), e.kids[0]));
    case K::fix:
        return rho_open(Term::lam(extract_expr(env, ienv.lift(), e.kids[0])));
    case K::app: {
        const SrcExpr& arg = e.kids[1];
        if (arg.kind == K::lam || arg.kind == K::fix)
            throw ExtractError(arg.where() + ": functional argument is a local function; define it as a named "
                                             "definition and pass that instead");
        return Term::app(extract_expr(env, ienv, e.kids[0]), extract_expr(env, ienv, arg));
    }
    case K::ctor: {
        require_ground(e, e.type_args);
        const Registry& r = env.registry();
        const AdtDef& adt = r.adt(e.name);
        SrcType instance = SrcType::adt(e.name, e.type_args);
        if (adt.ctors.at(e.ctor).fields.empty()) {
            if (!r.registered(instance))
                throw ExtractError(e.where() + ": datatype instance " + instance.str() + " is not registered");
            Value v;
            v.ctor = static_cast<std::uint32_t>(e.ctor);
            return r.encode(instance, v);
        }
        ExtractKey key{ctor_name(r, e.name, e.ctor), e.type_args};
        auto t = env.find(key);
        if (!t) throw ExtractError(e.where() + ": constructor " + key.str() + " has not been extracted");
        return *t;
    }
    case K::cref: {
        require_ground(e, e.type_args);
        ExtractKey key{e.name, e.type_args};
        auto t = env.find(key);
        if (!t) throw ExtractError(e.where() + ": definition " + key.str() + " has not been extracted");
        return *t;
    }
    case K::match: {
        Term disc = extract_expr(env, ienv, e.kids[0]);
        std::vector<Branch> branches;
        for (std::size_t i = 0; i < e.arities.size(); ++i) {
            IndexEnv inner = ienv;
            for (std::size_t k = 0; k < e.arities[i]; ++k) inner = inner.lift();
            branches.push_back({e.arities[i], extract_expr(env, inner, e.kids[i + 1])});
        }
        return match_lower(disc, branches);
    }
    }
    throw ExtractError("unreachable expression kind");
}

Term extract_ctor(ExtractionEnv& env, const std::string& adt, std::size_t ctor,
                  const std::vector<SrcType>& type_args) {
    const Registry& r = env.registry();
    const AdtDef& def = r.adt(adt);
    if (ctor >= def.ctors.size()) throw ExtractError("datatype " + adt + " has no constructor " + std::to_string(ctor));
    if (type_args.size() != def.params.size())
        throw ExtractError("constructor " + adt + "." + def.ctors[ctor].name + " needs " +
                           std::to_string(def.params.size()) + " type arguments");
    ExtractKey key{ctor_name(r, adt, ctor), type_args};
    if (auto t = env.find(key)) return *t;
    Term t = gen_constructor(def.ctors[ctor].fields.size(), def.ctors.size(), ctor);
    env.store(key, t);
    return t;
}

Term extract_def(ExtractionEnv& env, const SourceProgram& program, const std::string& name,
                 const std::vector<SrcType>& type_args) {
    ExtractKey key{name, type_args};
    if (auto t = env.find(key)) return *t;
    const Def* d = program.find_def(name);
    if (!d) throw ExtractError("unknown definition " + name);
    Def mono = monomorphize(*d, type_args);
    Term t = extract_expr(env, IndexEnv{}, mono.body);
    env.store(key, t);
    return t;
}

namespace {

class Planner {
  public:
    Planner(ExtractionEnv& env, const SourceProgram& program) : env_(env), program_(program) {}

    void def(const ExtractKey& key) {
        if (env_.contains(key)) return;
        std::string k = key.str();
        if (active_.count(k)) throw ExtractError("cyclic reference through " + k);
        const Def* d = program_.find_def(key.name);
        if (!d) throw ExtractError("unknown definition " + key.name);
        active_.insert(k);
        Def mono = monomorphize(*d, key.type_args);
        deps(mono.body);
        extract_def(env_, program_, key.name, key.type_args);
        active_.erase(k);
    }

  private:
    ExtractionEnv& env_;
    const SourceProgram& program_;
    std::set<std::string> active_;

    void deps(const SrcExpr& e) {
        if (e.kind == SrcExpr::Kind::cref) {
            require_ground(e, e.type_args);
            def({e.name, e.type_args});
        } else if (e.kind == SrcExpr::Kind::ctor) {
            require_ground(e, e.type_args);
            SrcType instance = SrcType::adt(e.name, e.type_args);
            const AdtDef& adt = env_.registry().adt(e.name);
            if (adt.ctors.at(e.ctor).fields.empty())
                env_.registry().register_closure(instance);
            else
                extract_ctor(env_, e.name, e.ctor, e.type_args);
        }
        for (const auto& k : e.kids) deps(k);
    }
};

} // namespace

void extract_program(ExtractionEnv& env, const SourceProgram& program, const std::vector<ExtractKey>& requests) {
    declare_datatypes(env, program);
    Planner planner(env, program);
    for (const auto& r : requests) planner.def(r);
}

} // namespace lcert
