#include "lcert/source.hpp"

#include "lcert/error.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

namespace lcert {

SrcExpr SrcExpr::var(std::uint64_t i) {
    SrcExpr e;
    e.kind = Kind::var;
    e.index = i;
    return e;
}

SrcExpr SrcExpr::lam(SrcType param, SrcExpr body) {
    SrcExpr e;
    e.kind = Kind::lam;
    e.type = std::move(param);
    e.kids.push_back(std::move(body));
    return e;
}

SrcExpr SrcExpr::app(SrcExpr fn, SrcExpr arg) {
    SrcExpr e;
    e.kind = Kind::app;
    e.pos = fn.pos;
    e.kids.push_back(std::move(fn));
    e.kids.push_back(std::move(arg));
    return e;
}

SrcExpr SrcExpr::ctor_ref(std::string adt, std::size_t index, std::vector<SrcType> type_args) {
    SrcExpr e;
    e.kind = Kind::ctor;
    e.name = std::move(adt);
    e.ctor = index;
    e.type_args = std::move(type_args);
    return e;
}

SrcExpr SrcExpr::const_ref(std::string def, std::vector<SrcType> type_args) {
    SrcExpr e;
    e.kind = Kind::cref;
    e.name = std::move(def);
    e.type_args = std::move(type_args);
    return e;
}

SrcExpr SrcExpr::match(SrcExpr discriminee, std::string adt, std::vector<std::pair<std::size_t, SrcExpr>> branches) {
    SrcExpr e;
    e.kind = Kind::match;
    e.name = std::move(adt);
    e.pos = discriminee.pos;
    e.kids.push_back(std::move(discriminee));
    for (auto& [arity, body] : branches) {
        e.arities.push_back(arity);
        e.kids.push_back(std::move(body));
    }
    return e;
}

SrcExpr SrcExpr::fix(std::uint64_t decreasing, SrcType type, SrcExpr body) {
    SrcExpr e;
    e.kind = Kind::fix;
    e.index = decreasing;
    e.type = std::move(type);
    e.kids.push_back(std::move(body));
    return e;
}

std::string SrcExpr::where() const {
    std::string s = std::to_string(pos.line) + ":" + std::to_string(pos.column);
    if (!label.empty()) s += " (" + label + ")";
    return s;
}

const Def* SourceProgram::find_def(const std::string& name) const {
    for (const auto& d : defs)
        if (d.name == name) return &d;
    return nullptr;
}

std::size_t SourceProgram::def_position(const std::string& name) const {
    for (std::size_t i = 0; i < defs.size(); ++i)
        if (defs[i].name == name) return i;
    return defs.size();
}

const AdtDef* SourceProgram::find_adt(const std::string& name) const {
    for (const auto& a : adts)
        if (a.name == name) return &a;
    return nullptr;
}

void SourceProgram::merge(const SourceProgram& other) {
    for (const auto& a : other.adts) {
        if (find_adt(a.name)) throw TypeError("duplicate datatype " + a.name);
        adts.push_back(a);
    }
    for (const auto& d : other.defs) {
        if (find_def(d.name)) throw TypeError("duplicate definition " + d.name);
        defs.push_back(d);
    }
}

// ---------------------------------------------------------------------------
// parsing

namespace {

bool is_param_symbol(const Sexpr& s) { return s.is_symbol() && s.text.size() > 1 && s.text[0] == '\''; }

std::string param_name(const std::string& text) { return text[0] == '\'' ? text.substr(1) : text; }

const std::set<std::string> keywords = {"var", "lam", "app", "ctor", "match", "fix",
                                        "const", "let", "if", "list", "data", "def"};

class ProgramParser {
  public:
    explicit ProgramParser(SourceProgram& program) : program_(program) {}

    void set_params(std::vector<std::string> params) { params_ = std::move(params); }

    void top(const Sexpr& s) {
        if (s.is_form("data")) {
            data(s);
        } else if (s.is_form("def")) {
            def(s);
        } else {
            s.fail("expected (data ...) or (def ...)");
        }
    }

  private:
    SourceProgram& program_;
    std::vector<std::string> params_;
    std::vector<std::string> scope_; // innermost last

    void data(const Sexpr& s) {
        if (s.items.size() < 2 || !s.items[1].is_symbol()) s.fail("expected datatype name");
        AdtDef def;
        def.name = s.items[1].text;
        if (program_.find_adt(def.name)) s.items[1].fail("duplicate datatype " + def.name);
        if (def.name.find('.') != std::string::npos) s.items[1].fail("datatype names cannot contain '.'");
        std::size_t i = 2;
        if (i < s.items.size() && s.items[i].is_list() &&
            std::all_of(s.items[i].items.begin(), s.items[i].items.end(), is_param_symbol)) {
            for (const auto& p : s.items[i].items) def.params.push_back(param_name(p.text));
            ++i;
        }
        // visible while parsing its own constructors
        program_.adts.push_back(def);
        params_ = def.params;
        AdtDef& stored = program_.adts.back();
        for (; i < s.items.size(); ++i) {
            const Sexpr& c = s.items[i];
            CtorDef ctor;
            if (c.is_symbol()) {
                ctor.name = c.text;
            } else if (c.is_list() && !c.items.empty() && c.items[0].is_symbol()) {
                ctor.name = c.items[0].text;
                for (std::size_t k = 1; k < c.items.size(); ++k) ctor.fields.push_back(type(c.items[k]));
            } else {
                c.fail("expected constructor declaration");
            }
            for (const auto& other : stored.ctors)
                if (other.name == ctor.name) c.fail("duplicate constructor " + ctor.name);
            stored.ctors.push_back(std::move(ctor));
        }
        if (stored.ctors.empty()) s.fail("datatype " + stored.name + " needs at least one constructor");
        params_.clear();
    }

    void def(const Sexpr& s) {
        if (s.items.size() != 5) s.fail("expected (def NAME (PARAM*) TYPE EXPR)");
        if (!s.items[1].is_symbol()) s.items[1].fail("expected definition name");
        Def d;
        d.name = s.items[1].text;
        d.pos = s.pos;
        if (program_.find_def(d.name)) s.items[1].fail("duplicate definition " + d.name);
        if (keywords.count(d.name) || d.name.find('.') != std::string::npos) s.items[1].fail("reserved name " + d.name);
        if (!s.items[2].is_list()) s.items[2].fail("expected type parameter list");
        for (const auto& p : s.items[2].items) {
            if (!p.is_symbol()) p.fail("expected type parameter");
            d.params.push_back(param_name(p.text));
        }
        params_ = d.params;
        d.type = type(s.items[3]);
        scope_.clear();
        d.body = expr(s.items[4]);
        params_.clear();
        program_.defs.push_back(std::move(d));
    }

  public:
    SrcType type(const Sexpr& s) {
        if (s.is_symbol()) {
            if (s.text == "Type") return SrcType::sort();
            if (s.text[0] == '\'' || std::find(params_.begin(), params_.end(), s.text) != params_.end()) {
                std::string n = param_name(s.text);
                if (std::find(params_.begin(), params_.end(), n) == params_.end())
                    s.fail("type parameter '" + n + " is not in scope");
                return SrcType::param(n);
            }
            return adt_type(s, s.text, {});
        }
        if (!s.is_list() || s.items.empty() || !s.items[0].is_symbol()) s.fail("expected a type");
        const std::string& head = s.items[0].text;
        if (head == "->") {
            if (s.items.size() < 3) s.fail("arrow needs at least two types");
            std::vector<SrcType> parts;
            for (std::size_t i = 1; i < s.items.size(); ++i) parts.push_back(type(s.items[i]));
            SrcType result = parts.back();
            parts.pop_back();
            return SrcType::arrows(parts, result);
        }
        if (head == "forall") throw TypeError(
            std::to_string(s.pos.line) + ":" + std::to_string(s.pos.column) +
            ": non-prenex polymorphism: type quantifiers are only allowed in front of a definition");
        std::vector<SrcType> args;
        for (std::size_t i = 1; i < s.items.size(); ++i) args.push_back(type(s.items[i]));
        return adt_type(s, head, std::move(args));
    }

  private:
    SrcType adt_type(const Sexpr& at, const std::string& name, std::vector<SrcType> args) {
        const AdtDef* a = program_.find_adt(name);
        if (!a) at.fail("unknown type " + name);
        if (a->params.size() != args.size())
            at.fail("type " + name + " expects " + std::to_string(a->params.size()) + " arguments");
        return SrcType::adt(name, std::move(args));
    }

    std::vector<SrcType> type_list(const Sexpr& s) {
        if (!s.is_list() && !s.is_bracket()) s.fail("expected a list of type arguments");
        std::vector<SrcType> out;
        for (const auto& t : s.items) out.push_back(type(t));
        return out;
    }

    bool is_binder(const Sexpr& s) const {
        return s.is_list() && s.items.size() == 2 && s.items[0].is_symbol() && !is_param_symbol(s.items[0]) &&
               s.items[0].text != "->" && s.items[0].text != "forall" && !program_.find_adt(s.items[0].text);
    }

    std::string bind_name(const Sexpr& s) {
        if (program_.find_adt(s.text) || keywords.count(s.text)) s.fail("cannot bind reserved name " + s.text);
        return s.text;
    }

    SrcExpr located(SrcExpr e, const Sexpr& s, std::string label = {}) {
        e.pos = s.pos;
        if (!label.empty()) e.label = std::move(label);
        return e;
    }

    SrcExpr ctor_named(const Sexpr& at, const std::string& qualified, std::vector<SrcType> targs) {
        auto dot = qualified.find('.');
        std::string adt = qualified.substr(0, dot);
        std::string ctor = qualified.substr(dot + 1);
        const AdtDef* a = program_.find_adt(adt);
        if (!a) at.fail("unknown datatype " + adt);
        for (std::size_t i = 0; i < a->ctors.size(); ++i)
            if (a->ctors[i].name == ctor) return located(SrcExpr::ctor_ref(adt, i, std::move(targs)), at, qualified);
        at.fail("datatype " + adt + " has no constructor " + ctor);
    }

    SrcExpr reference(const Sexpr& at, const std::string& name, std::vector<SrcType> targs) {
        if (name.find('.') != std::string::npos) return ctor_named(at, name, std::move(targs));
        if (program_.find_def(name)) return located(SrcExpr::const_ref(name, std::move(targs)), at, name);
        std::string owner;
        for (const auto& a : program_.adts)
            for (const auto& c : a.ctors)
                if (c.name == name) {
                    if (!owner.empty()) at.fail("ambiguous constructor " + name + "; qualify it as ADT." + name);
                    owner = a.name;
                }
        if (!owner.empty()) return ctor_named(at, owner + "." + name, std::move(targs));
        at.fail("unknown identifier " + name);
    }

    SrcExpr nat_literal(const Sexpr& at, std::uint64_t n) {
        const AdtDef* nat = program_.find_adt("nat");
        if (!nat || nat->ctors.size() != 2) at.fail("numeric literal needs the nat datatype");
        SrcExpr e = located(SrcExpr::ctor_ref("nat", 0), at, "nat.O");
        for (std::uint64_t i = 0; i < n; ++i) e = SrcExpr::app(located(SrcExpr::ctor_ref("nat", 1), at, "nat.S"), e);
        return e;
    }

    SrcExpr symbol(const Sexpr& s) {
        for (std::size_t i = scope_.size(); i-- > 0;)
            if (scope_[i] == s.text) return located(SrcExpr::var(scope_.size() - 1 - i), s, s.text);
        return reference(s, s.text, {});
    }

    SrcExpr scoped(const Sexpr& s, const std::vector<std::string>& names) {
        for (const auto& n : names) scope_.push_back(n);
        SrcExpr e = expr(s);
        scope_.resize(scope_.size() - names.size());
        return e;
    }

    SrcExpr expr(const Sexpr& s) {
        if (s.is_number()) return nat_literal(s, s.number);
        if (s.is_symbol()) return symbol(s);
        if (s.is_bracket()) {
            if (s.items.empty() || !s.items[0].is_symbol()) s.fail("expected [NAME TYPE*]");
            std::vector<SrcType> targs;
            for (std::size_t i = 1; i < s.items.size(); ++i) targs.push_back(type(s.items[i]));
            return reference(s, s.items[0].text, std::move(targs));
        }
        if (s.items.empty()) s.fail("empty expression");
        const Sexpr& head = s.items[0];
        if (head.is_symbol() && keywords.count(head.text)) {
            const std::string& k = head.text;
            if (k == "var") return var_form(s);
            if (k == "lam") return lam_form(s);
            if (k == "app") {
                if (s.items.size() < 3) s.fail("app needs a function and at least one argument");
                return application(s, 1);
            }
            if (k == "ctor") {
                if (s.items.size() < 2 || s.items.size() > 3 || !s.items[1].is_symbol())
                    s.fail("expected (ctor NAME.CTOR TYPEARGS)");
                if (s.items[1].text.find('.') == std::string::npos) s.items[1].fail("expected NAME.CTOR");
                return ctor_named(s, s.items[1].text, s.items.size() == 3 ? type_list(s.items[2]) : std::vector<SrcType>{});
            }
            if (k == "const") {
                if (s.items.size() < 2 || s.items.size() > 3 || !s.items[1].is_symbol())
                    s.fail("expected (const NAME TYPEARGS)");
                if (!program_.find_def(s.items[1].text)) s.items[1].fail("unknown definition " + s.items[1].text);
                return located(SrcExpr::const_ref(s.items[1].text,
                                                  s.items.size() == 3 ? type_list(s.items[2]) : std::vector<SrcType>{}),
                               s, s.items[1].text);
            }
            if (k == "match") return match_form(s);
            if (k == "fix") return fix_form(s);
            if (k == "let") return let_form(s);
            if (k == "if") {
                if (s.items.size() != 4) s.fail("expected (if COND THEN ELSE)");
                if (!program_.find_adt("bool")) s.fail("if needs the bool datatype");
                return located(SrcExpr::match(expr(s.items[1]), "bool", {{0, expr(s.items[2])}, {0, expr(s.items[3])}}),
                               s, "if");
            }
            if (k == "list") return list_form(s);
            s.fail("unexpected keyword " + k);
        }
        return application(s, 0);
    }

    SrcExpr application(const Sexpr& s, std::size_t from) {
        SrcExpr e = expr(s.items[from]);
        for (std::size_t i = from + 1; i < s.items.size(); ++i) {
            SrcExpr a = SrcExpr::app(std::move(e), expr(s.items[i]));
            a.pos = s.items[i].pos;
            e = std::move(a);
        }
        return e;
    }

    SrcExpr var_form(const Sexpr& s) {
        if (s.items.size() != 2 || !s.items[1].is_number()) s.fail("expected (var N)");
        return located(SrcExpr::var(s.items[1].number), s);
    }

    SrcExpr lam_form(const Sexpr& s) {
        if (s.items.size() < 3) s.fail("expected (lam TYPE EXPR) or (lam (x TYPE)... EXPR)");
        std::vector<std::pair<std::string, SrcType>> binders;
        for (std::size_t i = 1; i + 1 < s.items.size(); ++i) {
            const Sexpr& b = s.items[i];
            if (is_binder(b)) {
                binders.emplace_back(bind_name(b.items[0]), type(b.items[1]));
            } else {
                if (s.items.size() != 3) b.fail("expected (NAME TYPE) binder");
                binders.emplace_back("", type(b));
            }
        }
        std::vector<std::string> names;
        for (const auto& b : binders) names.push_back(b.first);
        SrcExpr body = scoped(s.items.back(), names);
        for (std::size_t i = binders.size(); i-- > 0;)
            body = located(SrcExpr::lam(binders[i].second, std::move(body)), s, binders[i].first);
        return body;
    }

    SrcExpr match_form(const Sexpr& s) {
        if (s.items.size() < 4 || !s.items[2].is_symbol()) s.fail("expected (match EXPR NAME (BRANCH*))");
        const AdtDef* a = program_.find_adt(s.items[2].text);
        if (!a) s.items[2].fail("unknown datatype " + s.items[2].text);
        SrcExpr disc = expr(s.items[1]);
        // branches come grouped in one list, or inline after the datatype name
        std::vector<Sexpr> branches;
        bool grouped = s.items.size() == 4 && s.items[3].is_list() &&
                       (a->ctors.size() > 1 || s.items[3].items.size() == 1);
        if (grouped)
            branches = s.items[3].items;
        else
            branches.assign(s.items.begin() + 3, s.items.end());
        if (branches.size() != a->ctors.size())
            s.fail("match on " + a->name + " needs " + std::to_string(a->ctors.size()) + " branches");
        std::vector<std::pair<std::size_t, SrcExpr>> out;
        for (std::size_t i = 0; i < branches.size(); ++i) {
            const Sexpr& b = branches[i];
            if (!b.is_list() || b.items.size() != 2) b.fail("expected (PATTERN EXPR)");
            const Sexpr& pat = b.items[0];
            std::vector<std::string> names;
            std::size_t arity = 0;
            if (pat.is_number()) {
                arity = pat.number;
                names.assign(arity, "");
            } else if (pat.is_symbol()) {
                if (pat.text != a->ctors[i].name) pat.fail("expected constructor " + a->ctors[i].name + " here");
            } else if (pat.is_list() && !pat.items.empty() && pat.items[0].is_symbol()) {
                if (pat.items[0].text != a->ctors[i].name)
                    pat.fail("expected constructor " + a->ctors[i].name + " here");
                for (std::size_t k = 1; k < pat.items.size(); ++k) {
                    if (!pat.items[k].is_symbol()) pat.items[k].fail("expected pattern variable");
                    names.push_back(pat.items[k].text == "_" ? "" : bind_name(pat.items[k]));
                }
                arity = names.size();
            } else {
                pat.fail("expected a pattern");
            }
            out.emplace_back(arity, scoped(b.items[1], names));
        }
        return located(SrcExpr::match(std::move(disc), a->name, std::move(out)), s, "match " + a->name);
    }

    SrcExpr fix_form(const Sexpr& s) {
        std::size_t i = 1;
        std::string name;
        if (s.items.size() == 5 && s.items[1].is_symbol()) {
            name = bind_name(s.items[1]);
            i = 2;
        }
        if (s.items.size() != i + 3 || !s.items[i].is_number()) s.fail("expected (fix NAME? ARGINDEX TYPE EXPR)");
        SrcType t = type(s.items[i + 1]);
        SrcExpr body = scoped(s.items[i + 2], {name});
        return located(SrcExpr::fix(s.items[i].number, std::move(t), std::move(body)), s, name.empty() ? "fix" : name);
    }

    SrcExpr let_form(const Sexpr& s) {
        if (s.items.size() != 3 || !s.items[1].is_list() || s.items[1].items.size() != 3 ||
            !s.items[1].items[0].is_symbol())
            s.fail("expected (let (NAME TYPE EXPR) BODY)");
        const auto& b = s.items[1].items;
        std::string name = bind_name(b[0]);
        SrcType t = type(b[1]);
        SrcExpr bound = expr(b[2]);
        SrcExpr body = scoped(s.items[2], {name});
        SrcExpr fn = located(SrcExpr::lam(std::move(t), std::move(body)), s, name);
        return located(SrcExpr::app(std::move(fn), std::move(bound)), s, "let " + name);
    }

    SrcExpr list_form(const Sexpr& s) {
        if (s.items.size() < 2) s.fail("expected (list TYPE EXPR*)");
        const AdtDef* l = program_.find_adt("list");
        if (!l || l->ctors.size() != 2) s.fail("list literal needs the list datatype");
        SrcType elem = type(s.items[1]);
        SrcExpr e = located(SrcExpr::ctor_ref("list", 0, {elem}), s, "list.nil");
        for (std::size_t i = s.items.size(); i-- > 2;) {
            SrcExpr cons = located(SrcExpr::ctor_ref("list", 1, {elem}), s.items[i], "list.cons");
            e = SrcExpr::app(SrcExpr::app(std::move(cons), expr(s.items[i])), std::move(e));
        }
        return e;
    }
};

} // namespace

void parse_into(SourceProgram& program, std::string_view text) {
    ProgramParser parser(program);
    for (const auto& s : parse_sexprs(text)) parser.top(s);
}

SourceProgram parse_program(std::string_view text) {
    SourceProgram p;
    parse_into(p, text);
    return p;
}

SrcType parse_type(const SourceProgram& program, const Sexpr& s, const std::vector<std::string>& params) {
    SourceProgram copy = program;
    ProgramParser parser(copy);
    parser.set_params(params);
    return parser.type(s);
}

// ---------------------------------------------------------------------------
// typing

namespace {

std::string at(const SrcExpr& e) { return e.where() + ": "; }

void check_type_wf(const SourceProgram& p, const SrcType& t, const std::vector<std::string>& params,
                   const std::string& where) {
    switch (t.kind()) {
    case SrcType::Kind::sort:
        throw TypeError(where + "not admissible: Type used as a value type");
    case SrcType::Kind::param:
        if (std::find(params.begin(), params.end(), t.name()) == params.end())
            throw TypeError(where + "type parameter '" + t.name() + " not in scope");
        return;
    case SrcType::Kind::arrow:
        check_type_wf(p, t.dom(), params, where);
        check_type_wf(p, t.cod(), params, where);
        return;
    case SrcType::Kind::adt: {
        const AdtDef* a = p.find_adt(t.name());
        if (!a) throw TypeError(where + "unknown datatype " + t.name());
        if (a->params.size() != t.args().size())
            throw TypeError(where + "datatype " + t.name() + " applied to " + std::to_string(t.args().size()) +
                            " of " + std::to_string(a->params.size()) + " type arguments");
        for (const auto& x : t.args()) check_type_wf(p, x, params, where);
        return;
    }
    }
}

} // namespace

SrcType infer_type(const SourceProgram& p, const std::vector<SrcType>& ctx, const SrcExpr& e,
                   const std::vector<std::string>& params, std::size_t visible_defs) {
    using K = SrcExpr::Kind;
    switch (e.kind) {
    case K::var:
        if (e.index >= ctx.size()) throw TypeError(at(e) + "unbound variable " + std::to_string(e.index));
        return ctx[ctx.size() - 1 - e.index];
    case K::lam: {
        check_type_wf(p, e.type, params, at(e));
        auto inner = ctx;
        inner.push_back(e.type);
        return SrcType::arrow(e.type, infer_type(p, inner, e.kids[0], params, visible_defs));
    }
    case K::app: {
        SrcType f = infer_type(p, ctx, e.kids[0], params, visible_defs);
        SrcType a = infer_type(p, ctx, e.kids[1], params, visible_defs);
        if (!f.is_arrow())
            throw TypeError(at(e.kids[1]) + "applying a non-function of type " + f.str());
        if (f.dom() != a)
            throw TypeError(at(e.kids[1]) + "type mismatch: expected " + f.dom().str() + ", got " + a.str());
        return f.cod();
    }
    case K::ctor: {
        const AdtDef* a = p.find_adt(e.name);
        if (!a) throw TypeError(at(e) + "unknown datatype " + e.name);
        if (e.type_args.size() != a->params.size())
            throw TypeError(at(e) + "partial type instantiation: " + e.name + "." + a->ctors.at(e.ctor).name +
                            " needs " + std::to_string(a->params.size()) + " type arguments");
        for (const auto& t : e.type_args) check_type_wf(p, t, params, at(e));
        SrcType inst = SrcType::adt(e.name, e.type_args);
        return SrcType::arrows(a->fields_at(inst, e.ctor), inst);
    }
    case K::cref: {
        std::size_t pos = p.def_position(e.name);
        if (pos >= visible_defs) throw TypeError(at(e) + "definition " + e.name + " is not defined before this use");
        const Def& d = p.defs[pos];
        if (e.type_args.size() != d.params.size())
            throw TypeError(at(e) + "partial type instantiation: " + e.name + " needs " +
                            std::to_string(d.params.size()) + " type arguments");
        std::map<std::string, SrcType> by;
        for (std::size_t i = 0; i < d.params.size(); ++i) {
            check_type_wf(p, e.type_args[i], params, at(e));
            by[d.params[i]] = e.type_args[i];
        }
        return d.type.substitute(by);
    }
    case K::match: {
        SrcType dt = infer_type(p, ctx, e.kids[0], params, visible_defs);
        if (!dt.is_adt() || dt.name() != e.name)
            throw TypeError(at(e) + "match on " + e.name + " but discriminee has type " + dt.str());
        const AdtDef* a = p.find_adt(e.name);
        if (e.arities.size() != a->ctors.size())
            throw TypeError(at(e) + "match on " + e.name + " needs " + std::to_string(a->ctors.size()) + " branches");
        std::optional<SrcType> result;
        for (std::size_t i = 0; i < e.arities.size(); ++i) {
            auto fields = a->fields_at(dt, i);
            if (fields.size() != e.arities[i])
                throw TypeError(at(e.kids[i + 1]) + "branch " + a->ctors[i].name + " binds " +
                                std::to_string(e.arities[i]) + " variables, constructor has " +
                                std::to_string(fields.size()) + " fields");
            auto inner = ctx;
            inner.insert(inner.end(), fields.begin(), fields.end());
            SrcType bt = infer_type(p, inner, e.kids[i + 1], params, visible_defs);
            if (result && *result != bt)
                throw TypeError(at(e.kids[i + 1]) + "branches disagree: " + result->str() + " vs " + bt.str());
            result = bt;
        }
        return *result;
    }
    case K::fix: {
        check_type_wf(p, e.type, params, at(e));
        if (e.type.arg_types().size() <= e.index)
            throw TypeError(at(e) + "fix type has no argument at position " + std::to_string(e.index));
        auto inner = ctx;
        inner.push_back(e.type);
        SrcType bt = infer_type(p, inner, e.kids[0], params, visible_defs);
        if (bt != e.type) throw TypeError(at(e) + "fix body has type " + bt.str() + ", declared " + e.type.str());
        return e.type;
    }
    }
    throw TypeError("unreachable expression kind");
}

void typecheck_def(const SourceProgram& p, const Def& d) {
    std::string where = d.name + ": ";
    std::set<std::string> seen;
    for (const auto& x : d.params)
        if (!seen.insert(x).second) throw TypeError(where + "duplicate type parameter " + x);
    if (d.type.result_type().is_sort())
        throw TypeError(where + "not admissible: the result type is Type");
    if (d.type.mentions_sort()) throw TypeError(where + "not admissible: Type appears in the type");
    check_type_wf(p, d.type, d.params, where);
    std::size_t pos = p.def_position(d.name);
    SrcType t = infer_type(p, {}, d.body, d.params, pos);
    if (t != d.type) throw TypeError(where + "body has type " + t.str() + ", declared " + d.type.str());
    guardedness_check(d);
}

void typecheck(const SourceProgram& p) {
    std::set<std::string> names;
    for (const auto& a : p.adts) {
        if (!names.insert(a.name).second) throw TypeError("duplicate datatype " + a.name);
        if (a.ctors.empty()) throw TypeError("datatype " + a.name + " has no constructors");
        SrcType self = a.self_type();
        for (const auto& c : a.ctors)
            for (const auto& f : c.fields) {
                if (!f.is_adt() && !f.is_param())
                    throw TypeError(a.name + "." + c.name + ": fields must be datatypes or parameters, got " + f.str());
                check_type_wf(p, f, a.params, a.name + "." + c.name + ": ");
                // a recursive occurrence must be the datatype itself at its own parameters
                if (f.is_adt() && f.name() == a.name && f != self)
                    throw TypeError(a.name + "." + c.name + ": non-uniform recursive occurrence " + f.str());
            }
    }
    names.clear();
    for (const auto& d : p.defs) {
        if (!names.insert(d.name).second) throw TypeError("duplicate definition " + d.name);
        typecheck_def(p, d);
    }
}

// ---------------------------------------------------------------------------
// guardedness

namespace {

struct Status {
    enum Kind { other, self, formal, smaller } kind = other;
    std::size_t fix = 0; // which fix this status belongs to
    std::uint64_t position = 0;
};

class Guard {
  public:
    explicit Guard(const Def& d) : def_(d) {}

    void run() { walk(def_.body); }

  private:
    const Def& def_;
    std::vector<Status> ctx_; // innermost last
    std::size_t next_fix_ = 0;

    const Status& lookup(std::uint64_t i) const {
        static const Status none{};
        return i < ctx_.size() ? ctx_[ctx_.size() - 1 - i] : none;
    }

    [[noreturn]] void fail(const SrcExpr& e, const std::string& why) const {
        throw GuardError(def_.name + ": " + e.where() + ": " + why);
    }

    void walk(const SrcExpr& e) {
        using K = SrcExpr::Kind;
        switch (e.kind) {
        case K::var:
            if (lookup(e.index).kind == Status::self)
                fail(e, "recursive function used without its decreasing argument");
            return;
        case K::ctor:
        case K::cref:
            return;
        case K::lam:
            ctx_.push_back({});
            walk(e.kids[0]);
            ctx_.pop_back();
            return;
        case K::app:
            application(e);
            return;
        case K::match: {
            walk(e.kids[0]);
            Status field{};
            const SrcExpr& d = e.kids[0];
            if (d.kind == K::var) {
                const Status& s = lookup(d.index);
                if (s.kind == Status::formal || s.kind == Status::smaller) field = {Status::smaller, s.fix, 0};
            }
            for (std::size_t i = 0; i < e.arities.size(); ++i) {
                for (std::size_t k = 0; k < e.arities[i]; ++k) ctx_.push_back(field);
                walk(e.kids[i + 1]);
                ctx_.resize(ctx_.size() - e.arities[i]);
            }
            return;
        }
        case K::fix: {
            std::size_t id = next_fix_++;
            ctx_.push_back({Status::self, id, e.index});
            const SrcExpr* body = &e.kids[0];
            std::size_t pushed = 0;
            for (std::uint64_t k = 0; k <= e.index; ++k) {
                if (body->kind != K::lam)
                    fail(e, "fix body must take at least " + std::to_string(e.index + 1) + " parameters");
                ctx_.push_back(k == e.index ? Status{Status::formal, id, 0} : Status{});
                ++pushed;
                body = &body->kids[0];
            }
            walk(*body);
            ctx_.resize(ctx_.size() - pushed - 1);
            return;
        }
        }
    }

    void application(const SrcExpr& e) {
        std::vector<const SrcExpr*> args;
        const SrcExpr* head = &e;
        while (head->kind == SrcExpr::Kind::app) {
            args.push_back(&head->kids[1]);
            head = &head->kids[0];
        }
        std::reverse(args.begin(), args.end());
        if (head->kind == SrcExpr::Kind::var && lookup(head->index).kind == Status::self) {
            const Status& self = lookup(head->index);
            if (args.size() <= self.position)
                fail(e, "recursive call without its decreasing argument");
            const SrcExpr& dec = *args[self.position];
            bool ok = dec.kind == SrcExpr::Kind::var && lookup(dec.index).kind == Status::smaller &&
                      lookup(dec.index).fix == self.fix;
            if (!ok) fail(dec, "recursive call on an argument that is not structurally smaller");
        } else {
            walk(*head);
        }
        for (const auto* a : args) walk(*a);
    }
};

SrcExpr substitute_types(const SrcExpr& e, const std::map<std::string, SrcType>& by) {
    SrcExpr out = e;
    out.type = e.type.substitute(by);
    for (auto& t : out.type_args) t = t.substitute(by);
    for (auto& k : out.kids) k = substitute_types(k, by);
    return out;
}

} // namespace

void guardedness_check(const Def& def) { Guard(def).run(); }

Def monomorphize(const Def& def, const std::vector<SrcType>& type_args) {
    if (type_args.size() != def.params.size())
        throw TypeError(def.name + " expects " + std::to_string(def.params.size()) + " type arguments, got " +
                        std::to_string(type_args.size()));
    std::map<std::string, SrcType> by;
    for (std::size_t i = 0; i < def.params.size(); ++i) {
        if (!type_args[i].is_ground())
            throw TypeError(def.name + ": type argument " + type_args[i].str() + " is not ground");
        by[def.params[i]] = type_args[i];
    }
    Def out = def;
    out.params.clear();
    out.type = def.type.substitute(by);
    out.body = substitute_types(def.body, by);
    return out;
}

} // namespace lcert
