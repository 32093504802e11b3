#include "lcert/workbench.hpp"

#include "lcert/error.hpp"
#include "lcert/sexpr.hpp"

namespace lcert {

Workbench::Workbench(SourceProgram program)
    : program_(std::make_unique<SourceProgram>(std::move(program))),
      interp_(std::make_unique<Interpreter>(*program_)) {
    declare_datatypes(env_, *program_);
}

SrcType Workbench::type_of(const ExtractKey& key) const {
    const Def* def = program_->find_def(key.name);
    if (!def) throw ExtractError("unknown definition " + key.name);
    if (def->params.empty() && key.type_args.empty()) return def->type;
    return monomorphize(*def, key.type_args).type;
}

void Workbench::register_types(const SrcType& t) {
    if (t.is_arrow()) {
        register_types(t.dom());
        register_types(t.cod());
    } else if (t.is_adt()) {
        registry().register_closure(t);
    }
}

Term Workbench::extract(const ExtractKey& key) {
    register_types(type_of(key));
    extract_program(env_, *program_, {key});
    return env_.at(key);
}

Candidate Workbench::candidate(const ExtractKey& key, std::shared_ptr<const TimeBound> bound) {
    Term t = extract(key);
    return Candidate{key.str(), interp_->definition(key.name), t, std::move(bound)};
}

std::vector<PoolEntry> Workbench::pool_for(const ExtractKey& key) {
    std::vector<PoolEntry> pool;
    for (const auto& dom : type_of(key).arg_types()) {
        if (!dom.is_arrow()) continue;
        for (const auto& def : program_->defs) {
            if (!def.params.empty() || def.type != dom || def.name == key.name) continue;
            pool.push_back({TyDesc::of(def.type), candidate({def.name, {}})});
        }
    }
    return pool;
}

std::vector<SrcType> parse_type_args(const SourceProgram& program, const std::string& text) {
    std::vector<SrcType> out;
    for (const auto& s : parse_sexprs(text)) out.push_back(parse_type(program, s, {}));
    return out;
}

} // namespace lcert
