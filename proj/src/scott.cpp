#include "lcert/scott.hpp"

#include "lcert/error.hpp"

namespace lcert {

Term gen_constructor(std::size_t arity, std::size_t count, std::size_t index) {
    if (index >= count)
        throw EncodingError("gen_constructor: index " + std::to_string(index) + " out of range for " +
                            std::to_string(count) + " constructors");
    // inside all binders: y_j is at count-1-j, x_k at count+arity-1-k
    Term body = Term::var(count - 1 - index);
    for (std::size_t k = 0; k < arity; ++k) body = Term::app(std::move(body), Term::var(count + arity - 1 - k));
    return lams(arity + count, std::move(body));
}

Term match_lower(const Term& discriminee, const std::vector<Branch>& branches) {
    Term t = discriminee;
    for (const auto& b : branches) t = Term::app(std::move(t), lams(b.arity, b.body));
    return t;
}

void Registry::declare(AdtDef def) {
    if (def.ctors.empty()) throw TypeError("datatype " + def.name + " has no constructors");
    for (std::size_t i = 0; i < def.ctors.size(); ++i)
        for (std::size_t j = i + 1; j < def.ctors.size(); ++j)
            if (def.ctors[i].name == def.ctors[j].name)
                throw TypeError("datatype " + def.name + " repeats constructor " + def.ctors[i].name);
    std::string name = def.name;
    adts_[name] = std::move(def);
}

const AdtDef& Registry::adt(const std::string& name) const {
    auto it = adts_.find(name);
    if (it == adts_.end()) throw EncodingError("unknown datatype " + name);
    return it->second;
}

bool Registry::registered(const SrcType& instance) const {
    auto key = instance.str();
    return plain_.count(key) != 0 || injected_.count(key) != 0;
}

std::vector<SrcType> Registry::instances() const {
    std::vector<SrcType> out;
    for (const auto& [k, t] : plain_) out.push_back(t);
    return out;
}

void Registry::register_instance(const SrcType& instance) {
    if (!instance.is_adt() || !instance.is_ground())
        throw EncodingError("only ground datatype instances can be registered, got " + instance.str());
    const AdtDef& def = adt(instance.name());
    if (def.params.size() != instance.args().size())
        throw EncodingError("wrong number of type arguments in " + instance.str());
    for (std::size_t i = 0; i < def.ctors.size(); ++i) {
        for (const auto& f : def.fields_at(instance, i)) {
            if (f == instance) continue;
            if (!f.is_adt())
                throw EncodingError("field of " + def.ctors[i].name + " has non-encodable type " + f.str());
            if (!registered(f))
                throw EncodingError("unregistered dependency " + f.str() + " of " + instance.str());
        }
    }
    plain_[instance.str()] = instance;
}

void Registry::register_closure(const SrcType& instance) {
    if (registered(instance)) return;
    if (!instance.is_adt()) throw EncodingError("cannot register " + instance.str());
    const AdtDef& def = adt(instance.name());
    if (def.params.size() != instance.args().size())
        throw EncodingError("wrong number of type arguments in " + instance.str());
    for (std::size_t i = 0; i < def.ctors.size(); ++i)
        for (const auto& f : def.fields_at(instance, i))
            if (f != instance) register_closure(f);
    register_instance(instance);
}

void Registry::register_injection(const SrcType& instance, Injection injection, const std::vector<Value>& samples) {
    if (!registered(injection.target))
        throw EncodingError("injection target " + injection.target.str() + " is not registered");
    InjectedEntry entry{std::move(injection), {}};
    for (const auto& v : samples) {
        std::string image = print_term(encode(entry.injection.target, entry.injection.inject(v)));
        auto [it, fresh] = entry.inverse.emplace(image, v);
        if (!fresh && it->second != v)
            throw EncodingError("injection for " + instance.str() + " is not injective on the samples");
    }
    injected_[instance.str()] = std::move(entry);
}

std::size_t Registry::ctor_count(const SrcType& instance) const {
    return adt(instance.name()).ctors.size();
}

Term Registry::constructor_term(const SrcType& instance, std::size_t index) const {
    const AdtDef& def = adt(instance.name());
    if (index >= def.ctors.size()) throw EncodingError("constructor index out of range in " + instance.str());
    return gen_constructor(def.ctors[index].fields.size(), def.ctors.size(), index);
}

Term Registry::encode(const SrcType& instance, const Value& v) const {
    auto key = instance.str();
    if (auto inj = injected_.find(key); inj != injected_.end())
        return encode(inj->second.injection.target, inj->second.injection.inject(v));
    if (plain_.count(key) == 0) throw EncodingError("unregistered type " + key);
    const AdtDef& def = adt(instance.name());
    if (v.ctor >= def.ctors.size()) throw EncodingError("constructor index out of range for " + key);
    auto fields = def.fields_at(instance, v.ctor);
    if (fields.size() != v.args.size())
        throw EncodingError("constructor " + def.ctors[v.ctor].name + " expects " + std::to_string(fields.size()) +
                            " fields");
    std::size_t count = def.ctors.size();
    Term body = Term::var(count - 1 - v.ctor);
    for (std::size_t k = 0; k < fields.size(); ++k) body = Term::app(std::move(body), encode(fields[k], v.args[k]));
    return lams(count, std::move(body));
}

std::optional<Value> Registry::decode(const SrcType& instance, const Term& t) const {
    auto key = instance.str();
    if (auto inj = injected_.find(key); inj != injected_.end()) {
        const auto& entry = inj->second;
        auto target = decode(entry.injection.target, t);
        if (!target) return std::nullopt;
        if (entry.injection.project) {
            auto back = entry.injection.project(*target);
            if (back && entry.injection.inject(*back) == *target) return back;
            return std::nullopt;
        }
        auto it = entry.inverse.find(print_term(t));
        if (it == entry.inverse.end()) return std::nullopt;
        return it->second;
    }
    if (plain_.count(key) == 0) return std::nullopt;
    const AdtDef& def = adt(instance.name());
    std::size_t count = def.ctors.size();
    const Term* cur = &t;
    for (std::size_t i = 0; i < count; ++i) {
        if (!cur->is_lam()) return std::nullopt;
        cur = &cur->body();
    }
    std::vector<const Term*> spine;
    while (cur->is_app()) {
        spine.push_back(&cur->arg());
        cur = &cur->fn();
    }
    if (!cur->is_var() || cur->index() >= count) return std::nullopt;
    std::size_t ctor = count - 1 - cur->index();
    auto fields = def.fields_at(instance, ctor);
    if (fields.size() != spine.size()) return std::nullopt;
    Value v{static_cast<std::uint32_t>(ctor), {}};
    for (std::size_t k = 0; k < fields.size(); ++k) {
        auto field = decode(fields[k], *spine[spine.size() - 1 - k]);
        if (!field) return std::nullopt;
        v.args.push_back(std::move(*field));
    }
    return v;
}

} // namespace lcert
