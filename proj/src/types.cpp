#include "lcert/types.hpp"

#include "lcert/error.hpp"

namespace lcert {

SrcType SrcType::adt(std::string name, std::vector<SrcType> args) {
    SrcType t;
    t.kind_ = Kind::adt;
    t.name_ = std::move(name);
    t.args_ = std::move(args);
    return t;
}

SrcType SrcType::param(std::string name) {
    SrcType t;
    t.kind_ = Kind::param;
    t.name_ = std::move(name);
    return t;
}

SrcType SrcType::arrow(SrcType dom, SrcType cod) {
    SrcType t;
    t.kind_ = Kind::arrow;
    t.args_ = {std::move(dom), std::move(cod)};
    return t;
}

SrcType SrcType::arrows(const std::vector<SrcType>& doms, SrcType result) {
    for (auto it = doms.rbegin(); it != doms.rend(); ++it) result = arrow(*it, std::move(result));
    return result;
}

SrcType SrcType::sort() { return SrcType(); }

bool SrcType::is_ground() const {
    if (kind_ == Kind::param) return false;
    for (const auto& a : args_)
        if (!a.is_ground()) return false;
    return true;
}

bool SrcType::mentions_sort() const {
    if (kind_ == Kind::sort) return true;
    for (const auto& a : args_)
        if (a.mentions_sort()) return true;
    return false;
}

SrcType SrcType::substitute(const std::map<std::string, SrcType>& by) const {
    if (kind_ == Kind::param) {
        auto it = by.find(name_);
        return it == by.end() ? *this : it->second;
    }
    SrcType t = *this;
    for (auto& a : t.args_) a = a.substitute(by);
    return t;
}

std::vector<SrcType> SrcType::arg_types() const {
    std::vector<SrcType> out;
    const SrcType* cur = this;
    while (cur->is_arrow()) {
        out.push_back(cur->dom());
        cur = &cur->cod();
    }
    return out;
}

const SrcType& SrcType::result_type() const {
    const SrcType* cur = this;
    while (cur->is_arrow()) cur = &cur->cod();
    return *cur;
}

std::string SrcType::str() const {
    switch (kind_) {
    case Kind::sort:
        return "Type";
    case Kind::param:
        return "'" + name_;
    case Kind::adt: {
        if (args_.empty()) return name_;
        std::string s = "(" + name_;
        for (const auto& a : args_) s += " " + a.str();
        return s + ")";
    }
    case Kind::arrow: {
        std::string s = "(->";
        for (const auto& a : arg_types()) s += " " + a.str();
        return s + " " + result_type().str() + ")";
    }
    }
    return "?";
}

bool operator==(const SrcType& a, const SrcType& b) {
    return a.kind_ == b.kind_ && a.name_ == b.name_ && a.args_ == b.args_;
}

SrcType AdtDef::self_type() const {
    std::vector<SrcType> args;
    for (const auto& p : params) args.push_back(SrcType::param(p));
    return SrcType::adt(name, std::move(args));
}

std::vector<SrcType> AdtDef::fields_at(const SrcType& instance, std::size_t i) const {
    if (!instance.is_adt() || instance.name() != name || instance.args().size() != params.size())
        throw TypeError("type " + instance.str() + " is not an instance of " + name);
    std::map<std::string, SrcType> by;
    for (std::size_t k = 0; k < params.size(); ++k) by[params[k]] = instance.args()[k];
    std::vector<SrcType> out;
    for (const auto& f : ctors.at(i).fields) out.push_back(f.substitute(by));
    return out;
}

std::size_t AdtDef::ctor_index(const std::string& ctor) const {
    for (std::size_t i = 0; i < ctors.size(); ++i)
        if (ctors[i].name == ctor) return i;
    throw TypeError("datatype " + name + " has no constructor " + ctor);
}

} // namespace lcert
