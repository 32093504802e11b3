#ifndef LCERT_TYPES_HPP
#define LCERT_TYPES_HPP

#include <map>
#include <string>
#include <vector>

namespace lcert {

// Source-language type: a datatype instance, a prenex type parameter, an
// arrow, or the sort `Type` (only ever present to be rejected).
class SrcType {
  public:
    enum class Kind { adt, param, arrow, sort };

    SrcType() = default;

    static SrcType adt(std::string name, std::vector<SrcType> args = {});
    static SrcType param(std::string name);
    static SrcType arrow(SrcType dom, SrcType cod);
    // a1 -> a2 -> ... -> result
    static SrcType arrows(const std::vector<SrcType>& doms, SrcType result);
    static SrcType sort();

    Kind kind() const { return kind_; }
    bool is_adt() const { return kind_ == Kind::adt; }
    bool is_param() const { return kind_ == Kind::param; }
    bool is_arrow() const { return kind_ == Kind::arrow; }
    bool is_sort() const { return kind_ == Kind::sort; }

    const std::string& name() const { return name_; }
    const std::vector<SrcType>& args() const { return args_; }
    const SrcType& dom() const { return args_.at(0); }
    const SrcType& cod() const { return args_.at(1); }

    // No parameters anywhere inside.
    bool is_ground() const;
    bool mentions_sort() const;

    SrcType substitute(const std::map<std::string, SrcType>& by) const;

    // Argument types of a curried arrow chain, and its final result.
    std::vector<SrcType> arg_types() const;
    const SrcType& result_type() const;

    // s-expression form: nat, (list nat), (-> nat bool), 'a
    std::string str() const;

    friend bool operator==(const SrcType& a, const SrcType& b);
    friend bool operator!=(const SrcType& a, const SrcType& b) { return !(a == b); }
    friend bool operator<(const SrcType& a, const SrcType& b) { return a.str() < b.str(); }

  private:
    Kind kind_ = Kind::sort;
    std::string name_;
    std::vector<SrcType> args_;
};

struct CtorDef {
    std::string name;
    // fields mention the datatype's parameters as SrcType::param
    std::vector<SrcType> fields;
};

struct AdtDef {
    std::string name;
    std::vector<std::string> params;
    std::vector<CtorDef> ctors;

    SrcType self_type() const;
    // Field types of ctor `i` at a concrete instance.
    std::vector<SrcType> fields_at(const SrcType& instance, std::size_t i) const;
    std::size_t ctor_index(const std::string& ctor) const;
};

} // namespace lcert

#endif
