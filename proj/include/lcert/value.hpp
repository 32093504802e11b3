#ifndef LCERT_VALUE_HPP
#define LCERT_VALUE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lcert {

// A constructor application of some datatype. Which datatype is known from
// context (the type it is checked or encoded at).
struct Value {
    std::uint32_t ctor = 0;
    std::vector<Value> args;

    friend bool operator==(const Value& a, const Value& b) {
        return a.ctor == b.ctor && a.args == b.args;
    }
    friend bool operator!=(const Value& a, const Value& b) { return !(a == b); }
    friend bool operator<(const Value& a, const Value& b);

    std::uint64_t size() const;
};

// Builders and views for the standard datatypes, whose constructor order is
// fixed by the standard library source:
//   bool = true | false, nat = O | S nat, list = nil | cons,
//   option = some | none, pair = pair a b.
namespace values {

Value boolean(bool b);
Value nat(std::uint64_t n);
Value list(std::vector<Value> elems);
Value some(Value v);
Value none();
Value pair(Value a, Value b);
Value nat_list(const std::vector<std::uint64_t>& ns);

std::optional<bool> as_bool(const Value& v);
std::optional<std::uint64_t> as_nat(const Value& v);
std::optional<std::vector<Value>> as_list(const Value& v);

} // namespace values

} // namespace lcert

#endif
