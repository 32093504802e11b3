#include "lcert/value.hpp"

namespace lcert {

namespace {

int compare(const Value& a, const Value& b) {
    if (a.ctor != b.ctor) return a.ctor < b.ctor ? -1 : 1;
    if (a.args.size() != b.args.size()) return a.args.size() < b.args.size() ? -1 : 1;
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (int c = compare(a.args[i], b.args[i])) return c;
    return 0;
}

} // namespace

bool operator<(const Value& a, const Value& b) { return compare(a, b) < 0; }

std::uint64_t Value::size() const {
    std::uint64_t n = 1;
    for (const auto& a : args) n += a.size();
    return n;
}

namespace values {

Value boolean(bool b) { return Value{b ? 0u : 1u, {}}; }

Value nat(std::uint64_t n) {
    Value v{0, {}};
    for (std::uint64_t i = 0; i < n; ++i) v = Value{1, {std::move(v)}};
    return v;
}

Value list(std::vector<Value> elems) {
    Value v{0, {}};
    for (auto it = elems.rbegin(); it != elems.rend(); ++it) v = Value{1, {std::move(*it), std::move(v)}};
    return v;
}

Value some(Value v) { return Value{0, {std::move(v)}}; }

Value none() { return Value{1, {}}; }

Value pair(Value a, Value b) { return Value{0, {std::move(a), std::move(b)}}; }

Value nat_list(const std::vector<std::uint64_t>& ns) {
    std::vector<Value> elems;
    for (auto n : ns) elems.push_back(nat(n));
    return list(std::move(elems));
}

std::optional<bool> as_bool(const Value& v) {
    if (!v.args.empty() || v.ctor > 1) return std::nullopt;
    return v.ctor == 0;
}

std::optional<std::uint64_t> as_nat(const Value& v) {
    std::uint64_t n = 0;
    const Value* cur = &v;
    while (cur->ctor == 1 && cur->args.size() == 1) {
        ++n;
        cur = &cur->args[0];
    }
    if (cur->ctor != 0 || !cur->args.empty()) return std::nullopt;
    return n;
}

std::optional<std::vector<Value>> as_list(const Value& v) {
    std::vector<Value> out;
    const Value* cur = &v;
    while (cur->ctor == 1 && cur->args.size() == 2) {
        out.push_back(cur->args[0]);
        cur = &cur->args[1];
    }
    if (cur->ctor != 0 || !cur->args.empty()) return std::nullopt;
    return out;
}

} // namespace values

} // namespace lcert
