#ifndef LCERT_INTERP_HPP
#define LCERT_INTERP_HPP

#include "lcert/source.hpp"
#include "lcert/value.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace lcert {

struct RtValue;
using Rt = std::shared_ptr<const RtValue>;

struct RtEnv {
    Rt value;
    std::shared_ptr<const RtEnv> next;
};
using RtEnvPtr = std::shared_ptr<const RtEnv>;

// Runtime value of the reference interpreter.
struct RtValue {
    enum class Kind { data, closure, ctor, fix };

    Kind kind = Kind::data;
    std::uint32_t ctor = 0;        // data, ctor
    std::size_t arity = 0;         // ctor: fields still missing plus collected
    std::vector<Rt> args;          // data fields; ctor: collected so far
    const SrcExpr* code = nullptr; // closure: the lam; fix: the fix
    RtEnvPtr env;
};

// A top-level argument: a first-order value or the name of a definition.
struct InterpArg {
    std::optional<Value> value;
    std::string def;

    InterpArg(Value v) : value(std::move(v)) {}
    static InterpArg named(std::string name) {
        InterpArg a(Value{});
        a.value.reset();
        a.def = std::move(name);
        return a;
    }
};

// Big-step call-by-value evaluator for checked programs. Type arguments are
// irrelevant at run time, so definitions are cached by name. `fuel` bounds
// the number of applications; running out is an invariant violation on a
// checked program and raises Error.
class Interpreter {
  public:
    explicit Interpreter(const SourceProgram& program, std::uint64_t fuel = 2'000'000'000ULL);

    Rt eval(const SrcExpr& e, const RtEnvPtr& env);
    Rt apply(const Rt& f, const Rt& a);
    Rt definition(const std::string& name);

    static Rt lift(const Value& v);
    static std::optional<Value> lower(const Rt& v);

    Value call(const std::string& name, const std::vector<InterpArg>& args);

    std::uint64_t applications() const { return used_; }

  private:
    const SourceProgram& program_;
    std::uint64_t fuel_;
    std::uint64_t used_ = 0;
    std::map<std::string, Rt> defs_;
};

Value interp(const SourceProgram& program, const std::string& name, const std::vector<InterpArg>& args);

} // namespace lcert

#endif
