#ifndef LCERT_VERIFY_HPP
#define LCERT_VERIFY_HPP

#include "lcert/eval.hpp"
#include "lcert/interp.hpp"
#include "lcert/scott.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace lcert {

// Type structure guiding the checks: a registered datatype instance or an
// arrow between two such descriptions.
class TyDesc {
  public:
    static TyDesc base(SrcType instance);
    static TyDesc arrow(TyDesc dom, TyDesc cod);
    // Arrows become arrows, datatype instances become bases.
    static TyDesc of(const SrcType& t);

    bool is_base() const { return !dom_; }
    const SrcType& instance() const { return instance_; }
    const TyDesc& dom() const { return *dom_; }
    const TyDesc& cod() const { return *cod_; }
    std::vector<TyDesc> arg_types() const;
    std::string str() const;

  private:
    SrcType instance_;
    std::shared_ptr<const TyDesc> dom_, cod_;
};

struct Candidate;

// Curried time bound: unit at a base type; at an arrow, a function from the
// argument to the step budget of this application and the bound of the
// result.
struct TimeBound {
    std::function<std::pair<std::uint64_t, TimeBound>(const Candidate&)> step;

    bool is_unit() const { return !step; }
};

struct Candidate {
    std::string name;
    Rt reference;
    Term term;
    std::shared_ptr<const TimeBound> bound;
};

enum class Verdict { pass, fail, inconclusive };
const char* verdict_name(Verdict v);

struct ReportRow {
    std::vector<std::string> inputs;
    std::vector<std::uint64_t> steps; // one per curried application performed
    std::vector<std::uint64_t> bound; // claimed budget per application, when timed
    Verdict verdict = Verdict::pass;
    std::string note;
};

struct CheckReport {
    std::string name;
    Verdict verdict = Verdict::pass;
    std::size_t samples = 0;
    std::size_t failures = 0;
    std::size_t inconclusive = 0;
    std::vector<ReportRow> rows;
    std::optional<ReportRow> witness; // first failing row

    // CHECK <name> <verdict> samples=<n> failures=<m>
    std::string line() const;
    // inputs, steps, bound, verdict; tab-separated
    std::string table() const;
    void add(ReportRow row);
};

// A verified extracted function usable as a functional argument.
struct PoolEntry {
    TyDesc type;
    Candidate candidate;
};

struct SamplerConfig {
    std::uint64_t seed = 1;
    std::size_t samples = 200;
    // naturals 0..24 plus three random ones in 25..200 unless overridden
    std::vector<std::uint64_t> nats;
    std::size_t max_list = 12;
    std::size_t max_depth = 4;
    // enumerate all tuples when there are at most `samples` of them
    bool exhaustive_when_small = true;
};

// Seeded generator of values and argument tuples for registered instances.
class Sampler {
  public:
    Sampler(const Registry& registry, SamplerConfig config);

    const SamplerConfig& config() const { return config_; }
    std::mt19937_64& rng() { return rng_; }

    Value value(const SrcType& t);
    Value value(const SrcType& t, std::size_t depth);
    // every value when the instance has finitely many, up to `limit`
    std::optional<std::vector<Value>> enumerate(const SrcType& t, std::size_t limit) const;
    // argument tuples for the given domain types (bases only)
    std::vector<std::vector<Value>> tuples(const std::vector<SrcType>& doms);

    // per-instance override, e.g. small naturals for an exponential fixture
    void override(const SrcType& t, std::function<Value(std::mt19937_64&)> gen);

  private:
    const Registry& registry_;
    SamplerConfig config_;
    std::mt19937_64 rng_;
    std::vector<std::pair<std::string, std::function<Value(std::mt19937_64&)>>> overrides_;
};

std::string show_value(const Registry& registry, const SrcType& t, const Value& v);

struct CheckOptions {
    std::uint64_t budget = 10'000'000;
    Evaluator evaluator = Evaluator::machine;
    // timed checks demand equality instead of an upper bound
    bool exact_time = false;
};

// Base: the term must be the encoding of the reference value, without
// evaluation. Arrow: every sampled argument is applied, the application must
// evaluate within budget, and the result is checked at the codomain.
// Functional arguments come from the pool.
CheckReport check_computes(const Registry& registry, Interpreter& interp, const TyDesc& ty, const Candidate& cand,
                           Sampler& sampler, const std::vector<PoolEntry>& pool, const CheckOptions& options);

// As check_computes, additionally comparing the steps of each application
// against the candidate's bound.
CheckReport check_computes_time(const Registry& registry, Interpreter& interp, const TyDesc& ty,
                                const Candidate& cand, Sampler& sampler, const std::vector<PoolEntry>& pool,
                                const CheckOptions& options);

// Same traversal on explicit argument tuples, recording only step counts.
CheckReport measure_steps(const Registry& registry, Interpreter& interp, const TyDesc& ty, const Candidate& cand,
                          const std::vector<std::vector<Candidate>>& tuples, const CheckOptions& options);

struct AffineFit {
    double slope = 0;
    double intercept = 0;
    double residual_max = 0;

    bool exact() const { return residual_max < 1e-9; }
};

// Minimax affine fit of y against x. Throws Error with fewer than two
// distinct x values.
AffineFit fit_affine(const std::vector<double>& xs, const std::vector<double>& ys);

// Pointwise agreement of two references on sampled arguments.
CheckReport check_extensional(const Registry& registry, Interpreter& interp, const std::string& name, const Rt& a,
                              const Rt& b, const TyDesc& ty, Sampler& sampler, const std::vector<PoolEntry>& pool);

// Candidate argument for a base value.
Candidate value_candidate(const Registry& registry, const SrcType& t, const Value& v);

// Numeric view of an argument used by bound expressions: a natural is its
// value, a list its length, a boolean 0 or 1, anything else its size.
std::uint64_t feature_of(const Registry& registry, const SrcType& t, const Value& v);

// Curried bound from `e1; e2; ...` where each expression may use the
// arguments seen so far as x, y, z, w, u, v and the functions min, max.
// Throws ParseError.
TimeBound parse_boundspec(const std::string& text, const Registry& registry, const TyDesc& ty);

} // namespace lcert

#endif
