#ifndef LCERT_EVAL_HPP
#define LCERT_EVAL_HPP

#include "lcert/term.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace lcert {

struct EvalOutcome {
    std::optional<Term> normal; // empty when the budget ran out
    std::uint64_t steps = 0;    // beta steps performed

    bool exhausted() const { return !normal.has_value(); }
};

// Every t with s > t: beta on (λs)(λt), congruence on either side, nothing
// under a binder.
std::vector<Term> step_succs(const Term& s);

// Left-to-right call-by-value by substitution. Works on open terms too; a
// stuck application is returned as part of the normal form.
EvalOutcome eval_cbv(const Term& s, std::uint64_t budget);

// Closure/environment machine for closed terms. Counts only beta steps, so
// it reports the same numbers as eval_cbv. Throws Error on open input.
EvalOutcome machine_eval(const Term& s, std::uint64_t budget);

enum class Evaluator { substitution, machine };

EvalOutcome evaluate(Evaluator which, const Term& s, std::uint64_t budget);

// Step-indexed interpreter; the index bounds recursion depth, not steps.
std::optional<Term> eva(std::uint64_t n, const Term& u);

struct Reached {
    Term normal;
    std::uint64_t length;

    friend bool operator<(const Reached& a, const Reached& b);
    friend bool operator==(const Reached& a, const Reached& b) {
        return a.length == b.length && a.normal == b.normal;
    }
};

// Breadth-first closure of step_succs up to `depth` steps; every normal form
// met, paired with the length of the path that reached it.
std::vector<Reached> enumerate_reductions(const Term& s, std::uint64_t depth);

} // namespace lcert

#endif
