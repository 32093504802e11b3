#ifndef LCERT_TESTS_SUPPORT_HPP
#define LCERT_TESTS_SUPPORT_HPP

#include "lcert/error.hpp"
#include "lcert/eval.hpp"
#include "lcert/stdlib.hpp"
#include "lcert/term.hpp"
#include "lcert/workbench.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace lcert::testing {

// Whether a term of exactly `size` nodes exists with `binders` in scope.
inline bool term_exists(std::uint64_t size, std::uint64_t binders) {
    return size >= 2 || (size == 1 && binders > 0);
}

// Uniform choice among the node kinds that can still complete a term of
// exactly `size` nodes; variables pick any binder in scope. A closed term
// needs at least two nodes, so size 1 without binders is raised to 2.
inline Term random_term(std::mt19937_64& rng, std::uint64_t size, std::uint64_t binders) {
    if (!term_exists(size, binders)) size = 2;
    if (size == 1) return Term::var(std::uniform_int_distribution<std::uint64_t>(0, binders - 1)(rng));
    std::vector<std::uint64_t> splits;
    for (std::uint64_t l = 1; l + 2 <= size; ++l)
        if (term_exists(l, binders) && term_exists(size - 1 - l, binders)) splits.push_back(l);
    bool lam = splits.empty() || std::bernoulli_distribution(0.4)(rng);
    if (lam) return Term::lam(random_term(rng, size - 1, binders + 1));
    std::uint64_t l = splits[std::uniform_int_distribution<std::size_t>(0, splits.size() - 1)(rng)];
    Term f = random_term(rng, l, binders);
    return Term::app(f, random_term(rng, size - 1 - l, binders));
}

// Closed term with between 2 and max_size nodes.
inline Term random_closed(std::mt19937_64& rng, std::uint64_t max_size) {
    std::uint64_t size = std::uniform_int_distribution<std::uint64_t>(2, max_size)(rng);
    return random_term(rng, size, 0);
}

inline Term random_proc(std::mt19937_64& rng, std::uint64_t max_size) {
    std::uint64_t size = std::uniform_int_distribution<std::uint64_t>(2, max_size)(rng);
    return Term::lam(random_term(rng, size - 1, 1));
}

// Every closed term with exactly `size` nodes.
inline void all_terms(std::uint64_t size, std::uint64_t binders, std::vector<Term>& out) {
    if (size == 1) {
        for (std::uint64_t i = 0; i < binders; ++i) out.push_back(Term::var(i));
        return;
    }
    if (size == 0) return;
    std::vector<Term> bodies;
    all_terms(size - 1, binders + 1, bodies);
    for (auto& b : bodies) out.push_back(Term::lam(b));
    for (std::uint64_t l = 1; l + 2 <= size; ++l) {
        std::vector<Term> fs, as;
        all_terms(l, binders, fs);
        all_terms(size - 1 - l, binders, as);
        for (const auto& f : fs)
            for (const auto& a : as) out.push_back(Term::app(f, a));
    }
}

inline std::vector<Term> closed_terms_up_to(std::uint64_t max_size) {
    std::vector<Term> out;
    for (std::uint64_t n = 1; n <= max_size; ++n) all_terms(n, 0, out);
    return out;
}

// One leftmost call-by-value step, written independently of the library.
inline std::optional<Term> cbv_step(const Term& s) {
    if (!s.is_app()) return std::nullopt;
    if (!s.fn().is_lam()) {
        auto f = cbv_step(s.fn());
        return f ? std::optional<Term>(Term::app(*f, s.arg())) : std::nullopt;
    }
    if (!s.arg().is_lam()) {
        auto a = cbv_step(s.arg());
        return a ? std::optional<Term>(Term::app(s.fn(), *a)) : std::nullopt;
    }
    return subst(s.fn().body(), 0, s.arg());
}

// The term after exactly n leftmost steps, if there are that many.
inline std::optional<Term> steps_from(Term s, int n) {
    for (int i = 0; i < n; ++i) {
        auto next = cbv_step(s);
        if (!next) return std::nullopt;
        s = *next;
    }
    return s;
}

// Standard library workbench shared by a test binary.
inline Workbench& stdlib_bench() {
    static Workbench wb(stdlib_program());
    return wb;
}

inline Term T(const std::string& text) { return parse_term(text); }

} // namespace lcert::testing

#endif
