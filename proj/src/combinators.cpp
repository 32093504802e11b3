#include "lcert/combinators.hpp"

#include "lcert/error.hpp"
#include "lcert/scott.hpp"

namespace lcert {

Term identity_proc() { return Term::lam(Term::var(0)); }

Term rho_open(const Term& u) {
    using T = Term;
    // r sits under ρ's binder plus its own two
    T r = T::lam(T::lam(T::app(T::app(shift(u, 3), T::app(T::var(1), T::var(1))), T::var(0))));
    return T::lam(T::app(T::app(shift(u, 1), T::app(r, r)), T::var(0)));
}

Term rho(const Term& u) {
    if (!closed(u)) throw Error("rho: argument is not closed");
    return rho_open(u);
}

Term mu(const Term& p) {
    if (!closed(p)) throw Error("mu: predicate is not closed");
    using T = Term;
    // λself n. p n (λ_. n) (λ_. self (S n)) I
    Term succ = gen_constructor(1, 2, 1);
    Term found = T::lam(T::var(1));
    Term again = T::lam(T::app(T::var(2), T::app(succ, T::var(1))));
    Term body = apply(T::app(p, T::var(0)), {found, again, identity_proc()});
    Term loop = T::lam(T::lam(std::move(body)));
    return T::app(rho(loop), gen_constructor(0, 2, 0));
}

} // namespace lcert
