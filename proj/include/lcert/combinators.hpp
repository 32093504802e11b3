#ifndef LCERT_COMBINATORS_HPP
#define LCERT_COMBINATORS_HPP

#include "lcert/term.hpp"

namespace lcert {

Term identity_proc();

// Call-by-value fixpoint: with r = λa x. u (a a) x and ρu = λx. u (r r) x,
// (ρu) v reduces in exactly two steps to u (ρu) v for procedures u, v.
// Throws Error when u is not closed.
Term rho(const Term& u);

// Same construction for a u with free variables, which are shifted past the
// binders ρ introduces. The two-step law holds once they are substituted by
// closed terms.
Term rho_open(const Term& u);

// Unbounded search from 0: evaluates to the encoding of the least k with
// p (enc k) = enc true, and has no normal form when there is none.
// p must be closed and answer with encoded booleans.
Term mu(const Term& p);

} // namespace lcert

#endif
