#pragma once

#include "gconj/problem.hpp"
#include "gconj/stallings.hpp"
#include "gconj/verdict.hpp"

namespace gconj {

// Dispatches to the most specific decider for the instance's family and
// kind, applying the extension-to-base reduction for semidirect handles.
// Never answers Yes or No without a checkable certificate; budget
// exhaustion yields Unknown.
Verdict solve(const ProblemInstance& inst, const Budget& budget);

// Conjugacy of free-group elements: cyclic reductions must be rotations of
// one another; the witness is an explicit conjugator.
Verdict cp_free(const Element& u, const Element& v);

// Does some conjugate of g lie in the subgroup of the automaton?  Sweeps
// rotations of the cyclic core against closed paths at every state.
Verdict conj_into_subgroup_free(const Element& g, const StallingsAutomaton& h);

// Decides whether x^-p u x^p lies in the subgroup for some p >= 0.  Fully
// decidable: the reading of x-power tails through the automaton either dies
// (the leftover hair outgrows u) or enters a state cycle.
Verdict conj_power_into_subgroup(const Element& u, const Element& x,
                                 const StallingsAutomaton& h);

// Twisted conjugacy on Z^n: v - u must lie in the row lattice of (A - I);
// the certificate solves x (A - I) = v - u.
Verdict tcp_abelian(const Morphism& endo, const Element& u, const Element& v);

// Iterates u, u phi, u phi^2, ... (interleaving negative exponents when phi
// is invertible) against v, with normal-form cycle detection.
Verdict brp_orbit(const Morphism& phi, const Element& u, const Element& v,
                  const Budget& budget);

// Does u A^k land in v + L for some k?  Finite-index L reduces to a purely
// periodic orbit modulo the lattice exponent and is decided exactly;
// infinite-index L falls back to a budgeted orbit search.
Verdict gbrp_coset_abelian(const Morphism& endo, const Element& u, const Element& v,
                           const LatticeSubgroup& l, const Budget& budget);

// Orbit problems on a free group for a virtually inner morphism
// (phi^r = conjugation by x): kind GBrP or GBrCP, subgroup target.
Verdict gbrcp_via_free(Kind kind, const Element& u, const Morphism& phi,
                       const StallingsAutomaton& k);

// Brinkmann equality for endomorphisms of a virtually free handle: finite
// quotient orbit for the coset letters, then a suspension orbit over an
// extended free group for the candidate exponents s + p*d.
Verdict brp_virtually_free(const Morphism& phi, const Element& g, const Element& h,
                           const Budget& budget);

// Re-evaluates a Yes certificate against the defining equation of the
// instance's kind.  Non-Yes verdicts pass vacuously.
bool verify_certificate(const ProblemInstance& inst, const Verdict& verdict);

}  // namespace gconj
