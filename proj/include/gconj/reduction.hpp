#pragma once

#include "gconj/problem.hpp"

namespace gconj {

// GCP over base x| Z, subject t^r g, rewritten into base-group problems:
// r = 0 gives one Brinkmann conjugacy instance against K_0; r != 0 gives
// |r| twisted conjugacy instances against K_r with morphism phi^r and
// subjects g phi^j.  The plan's OR equals the original answer.
ReductionPlan lower_gcp(const ProblemInstance& gcp);

// GBrCP(K, phi, g) over G as GCP over G x| Z with subject t^0 g and the
// target embedded at exponent zero.
ProblemInstance lift_brcp(const Target& k, const Morphism& phi, const Element& g);

// GTCP(K, phi, g) over G as GCP over G x| Z with subject t g and target tK.
ProblemInstance lift_tcp(const Target& k, const Morphism& phi, const Element& g);

// Twisted conjugacy for an inner morphism g -> w^-1 g w, rewritten as plain
// conjugacy into the translated target: GCP(wK, wg).
ProblemInstance inner_tcp_to_gcp(const Target& k, const Element& w, const Element& g);

// Shared helpers for the lifts.
GroupPtr extension_of(const GroupPtr& base, const Morphism& phi);
Element embed_element(const GroupPtr& extension, const Element& g);
Target embed_target(const GroupPtr& extension, const Target& k);

}  // namespace gconj
