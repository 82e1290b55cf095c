#pragma once

#include "gconj/problem.hpp"
#include "gconj/verdict.hpp"

namespace gconj {

// Exact word-metric ball for the handle's generating set, deterministic
// order (breadth-first, generator-index order within each layer).
// `saturated` means the frontier emptied before the radius ran out, i.e.
// the ball is the whole group.
struct Ball {
  GroupPtr group;
  long long radius = 0;
  bool saturated = false;
  std::vector<Element> elements;
};

Ball ball(const GroupPtr& g, long long radius, long long max_size = 2000000);

// Direct quantifier enumeration per the problem kind: conjugators from the
// ball, exponents up to kmax.  Yes answers carry witnesses; No is returned
// only when the search space is provably complete (saturated ball, finite
// orbit, or a full twist period over a finite base).  Everything else is
// Unknown.  Used by tests and acceptance criteria, never by the solvers.
Verdict brute_solve(const ProblemInstance& inst, long long radius, long long kmax);

}  // namespace gconj
