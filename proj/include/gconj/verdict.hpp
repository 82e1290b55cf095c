#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gconj/group.hpp"
#include "gconj/ints.hpp"

namespace gconj {

enum class Outcome { Yes, No, Unknown };

std::string outcome_name(Outcome o);

// Witness data for a Yes verdict; which fields are present depends on the
// problem kind.  Certificates re-verify by direct evaluation in the group
// kernel (see verify_certificate).
struct YesCertificate {
  std::optional<Element> conjugator;
  std::optional<Int> exponent;
  std::optional<Element> target_member;
  std::optional<Int> via_p;  // power decomposition k = p*r + q for Via solvers
  std::optional<Int> via_q;
  std::string note;
};

enum class RefutationMethod {
  ExhaustedFinite,
  OrbitCycle,
  LatticeObstruction,
  QuotientObstruction,
  AutomatonSweep,
};

std::string refutation_method_name(RefutationMethod m);

// Data for a No verdict, sufficient to re-run the finite refutation.
struct NoCertificate {
  RefutationMethod method = RefutationMethod::ExhaustedFinite;
  std::optional<long long> swept;            // elements enumerated by a sweep
  std::optional<long long> orbit_preperiod;  // orbit-cycle refutations
  std::optional<long long> orbit_period;
  std::optional<Mat> obstruction_basis;  // lattice obstructions
  std::optional<Vec> residue;
  std::optional<Int> modulus;  // quotient obstructions: m
  std::optional<Int> quotient_exponent;  // and d
  std::vector<std::pair<Int, Int>> quotient_specs;  // all (m, d) in force
  std::string note;
};

struct BudgetReport {
  long long steps_used = 0;
  std::string bound_reached;
};

struct Verdict {
  Outcome outcome = Outcome::Unknown;
  std::optional<YesCertificate> yes;
  std::optional<NoCertificate> no;
  std::optional<BudgetReport> report;
  long long steps_used = 0;

  bool is_yes() const { return outcome == Outcome::Yes; }
  bool is_no() const { return outcome == Outcome::No; }
  bool is_unknown() const { return outcome == Outcome::Unknown; }

  static Verdict yes_with(YesCertificate cert, long long steps = 0);
  static Verdict no_with(NoCertificate cert, long long steps = 0);
  static Verdict unknown_with(BudgetReport r);

  std::string summary() const;
};

// Caps for the partial deciders.  The orbit exponent bounds |k| sweeps, the
// ball radius bounds conjugator enumeration, the quotient size bounds finite
// quotient construction and the step count bounds everything else.
struct Budget {
  long long max_orbit_exponent = 256;
  long long max_ball_radius = 6;
  long long max_quotient_size = 20000;
  long long max_steps = 200000;
  bool generic_quotient_fallback = false;

  void validate() const;
};

}  // namespace gconj
