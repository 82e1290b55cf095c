#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "gconj/solvers.hpp"
#include "gconj/target.hpp"
#include "gconj/verdict.hpp"

namespace gconj {

// A finite quotient of Z^n x| Z: either a congruence quotient
// (Z/m)^n x| Z/d with A^d = I mod m, or an explicit finite group together
// with generator images (the generic fallback).
struct FiniteQuotientSpec {
  Int modulus = 0;   // m >= 2 for congruence quotients
  Int t_order = 0;   // d
  GroupPtr explicit_group;                 // set for explicit quotients
  std::vector<Element> generator_images;   // base generators then t

  bool is_congruence() const { return explicit_group == nullptr; }
  Int size(std::size_t base_rank) const;
  std::string describe() const;
};

// Materialized quotient: element codes with multiplication, inversion and
// the homomorphism from the ambient extension.
class Quotient {
 public:
  static Quotient congruence(const GroupPtr& ambient, const Int& m, const Int& d);
  static Quotient explicit_table(const GroupPtr& ambient, const FiniteQuotientSpec& spec);
  static Quotient materialize(const GroupPtr& ambient, const FiniteQuotientSpec& spec);

  const FiniteQuotientSpec& spec() const { return spec_; }
  long long size() const { return size_; }
  long long image(const Element& ambient_element) const;
  long long mul(long long a, long long b) const;
  long long inv(long long a) const;
  long long identity() const;
  std::vector<long long> conjugacy_class(long long x) const;

 private:
  Quotient() = default;
  GroupPtr ambient_;
  FiniteQuotientSpec spec_;
  long long size_ = 0;
  // congruence representation
  long long m_ = 0, d_ = 0;
  std::size_t rank_ = 0;
  std::vector<std::vector<long long>> action_;      // A mod m
  std::vector<std::vector<long long>> action_inv_;  // A^-1 mod m
};

// Surviving candidate images of the coset under all refinements so far.
// S always equals the image of bH in the combined quotient intersected with
// the per-quotient conjugacy-class constraints; emptiness is exact.
class CandidateState {
 public:
  CandidateState() = default;

  bool refuted() const { return refuted_; }
  std::size_t constraint_count() const { return quotients_.size(); }
  std::vector<FiniteQuotientSpec> specs() const;
  long long candidate_count() const { return candidate_count_; }
  long long combined_size() const { return combined_size_; }
  // |S| / |Q| in the current combined quotient.
  long double fraction() const;

 private:
  friend CandidateState no_side_refine(const CandidateState&, const Quotient&, const Element&,
                                       const Target&, const Budget&);
  struct Constraint {
    std::shared_ptr<const Quotient> quotient;
    std::set<long long> allowed;            // conjugacy class of the subject's image
    std::vector<long long> subgroup_images; // images of the coset subgroup generators
    long long rep_image = 0;                // image of the coset representative
  };
  void recompute(const GroupPtr& ambient, const Budget& budget);

  std::vector<Constraint> quotients_;
  bool refuted_ = false;
  long long candidate_count_ = -1;
  long long combined_size_ = -1;
};

// Ordered congruence stream (m, d) by quotient size, d running over the
// order of A mod m and its small multiples; with the generic fallback
// enabled, explicit small-table quotients are appended.
std::vector<FiniteQuotientSpec> enumerate_quotients(const GroupPtr& ambient, const Budget& budget);

// One refinement of the no-side state by a quotient.
CandidateState no_side_refine(const CandidateState& state, const Quotient& q, const Element& a,
                              const Target& coset, const Budget& budget);

// One yes-side sweep: tries every conjugator in the ball of the given
// radius and returns a witness on success.
std::optional<Element> yes_side_step(const Element& a, const Target& coset, long long radius);

// The fair race of the two semi-algorithms for GCP with a coset target over
// Z^n x| Z (degenerating to exhaustion on finite handles).
Verdict decide_gcp_coset(const Element& a, const Target& coset, const Budget& budget);

}  // namespace gconj
