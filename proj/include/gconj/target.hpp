#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gconj/group.hpp"
#include "gconj/linalg.hpp"
#include "gconj/stallings.hpp"

namespace gconj {

// A subgroup of Z^n, canonically represented by a row Hermite normal form
// basis; two objects are equal iff the subgroups are.
class LatticeSubgroup {
 public:
  LatticeSubgroup(std::size_t ambient_rank, Mat generators);
  static LatticeSubgroup zero(std::size_t ambient_rank);
  static LatticeSubgroup full(std::size_t ambient_rank);

  std::size_t ambient_rank() const { return ambient_rank_; }
  const Mat& basis() const { return basis_; }
  bool contains(const Vec& v) const;
  // Canonical coset representative of v + L (reduce against the pivots).
  Vec reduce(const Vec& v) const;

  LatticeSubgroup intersect(const LatticeSubgroup& other) const;
  LatticeSubgroup sum(const LatticeSubgroup& other) const;
  // Exponent of Z^n / L when the index is finite.
  std::optional<Int> exponent() const;
  bool is_full() const;

  bool operator==(const LatticeSubgroup& other) const {
    return ambient_rank_ == other.ambient_rank_ && basis_ == other.basis_;
  }
  std::string key() const;

 private:
  std::size_t ambient_rank_;
  Mat basis_;
};

// A finitely generated subgroup with the representation appropriate to its
// ambient family: Stallings automaton (free), integer lattice (abelian),
// closed table subset (finite), generator list (semidirect).
class Subgroup {
 public:
  enum class Rep { Stallings, Lattice, FiniteSubset, SemidirectGenerators };

  static Subgroup from_generators(const GroupPtr& group, std::vector<Element> generators);
  static Subgroup from_stallings(StallingsAutomaton automaton);
  static Subgroup from_lattice(const GroupPtr& abelian, LatticeSubgroup lattice);

  const GroupPtr& group() const { return group_; }
  Rep rep() const { return rep_; }
  bool contains(const Element& g) const;
  bool is_trivial() const;

  const StallingsAutomaton& stallings() const;
  const LatticeSubgroup& lattice() const;
  const std::vector<int>& finite_subset() const;       // sorted element indices
  const std::vector<Element>& generator_list() const;  // semidirect generators

  // For semidirect subgroups: gcd of generator t-exponents (0 when the
  // subgroup lies in the base) and the subgroup of the base it cuts out.
  const Int& t_exponent_gcd() const;
  // H meet base as a lattice; abelian base only (for nonzero exponents).
  const LatticeSubgroup& base_lattice() const;
  // When every generator exponent is zero: the base-group subgroup.
  const Subgroup& base_subgroup() const;
  // Element t^d h0 of H with d = t_exponent_gcd (nonzero gcd only).
  const Element& primitive_vertical() const;
  // Base part h with t^y h in H, for y a multiple of the gcd.
  Element slice_representative(const Int& y) const;

  bool operator==(const Subgroup& other) const;
  std::string key() const;

 private:
  Subgroup() = default;

  GroupPtr group_;
  Rep rep_ = Rep::Stallings;
  std::optional<StallingsAutomaton> stallings_;
  std::optional<LatticeSubgroup> lattice_;
  std::vector<int> finite_subset_;
  std::vector<Element> gens_;
  Int exp_gcd_ = 0;
  Vec exp_lambda_;
  std::optional<LatticeSubgroup> base_lattice_;
  std::shared_ptr<const Subgroup> base_subgroup_;
  std::optional<Element> primitive_vertical_;
};

// H meet base for a semidirect subgroup over a free abelian base: Schreier
// seeds from the exponent gcd, then saturation under conjugation by t^d.
LatticeSubgroup base_intersection(const GroupPtr& semidirect, const std::vector<Element>& gens);

// The set K of a generalized problem.
class Target {
 public:
  enum class Kind { FiniteSet, Subgroup, Coset };

  static Target finite_set(const GroupPtr& group, std::vector<Element> elements);
  static Target subgroup(Subgroup h);
  static Target coset(Element representative, Subgroup h);

  Kind kind() const { return kind_; }
  const GroupPtr& group() const { return group_; }
  const std::vector<Element>& elements() const;  // FiniteSet
  const Subgroup& the_subgroup() const;          // Subgroup/Coset
  const Element& representative() const;         // Coset

  bool member(const Element& g) const;
  bool is_empty_set() const { return kind_ == Kind::FiniteSet && elements_.empty(); }

  // w * K; finite sets and (sub)cosets all translate.
  Target left_translated(const Element& w) const;

  bool operator==(const Target& other) const;
  std::string key() const;

 private:
  Kind kind_ = Kind::FiniteSet;
  GroupPtr group_;
  std::vector<Element> elements_;
  std::optional<Subgroup> subgroup_;
  std::optional<Element> representative_;
};

// K_r = { x in base : t^r x in K }: empty, a finite set of base elements, or
// a coset of K meet base.  The subgroup part can be marked unavailable when
// the base intersection is not computable (non-abelian base); the
// representative alone still supports finite-set reasoning.
class SlicedTarget {
 public:
  enum class Kind { Empty, FiniteSet, Coset };

  static SlicedTarget empty(GroupPtr base);
  static SlicedTarget finite_set(GroupPtr base, std::vector<Element> elements);
  static SlicedTarget coset(Element representative, std::optional<Subgroup> subgroup_part);

  Kind kind() const { return kind_; }
  const GroupPtr& group() const { return group_; }
  const std::vector<Element>& elements() const { return elements_; }
  const Element& representative() const;
  bool subgroup_available() const { return subgroup_part_.has_value(); }
  const Subgroup& subgroup_part() const;

  bool member(const Element& base_element) const;
  // As a Target in the base group; identity-representative cosets normalize
  // to plain subgroups.  Throws when the subgroup part is unavailable.
  Target to_target() const;

  std::string key() const;

 private:
  Kind kind_ = Kind::Empty;
  GroupPtr group_;
  std::vector<Element> elements_;
  std::optional<Element> representative_;
  std::optional<Subgroup> subgroup_part_;
};

// Lemma-style slicing of a target in a semidirect product at t-exponent r.
SlicedTarget slice_coset(const Target& k, const Int& r);

// Intersection of two cosets (or subgroups, read as identity cosets) in one
// group; empty or a coset of the intersection.
SlicedTarget coset_intersect(const Target& c1, const Target& c2);

}  // namespace gconj
