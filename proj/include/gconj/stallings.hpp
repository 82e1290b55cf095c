#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gconj/group.hpp"
#include "gconj/word.hpp"

namespace gconj {

// Folded inverse automaton of a finitely generated subgroup of a free group:
// deterministic partial transitions labelled by signed letters, closed under
// formal inverses, with base state 0.  After construction the automaton is
// folded, core (every non-base state has degree >= 2) and canonically
// numbered by a BFS over letters, so equal subgroups compare equal.
class StallingsAutomaton {
 public:
  // Core automaton of <generators>; the empty list gives the trivial group.
  StallingsAutomaton(GroupPtr free_group, const std::vector<Element>& generators);

  const GroupPtr& group() const { return group_; }
  std::size_t state_count() const { return delta_.size(); }
  static constexpr int base_state = 0;

  // Deterministic partial step; -1 when undefined.
  int step(int state, int letter) const;
  // Reads a reduced word; nullopt when the path dies.
  std::optional<int> read(int state, const Word& w) const;

  // Subgroup membership of a group element.
  bool contains(const Element& g) const;
  bool contains_word(const Word& w) const;

  // Label of the BFS tree path base -> state.
  Word path_from_base(int state) const;

  // A free basis of the subgroup (one generator per non-tree edge).
  std::vector<Element> subgroup_basis() const;

  bool is_trivial() const { return state_count() == 1 && delta_[0].empty(); }

  bool operator==(const StallingsAutomaton& other) const;
  bool operator!=(const StallingsAutomaton& other) const { return !(*this == other); }
  std::string key() const;

  // All (state, letter, target) with positive letter, canonical order.
  std::vector<std::array<int, 3>> edges() const;
  const std::vector<std::map<int, int>>& transitions() const { return delta_; }

 private:
  StallingsAutomaton() = default;
  void canonicalize();

  GroupPtr group_;
  std::vector<std::map<int, int>> delta_;
};

StallingsAutomaton stallings_core(const GroupPtr& free_group,
                                  const std::vector<Element>& generators);

// Intersection of two subgroups (pullback of the cores at the base pair).
StallingsAutomaton stallings_intersection(const StallingsAutomaton& h,
                                          const StallingsAutomaton& k);

// Intersection of cosets rep_h * H and rep_k * K: empty, or a representative
// x with x in both cosets plus the automaton of H meet K.
std::optional<std::pair<Element, StallingsAutomaton>> coset_intersection(
    const Element& rep_h, const StallingsAutomaton& h, const Element& rep_k,
    const StallingsAutomaton& k);

}  // namespace gconj
