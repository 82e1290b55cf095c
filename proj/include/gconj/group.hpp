#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gconj/errors.hpp"
#include "gconj/ints.hpp"
#include "gconj/word.hpp"

namespace gconj {

class Group;
class Morphism;
class Element;
using GroupPtr = std::shared_ptr<const Group>;

enum class Family { Free, Abelian, Finite, Semidirect, VirtuallyFree };

std::string family_name(Family f);

// Normal-form payloads.  A semidirect element is the unique t^r g; a
// virtually free element is the unique w b_i with w in the free base.
struct SemidirectPayload {
  Int t_exponent;
  std::shared_ptr<const Element> base;
};
struct VfPayload {
  Word free_part;
  int coset;
};

class Element {
 public:
  Element(GroupPtr group, Word w);
  Element(GroupPtr group, Vec v);
  Element(GroupPtr group, int table_index);
  Element(GroupPtr group, Int t_exponent, Element base);
  Element(GroupPtr group, Word free_part, int coset);

  const GroupPtr& group() const { return group_; }
  Family family() const;

  const Word& word() const;
  const Vec& vector() const;
  int table_index() const;
  const Int& t_exponent() const;
  const Element& base_part() const;
  const Word& vf_word() const;
  int vf_coset() const;

  bool is_identity() const;
  bool operator==(const Element& other) const;
  bool operator!=(const Element& other) const { return !(*this == other); }

  // Canonical serialization; equal elements of one group have equal keys.
  std::string key() const;
  // Human-readable form using the group's generator names.
  std::string str() const;

 private:
  GroupPtr group_;
  std::variant<Word, Vec, int, SemidirectPayload, VfPayload> payload_;
};

// Relation data of a virtually free handle: the base free group F over A,
// coset letters b_0 = 1, b_1, ..., b_{m-1}, and rewriting rules
//   b_i a   = conj[i][a] b_i
//   b_i b_j = prod_word[i][j] b_{prod_coset[i][j]}.
struct VfStructure {
  std::size_t free_rank = 0;
  std::vector<std::string> coset_names;     // index 0 is the trivial coset
  std::vector<std::vector<Word>> conj;      // [m][free_rank]
  std::vector<std::vector<Word>> prod_word; // [m][m]
  std::vector<std::vector<int>> prod_coset; // [m][m]
  std::vector<int> inv_coset;               // coset of b_i^{-1}
  std::vector<Word> inv_word;               // free part of b_i^{-1}
};

class Group : public std::enable_shared_from_this<Group> {
 public:
  static GroupPtr free_group(std::vector<std::string> generator_names);
  static GroupPtr free_abelian(std::size_t rank,
                               std::vector<std::string> generator_names = {});
  // Table group: table[i][j] is the index of the product of elements i, j.
  static GroupPtr finite(std::vector<std::string> element_names,
                         std::vector<std::vector<int>> table);
  // G = base x| Z with t^-1 a t = a*phi for base generators a; phi must be a
  // verified automorphism (inverse images present and checked).
  static GroupPtr semidirect(GroupPtr base, Morphism defining);
  static GroupPtr virtually_free(std::vector<std::string> free_generator_names,
                                 std::vector<std::string> coset_names,
                                 std::vector<std::vector<Word>> conj,
                                 std::vector<std::vector<Word>> prod_word,
                                 std::vector<std::vector<int>> prod_coset);

  ~Group();

  Family family() const { return family_; }
  const std::vector<std::string>& generator_names() const { return generator_names_; }
  std::size_t generator_count() const { return generator_names_.size(); }
  std::optional<std::size_t> generator_index(const std::string& name) const;

  Element identity() const;
  Element generator(std::size_t i) const;
  std::vector<Element> generators() const;

  Element mul(const Element& a, const Element& b) const;
  Element inv(const Element& a) const;
  Element pow(const Element& a, const Int& k) const;
  Element conjugate(const Element& g, const Element& by) const;  // by^-1 g by

  // Evaluates a word over this handle's generator list by multiplication.
  Element evaluate_word(const Word& w) const;

  // --- family-specific access ---
  std::size_t abelian_rank() const;

  std::size_t finite_order() const;
  int finite_mul(int i, int j) const;
  int finite_inv(int i) const;
  int finite_identity() const;
  const std::string& finite_element_name(int i) const;

  const GroupPtr& semidirect_base() const;
  const Morphism& defining_morphism() const;

  const VfStructure& vf() const;
  const GroupPtr& vf_free_base() const;
  // The automorphism w -> b_i w b_i^{-1} of the free base, applied to a word.
  Word vf_conjugation(int coset, const Word& w) const;
  std::size_t vf_coset_count() const;

  bool is(Family f) const { return family_ == f; }
  std::string describe() const;

 private:
  Group() = default;

  Family family_ = Family::Free;
  std::vector<std::string> generator_names_;

  // finite
  std::vector<std::vector<int>> table_;
  std::vector<int> inverse_table_;
  int identity_index_ = 0;
  std::vector<std::string> element_names_;

  // semidirect
  GroupPtr base_;
  std::shared_ptr<const Morphism> defining_;

  // virtually free
  VfStructure vf_;
  GroupPtr vf_free_base_;

  friend class Morphism;
};

inline void require_same_group(const Element& a, const Element& b, const char* op) {
  if (a.group() != b.group()) throw InputError(std::string(op) + ": elements of different groups");
}

Element mul(const Element& a, const Element& b);
Element inv(const Element& a);
Element pow(const Element& a, const Int& k);
Element conjugate(const Element& g, const Element& by);

// Free-group helper mirroring cyclic_reduce on elements: returns (core, c)
// with g = c^-1 * core * c.
std::pair<Element, Element> cyclically_reduce(const Element& g);

}  // namespace gconj
