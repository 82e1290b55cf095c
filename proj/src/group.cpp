#include "gconj/group.hpp"

#include <algorithm>
#include <sstream>

#include "gconj/linalg.hpp"
#include "gconj/morphism.hpp"

namespace gconj {

std::string family_name(Family f) {
  switch (f) {
    case Family::Free: return "free";
    case Family::Abelian: return "abelian";
    case Family::Finite: return "finite";
    case Family::Semidirect: return "semidirect";
    case Family::VirtuallyFree: return "virtually-free";
  }
  return "?";
}

// ---------------------------------------------------------------- Element

Element::Element(GroupPtr group, Word w) : group_(std::move(group)), payload_(reduce_word(w)) {
  if (!group_->is(Family::Free)) throw InputError("word payload on a non-free group");
}

Element::Element(GroupPtr group, Vec v) : group_(std::move(group)), payload_(std::move(v)) {
  if (!group_->is(Family::Abelian)) throw InputError("vector payload on a non-abelian group");
  if (std::get<Vec>(payload_).size() != group_->abelian_rank())
    throw InputError("vector length does not match the group rank");
}

Element::Element(GroupPtr group, int table_index)
    : group_(std::move(group)), payload_(table_index) {
  if (!group_->is(Family::Finite)) throw InputError("index payload on a non-finite group");
  if (table_index < 0 || static_cast<std::size_t>(table_index) >= group_->finite_order())
    throw InputError("element index out of range");
}

Element::Element(GroupPtr group, Int t_exponent, Element base)
    : group_(std::move(group)),
      payload_(SemidirectPayload{std::move(t_exponent),
                                 std::make_shared<const Element>(std::move(base))}) {
  if (!group_->is(Family::Semidirect)) throw InputError("t^r g payload on a non-semidirect group");
  if (std::get<SemidirectPayload>(payload_).base->group() != group_->semidirect_base())
    throw InputError("base part belongs to the wrong group");
}

Element::Element(GroupPtr group, Word free_part, int coset)
    : group_(std::move(group)), payload_(VfPayload{reduce_word(free_part), coset}) {
  if (!group_->is(Family::VirtuallyFree))
    throw InputError("w b_i payload on a non-virtually-free group");
  if (coset < 0 || static_cast<std::size_t>(coset) >= group_->vf_coset_count())
    throw InputError("coset index out of range");
}

Family Element::family() const { return group_->family(); }

const Word& Element::word() const { return std::get<Word>(payload_); }
const Vec& Element::vector() const { return std::get<Vec>(payload_); }
int Element::table_index() const { return std::get<int>(payload_); }
const Int& Element::t_exponent() const { return std::get<SemidirectPayload>(payload_).t_exponent; }
const Element& Element::base_part() const { return *std::get<SemidirectPayload>(payload_).base; }
const Word& Element::vf_word() const { return std::get<VfPayload>(payload_).free_part; }
int Element::vf_coset() const { return std::get<VfPayload>(payload_).coset; }

bool Element::is_identity() const {
  switch (family()) {
    case Family::Free: return word().empty();
    case Family::Abelian: return vec_is_zero(vector());
    case Family::Finite: return table_index() == group_->finite_identity();
    case Family::Semidirect: return t_exponent() == 0 && base_part().is_identity();
    case Family::VirtuallyFree: return vf_word().empty() && vf_coset() == 0;
  }
  return false;
}

bool Element::operator==(const Element& other) const {
  if (group_ != other.group_) return false;
  switch (family()) {
    case Family::Free: return word() == other.word();
    case Family::Abelian: return vector() == other.vector();
    case Family::Finite: return table_index() == other.table_index();
    case Family::Semidirect:
      return t_exponent() == other.t_exponent() && base_part() == other.base_part();
    case Family::VirtuallyFree:
      return vf_coset() == other.vf_coset() && vf_word() == other.vf_word();
  }
  return false;
}

std::string Element::key() const {
  std::ostringstream os;
  switch (family()) {
    case Family::Free: os << "f:" << word_key(word()); break;
    case Family::Abelian: os << "a:" << vec_to_string(vector()); break;
    case Family::Finite: os << "k:" << table_index(); break;
    case Family::Semidirect: os << "s:" << t_exponent() << "|" << base_part().key(); break;
    case Family::VirtuallyFree: os << "v:" << word_key(vf_word()) << "|" << vf_coset(); break;
  }
  return os.str();
}

namespace {

std::string word_str(const Word& w, const std::vector<std::string>& names) {
  if (w.empty()) return "1";
  std::ostringstream os;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) os << " ";
    os << names[gen_of(w[i])];
    if (w[i] < 0) os << "^-1";
  }
  return os.str();
}

}  // namespace

std::string Element::str() const {
  switch (family()) {
    case Family::Free: return word_str(word(), group_->generator_names());
    case Family::Abelian: {
      std::ostringstream os;
      const Vec& v = vector();
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ",";
        os << v[i];
      }
      return os.str();
    }
    case Family::Finite: return group_->finite_element_name(table_index());
    case Family::Semidirect: {
      std::ostringstream os;
      os << "t^" << t_exponent() << " : " << base_part().str();
      return os.str();
    }
    case Family::VirtuallyFree: {
      std::ostringstream os;
      os << word_str(vf_word(), group_->vf_free_base()->generator_names());
      if (vf_coset() != 0) os << " " << group_->vf().coset_names[vf_coset()];
      return os.str();
    }
  }
  return "?";
}

// ---------------------------------------------------------------- factories

GroupPtr Group::free_group(std::vector<std::string> generator_names) {
  auto g = std::shared_ptr<Group>(new Group());
  g->family_ = Family::Free;
  g->generator_names_ = std::move(generator_names);
  return g;
}

GroupPtr Group::free_abelian(std::size_t rank, std::vector<std::string> generator_names) {
  auto g = std::shared_ptr<Group>(new Group());
  g->family_ = Family::Abelian;
  if (generator_names.empty()) {
    for (std::size_t i = 0; i < rank; ++i) generator_names.push_back("x" + std::to_string(i + 1));
  }
  if (generator_names.size() != rank) throw InputError("free_abelian: name count != rank");
  g->generator_names_ = std::move(generator_names);
  return g;
}

GroupPtr Group::finite(std::vector<std::string> element_names,
                       std::vector<std::vector<int>> table) {
  auto g = std::shared_ptr<Group>(new Group());
  g->family_ = Family::Finite;
  std::size_t n = table.size();
  if (n == 0) throw InputError("finite group table is empty");
  if (element_names.size() != n) throw InputError("finite group: name count != order");
  for (const auto& row : table) {
    if (row.size() != n) throw InputError("finite group table is not square");
    for (int x : row)
      if (x < 0 || static_cast<std::size_t>(x) >= n)
        throw InputError("finite group table entry out of range");
  }
  // Identity: a two-sided neutral element.
  int id = -1;
  for (std::size_t e = 0; e < n; ++e) {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
      ok = table[e][i] == static_cast<int>(i) && table[i][e] == static_cast<int>(i);
    if (ok) {
      id = static_cast<int>(e);
      break;
    }
  }
  if (id < 0) throw InputError("finite group table has no identity");
  // Inverses.
  std::vector<int> inv(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      if (table[i][j] == id && table[j][i] == id) {
        inv[i] = static_cast<int>(j);
        break;
      }
    if (inv[i] < 0) throw InputError("finite group table has a non-invertible element");
  }
  // Associativity.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (table[static_cast<std::size_t>(table[i][j])][k] !=
            table[i][static_cast<std::size_t>(table[j][k])])
          throw InputError("finite group table is not associative");

  g->table_ = std::move(table);
  g->inverse_table_ = std::move(inv);
  g->identity_index_ = id;
  g->element_names_ = element_names;
  g->generator_names_ = std::move(element_names);  // table groups: every element generates
  return g;
}

GroupPtr Group::semidirect(GroupPtr base, Morphism defining) {
  if (!base) throw InputError("semidirect: null base group");
  if (defining.domain() != base || defining.codomain() != base)
    throw InputError("semidirect: defining morphism must be an endomorphism of the base");
  if (!defining.has_inverse())
    throw InputError("semidirect: defining morphism needs verified inverse images");
  if (!verify_automorphism(defining, defining.inverse()))
    throw InputError("semidirect: defining morphism failed the automorphism check");
  if (base->generator_index("t").has_value())
    throw InputError("semidirect: base generator named 't' collides with the stable letter");
  auto g = std::shared_ptr<Group>(new Group());
  g->family_ = Family::Semidirect;
  g->base_ = base;
  g->defining_ = std::make_shared<const Morphism>(std::move(defining));
  g->generator_names_ = base->generator_names();
  g->generator_names_.push_back("t");
  return g;
}

GroupPtr Group::virtually_free(std::vector<std::string> free_generator_names,
                               std::vector<std::string> coset_names,
                               std::vector<std::vector<Word>> conj,
                               std::vector<std::vector<Word>> prod_word,
                               std::vector<std::vector<int>> prod_coset) {
  std::size_t rank = free_generator_names.size();
  std::size_t m = coset_names.size();
  if (m == 0) throw InputError("virtually_free: need at least the trivial coset");
  if (conj.size() != m || prod_word.size() != m || prod_coset.size() != m)
    throw InputError("virtually_free: relation tables must have one row per coset");
  for (std::size_t i = 0; i < m; ++i) {
    if (conj[i].size() != rank) throw InputError("virtually_free: conj row size != free rank");
    if (prod_word[i].size() != m || prod_coset[i].size() != m)
      throw InputError("virtually_free: product row size != coset count");
    for (int c : prod_coset[i])
      if (c < 0 || static_cast<std::size_t>(c) >= m)
        throw InputError("virtually_free: product coset out of range");
  }
  // Row 0 is the trivial coset: b_0 = 1.
  for (std::size_t a = 0; a < rank; ++a)
    if (reduce_word(conj[0][a]) != Word{letter_of(a, false)})
      throw InputError("virtually_free: conj row 0 must fix every generator");
  for (std::size_t j = 0; j < m; ++j) {
    if (prod_coset[0][j] != static_cast<int>(j) || prod_coset[j][0] != static_cast<int>(j) ||
        !reduce_word(prod_word[0][j]).empty() || !reduce_word(prod_word[j][0]).empty())
      throw InputError("virtually_free: row/column 0 of the product tables must be trivial");
  }
  // The coset index map must be a group structure on {0..m-1}.
  {
    std::vector<std::vector<int>> q = prod_coset;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t k = 0; k < m; ++k)
          if (q[static_cast<std::size_t>(q[i][j])][k] != q[i][static_cast<std::size_t>(q[j][k])])
            throw InputError("virtually_free: coset index map is not associative");
    for (std::size_t i = 0; i < m; ++i) {
      bool has_inv = false;
      for (std::size_t j = 0; j < m; ++j) has_inv |= q[i][j] == 0;
      if (!has_inv) throw InputError("virtually_free: coset index map has no inverse");
    }
  }

  auto g = std::shared_ptr<Group>(new Group());
  g->family_ = Family::VirtuallyFree;
  g->vf_free_base_ = Group::free_group(free_generator_names);
  g->vf_.free_rank = rank;
  g->vf_.coset_names = coset_names;
  g->vf_.conj = std::move(conj);
  for (auto& row : g->vf_.conj)
    for (auto& w : row) w = reduce_word(w);
  g->vf_.prod_word = std::move(prod_word);
  for (auto& row : g->vf_.prod_word)
    for (auto& w : row) w = reduce_word(w);
  g->vf_.prod_coset = std::move(prod_coset);

  // Precompute b_i^{-1} = vf_conjugation(j, prod_word[i][j]^-1) b_j where
  // prod_coset[i][j] = 0.
  g->vf_.inv_coset.assign(m, 0);
  g->vf_.inv_word.assign(m, Word{});
  for (std::size_t i = 1; i < m; ++i) {
    int j = -1;
    for (std::size_t c = 0; c < m; ++c)
      if (g->vf_.prod_coset[i][c] == 0) {
        j = static_cast<int>(c);
        break;
      }
    g->vf_.inv_coset[i] = j;
    Word v_inv = invert_word(g->vf_.prod_word[i][static_cast<std::size_t>(j)]);
    g->vf_.inv_word[i] = g->vf_conjugation(j, v_inv);
  }

  g->generator_names_ = free_generator_names;
  for (std::size_t i = 1; i < m; ++i) g->generator_names_.push_back(coset_names[i]);
  return g;
}

Group::~Group() = default;

std::optional<std::size_t> Group::generator_index(const std::string& name) const {
  for (std::size_t i = 0; i < generator_names_.size(); ++i)
    if (generator_names_[i] == name) return i;
  return std::nullopt;
}

// ---------------------------------------------------------------- elements

Element Group::identity() const {
  auto self = shared_from_this();
  switch (family_) {
    case Family::Free: return Element(self, Word{});
    case Family::Abelian: return Element(self, Vec(abelian_rank(), 0));
    case Family::Finite: return Element(self, identity_index_);
    case Family::Semidirect: return Element(self, Int(0), base_->identity());
    case Family::VirtuallyFree: return Element(self, Word{}, 0);
  }
  throw InputError("identity: unknown family");
}

Element Group::generator(std::size_t i) const {
  auto self = shared_from_this();
  if (i >= generator_names_.size()) throw InputError("generator index out of range");
  switch (family_) {
    case Family::Free: return Element(self, Word{letter_of(i, false)});
    case Family::Abelian: {
      Vec v(abelian_rank(), 0);
      v[i] = 1;
      return Element(self, std::move(v));
    }
    case Family::Finite: return Element(self, static_cast<int>(i));
    case Family::Semidirect: {
      if (i + 1 == generator_names_.size()) return Element(self, Int(1), base_->identity());
      return Element(self, Int(0), base_->generator(i));
    }
    case Family::VirtuallyFree: {
      if (i < vf_.free_rank) return Element(self, Word{letter_of(i, false)}, 0);
      return Element(self, Word{}, static_cast<int>(i - vf_.free_rank + 1));
    }
  }
  throw InputError("generator: unknown family");
}

std::vector<Element> Group::generators() const {
  std::vector<Element> out;
  for (std::size_t i = 0; i < generator_names_.size(); ++i) out.push_back(generator(i));
  return out;
}

std::size_t Group::abelian_rank() const {
  if (family_ != Family::Abelian) throw InputError("abelian_rank: not an abelian handle");
  return generator_names_.size();
}

std::size_t Group::finite_order() const {
  if (family_ != Family::Finite) throw InputError("finite_order: not a finite handle");
  return table_.size();
}
int Group::finite_mul(int i, int j) const {
  return table_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
}
int Group::finite_inv(int i) const { return inverse_table_[static_cast<std::size_t>(i)]; }
int Group::finite_identity() const { return identity_index_; }
const std::string& Group::finite_element_name(int i) const {
  return element_names_[static_cast<std::size_t>(i)];
}

const GroupPtr& Group::semidirect_base() const {
  if (family_ != Family::Semidirect) throw InputError("semidirect_base: not a semidirect handle");
  return base_;
}
const Morphism& Group::defining_morphism() const {
  if (family_ != Family::Semidirect)
    throw InputError("defining_morphism: not a semidirect handle");
  return *defining_;
}

const VfStructure& Group::vf() const {
  if (family_ != Family::VirtuallyFree) throw InputError("vf: not a virtually free handle");
  return vf_;
}
const GroupPtr& Group::vf_free_base() const {
  if (family_ != Family::VirtuallyFree)
    throw InputError("vf_free_base: not a virtually free handle");
  return vf_free_base_;
}
std::size_t Group::vf_coset_count() const { return vf().coset_names.size(); }

Word Group::vf_conjugation(int coset, const Word& w) const {
  if (coset == 0) return w;
  const auto& rules = vf_.conj[static_cast<std::size_t>(coset)];
  Word out;
  for (int letter : w) {
    const Word& image = rules[gen_of(letter)];
    out = concat_reduce(out, letter > 0 ? image : invert_word(image));
  }
  return out;
}

// ---------------------------------------------------------------- operations

Element Group::mul(const Element& a, const Element& b) const {
  require_same_group(a, b, "mul");
  if (a.group().get() != this) throw InputError("mul: elements do not belong to this group");
  auto self = shared_from_this();
  switch (family_) {
    case Family::Free: return Element(self, concat_reduce(a.word(), b.word()));
    case Family::Abelian: return Element(self, vec_add(a.vector(), b.vector()));
    case Family::Finite: return Element(self, finite_mul(a.table_index(), b.table_index()));
    case Family::Semidirect: {
      // (t^a g)(t^b h) = t^(a+b) (g phi^b) h.
      Element shifted = apply_power(*defining_, b.t_exponent(), a.base_part());
      return Element(self, a.t_exponent() + b.t_exponent(),
                     base_->mul(shifted, b.base_part()));
    }
    case Family::VirtuallyFree: {
      // (w1 b_i)(w2 b_j) = w1 (b_i w2 b_i^-1) v_ij b_(r_ij).
      int i = a.vf_coset(), j = b.vf_coset();
      Word w = concat_reduce(a.vf_word(), vf_conjugation(i, b.vf_word()));
      w = concat_reduce(w, vf_.prod_word[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
      return Element(self, std::move(w),
                     vf_.prod_coset[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    }
  }
  throw InputError("mul: unknown family");
}

Element Group::inv(const Element& a) const {
  if (a.group().get() != this) throw InputError("inv: element of another group");
  auto self = shared_from_this();
  switch (family_) {
    case Family::Free: return Element(self, invert_word(a.word()));
    case Family::Abelian: return Element(self, vec_neg(a.vector()));
    case Family::Finite: return Element(self, finite_inv(a.table_index()));
    case Family::Semidirect: {
      // (t^r g)^-1 = t^-r (g^-1 phi^-r); needs the inverse of the defining map.
      Element ginv = base_->inv(a.base_part());
      return Element(self, -a.t_exponent(), apply_power(*defining_, -a.t_exponent(), ginv));
    }
    case Family::VirtuallyFree: {
      int i = a.vf_coset();
      int j = vf_.inv_coset[static_cast<std::size_t>(i)];
      Word w = concat_reduce(vf_.inv_word[static_cast<std::size_t>(i)],
                             vf_conjugation(j, invert_word(a.vf_word())));
      return Element(self, std::move(w), j);
    }
  }
  throw InputError("inv: unknown family");
}

Element Group::pow(const Element& a, const Int& k) const {
  Element base = k < 0 ? inv(a) : a;
  Int e = abs_int(k);
  Element acc = identity();
  Element sq = base;
  while (e > 0) {
    if (floor_mod(e, 2) == 1) acc = mul(acc, sq);
    sq = mul(sq, sq);
    e = floor_div(e, 2);
  }
  return acc;
}

Element Group::conjugate(const Element& g, const Element& by) const {
  return mul(mul(inv(by), g), by);
}

Element Group::evaluate_word(const Word& w) const {
  Element acc = identity();
  for (int letter : w) {
    Element gen = generator(gen_of(letter));
    acc = mul(acc, letter > 0 ? gen : inv(gen));
  }
  return acc;
}

std::string Group::describe() const {
  std::ostringstream os;
  os << family_name(family_) << "(";
  for (std::size_t i = 0; i < generator_names_.size(); ++i) {
    if (i) os << ",";
    os << generator_names_[i];
  }
  os << ")";
  return os.str();
}

Element mul(const Element& a, const Element& b) { return a.group()->mul(a, b); }
Element inv(const Element& a) { return a.group()->inv(a); }
Element pow(const Element& a, const Int& k) { return a.group()->pow(a, k); }
Element conjugate(const Element& g, const Element& by) { return g.group()->conjugate(g, by); }

std::pair<Element, Element> cyclically_reduce(const Element& g) {
  if (g.family() != Family::Free) throw InputError("cyclically_reduce: free elements only");
  auto [core, conj] = cyclic_reduce(g.word());
  return {Element(g.group(), core), Element(g.group(), conj)};
}

}  // namespace gconj
