#include "gconj/target.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "gconj/morphism.hpp"

namespace gconj {

// ---------------------------------------------------------------- lattices

LatticeSubgroup::LatticeSubgroup(std::size_t ambient_rank, Mat generators)
    : ambient_rank_(ambient_rank) {
  for (const auto& row : generators)
    if (row.size() != ambient_rank) throw InputError("lattice: generator of wrong length");
  basis_ = hnf(std::move(generators));
}

LatticeSubgroup LatticeSubgroup::zero(std::size_t ambient_rank) {
  return LatticeSubgroup(ambient_rank, Mat{});
}

LatticeSubgroup LatticeSubgroup::full(std::size_t ambient_rank) {
  return LatticeSubgroup(ambient_rank, mat_identity(ambient_rank));
}

bool LatticeSubgroup::contains(const Vec& v) const {
  if (v.size() != ambient_rank_) throw InputError("lattice: vector of wrong length");
  return lattice_contains(basis_, v);
}

Vec LatticeSubgroup::reduce(const Vec& v) const {
  Vec rem = v;
  for (const auto& row : basis_) {
    std::size_t c = 0;
    while (c < row.size() && row[c] == 0) ++c;
    if (c == row.size()) continue;
    Int q = floor_div(rem[c], row[c]);
    for (std::size_t j = 0; j < rem.size(); ++j) rem[j] -= q * row[j];
  }
  return rem;
}

LatticeSubgroup LatticeSubgroup::intersect(const LatticeSubgroup& other) const {
  if (ambient_rank_ != other.ambient_rank_) throw InputError("lattice intersect: rank mismatch");
  return LatticeSubgroup(ambient_rank_, lattice_intersection(basis_, other.basis_));
}

LatticeSubgroup LatticeSubgroup::sum(const LatticeSubgroup& other) const {
  if (ambient_rank_ != other.ambient_rank_) throw InputError("lattice sum: rank mismatch");
  return LatticeSubgroup(ambient_rank_, lattice_sum(basis_, other.basis_));
}

std::optional<Int> LatticeSubgroup::exponent() const {
  return lattice_exponent(basis_, ambient_rank_);
}

bool LatticeSubgroup::is_full() const { return basis_ == mat_identity(ambient_rank_); }

std::string LatticeSubgroup::key() const {
  return "L" + std::to_string(ambient_rank_) + mat_to_string(basis_);
}

// ---------------------------------------------------------------- subgroups

Subgroup Subgroup::from_stallings(StallingsAutomaton automaton) {
  Subgroup h;
  h.group_ = automaton.group();
  h.rep_ = Rep::Stallings;
  h.stallings_ = std::move(automaton);
  return h;
}

Subgroup Subgroup::from_lattice(const GroupPtr& abelian, LatticeSubgroup lattice) {
  if (!abelian->is(Family::Abelian)) throw InputError("from_lattice: abelian handle required");
  if (lattice.ambient_rank() != abelian->abelian_rank())
    throw InputError("from_lattice: rank mismatch");
  Subgroup h;
  h.group_ = abelian;
  h.rep_ = Rep::Lattice;
  h.lattice_ = std::move(lattice);
  return h;
}

Subgroup Subgroup::from_generators(const GroupPtr& group, std::vector<Element> generators) {
  for (const auto& g : generators)
    if (g.group() != group) throw InputError("subgroup: generator from another group");
  switch (group->family()) {
    case Family::Free:
      return from_stallings(StallingsAutomaton(group, generators));
    case Family::Abelian: {
      Mat rows;
      for (const auto& g : generators) rows.push_back(g.vector());
      return from_lattice(group, LatticeSubgroup(group->abelian_rank(), std::move(rows)));
    }
    case Family::Finite: {
      // Closure of the generating set in the table.
      std::set<int> closure{group->finite_identity()};
      for (const auto& g : generators) closure.insert(g.table_index());
      bool grew = true;
      while (grew) {
        grew = false;
        std::vector<int> current(closure.begin(), closure.end());
        for (int x : current)
          for (int y : current) grew |= closure.insert(group->finite_mul(x, y)).second;
      }
      Subgroup h;
      h.group_ = group;
      h.rep_ = Rep::FiniteSubset;
      h.finite_subset_.assign(closure.begin(), closure.end());
      return h;
    }
    case Family::Semidirect: {
      Subgroup h;
      h.group_ = group;
      h.rep_ = Rep::SemidirectGenerators;
      h.gens_ = std::move(generators);
      Vec exponents;
      for (const auto& g : h.gens_) exponents.push_back(g.t_exponent());
      auto [d, lambda] = extended_gcd(exponents);
      h.exp_gcd_ = d;
      h.exp_lambda_ = lambda;
      const GroupPtr& base = group->semidirect_base();
      if (d == 0) {
        std::vector<Element> base_parts;
        for (const auto& g : h.gens_) base_parts.push_back(g.base_part());
        h.base_subgroup_ = std::make_shared<const Subgroup>(
            Subgroup::from_generators(base, std::move(base_parts)));
      } else {
        Element tau = group->identity();
        for (std::size_t i = 0; i < h.gens_.size(); ++i)
          tau = group->mul(tau, group->pow(h.gens_[i], lambda[i]));
        h.primitive_vertical_ = tau;
        if (base->is(Family::Abelian))
          h.base_lattice_ = base_intersection(group, h.gens_);
      }
      return h;
    }
    case Family::VirtuallyFree:
      throw CapabilityError("subgroup targets of virtually free handles are not supported");
  }
  throw InputError("subgroup: unknown family");
}

const StallingsAutomaton& Subgroup::stallings() const {
  if (!stallings_) throw InputError("subgroup: no automaton representation");
  return *stallings_;
}
const LatticeSubgroup& Subgroup::lattice() const {
  if (!lattice_) throw InputError("subgroup: no lattice representation");
  return *lattice_;
}
const std::vector<int>& Subgroup::finite_subset() const {
  if (rep_ != Rep::FiniteSubset) throw InputError("subgroup: no finite subset representation");
  return finite_subset_;
}
const std::vector<Element>& Subgroup::generator_list() const {
  if (rep_ != Rep::SemidirectGenerators) throw InputError("subgroup: no generator list");
  return gens_;
}
const Int& Subgroup::t_exponent_gcd() const {
  if (rep_ != Rep::SemidirectGenerators) throw InputError("subgroup: not semidirect");
  return exp_gcd_;
}
const LatticeSubgroup& Subgroup::base_lattice() const {
  if (!base_lattice_)
    throw CapabilityError(
        "base intersection unavailable: subgroup slicing needs a free abelian base");
  return *base_lattice_;
}
const Subgroup& Subgroup::base_subgroup() const {
  if (!base_subgroup_) throw InputError("subgroup: not contained in the base");
  return *base_subgroup_;
}
const Element& Subgroup::primitive_vertical() const {
  if (!primitive_vertical_) throw InputError("subgroup: no vertical generator");
  return *primitive_vertical_;
}

Element Subgroup::slice_representative(const Int& y) const {
  if (rep_ != Rep::SemidirectGenerators) throw InputError("slice_representative: not semidirect");
  if (exp_gcd_ == 0) {
    if (y != 0) throw InputError("slice_representative: exponent outside the subgroup");
    return group_->identity();
  }
  if (floor_mod(y, exp_gcd_) != 0)
    throw InputError("slice_representative: exponent outside the subgroup");
  Int scale = y / exp_gcd_;
  Element p = group_->identity();
  for (std::size_t i = 0; i < gens_.size(); ++i)
    p = group_->mul(p, group_->pow(gens_[i], exp_lambda_[i] * scale));
  return p;
}

bool Subgroup::contains(const Element& g) const {
  if (g.group() != group_) throw InputError("subgroup contains: element from another group");
  switch (rep_) {
    case Rep::Stallings:
      return stallings_->contains(g);
    case Rep::Lattice:
      return lattice_->contains(g.vector());
    case Rep::FiniteSubset:
      return std::binary_search(finite_subset_.begin(), finite_subset_.end(), g.table_index());
    case Rep::SemidirectGenerators: {
      const Int& y = g.t_exponent();
      if (exp_gcd_ == 0) return y == 0 && base_subgroup_->contains(g.base_part());
      if (floor_mod(y, exp_gcd_) != 0) return false;
      Element anchor = slice_representative(y);
      // t^y w in H iff w differs from the anchor's base part by H meet base.
      const GroupPtr& base = group_->semidirect_base();
      if (!base->is(Family::Abelian))
        throw CapabilityError("membership in semidirect subgroups needs a free abelian base");
      Vec diff = vec_sub(g.base_part().vector(), anchor.base_part().vector());
      return base_lattice().contains(diff);
    }
  }
  throw InputError("subgroup contains: unknown representation");
}

bool Subgroup::is_trivial() const {
  switch (rep_) {
    case Rep::Stallings: return stallings_->is_trivial();
    case Rep::Lattice: return lattice_->basis().empty();
    case Rep::FiniteSubset: return finite_subset_.size() == 1;
    case Rep::SemidirectGenerators: {
      for (const auto& g : gens_)
        if (!g.is_identity()) return false;
      return true;
    }
  }
  return false;
}

bool Subgroup::operator==(const Subgroup& other) const {
  if (group_ != other.group_ || rep_ != other.rep_) return false;
  switch (rep_) {
    case Rep::Stallings: return *stallings_ == *other.stallings_;
    case Rep::Lattice: return *lattice_ == *other.lattice_;
    case Rep::FiniteSubset: return finite_subset_ == other.finite_subset_;
    case Rep::SemidirectGenerators: {
      if (gens_.size() != other.gens_.size()) return false;
      for (std::size_t i = 0; i < gens_.size(); ++i)
        if (!(gens_[i] == other.gens_[i])) return false;
      return true;
    }
  }
  return false;
}

std::string Subgroup::key() const {
  switch (rep_) {
    case Rep::Stallings: return "S" + stallings_->key();
    case Rep::Lattice: return lattice_->key();
    case Rep::FiniteSubset: {
      std::ostringstream os;
      os << "F{";
      for (int i : finite_subset_) os << i << ",";
      os << "}";
      return os.str();
    }
    case Rep::SemidirectGenerators: {
      std::ostringstream os;
      os << "G{";
      for (const auto& g : gens_) os << g.key() << ";";
      os << "}";
      return os.str();
    }
  }
  return "?";
}

LatticeSubgroup base_intersection(const GroupPtr& semidirect, const std::vector<Element>& gens) {
  if (!semidirect->is(Family::Semidirect))
    throw InputError("base_intersection: semidirect handle required");
  const GroupPtr& base = semidirect->semidirect_base();
  if (!base->is(Family::Abelian))
    throw CapabilityError("base_intersection: free abelian base required");
  std::size_t n = base->abelian_rank();

  Vec exponents;
  for (const auto& g : gens) exponents.push_back(g.t_exponent());
  auto [d, lambda] = extended_gcd(exponents);

  Mat seeds;
  if (d == 0) {
    for (const auto& g : gens) seeds.push_back(g.base_part().vector());
    return LatticeSubgroup(n, std::move(seeds));
  }

  // tau = t^d h0 in H; Schreier seeds sigma_i = h_i tau^(-k_i/d) all lie in
  // the base, and H meet base is their closure under conjugation by tau,
  // which acts on the base as A^d.
  Element tau = semidirect->identity();
  for (std::size_t i = 0; i < gens.size(); ++i)
    tau = semidirect->mul(tau, semidirect->pow(gens[i], lambda[i]));
  for (std::size_t i = 0; i < gens.size(); ++i) {
    Element sigma = semidirect->mul(gens[i], semidirect->pow(tau, -exponents[i] / d));
    if (sigma.t_exponent() != 0) throw InputError("base_intersection: seed left the base");
    seeds.push_back(sigma.base_part().vector());
  }

  Mat action = mat_pow(semidirect->defining_morphism().to_matrix(), d);
  Mat action_inv = mat_pow(semidirect->defining_morphism().to_matrix(), -d);
  Mat basis = hnf(std::move(seeds));
  while (true) {
    Mat grown = basis;
    for (const auto& row : basis) {
      grown.push_back(vec_mat_mul(row, action));
      grown.push_back(vec_mat_mul(row, action_inv));
    }
    grown = hnf(std::move(grown));
    if (grown == basis) break;
    basis = std::move(grown);
  }
  return LatticeSubgroup(n, std::move(basis));
}

// ---------------------------------------------------------------- targets

Target Target::finite_set(const GroupPtr& group, std::vector<Element> elements) {
  Target t;
  t.kind_ = Kind::FiniteSet;
  t.group_ = group;
  std::sort(elements.begin(), elements.end(),
            [](const Element& a, const Element& b) { return a.key() < b.key(); });
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  for (const auto& e : elements)
    if (e.group() != group) throw InputError("target: element from another group");
  t.elements_ = std::move(elements);
  return t;
}

Target Target::subgroup(Subgroup h) {
  Target t;
  t.kind_ = Kind::Subgroup;
  t.group_ = h.group();
  t.subgroup_ = std::move(h);
  return t;
}

Target Target::coset(Element representative, Subgroup h) {
  if (representative.group() != h.group())
    throw InputError("target: coset representative outside the ambient group");
  if (representative.is_identity()) return subgroup(std::move(h));
  // Canonicalize abelian representatives against the lattice.
  if (h.rep() == Subgroup::Rep::Lattice) {
    Vec reduced = h.lattice().reduce(representative.vector());
    representative = Element(representative.group(), std::move(reduced));
    if (representative.is_identity()) return subgroup(std::move(h));
  } else if (h.rep() == Subgroup::Rep::FiniteSubset) {
    // Least element of the coset is the canonical representative.
    int best = -1;
    for (int x : h.finite_subset()) {
      int y = representative.group()->finite_mul(representative.table_index(), x);
      if (best < 0 || y < best) best = y;
    }
    representative = Element(representative.group(), best);
    if (representative.is_identity()) return subgroup(std::move(h));
  }
  Target t;
  t.kind_ = Kind::Coset;
  t.group_ = h.group();
  t.representative_ = std::move(representative);
  t.subgroup_ = std::move(h);
  return t;
}

const std::vector<Element>& Target::elements() const {
  if (kind_ != Kind::FiniteSet) throw InputError("target: not a finite set");
  return elements_;
}
const Subgroup& Target::the_subgroup() const {
  if (!subgroup_) throw InputError("target: no subgroup part");
  return *subgroup_;
}
const Element& Target::representative() const {
  if (!representative_) throw InputError("target: no coset representative");
  return *representative_;
}

bool Target::member(const Element& g) const {
  if (g.group() != group_) throw InputError("target member: element from another group");
  switch (kind_) {
    case Kind::FiniteSet:
      return std::any_of(elements_.begin(), elements_.end(),
                         [&](const Element& e) { return e == g; });
    case Kind::Subgroup:
      return subgroup_->contains(g);
    case Kind::Coset:
      return subgroup_->contains(group_->mul(group_->inv(*representative_), g));
  }
  return false;
}

Target Target::left_translated(const Element& w) const {
  if (w.group() != group_) throw InputError("target translate: element from another group");
  switch (kind_) {
    case Kind::FiniteSet: {
      std::vector<Element> moved;
      for (const auto& e : elements_) moved.push_back(group_->mul(w, e));
      return finite_set(group_, std::move(moved));
    }
    case Kind::Subgroup:
      return coset(w, *subgroup_);
    case Kind::Coset:
      return coset(group_->mul(w, *representative_), *subgroup_);
  }
  throw InputError("target translate: unknown kind");
}

bool Target::operator==(const Target& other) const {
  if (kind_ != other.kind_ || group_ != other.group_) return false;
  switch (kind_) {
    case Kind::FiniteSet: {
      if (elements_.size() != other.elements_.size()) return false;
      for (std::size_t i = 0; i < elements_.size(); ++i)
        if (!(elements_[i] == other.elements_[i])) return false;
      return true;
    }
    case Kind::Subgroup:
      return *subgroup_ == *other.subgroup_;
    case Kind::Coset:
      return *representative_ == *other.representative_ && *subgroup_ == *other.subgroup_;
  }
  return false;
}

std::string Target::key() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::FiniteSet:
      os << "set{";
      for (const auto& e : elements_) os << e.key() << ";";
      os << "}";
      break;
    case Kind::Subgroup:
      os << "sub" << subgroup_->key();
      break;
    case Kind::Coset:
      os << "coset[" << representative_->key() << "]" << subgroup_->key();
      break;
  }
  return os.str();
}

// ---------------------------------------------------------------- slicing

SlicedTarget SlicedTarget::empty(GroupPtr base) {
  SlicedTarget s;
  s.kind_ = Kind::Empty;
  s.group_ = std::move(base);
  return s;
}

SlicedTarget SlicedTarget::finite_set(GroupPtr base, std::vector<Element> elements) {
  if (elements.empty()) return empty(std::move(base));
  SlicedTarget s;
  s.kind_ = Kind::FiniteSet;
  s.group_ = std::move(base);
  std::sort(elements.begin(), elements.end(),
            [](const Element& a, const Element& b) { return a.key() < b.key(); });
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  s.elements_ = std::move(elements);
  return s;
}

SlicedTarget SlicedTarget::coset(Element representative, std::optional<Subgroup> subgroup_part) {
  SlicedTarget s;
  s.kind_ = Kind::Coset;
  s.group_ = representative.group();
  s.representative_ = std::move(representative);
  s.subgroup_part_ = std::move(subgroup_part);
  return s;
}

const Element& SlicedTarget::representative() const {
  if (!representative_) throw InputError("sliced target: no representative");
  return *representative_;
}

const Subgroup& SlicedTarget::subgroup_part() const {
  if (!subgroup_part_)
    throw CapabilityError("sliced target: subgroup part unavailable (base intersection)");
  return *subgroup_part_;
}

bool SlicedTarget::member(const Element& base_element) const {
  switch (kind_) {
    case Kind::Empty:
      return false;
    case Kind::FiniteSet:
      return std::any_of(elements_.begin(), elements_.end(),
                         [&](const Element& e) { return e == base_element; });
    case Kind::Coset: {
      const Subgroup& h = subgroup_part();  // throws when unavailable
      return h.contains(group_->mul(group_->inv(*representative_), base_element));
    }
  }
  return false;
}

Target SlicedTarget::to_target() const {
  switch (kind_) {
    case Kind::Empty:
      return Target::finite_set(group_, {});
    case Kind::FiniteSet:
      return Target::finite_set(group_, elements_);
    case Kind::Coset:
      return Target::coset(*representative_, subgroup_part());
  }
  throw InputError("sliced target: unknown kind");
}

std::string SlicedTarget::key() const {
  switch (kind_) {
    case Kind::Empty:
      return "empty";
    case Kind::FiniteSet: {
      std::ostringstream os;
      os << "set{";
      for (const auto& e : elements_) os << e.key() << ";";
      os << "}";
      return os.str();
    }
    case Kind::Coset: {
      std::ostringstream os;
      os << "coset[" << representative_->key() << "]";
      os << (subgroup_part_ ? subgroup_part_->key() : std::string("<unavailable>"));
      return os.str();
    }
  }
  return "?";
}

SlicedTarget slice_coset(const Target& k, const Int& r) {
  const GroupPtr& ambient = k.group();
  if (!ambient->is(Family::Semidirect)) throw InputError("slice_coset: semidirect target required");
  const GroupPtr& base = ambient->semidirect_base();

  if (k.kind() == Target::Kind::FiniteSet) {
    std::vector<Element> hits;
    for (const auto& e : k.elements())
      if (e.t_exponent() == r) hits.push_back(e.base_part());
    return SlicedTarget::finite_set(base, std::move(hits));
  }

  const Subgroup& h = k.the_subgroup();
  if (h.rep() != Subgroup::Rep::SemidirectGenerators)
    throw InputError("slice_coset: subgroup must be given by semidirect generators");
  Element rep = k.kind() == Target::Kind::Coset ? k.representative() : ambient->identity();
  const Int& s = rep.t_exponent();
  const Int& d = h.t_exponent_gcd();

  if (d == 0) {
    if (r != s) return SlicedTarget::empty(base);
    // K_r = g * (H meet base) with g the representative's base part.
    return SlicedTarget::coset(rep.base_part(), h.base_subgroup());
  }
  if (floor_mod(r - s, d) != 0) return SlicedTarget::empty(base);

  Element product = ambient->mul(rep, h.slice_representative(r - s));
  if (product.t_exponent() != r) throw InputError("slice_coset: representative construction failed");
  Element representative = product.base_part();

  if (!base->is(Family::Abelian))
    return SlicedTarget::coset(std::move(representative), std::nullopt);
  Subgroup part = Subgroup::from_lattice(base, h.base_lattice());
  // Canonicalize the representative against the lattice.
  Vec reduced = part.lattice().reduce(representative.vector());
  return SlicedTarget::coset(Element(base, std::move(reduced)), std::move(part));
}

namespace {

SlicedTarget finite_coset_intersect(const Target& c1, const Target& c2) {
  const GroupPtr& g = c1.group();
  auto enumerate = [&](const Target& c) {
    std::set<int> out;
    const Subgroup& h = c.the_subgroup();
    int rep = c.kind() == Target::Kind::Coset ? c.representative().table_index()
                                              : g->finite_identity();
    for (int x : h.finite_subset()) out.insert(g->finite_mul(rep, x));
    return out;
  };
  std::set<int> s1 = enumerate(c1), s2 = enumerate(c2);
  std::vector<int> common;
  std::set_intersection(s1.begin(), s1.end(), s2.begin(), s2.end(), std::back_inserter(common));
  if (common.empty()) return SlicedTarget::empty(g);
  std::set<int> hs;
  {
    const auto& h1 = c1.the_subgroup().finite_subset();
    const auto& h2 = c2.the_subgroup().finite_subset();
    std::set_intersection(h1.begin(), h1.end(), h2.begin(), h2.end(),
                          std::inserter(hs, hs.begin()));
  }
  std::vector<Element> gens;
  for (int x : hs) gens.push_back(Element(g, x));
  return SlicedTarget::coset(Element(g, common.front()),
                             Subgroup::from_generators(g, std::move(gens)));
}

}  // namespace

SlicedTarget coset_intersect(const Target& c1, const Target& c2) {
  if (c1.group() != c2.group()) throw InputError("coset_intersect: different ambient groups");
  if (c1.kind() == Target::Kind::FiniteSet || c2.kind() == Target::Kind::FiniteSet)
    throw InputError("coset_intersect: coset or subgroup targets required");
  const GroupPtr& g = c1.group();

  const Subgroup& h1 = c1.the_subgroup();
  const Subgroup& h2 = c2.the_subgroup();

  switch (g->family()) {
    case Family::Free: {
      Element r1 = c1.kind() == Target::Kind::Coset ? c1.representative() : g->identity();
      Element r2 = c2.kind() == Target::Kind::Coset ? c2.representative() : g->identity();
      auto meet = coset_intersection(r1, h1.stallings(), r2, h2.stallings());
      if (!meet) return SlicedTarget::empty(g);
      return SlicedTarget::coset(meet->first, Subgroup::from_stallings(meet->second));
    }
    case Family::Abelian: {
      Vec v1 = c1.kind() == Target::Kind::Coset ? c1.representative().vector()
                                                : Vec(g->abelian_rank(), 0);
      Vec v2 = c2.kind() == Target::Kind::Coset ? c2.representative().vector()
                                                : Vec(g->abelian_rank(), 0);
      Mat stacked = h1.lattice().basis();
      const Mat& b2 = h2.lattice().basis();
      stacked.insert(stacked.end(), b2.begin(), b2.end());
      auto coeffs = solve_left(stacked, vec_sub(v2, v1));
      if (!coeffs) return SlicedTarget::empty(g);
      Vec x = v1;
      for (std::size_t i = 0; i < h1.lattice().basis().size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j)
          x[j] += (*coeffs)[i] * h1.lattice().basis()[i][j];
      LatticeSubgroup meet = h1.lattice().intersect(h2.lattice());
      Vec reduced = meet.reduce(x);
      return SlicedTarget::coset(Element(g, std::move(reduced)),
                                 Subgroup::from_lattice(g, std::move(meet)));
    }
    case Family::Finite:
      return finite_coset_intersect(c1, c2);
    default:
      throw CapabilityError("coset_intersect: unsupported family pairing");
  }
}

}  // namespace gconj
