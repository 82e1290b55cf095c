#include "gconj/morphism.hpp"

#include <sstream>

#include "gconj/linalg.hpp"

namespace gconj {

namespace {

std::size_t expected_image_count(const GroupPtr& domain) {
  // Table groups are generated by (and mapped on) all of their elements.
  if (domain->is(Family::Finite)) return domain->finite_order();
  return domain->generator_count();
}

}  // namespace

Morphism::Morphism(GroupPtr domain, GroupPtr codomain, std::vector<Element> images,
                   std::optional<std::vector<Element>> inverse_images,
                   std::optional<ViaWitness> via)
    : domain_(std::move(domain)),
      codomain_(std::move(codomain)),
      images_(std::move(images)),
      inverse_images_(std::move(inverse_images)),
      via_(std::move(via)) {
  if (domain_->is(Family::Semidirect))
    throw CapabilityError("morphisms with a semidirect domain are not supported");
  if (images_.size() != expected_image_count(domain_))
    throw InputError("morphism: wrong number of generator images");
  for (const auto& im : images_)
    if (im.group() != codomain_) throw InputError("morphism: image outside the codomain");

  if (domain_->is(Family::Finite)) {
    // Defining table relations: f(xy) = f(x) f(y) for all pairs.
    std::size_t n = domain_->finite_order();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const Element& lhs = images_[static_cast<std::size_t>(
            domain_->finite_mul(static_cast<int>(i), static_cast<int>(j)))];
        if (!(lhs == codomain_->mul(images_[i], images_[j])))
          throw InputError("morphism: finite table relations are not preserved");
      }
  }
  if (domain_->is(Family::VirtuallyFree)) {
    // Check the defining relations b_i a = u_ia b_i and b_i b_j = v_ij b_r.
    const auto& s = domain_->vf();
    std::size_t rank = s.free_rank, m = s.coset_names.size();
    auto word_image = [&](const Word& w) {
      Element acc = codomain_->identity();
      for (int letter : w) {
        const Element& im = images_[gen_of(letter)];
        acc = codomain_->mul(acc, letter > 0 ? im : codomain_->inv(im));
      }
      return acc;
    };
    auto coset_image = [&](std::size_t i) {
      return i == 0 ? codomain_->identity() : images_[rank + i - 1];
    };
    for (std::size_t i = 1; i < m; ++i) {
      for (std::size_t a = 0; a < rank; ++a) {
        Element lhs = codomain_->mul(coset_image(i), images_[a]);
        Element rhs = codomain_->mul(word_image(s.conj[i][a]), coset_image(i));
        if (!(lhs == rhs)) throw InputError("morphism: coset/generator relation not preserved");
      }
      for (std::size_t j = 1; j < m; ++j) {
        Element lhs = codomain_->mul(coset_image(i), coset_image(j));
        Element rhs = codomain_->mul(word_image(s.prod_word[i][j]),
                                     coset_image(static_cast<std::size_t>(s.prod_coset[i][j])));
        if (!(lhs == rhs)) throw InputError("morphism: coset product relation not preserved");
      }
    }
  }

  if (inverse_images_) {
    if (codomain_ != domain_)
      throw InputError("morphism: inverse images only make sense for endomorphisms");
    if (inverse_images_->size() != images_.size())
      throw InputError("morphism: wrong number of inverse images");
    Morphism inv_map(domain_, domain_, *inverse_images_);
    if (!verify_automorphism(*this, inv_map))
      throw InputError("morphism: inverse images fail the automorphism check");
  }
  if (via_) {
    if (codomain_ != domain_) throw InputError("via witness requires an endomorphism");
    if (via_->power < 1) throw InputError("via witness power must be positive");
    if (via_->conjugator.group() != domain_) throw InputError("via conjugator in the wrong group");
    for (const auto& g : domain_->generators()) {
      Element lhs = apply_power(*this, via_->power, g);
      if (!(lhs == domain_->conjugate(g, via_->conjugator)))
        throw InputError("via witness does not verify");
    }
  }
}

Morphism Morphism::identity(GroupPtr g) {
  std::vector<Element> images;
  if (g->is(Family::Finite)) {
    for (std::size_t i = 0; i < g->finite_order(); ++i)
      images.push_back(Element(g, static_cast<int>(i)));
  } else {
    images = g->generators();
  }
  auto inverse = images;
  return Morphism(g, g, std::move(images), std::move(inverse));
}

Morphism Morphism::from_matrix(GroupPtr abelian, const Mat& m, bool compute_inverse) {
  if (!abelian->is(Family::Abelian)) throw InputError("from_matrix: abelian handle required");
  std::size_t n = abelian->abelian_rank();
  if (m.size() != n) throw InputError("from_matrix: matrix size != rank");
  std::vector<Element> images;
  for (std::size_t i = 0; i < n; ++i) {
    if (m[i].size() != n) throw InputError("from_matrix: matrix is not square");
    images.push_back(Element(abelian, Vec(m[i])));
  }
  std::optional<std::vector<Element>> inverse;
  if (compute_inverse) {
    auto mi = mat_inverse(m);
    if (!mi) throw InputError("from_matrix: matrix has no integer inverse");
    std::vector<Element> inv_images;
    for (std::size_t i = 0; i < n; ++i) inv_images.push_back(Element(abelian, Vec((*mi)[i])));
    inverse = std::move(inv_images);
  }
  return Morphism(std::move(abelian), abelian, std::move(images), std::move(inverse));
}

Element Morphism::apply(const Element& g) const {
  if (g.group() != domain_) throw InputError("apply: element outside the domain");
  switch (domain_->family()) {
    case Family::Free: {
      Element acc = codomain_->identity();
      for (int letter : g.word()) {
        const Element& im = images_[gen_of(letter)];
        acc = codomain_->mul(acc, letter > 0 ? im : codomain_->inv(im));
      }
      return acc;
    }
    case Family::Abelian: {
      Element acc = codomain_->identity();
      const Vec& v = g.vector();
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0) continue;
        acc = codomain_->mul(acc, codomain_->pow(images_[i], v[i]));
      }
      return acc;
    }
    case Family::Finite:
      return images_[static_cast<std::size_t>(g.table_index())];
    case Family::VirtuallyFree: {
      Element acc = codomain_->identity();
      for (int letter : g.vf_word()) {
        const Element& im = images_[gen_of(letter)];
        acc = codomain_->mul(acc, letter > 0 ? im : codomain_->inv(im));
      }
      int i = g.vf_coset();
      if (i != 0) acc = codomain_->mul(acc, images_[domain_->vf().free_rank +
                                                    static_cast<std::size_t>(i) - 1]);
      return acc;
    }
    case Family::Semidirect:
      break;
  }
  throw CapabilityError("apply: unsupported domain family");
}

Morphism Morphism::inverse() const {
  if (!inverse_images_) throw CapabilityError("morphism has no inverse images");
  return Morphism(domain_, codomain_, *inverse_images_, images_);
}

Morphism Morphism::then(const Morphism& other) const {
  if (codomain_ != other.domain_) throw InputError("then: composition domain mismatch");
  std::vector<Element> images;
  images.reserve(images_.size());
  for (const auto& im : images_) images.push_back(other.apply(im));
  std::optional<std::vector<Element>> inverse;
  if (inverse_images_ && other.inverse_images_ && domain_ == other.domain_) {
    // (this then other)^-1 = other^-1 then this^-1.
    Morphism self_inv = this->inverse();
    Morphism other_inv = other.inverse();
    std::vector<Element> inv_images;
    inv_images.reserve(inverse_images_->size());
    for (const auto& pre : other_inv.images()) inv_images.push_back(self_inv.apply(pre));
    inverse = std::move(inv_images);
  }
  return Morphism(domain_, other.codomain_, std::move(images), std::move(inverse));
}

Morphism Morphism::power(const Int& k) const {
  if (domain_ != codomain_) throw InputError("power: endomorphism required");
  if (k < 0 && !inverse_images_)
    throw CapabilityError("negative morphism power without inverse images");
  if (domain_->is(Family::Abelian)) {
    Mat m = mat_pow(to_matrix(), k);
    return from_matrix(domain_, m, inverse_images_.has_value());
  }
  Morphism base = k < 0 ? inverse() : *this;
  Int e = abs_int(k);
  Morphism acc = Morphism::identity(domain_);
  Morphism sq = base;
  while (e > 0) {
    if (floor_mod(e, 2) == 1) acc = acc.then(sq);
    sq = sq.then(sq);
    e = floor_div(e, 2);
  }
  return acc;
}

Mat Morphism::to_matrix() const {
  if (!domain_->is(Family::Abelian) || codomain_ != domain_)
    throw InputError("to_matrix: abelian endomorphism required");
  Mat m;
  for (const auto& im : images_) m.push_back(im.vector());
  return m;
}

bool Morphism::is_identity_map() const {
  if (domain_ != codomain_) return false;
  if (domain_->is(Family::Finite)) {
    for (std::size_t i = 0; i < images_.size(); ++i)
      if (images_[i].table_index() != static_cast<int>(i)) return false;
    return true;
  }
  auto gens = domain_->generators();
  for (std::size_t i = 0; i < gens.size(); ++i)
    if (!(images_[i] == gens[i])) return false;
  return true;
}

bool Morphism::operator==(const Morphism& other) const {
  if (domain_ != other.domain_ || codomain_ != other.codomain_) return false;
  if (images_.size() != other.images_.size()) return false;
  for (std::size_t i = 0; i < images_.size(); ++i)
    if (!(images_[i] == other.images_[i])) return false;
  return true;
}

std::string Morphism::key() const {
  std::ostringstream os;
  os << "m[";
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (i) os << ";";
    os << images_[i].key();
  }
  os << "]";
  return os.str();
}

Morphism Morphism::with_via_witness(Int power, Element conjugator) const {
  return Morphism(domain_, codomain_, images_, inverse_images_,
                  ViaWitness{std::move(power), std::move(conjugator)});
}

Morphism Morphism::with_inverse_images(std::vector<Element> inverse_images) const {
  return Morphism(domain_, codomain_, images_, std::move(inverse_images), via_);
}

std::optional<Morphism> Morphism::try_computing_inverse() const {
  if (inverse_images_) return *this;
  if (domain_ != codomain_) return std::nullopt;
  if (domain_->is(Family::Abelian)) {
    auto mi = mat_inverse(to_matrix());
    if (!mi) return std::nullopt;
    std::vector<Element> inv;
    for (auto& row : *mi) inv.push_back(Element(domain_, Vec(row)));
    return with_inverse_images(std::move(inv));
  }
  if (domain_->is(Family::Finite)) {
    std::size_t n = domain_->finite_order();
    std::vector<int> pre(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
      int im = images_[i].table_index();
      if (pre[static_cast<std::size_t>(im)] >= 0) return std::nullopt;  // not injective
      pre[static_cast<std::size_t>(im)] = static_cast<int>(i);
    }
    std::vector<Element> inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (pre[i] < 0) return std::nullopt;
      inv.push_back(Element(domain_, pre[i]));
    }
    return with_inverse_images(std::move(inv));
  }
  return std::nullopt;
}

bool verify_automorphism(const Morphism& phi, const Morphism& phi_inverse) {
  if (phi.domain() != phi_inverse.domain() || phi.codomain() != phi_inverse.codomain() ||
      phi.domain() != phi.codomain())
    return false;
  const GroupPtr& g = phi.domain();
  std::vector<Element> probes;
  if (g->is(Family::Finite)) {
    for (std::size_t i = 0; i < g->finite_order(); ++i)
      probes.push_back(Element(g, static_cast<int>(i)));
  } else {
    probes = g->generators();
  }
  for (const auto& x : probes) {
    if (!(phi_inverse.apply(phi.apply(x)) == x)) return false;
    if (!(phi.apply(phi_inverse.apply(x)) == x)) return false;
  }
  return true;
}

Element apply_power(const Morphism& phi, const Int& k, const Element& g) {
  if (k == 0) return g;
  if (phi.domain() != phi.codomain()) throw InputError("apply_power: endomorphism required");
  if (phi.domain()->is(Family::Abelian)) {
    Mat m = mat_pow(phi.to_matrix(), k);
    return Element(g.group(), vec_mat_mul(g.vector(), m));
  }
  Int e = k;
  Morphism step = phi;
  if (k < 0) {
    step = phi.inverse();
    e = -k;
  } else if (phi.domain()->is(Family::Finite)) {
    // Reduce mod the permutation order so huge exponents stay cheap.
    Int order = finite_morphism_order(phi);
    e = floor_mod(e, order);
  }
  if (e > 1000000) throw BudgetError("apply_power: exponent too large for iterative application");
  Element out = g;
  for (Int i = 0; i < e; ++i) out = step.apply(out);
  return out;
}

Int finite_morphism_order(const Morphism& phi) {
  const GroupPtr& g = phi.domain();
  if (!g->is(Family::Finite) || phi.domain() != phi.codomain())
    throw InputError("finite_morphism_order: finite endomorphism required");
  std::size_t n = g->finite_order();
  std::vector<int> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = phi.images()[i].table_index();
  // lcm of cycle lengths
  std::vector<bool> seen(n, false);
  Int order = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (seen[i]) continue;
    std::size_t len = 0, j = i;
    while (!seen[j]) {
      seen[j] = true;
      j = static_cast<std::size_t>(perm[j]);
      ++len;
    }
    Int l(static_cast<long long>(len));
    order = order / gcd_int(order, l) * l;
  }
  return order;
}

}  // namespace gconj
