#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gconj/group.hpp"
#include "gconj/ints.hpp"

namespace gconj {

// phi^power equals conjugation g -> x^-1 g x by the stored element.
struct ViaWitness {
  Int power;
  Element conjugator;
};

// An endomorphism given by generator images (right action: apply(g) is
// "g phi").  For finite table groups the images are given per element.
// Inverse images are a capability, not a default; morphisms built from
// endomorphism data simply lack them.
class Morphism {
 public:
  Morphism(GroupPtr domain, GroupPtr codomain, std::vector<Element> images,
           std::optional<std::vector<Element>> inverse_images = std::nullopt,
           std::optional<ViaWitness> via = std::nullopt);

  static Morphism identity(GroupPtr g);
  // Abelian endomorphism from a row-action matrix (image of e_i = row i).
  // With compute_inverse, derives integer inverse images when |det| = 1.
  static Morphism from_matrix(GroupPtr abelian, const Mat& m, bool compute_inverse = false);

  const GroupPtr& domain() const { return domain_; }
  const GroupPtr& codomain() const { return codomain_; }
  const std::vector<Element>& images() const { return images_; }
  bool has_inverse() const { return inverse_images_.has_value(); }
  const std::optional<ViaWitness>& via_witness() const { return via_; }

  Element apply(const Element& g) const;
  Morphism inverse() const;
  // phi^k (k = 0 is the identity; k < 0 requires inverse images).
  Morphism power(const Int& k) const;
  // Composition "this then other": g -> other.apply(this->apply(g)).
  Morphism then(const Morphism& other) const;

  Mat to_matrix() const;  // abelian domain only
  bool is_identity_map() const;

  bool operator==(const Morphism& other) const;
  bool operator!=(const Morphism& other) const { return !(*this == other); }
  std::string key() const;

  // Attach a virtually-inner witness after verifying it.
  Morphism with_via_witness(Int power, Element conjugator) const;
  // Attach inverse images after verifying both compositions.
  Morphism with_inverse_images(std::vector<Element> inverse_images) const;
  // Try to compute inverse images (abelian matrix inverse, finite bijection).
  std::optional<Morphism> try_computing_inverse() const;

 private:
  GroupPtr domain_;
  GroupPtr codomain_;
  std::vector<Element> images_;
  std::optional<std::vector<Element>> inverse_images_;
  std::optional<ViaWitness> via_;
};

// True iff both compositions fix every generator (sufficient for
// bijectivity on the supported families since generators generate).
bool verify_automorphism(const Morphism& phi, const Morphism& phi_inverse);

// g phi^k with fast paths (abelian matrix power, finite permutation order);
// falls back to |k| successive applications.
Element apply_power(const Morphism& phi, const Int& k, const Element& g);

// Order of phi as a permutation of a finite group's elements.
Int finite_morphism_order(const Morphism& phi);

}  // namespace gconj
