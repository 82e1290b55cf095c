#include "gconj/reduction.hpp"

#include <sstream>

namespace gconj {

GroupPtr extension_of(const GroupPtr& base, const Morphism& phi) {
  Morphism defining = phi;
  if (!defining.has_inverse()) {
    auto computed = phi.try_computing_inverse();
    if (!computed)
      throw CapabilityError("extension: the morphism needs verified inverse images");
    defining = *computed;
  }
  return Group::semidirect(base, defining);
}

Element embed_element(const GroupPtr& extension, const Element& g) {
  return Element(extension, Int(0), g);
}

Target embed_target(const GroupPtr& extension, const Target& k) {
  switch (k.kind()) {
    case Target::Kind::FiniteSet: {
      std::vector<Element> lifted;
      for (const auto& e : k.elements()) lifted.push_back(embed_element(extension, e));
      return Target::finite_set(extension, std::move(lifted));
    }
    case Target::Kind::Subgroup:
    case Target::Kind::Coset: {
      const Subgroup& h = k.the_subgroup();
      std::vector<Element> gens;
      switch (h.rep()) {
        case Subgroup::Rep::Stallings:
          for (const auto& b : h.stallings().subgroup_basis())
            gens.push_back(embed_element(extension, b));
          break;
        case Subgroup::Rep::Lattice: {
          const GroupPtr& base = extension->semidirect_base();
          for (const auto& row : h.lattice().basis())
            gens.push_back(embed_element(extension, Element(base, Vec(row))));
          break;
        }
        case Subgroup::Rep::FiniteSubset: {
          const GroupPtr& base = extension->semidirect_base();
          for (int idx : h.finite_subset())
            gens.push_back(embed_element(extension, Element(base, idx)));
          break;
        }
        case Subgroup::Rep::SemidirectGenerators:
          throw CapabilityError("embed_target: nested semidirect targets are not supported");
      }
      Subgroup lifted = Subgroup::from_generators(extension, std::move(gens));
      if (k.kind() == Target::Kind::Subgroup)
        return Target::subgroup(std::move(lifted));
      return Target::coset(embed_element(extension, k.representative()), std::move(lifted));
    }
  }
  throw InputError("embed_target: unknown target kind");
}

ReductionPlan lower_gcp(const ProblemInstance& gcp) {
  if (gcp.kind() != Kind::GCP) throw InputError("lower_gcp: GCP instance required");
  const GroupPtr& ambient = gcp.group();
  if (!ambient->is(Family::Semidirect))
    throw InputError("lower_gcp: the ambient group must be an extension by Z");
  const Morphism& phi = ambient->defining_morphism();
  const Element& subject = gcp.subject();
  const Int& r = subject.t_exponent();
  const Element& g = subject.base_part();

  ReductionPlan plan;
  SlicedTarget sliced = slice_coset(gcp.target(), r);
  Target lowered_target = sliced.to_target();  // capability error if the slice is incomputable

  if (r == 0) {
    plan.provenance = "extension-to-base, zero t-exponent branch";
    plan.instances.push_back(
        ProblemInstance::generalized(Kind::GBrCP, phi, g, std::move(lowered_target)));
    return plan;
  }

  // phi^r computed eagerly so capability problems surface here.
  Morphism phi_r = phi.power(r);
  std::ostringstream note;
  note << "extension-to-base, twisted branch with exponent " << r;
  plan.provenance = note.str();
  Int count = abs_int(r);
  for (Int j = 0; j < count; ++j) {
    Element shifted = apply_power(phi, j, g);
    plan.instances.push_back(
        ProblemInstance::generalized(Kind::GTCP, phi_r, shifted, lowered_target));
  }
  return plan;
}

ProblemInstance lift_brcp(const Target& k, const Morphism& phi, const Element& g) {
  GroupPtr extension = extension_of(g.group(), phi);
  return ProblemInstance::generalized(Kind::GCP, std::nullopt, embed_element(extension, g),
                                      embed_target(extension, k));
}

ProblemInstance lift_tcp(const Target& k, const Morphism& phi, const Element& g) {
  GroupPtr extension = extension_of(g.group(), phi);
  Element t_letter(extension, Int(1), g.group()->identity());
  Element subject(extension, Int(1), g);
  Target lifted = embed_target(extension, k).left_translated(t_letter);
  return ProblemInstance::generalized(Kind::GCP, std::nullopt, std::move(subject),
                                      std::move(lifted));
}

ProblemInstance inner_tcp_to_gcp(const Target& k, const Element& w, const Element& g) {
  if (w.group() != g.group()) throw InputError("inner_tcp_to_gcp: mixed groups");
  const GroupPtr& ambient = g.group();
  // (z^-1 lambda_w) g z in K  iff  z^-1 (w g) z in w K.
  return ProblemInstance::generalized(Kind::GCP, std::nullopt, ambient->mul(w, g),
                                      k.left_translated(w));
}

}  // namespace gconj
