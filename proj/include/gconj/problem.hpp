#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gconj/group.hpp"
#include "gconj/morphism.hpp"
#include "gconj/target.hpp"

namespace gconj {

// Problem kinds.  The simple kinds ask about a second element h, the
// generalized kinds about a target set K:
//   CP    exists z with z^-1 g z = h
//   TCP   exists z with (z^-1 phi) g z = h
//   BrP   exists k with g phi^k = h
//   BrCP  exists k with g phi^k conjugate to h
//   GCP   exists z with z^-1 g z in K
//   GTCP  exists z with (z^-1 phi) g z in K
//   GBrP  exists k with g phi^k in K
//   GBrCP exists k, z with z^-1 (g phi^k) z in K
enum class Kind { CP, TCP, BrP, BrCP, GCP, GTCP, GBrP, GBrCP };

std::string kind_name(Kind k);
std::optional<Kind> kind_from_name(const std::string& name);
bool kind_is_generalized(Kind k);
bool kind_has_morphism(Kind k);  // every kind except CP and GCP

class ProblemInstance {
 public:
  static ProblemInstance simple(Kind kind, std::optional<Morphism> morphism, Element subject,
                                Element other);
  static ProblemInstance generalized(Kind kind, std::optional<Morphism> morphism,
                                     Element subject, Target target);

  Kind kind() const { return kind_; }
  const GroupPtr& group() const { return group_; }
  const std::optional<Morphism>& morphism() const { return morphism_; }
  const Element& subject() const { return subject_; }
  const Element& other() const;
  const Target& target() const;

  bool operator==(const ProblemInstance& o) const;
  std::string key() const;
  std::string describe() const;

 private:
  ProblemInstance(Kind kind, GroupPtr group, std::optional<Morphism> morphism, Element subject,
                  std::optional<Element> other, std::optional<Target> target);

  Kind kind_;
  GroupPtr group_;
  std::optional<Morphism> morphism_;
  Element subject_;
  std::optional<Element> other_;
  std::optional<Target> target_;
};

// An OR of instances: the plan answers yes iff some member does.
struct ReductionPlan {
  std::vector<ProblemInstance> instances;
  std::string provenance;
};

}  // namespace gconj
