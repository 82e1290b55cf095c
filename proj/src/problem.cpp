#include "gconj/problem.hpp"

#include <sstream>

namespace gconj {

std::string kind_name(Kind k) {
  switch (k) {
    case Kind::CP: return "CP";
    case Kind::TCP: return "TCP";
    case Kind::BrP: return "BrP";
    case Kind::BrCP: return "BrCP";
    case Kind::GCP: return "GCP";
    case Kind::GTCP: return "GTCP";
    case Kind::GBrP: return "GBrP";
    case Kind::GBrCP: return "GBrCP";
  }
  return "?";
}

std::optional<Kind> kind_from_name(const std::string& name) {
  for (Kind k : {Kind::CP, Kind::TCP, Kind::BrP, Kind::BrCP, Kind::GCP, Kind::GTCP, Kind::GBrP,
                 Kind::GBrCP})
    if (kind_name(k) == name) return k;
  return std::nullopt;
}

bool kind_is_generalized(Kind k) {
  return k == Kind::GCP || k == Kind::GTCP || k == Kind::GBrP || k == Kind::GBrCP;
}

bool kind_has_morphism(Kind k) { return k != Kind::CP && k != Kind::GCP; }

ProblemInstance::ProblemInstance(Kind kind, GroupPtr group, std::optional<Morphism> morphism,
                                 Element subject, std::optional<Element> other,
                                 std::optional<Target> target)
    : kind_(kind),
      group_(std::move(group)),
      morphism_(std::move(morphism)),
      subject_(std::move(subject)),
      other_(std::move(other)),
      target_(std::move(target)) {
  if (subject_.group() != group_) throw InputError("problem: subject outside the ambient group");
  if (kind_has_morphism(kind_)) {
    if (!morphism_) throw InputError("problem: " + kind_name(kind_) + " needs a morphism");
    if (morphism_->domain() != group_ || morphism_->codomain() != group_)
      throw InputError("problem: morphism is not an endomorphism of the ambient group");
  } else if (morphism_) {
    throw InputError("problem: " + kind_name(kind_) + " does not take a morphism");
  }
  if (kind_is_generalized(kind_)) {
    if (!target_) throw InputError("problem: " + kind_name(kind_) + " needs a target");
    if (target_->group() != group_) throw InputError("problem: target in the wrong group");
    if (other_) throw InputError("problem: generalized kinds take a single subject");
  } else {
    if (!other_) throw InputError("problem: " + kind_name(kind_) + " needs two elements");
    if (other_->group() != group_) throw InputError("problem: second element outside the group");
    if (target_) throw InputError("problem: simple kinds do not take a target");
  }
}

ProblemInstance ProblemInstance::simple(Kind kind, std::optional<Morphism> morphism,
                                        Element subject, Element other) {
  GroupPtr g = subject.group();
  return ProblemInstance(kind, std::move(g), std::move(morphism), std::move(subject),
                         std::move(other), std::nullopt);
}

ProblemInstance ProblemInstance::generalized(Kind kind, std::optional<Morphism> morphism,
                                             Element subject, Target target) {
  GroupPtr g = subject.group();
  return ProblemInstance(kind, std::move(g), std::move(morphism), std::move(subject),
                         std::nullopt, std::move(target));
}

const Element& ProblemInstance::other() const {
  if (!other_) throw InputError("problem: no second element");
  return *other_;
}

const Target& ProblemInstance::target() const {
  if (!target_) throw InputError("problem: no target");
  return *target_;
}

bool ProblemInstance::operator==(const ProblemInstance& o) const {
  if (kind_ != o.kind_ || group_ != o.group_) return false;
  if (!(subject_ == o.subject_)) return false;
  if (morphism_.has_value() != o.morphism_.has_value()) return false;
  if (morphism_ && !(*morphism_ == *o.morphism_)) return false;
  if (other_.has_value() != o.other_.has_value()) return false;
  if (other_ && !(*other_ == *o.other_)) return false;
  if (target_.has_value() != o.target_.has_value()) return false;
  if (target_ && !(*target_ == *o.target_)) return false;
  return true;
}

std::string ProblemInstance::key() const {
  std::ostringstream os;
  os << kind_name(kind_) << "(" << subject_.key();
  if (other_) os << "," << other_->key();
  if (morphism_) os << ";" << morphism_->key();
  if (target_) os << ";" << target_->key();
  os << ")";
  return os.str();
}

std::string ProblemInstance::describe() const {
  std::ostringstream os;
  os << kind_name(kind_) << " over " << group_->describe() << ", subject " << subject_.str();
  if (other_) os << ", other " << other_->str();
  return os.str();
}

}  // namespace gconj
