#include "gconj/brute.hpp"

#include <map>
#include <set>
#include <sstream>

namespace gconj {

Ball ball(const GroupPtr& g, long long radius, long long max_size) {
  if (radius < 0) throw InputError("ball: radius must be nonnegative");
  Ball b;
  b.group = g;
  b.radius = radius;
  b.elements.push_back(g->identity());
  std::set<std::string> seen{g->identity().key()};
  std::vector<Element> moves;
  for (const auto& gen : g->generators()) {
    moves.push_back(gen);
    moves.push_back(g->inv(gen));
  }
  std::vector<Element> frontier = b.elements;
  for (long long r = 0; r < radius; ++r) {
    std::vector<Element> next;
    for (const auto& e : frontier)
      for (const auto& s : moves) {
        Element w = g->mul(e, s);
        if (!seen.insert(w.key()).second) continue;
        next.push_back(w);
        b.elements.push_back(w);
        if (static_cast<long long>(b.elements.size()) > max_size)
          throw BudgetError("ball: size blowup");
      }
    if (next.empty()) {
      b.saturated = true;
      break;
    }
    frontier = std::move(next);
  }
  return b;
}

namespace {

bool brute_hit(const ProblemInstance& inst, const Element& e) {
  return kind_is_generalized(inst.kind()) ? inst.target().member(e) : e == inst.other();
}

// Complete conjugator sweep for GCP over (finite base) x| Z: the conjugate
// by t^s v depends on s only modulo the period of the defining morphism.
Verdict brute_gcp_finite_base_extension(const ProblemInstance& inst) {
  const GroupPtr& g = inst.group();
  const GroupPtr& base = g->semidirect_base();
  Int period = finite_morphism_order(g->defining_morphism());
  long long steps = 0;
  for (Int s = 0; s < period; ++s)
    for (std::size_t v = 0; v < base->finite_order(); ++v) {
      Element z(g, s, Element(base, static_cast<int>(v)));
      Element c = g->conjugate(inst.subject(), z);
      ++steps;
      if (brute_hit(inst, c)) {
        YesCertificate cert;
        cert.conjugator = z;
        cert.target_member = c;
        cert.note = "full twist period sweep";
        return Verdict::yes_with(std::move(cert), steps);
      }
    }
  NoCertificate cert;
  cert.method = RefutationMethod::ExhaustedFinite;
  cert.swept = steps;
  cert.note = "conjugates swept over a full twist period and the whole base";
  return Verdict::no_with(std::move(cert), steps);
}

}  // namespace

Verdict brute_solve(const ProblemInstance& inst, long long radius, long long kmax) {
  const GroupPtr& g = inst.group();

  switch (inst.kind()) {
    case Kind::CP:
    case Kind::GCP: {
      if (g->is(Family::Semidirect) && g->semidirect_base()->is(Family::Finite))
        return brute_gcp_finite_base_extension(inst);
      Ball b = ball(g, radius);
      long long steps = 0;
      for (const auto& z : b.elements) {
        ++steps;
        Element c = g->conjugate(inst.subject(), z);
        if (brute_hit(inst, c)) {
          YesCertificate cert;
          cert.conjugator = z;
          cert.target_member = c;
          return Verdict::yes_with(std::move(cert), steps);
        }
      }
      if (b.saturated) {
        NoCertificate cert;
        cert.method = RefutationMethod::ExhaustedFinite;
        cert.swept = steps;
        return Verdict::no_with(std::move(cert), steps);
      }
      BudgetReport report;
      report.steps_used = steps;
      report.bound_reached = "conjugator ball radius";
      return Verdict::unknown_with(report);
    }

    case Kind::TCP:
    case Kind::GTCP: {
      const Morphism& phi = *inst.morphism();
      Ball b = ball(g, radius);
      long long steps = 0;
      for (const auto& z : b.elements) {
        ++steps;
        Element c = g->mul(g->mul(phi.apply(g->inv(z)), inst.subject()), z);
        if (brute_hit(inst, c)) {
          YesCertificate cert;
          cert.conjugator = z;
          cert.target_member = c;
          return Verdict::yes_with(std::move(cert), steps);
        }
      }
      if (b.saturated) {
        NoCertificate cert;
        cert.method = RefutationMethod::ExhaustedFinite;
        cert.swept = steps;
        return Verdict::no_with(std::move(cert), steps);
      }
      BudgetReport report;
      report.steps_used = steps;
      report.bound_reached = "conjugator ball radius";
      return Verdict::unknown_with(report);
    }

    case Kind::BrP:
    case Kind::GBrP:
    case Kind::BrCP:
    case Kind::GBrCP: {
      const Morphism& phi = *inst.morphism();
      bool conj_kind = inst.kind() == Kind::BrCP || inst.kind() == Kind::GBrCP;
      std::optional<Ball> conjugators;
      if (conj_kind) conjugators = ball(g, radius);

      auto test_point = [&](const Element& e, const Int& k,
                            long long& steps) -> std::optional<Verdict> {
        if (!conj_kind) {
          ++steps;
          if (brute_hit(inst, e)) {
            YesCertificate cert;
            cert.exponent = k;
            cert.target_member = e;
            return Verdict::yes_with(std::move(cert), steps);
          }
          return std::nullopt;
        }
        for (const auto& z : conjugators->elements) {
          ++steps;
          Element c = g->conjugate(e, z);
          if (brute_hit(inst, c)) {
            YesCertificate cert;
            cert.exponent = k;
            cert.conjugator = z;
            cert.target_member = c;
            return Verdict::yes_with(std::move(cert), steps);
          }
        }
        return std::nullopt;
      };

      bool negative = phi.has_inverse();
      std::map<std::string, long long> visited;
      bool cycled = false;
      long long steps = 0;
      Element fwd = inst.subject();
      Element bwd = inst.subject();
      std::optional<Morphism> back;
      if (negative) back = phi.inverse();
      for (long long k = 0; k <= kmax; ++k) {
        if (auto v = test_point(fwd, Int(k), steps)) return *v;
        auto it = visited.find(fwd.key());
        if (it != visited.end()) {
          cycled = true;
          break;
        }
        visited.emplace(fwd.key(), k);
        if (negative && k > 0) {
          if (auto v = test_point(bwd, Int(-k), steps)) return *v;
          if (visited.count(bwd.key())) {
            // Backward walk entered the enumerated set: orbit closed.
            cycled = true;
            break;
          }
          visited.emplace(bwd.key(), -k);
        }
        if (k < kmax) {
          fwd = phi.apply(fwd);
          if (negative) bwd = back->apply(bwd);
        }
      }
      bool conjugator_space_complete =
          !conj_kind || conjugators->saturated || g->is(Family::Finite);
      if (cycled && conjugator_space_complete) {
        NoCertificate cert;
        cert.method = RefutationMethod::OrbitCycle;
        cert.swept = steps;
        cert.note = "orbit fully enumerated before any hit";
        return Verdict::no_with(std::move(cert), steps);
      }
      BudgetReport report;
      report.steps_used = steps;
      report.bound_reached = cycled ? "conjugator ball radius" : "exponent bound";
      return Verdict::unknown_with(report);
    }
  }
  throw InputError("brute_solve: unknown kind");
}

}  // namespace gconj
