#include "gconj/solvers.hpp"

#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "gconj/linalg.hpp"
#include "gconj/reduction.hpp"

namespace gconj {

// ---------------------------------------------------------------- verdicts

std::string outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Yes: return "yes";
    case Outcome::No: return "no";
    case Outcome::Unknown: return "unknown";
  }
  return "?";
}

std::string refutation_method_name(RefutationMethod m) {
  switch (m) {
    case RefutationMethod::ExhaustedFinite: return "exhausted-finite";
    case RefutationMethod::OrbitCycle: return "orbit-cycle";
    case RefutationMethod::LatticeObstruction: return "lattice-obstruction";
    case RefutationMethod::QuotientObstruction: return "quotient-obstruction";
    case RefutationMethod::AutomatonSweep: return "automaton-sweep";
  }
  return "?";
}

Verdict Verdict::yes_with(YesCertificate cert, long long steps) {
  Verdict v;
  v.outcome = Outcome::Yes;
  v.yes = std::move(cert);
  v.steps_used = steps;
  return v;
}

Verdict Verdict::no_with(NoCertificate cert, long long steps) {
  Verdict v;
  v.outcome = Outcome::No;
  v.no = std::move(cert);
  v.steps_used = steps;
  return v;
}

Verdict Verdict::unknown_with(BudgetReport r) {
  Verdict v;
  v.outcome = Outcome::Unknown;
  v.steps_used = r.steps_used;
  v.report = std::move(r);
  return v;
}

std::string Verdict::summary() const {
  std::ostringstream os;
  os << outcome_name(outcome);
  if (yes) {
    if (yes->exponent) os << " k=" << *yes->exponent;
    if (yes->conjugator) os << " conjugator=" << yes->conjugator->str();
    if (yes->target_member) os << " member=" << yes->target_member->str();
  }
  if (no) {
    os << " (" << refutation_method_name(no->method);
    if (no->modulus) os << " m=" << *no->modulus;
    if (no->orbit_period) os << " period=" << *no->orbit_period;
    os << ")";
  }
  if (report) os << " (" << report->bound_reached << " after " << report->steps_used << " steps)";
  return os.str();
}

void Budget::validate() const {
  if (max_orbit_exponent <= 0 || max_ball_radius <= 0 || max_quotient_size <= 0 ||
      max_steps <= 0)
    throw InputError("budget: all caps must be positive");
}

// ---------------------------------------------------------------- free CP

Verdict cp_free(const Element& u, const Element& v) {
  require_same_group(u, v, "cp_free");
  if (u.family() != Family::Free) throw InputError("cp_free: free elements required");
  const GroupPtr& g = u.group();
  auto [core_u, conj_u] = cyclically_reduce(u);
  auto [core_v, conj_v] = cyclically_reduce(v);
  const Word& cu = core_u.word();
  const Word& cv = core_v.word();

  long long rotations = 0;
  if (cu.size() == cv.size()) {
    if (cu.empty()) {
      YesCertificate cert;
      cert.conjugator = g->identity();
      return Verdict::yes_with(std::move(cert));
    }
    for (std::size_t offset = 0; offset < cu.size(); ++offset, ++rotations) {
      Word rotated(cu.begin() + static_cast<long>(offset), cu.end());
      rotated.insert(rotated.end(), cu.begin(), cu.begin() + static_cast<long>(offset));
      if (rotated == cv) {
        // core_v = p^-1 core_u p with p the first `offset` letters, so
        // z = conj_u^-1 p conj_v conjugates u to v.
        Word p(cu.begin(), cu.begin() + static_cast<long>(offset));
        Element z = g->mul(g->mul(g->inv(conj_u), Element(g, p)), conj_v);
        YesCertificate cert;
        cert.conjugator = std::move(z);
        return Verdict::yes_with(std::move(cert), rotations);
      }
    }
  }
  NoCertificate cert;
  cert.method = RefutationMethod::AutomatonSweep;
  cert.swept = rotations;
  cert.note = "cyclic cores are not rotations of each other";
  return Verdict::no_with(std::move(cert), rotations);
}

Verdict conj_into_subgroup_free(const Element& g, const StallingsAutomaton& h) {
  if (g.group() != h.group()) throw InputError("conj_into_subgroup_free: mixed groups");
  const GroupPtr& group = g.group();
  auto [core_el, conj] = cyclically_reduce(g);
  const Word& core = core_el.word();

  if (core.empty()) {
    YesCertificate cert;
    cert.conjugator = group->identity();
    cert.target_member = group->identity();
    return Verdict::yes_with(std::move(cert));
  }

  long long swept = 0;
  for (int state = 0; state < static_cast<int>(h.state_count()); ++state) {
    for (std::size_t offset = 0; offset < core.size(); ++offset, ++swept) {
      Word rotated(core.begin() + static_cast<long>(offset), core.end());
      rotated.insert(rotated.end(), core.begin(), core.begin() + static_cast<long>(offset));
      auto end = h.read(state, rotated);
      if (end && *end == state) {
        // rotated core loops at `state`; conjugate g there.
        Word p(core.begin(), core.begin() + static_cast<long>(offset));
        Element gamma(group, h.path_from_base(state));
        Element z = group->mul(group->mul(group->inv(conj), Element(group, p)),
                               group->inv(gamma));
        YesCertificate cert;
        cert.conjugator = z;
        cert.target_member = group->conjugate(g, z);
        return Verdict::yes_with(std::move(cert), swept);
      }
    }
  }
  NoCertificate cert;
  cert.method = RefutationMethod::AutomatonSweep;
  cert.swept = swept;
  cert.note = "no rotation of the cyclic core closes at any state";
  return Verdict::no_with(std::move(cert), swept);
}

Verdict conj_power_into_subgroup(const Element& u, const Element& x,
                                 const StallingsAutomaton& h) {
  if (u.group() != x.group() || u.group() != h.group())
    throw InputError("conj_power_into_subgroup: mixed groups");
  const GroupPtr& group = u.group();
  const Word& uw = u.word();

  auto yes_at = [&](long long p) {
    YesCertificate cert;
    cert.exponent = Int(p);
    cert.conjugator = group->pow(x, Int(p));
    return Verdict::yes_with(std::move(cert), p);
  };

  if (uw.empty()) return yes_at(0);  // identity lies in every subgroup
  if (x.word().empty()) {
    if (h.contains(u)) return yes_at(0);
    NoCertificate cert;
    cert.method = RefutationMethod::AutomatonSweep;
    cert.swept = 1;
    cert.note = "trivial conjugator, subject not in the subgroup";
    return Verdict::no_with(std::move(cert), 1);
  }

  auto [core_el, conj_el] = cyclically_reduce(x);
  const Word core = core_el.word();       // x = c^-1 core c, all seams reduced
  const Word c_inv = invert_word(conj_el.word());
  const long long core_len = static_cast<long long>(core.size());
  const long long c_len = static_cast<long long>(c_inv.size());

  // Walk the infinite ray c^-1 core core ... through the automaton.  State
  // q_p after c^-1 core^p determines the outcome at p once the trailing
  // conjugator is appended; if the ray dies, the unread tail becomes a hair
  // that eventually outgrows u, refuting all larger p.
  bool ray_alive = true;
  long long dead_pos = -1;
  int ray_state = StallingsAutomaton::base_state;
  {
    long long pos = 0;
    for (int letter : c_inv) {
      int next = h.step(ray_state, letter);
      if (next < 0) {
        ray_alive = false;
        dead_pos = pos;
        break;
      }
      ray_state = next;
      ++pos;
    }
  }

  std::map<int, long long> seen_ray_states;
  Word t = uw;  // T_p = reduced form of x^-p u x^p
  const Word& xw = x.word();
  const Word xw_inv = invert_word(xw);
  const long long hard_cap =
      static_cast<long long>(h.state_count()) + static_cast<long long>(uw.size()) +
      static_cast<long long>(xw.size()) + c_len + 16;

  for (long long p = 0;; ++p) {
    if (p > hard_cap)
      throw std::logic_error("conj_power_into_subgroup: termination bound exceeded");
    auto end = h.read(StallingsAutomaton::base_state, t);
    if (end && *end == StallingsAutomaton::base_state) return yes_at(p);

    if (ray_alive) {
      auto it = seen_ray_states.find(ray_state);
      if (it != seen_ray_states.end()) {
        NoCertificate cert;
        cert.method = RefutationMethod::AutomatonSweep;
        cert.orbit_preperiod = it->second;
        cert.orbit_period = p - it->second;
        std::ostringstream os;
        os << "tail-state cycle of length " << (p - it->second) << " from p=" << it->second;
        cert.note = os.str();
        return Verdict::no_with(std::move(cert), p);
      }
      seen_ray_states.emplace(ray_state, p);
      long long pos = c_len + p * core_len;
      for (int letter : core) {
        int next = h.step(ray_state, letter);
        if (next < 0) {
          ray_alive = false;
          dead_pos = pos;
          break;
        }
        ray_state = next;
        ++pos;
      }
    } else {
      // Hair length at exponent q is at least |c| + q*|core| - dead_pos; a
      // closed reading of u over a hair of length l needs |u| >= 2l + 1.
      long long hair_next = c_len + (p + 1) * core_len - dead_pos;
      if (2 * hair_next + 1 > static_cast<long long>(uw.size())) {
        NoCertificate cert;
        cert.method = RefutationMethod::AutomatonSweep;
        cert.swept = p + 1;
        std::ostringstream os;
        os << "tail leaves the automaton at position " << dead_pos
           << "; the leftover hair outgrows the subject beyond p=" << p;
        cert.note = os.str();
        return Verdict::no_with(std::move(cert), p);
      }
    }
    t = concat_reduce(concat_reduce(xw_inv, t), xw);
  }
}

// ---------------------------------------------------------------- abelian

Verdict tcp_abelian(const Morphism& endo, const Element& u, const Element& v) {
  require_same_group(u, v, "tcp_abelian");
  if (u.family() != Family::Abelian) throw InputError("tcp_abelian: abelian elements required");
  const GroupPtr& g = u.group();
  Mat a = endo.to_matrix();
  std::size_t n = g->abelian_rank();
  Mat a_minus_i = a;
  for (std::size_t i = 0; i < n; ++i) a_minus_i[i][i] -= 1;
  Vec target = vec_sub(v.vector(), u.vector());
  auto x = solve_left(a_minus_i, target);
  if (x) {
    // x (A - I) = v - u; the twisted conjugator in (z^-1 phi) u z = v is -x.
    YesCertificate cert;
    cert.conjugator = Element(g, vec_neg(*x));
    std::ostringstream os;
    os << "solution of x(A-I) = v-u: x=" << vec_to_string(*x);
    cert.note = os.str();
    return Verdict::yes_with(std::move(cert));
  }
  NoCertificate cert;
  cert.method = RefutationMethod::LatticeObstruction;
  cert.obstruction_basis = hnf(a_minus_i);
  cert.residue = LatticeSubgroup(n, a_minus_i).reduce(target);
  cert.note = "v-u has a nonzero residue against the image lattice of A-I";
  return Verdict::no_with(std::move(cert));
}

// ---------------------------------------------------------------- orbits

namespace {

// Orbit walk of u under phi with canonical-key cycle detection.  The test
// callback reports a hit as a partial certificate.  Negative exponents are
// interleaved when requested and available; a revisited key proves the
// reachable orbit finite and completes a No.
Verdict orbit_search(const Morphism& phi, const Element& u, const Budget& budget,
                     const std::function<std::string(const Element&)>& key_fn,
                     const std::function<std::optional<YesCertificate>(const Element&, const Int&)>&
                         test_fn,
                     bool explore_negative) {
  bool negative = explore_negative && phi.has_inverse();
  std::optional<Morphism> back;
  if (negative) back = phi.inverse();

  std::map<std::string, long long> visited;
  Element fwd = u;
  Element bwd = u;
  long long steps = 0;

  auto check = [&](const Element& e, long long k) -> std::optional<Verdict> {
    ++steps;
    if (auto cert = test_fn(e, Int(k))) {
      cert->exponent = Int(k);
      return Verdict::yes_with(std::move(*cert), steps);
    }
    std::string key = key_fn(e);
    auto it = visited.find(key);
    if (it != visited.end()) {
      NoCertificate cert;
      cert.method = RefutationMethod::OrbitCycle;
      long long first = it->second;
      cert.orbit_preperiod = std::min(first, k);
      cert.orbit_period = std::max(first, k) - std::min(first, k);
      std::ostringstream os;
      os << "orbit revisits exponent " << first << " at exponent " << k;
      cert.note = os.str();
      return Verdict::no_with(std::move(cert), steps);
    }
    visited.emplace(std::move(key), k);
    return std::nullopt;
  };

  for (long long k = 0; k <= budget.max_orbit_exponent; ++k) {
    if (auto done = check(fwd, k)) return *done;
    if (negative && k > 0) {
      if (auto done = check(bwd, -k)) return *done;
    }
    if (k < budget.max_orbit_exponent) {
      fwd = phi.apply(fwd);
      if (negative) bwd = back->apply(bwd);
    }
  }
  BudgetReport report;
  report.steps_used = steps;
  report.bound_reached = "max orbit exponent";
  return Verdict::unknown_with(report);
}

std::string equality_key(const Element& e) { return e.key(); }

// Key constant on conjugacy classes (used for BrCP-style orbit walks).
std::string conjugacy_key(const Element& e) {
  switch (e.family()) {
    case Family::Free:
      return word_key(conjugacy_canonical(e.word()));
    case Family::Abelian:
      return e.key();
    case Family::Finite: {
      const GroupPtr& g = e.group();
      int best = e.table_index();
      for (std::size_t z = 0; z < g->finite_order(); ++z) {
        int zi = static_cast<int>(z);
        int c = g->finite_mul(g->finite_mul(g->finite_inv(zi), e.table_index()), zi);
        best = std::min(best, c);
      }
      return "c:" + std::to_string(best);
    }
    default:
      throw CapabilityError("conjugacy canonical form unsupported for this family");
  }
}

// Conjugacy test within one family, returning a conjugator.
std::optional<Element> find_conjugator(const Element& w, const Element& v) {
  const GroupPtr& g = w.group();
  switch (w.family()) {
    case Family::Free: {
      Verdict c = cp_free(w, v);
      if (c.is_yes()) return c.yes->conjugator;
      return std::nullopt;
    }
    case Family::Abelian:
      if (w == v) return g->identity();
      return std::nullopt;
    case Family::Finite: {
      for (std::size_t z = 0; z < g->finite_order(); ++z) {
        Element ze(g, static_cast<int>(z));
        if (g->conjugate(w, ze) == v) return ze;
      }
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

}  // namespace

Verdict brp_orbit(const Morphism& phi, const Element& u, const Element& v,
                  const Budget& budget) {
  require_same_group(u, v, "brp_orbit");
  budget.validate();
  return orbit_search(
      phi, u, budget, equality_key,
      [&](const Element& e, const Int&) -> std::optional<YesCertificate> {
        if (e == v) {
          YesCertificate cert;
          cert.target_member = e;
          return cert;
        }
        return std::nullopt;
      },
      /*explore_negative=*/true);
}

Verdict gbrp_coset_abelian(const Morphism& endo, const Element& u, const Element& v,
                           const LatticeSubgroup& l, const Budget& budget) {
  require_same_group(u, v, "gbrp_coset_abelian");
  if (u.family() != Family::Abelian) throw InputError("gbrp_coset_abelian: abelian required");
  budget.validate();
  const GroupPtr& g = u.group();
  Mat a = endo.to_matrix();
  {
    Int d = mat_det(a);
    if (d != 1 && d != -1) throw InputError("gbrp_coset_abelian: matrix must be invertible over Z");
  }

  auto exponent = l.exponent();
  if (!exponent) {
    // Infinite index: budgeted orbit search against exact coset membership.
    return orbit_search(
        endo, u, budget, equality_key,
        [&](const Element& e, const Int&) -> std::optional<YesCertificate> {
          if (l.contains(vec_sub(e.vector(), v.vector()))) {
            YesCertificate cert;
            cert.target_member = e;
            cert.note = "infinite-index fallback";
            return cert;
          }
          return std::nullopt;
        },
        /*explore_negative=*/true);
  }

  // Finite index: u A^k mod m determines membership in v + L because L
  // contains m Z^n; the mod-m orbit is purely periodic since A is
  // invertible mod m.
  const Int m = *exponent;
  auto mod_m = [&](Vec w) {
    for (auto& c : w) c = floor_mod(c, m);
    return w;
  };
  Vec start = mod_m(u.vector());
  Vec cur = start;
  std::optional<long long> first_hit;
  std::vector<long long> hit_residues;
  long long period = 0;
  for (long long k = 0;; ++k) {
    if (k > 0 && cur == start) {
      period = k;
      break;
    }
    if (k > budget.max_steps) {
      BudgetReport report;
      report.steps_used = k;
      report.bound_reached = "max steps before closing the residue orbit";
      return Verdict::unknown_with(report);
    }
    if (l.contains(vec_sub(cur, v.vector()))) {
      if (!first_hit) first_hit = k;
      hit_residues.push_back(k);
    }
    cur = mod_m(vec_mat_mul(cur, a));
  }

  if (first_hit) {
    Element landed(g, vec_mat_mul(u.vector(), mat_pow(a, Int(*first_hit))));
    if (!l.contains(vec_sub(landed.vector(), v.vector())))
      throw std::logic_error("gbrp_coset_abelian: residue equivalence violated");
    YesCertificate cert;
    cert.exponent = Int(*first_hit);
    cert.target_member = landed;
    cert.conjugator = g->identity();
    std::ostringstream os;
    os << "valid exponents are {";
    for (std::size_t i = 0; i < hit_residues.size(); ++i)
      os << (i ? "," : "") << hit_residues[i];
    os << "} mod " << period;
    cert.note = os.str();
    return Verdict::yes_with(std::move(cert), period);
  }
  NoCertificate cert;
  cert.method = RefutationMethod::QuotientObstruction;
  cert.modulus = m;
  cert.orbit_period = period;
  std::ostringstream os;
  os << "orbit mod " << m << " (period " << period << ") never meets the target residue";
  cert.note = os.str();
  return Verdict::no_with(std::move(cert), period);
}

// ---------------------------------------------------------------- via free

Verdict gbrcp_via_free(Kind kind, const Element& u, const Morphism& phi,
                       const StallingsAutomaton& k) {
  if (kind != Kind::GBrP && kind != Kind::GBrCP)
    throw InputError("gbrcp_via_free: GBrP or GBrCP instance required");
  if (u.family() != Family::Free) throw InputError("gbrcp_via_free: free group required");
  if (!phi.via_witness())
    throw CapabilityError("gbrcp_via_free: morphism needs a virtually-inner witness");
  if (!phi.has_inverse())
    throw CapabilityError("gbrcp_via_free: morphism needs inverse images");
  const GroupPtr& g = u.group();
  const Int r = phi.via_witness()->power;
  const Element x = phi.via_witness()->conjugator;
  long long steps = 0;

  if (kind == Kind::GBrCP) {
    // u phi^(pr+q) is conjugate to u phi^q, so sweeping residues suffices.
    for (Int q = 0; q < r; ++q) {
      Element shifted = apply_power(phi, q, u);
      Verdict sub = conj_into_subgroup_free(shifted, k);
      steps += sub.steps_used;
      if (sub.is_yes()) {
        YesCertificate cert = *sub.yes;
        cert.exponent = q;
        cert.via_p = Int(0);
        cert.via_q = q;
        return Verdict::yes_with(std::move(cert), steps);
      }
    }
    NoCertificate cert;
    cert.method = RefutationMethod::AutomatonSweep;
    cert.swept = to_ll(r);
    cert.note = "all residues q swept; no conjugate of u phi^q reaches the subgroup";
    return Verdict::no_with(std::move(cert), steps);
  }

  // GBrP: u phi^(pr+q) = (x^-p u x^p) phi^q, so u phi^k lies in K iff
  // x^-p u x^p lies in K phi^-q for some residue q and p of either sign.
  for (Int q = 0; q < r; ++q) {
    Morphism back = phi.power(-q);
    std::vector<Element> gens;
    for (const auto& b : k.subgroup_basis()) gens.push_back(back.apply(b));
    StallingsAutomaton shifted_target(g, gens);

    for (int direction = 0; direction < 2; ++direction) {
      Element conj = direction == 0 ? x : g->inv(x);
      Verdict sub = conj_power_into_subgroup(u, conj, shifted_target);
      steps += sub.steps_used + 1;
      if (sub.is_yes()) {
        Int p = *sub.yes->exponent;
        Int exponent = direction == 0 ? Int(p * r + q) : Int(-p * r + q);
        Element landed = apply_power(phi, exponent, u);
        if (!k.contains(landed))
          throw std::logic_error("gbrcp_via_free: certificate failed to land in the target");
        YesCertificate cert;
        cert.exponent = exponent;
        cert.via_p = direction == 0 ? p : -p;
        cert.via_q = q;
        cert.target_member = landed;
        cert.conjugator = g->identity();
        return Verdict::yes_with(std::move(cert), steps);
      }
      if (direction == 0 && x.word().empty()) break;  // trivial witness: one direction
    }
  }
  NoCertificate cert;
  cert.method = RefutationMethod::AutomatonSweep;
  cert.swept = steps;
  cert.note = "all residues q and both tail directions refuted";
  return Verdict::no_with(std::move(cert), steps);
}

// ---------------------------------------------------------------- vfree BrP

Verdict brp_virtually_free(const Morphism& phi, const Element& g, const Element& h,
                           const Budget& budget) {
  require_same_group(g, h, "brp_virtually_free");
  if (g.family() != Family::VirtuallyFree)
    throw InputError("brp_virtually_free: virtually free handle required");
  budget.validate();
  const GroupPtr& group = g.group();
  const VfStructure& s = group->vf();
  std::size_t rank = s.free_rank;
  std::size_t m = s.coset_names.size();

  // The free base must be fully invariant under phi.
  for (std::size_t a = 0; a < rank; ++a)
    if (phi.images()[a].vf_coset() != 0)
      throw InputError("brp_virtually_free: the free base is not invariant under the morphism");

  // Induced endomorphism of the coset quotient.
  std::vector<int> theta(m, 0);
  for (std::size_t i = 1; i < m; ++i)
    theta[i] = phi.images()[rank + i - 1].vf_coset();

  int i = g.vf_coset(), j = h.vf_coset();
  const Word& v = h.vf_word();

  // First hit s0 of j in the theta-orbit of i, then the return period p.
  long long s0 = -1, p = 0;
  {
    int c = i;
    for (std::size_t t = 0; t <= m; ++t) {
      if (c == j) {
        s0 = static_cast<long long>(t);
        break;
      }
      c = theta[static_cast<std::size_t>(c)];
    }
    if (s0 < 0) {
      NoCertificate cert;
      cert.method = RefutationMethod::OrbitCycle;
      cert.orbit_period = static_cast<long long>(m);
      cert.note = "the coset-class orbit never reaches the target class";
      return Verdict::no_with(std::move(cert));
    }
    int c2 = theta[static_cast<std::size_t>(j)];
    for (std::size_t t = 1; t <= m; ++t) {
      if (c2 == j) {
        p = static_cast<long long>(t);
        break;
      }
      c2 = theta[static_cast<std::size_t>(c2)];
    }
  }

  Element reached = apply_power(phi, Int(s0), g);
  if (reached.vf_coset() != j)
    throw std::logic_error("brp_virtually_free: quotient orbit disagrees with the kernel");
  const Word y = reached.vf_word();
  if (y == v) {
    YesCertificate cert;
    cert.exponent = Int(s0);
    cert.target_member = h;
    return Verdict::yes_with(std::move(cert), s0);
  }
  if (p == 0) {
    NoCertificate cert;
    cert.method = RefutationMethod::OrbitCycle;
    cert.orbit_preperiod = s0;
    cert.orbit_period = 0;
    cert.note = "single candidate exponent failed";
    return Verdict::no_with(std::move(cert), s0);
  }

  // b_j phi^p = z b_j; the candidates s0 + p*d reduce to a Brinkmann
  // equality orbit for the suspension psi on F * <c>.
  Element bj(group, Word{}, j);
  Element bj_moved = apply_power(phi, Int(p), bj);
  if (bj_moved.vf_coset() != j)
    throw std::logic_error("brp_virtually_free: period witness left the coset");
  const Word z = bj_moved.vf_word();

  std::vector<std::string> names = group->vf_free_base()->generator_names();
  std::string fresh = "c";
  while (std::find(names.begin(), names.end(), fresh) != names.end()) fresh += "_";
  names.push_back(fresh);
  GroupPtr star = Group::free_group(names);
  int c_letter = letter_of(rank, false);

  std::vector<Element> images;
  for (std::size_t a = 0; a < rank; ++a) {
    Element moved = apply_power(phi, Int(p), Element(group, Word{letter_of(a, false)}, 0));
    if (moved.vf_coset() != 0)
      throw std::logic_error("brp_virtually_free: base invariance lost under powers");
    images.push_back(Element(star, moved.vf_word()));
  }
  {
    Word zc = z;
    zc.push_back(c_letter);
    images.push_back(Element(star, zc));
  }
  Morphism suspension(star, star, std::move(images));

  Word yc = y;
  yc.push_back(c_letter);
  Word vc = v;
  vc.push_back(c_letter);
  Verdict orbit = brp_orbit(suspension, Element(star, yc), Element(star, vc), budget);
  if (orbit.is_yes()) {
    Int d = *orbit.yes->exponent;
    YesCertificate cert;
    cert.exponent = Int(s0) + Int(p) * d;
    cert.target_member = h;
    std::ostringstream os;
    os << "suspension orbit hit at d=" << d << " (k = " << s0 << " + " << p << "*d)";
    cert.note = os.str();
    return Verdict::yes_with(std::move(cert), orbit.steps_used);
  }
  if (orbit.is_no()) {
    NoCertificate cert = *orbit.no;
    cert.note = "suspension orbit cycled without a hit; " + cert.note;
    return Verdict::no_with(std::move(cert), orbit.steps_used);
  }
  return orbit;  // unknown with its report
}

// ---------------------------------------------------------------- dispatch

namespace {

Verdict solve_impl(const ProblemInstance& inst, const Budget& budget);

// Finite groups: everything is a finite sweep or a finite orbit.
Verdict solve_finite(const ProblemInstance& inst, const Budget& budget) {
  const GroupPtr& g = inst.group();
  std::size_t n = g->finite_order();
  auto all = [&]() {
    std::vector<Element> out;
    for (std::size_t idx = 0; idx < n; ++idx) out.push_back(Element(g, static_cast<int>(idx)));
    return out;
  };
  auto hit = [&](const Element& e) {
    return kind_is_generalized(inst.kind()) ? inst.target().member(e) : e == inst.other();
  };

  switch (inst.kind()) {
    case Kind::CP:
    case Kind::GCP: {
      long long swept = 0;
      for (const auto& z : all()) {
        ++swept;
        Element c = g->conjugate(inst.subject(), z);
        if (hit(c)) {
          YesCertificate cert;
          cert.conjugator = z;
          cert.target_member = c;
          return Verdict::yes_with(std::move(cert), swept);
        }
      }
      NoCertificate cert;
      cert.method = RefutationMethod::ExhaustedFinite;
      cert.swept = swept;
      return Verdict::no_with(std::move(cert), swept);
    }
    case Kind::TCP:
    case Kind::GTCP: {
      const Morphism& phi = *inst.morphism();
      long long swept = 0;
      for (const auto& z : all()) {
        ++swept;
        Element c = g->mul(g->mul(phi.apply(g->inv(z)), inst.subject()), z);
        if (hit(c)) {
          YesCertificate cert;
          cert.conjugator = z;
          cert.target_member = c;
          return Verdict::yes_with(std::move(cert), swept);
        }
      }
      NoCertificate cert;
      cert.method = RefutationMethod::ExhaustedFinite;
      cert.swept = swept;
      return Verdict::no_with(std::move(cert), swept);
    }
    case Kind::BrP:
    case Kind::GBrP:
      return orbit_search(
          *inst.morphism(), inst.subject(), budget, equality_key,
          [&](const Element& e, const Int&) -> std::optional<YesCertificate> {
            if (hit(e)) {
              YesCertificate cert;
              cert.target_member = e;
              cert.conjugator = g->identity();
              return cert;
            }
            return std::nullopt;
          },
          true);
    case Kind::BrCP:
    case Kind::GBrCP:
      return orbit_search(
          *inst.morphism(), inst.subject(), budget, equality_key,
          [&](const Element& e, const Int&) -> std::optional<YesCertificate> {
            for (std::size_t zi = 0; zi < n; ++zi) {
              Element z(g, static_cast<int>(zi));
              Element c = g->conjugate(e, z);
              if (hit(c)) {
                YesCertificate cert;
                cert.conjugator = z;
                cert.target_member = c;
                return cert;
              }
            }
            return std::nullopt;
          },
          true);
  }
  throw InputError("solve: unknown kind");
}

Verdict solve_abelian(const ProblemInstance& inst, const Budget& budget) {
  const GroupPtr& g = inst.group();
  std::size_t n = g->abelian_rank();
  switch (inst.kind()) {
    case Kind::CP: {
      if (inst.subject() == inst.other()) {
        YesCertificate cert;
        cert.conjugator = g->identity();
        return Verdict::yes_with(std::move(cert));
      }
      NoCertificate cert;
      cert.method = RefutationMethod::LatticeObstruction;
      cert.residue = vec_sub(inst.other().vector(), inst.subject().vector());
      cert.note = "conjugacy in an abelian group is equality";
      return Verdict::no_with(std::move(cert));
    }
    case Kind::GCP: {
      if (inst.target().member(inst.subject())) {
        YesCertificate cert;
        cert.conjugator = g->identity();
        cert.target_member = inst.subject();
        return Verdict::yes_with(std::move(cert));
      }
      NoCertificate cert;
      cert.method = inst.target().kind() == Target::Kind::FiniteSet
                        ? RefutationMethod::ExhaustedFinite
                        : RefutationMethod::LatticeObstruction;
      cert.note = "abelian conjugacy classes are points; membership fails";
      return Verdict::no_with(std::move(cert));
    }
    case Kind::TCP:
      return tcp_abelian(*inst.morphism(), inst.subject(), inst.other());
    case Kind::GTCP: {
      const Morphism& phi = *inst.morphism();
      const Target& k = inst.target();
      if (k.kind() == Target::Kind::FiniteSet) {
        long long steps = 0;
        NoCertificate last;
        for (const auto& v : k.elements()) {
          Verdict sub = tcp_abelian(phi, inst.subject(), v);
          steps += 1;
          if (sub.is_yes()) {
            YesCertificate cert = *sub.yes;
            cert.target_member = v;
            return Verdict::yes_with(std::move(cert), steps);
          }
          last = *sub.no;
        }
        NoCertificate cert = last;
        cert.method = RefutationMethod::ExhaustedFinite;
        cert.swept = static_cast<long long>(k.elements().size());
        cert.note = "every target element refuted by the image lattice of A-I";
        return Verdict::no_with(std::move(cert), steps);
      }
      // u + z(I - A) in rep + L  iff  rep - u lies in rowspace(I-A) + L.
      Mat a = phi.to_matrix();
      Mat i_minus_a = mat_identity(n);
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) i_minus_a[r][c] -= a[r][c];
      const Subgroup& sub = k.the_subgroup();
      Vec rep = k.kind() == Target::Kind::Coset ? k.representative().vector() : Vec(n, 0);
      Mat stacked = i_minus_a;
      const Mat& lb = sub.lattice().basis();
      stacked.insert(stacked.end(), lb.begin(), lb.end());
      auto coeffs = solve_left(stacked, vec_sub(rep, inst.subject().vector()));
      if (coeffs) {
        Vec z(n, 0);
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t c = 0; c < n; ++c) z[c] += (*coeffs)[r] * i_minus_a[r][c];
        // z here is z(I-A); recover the conjugator coordinates instead.
        Vec conj((*coeffs).begin(), (*coeffs).begin() + static_cast<long>(n));
        Element zc(g, conj);
        Element landed = Element(g, vec_add(inst.subject().vector(), z));
        if (!k.member(landed))
          throw std::logic_error("solve_abelian: twisted witness failed to land in the target");
        YesCertificate cert;
        cert.conjugator = zc;
        cert.target_member = landed;
        return Verdict::yes_with(std::move(cert));
      }
      NoCertificate cert;
      cert.method = RefutationMethod::LatticeObstruction;
      cert.obstruction_basis = hnf(stacked);
      cert.residue = LatticeSubgroup(n, stacked).reduce(vec_sub(rep, inst.subject().vector()));
      cert.note = "rep-u has a nonzero residue against rowspace(I-A) + L";
      return Verdict::no_with(std::move(cert));
    }
    case Kind::BrP:
      return brp_orbit(*inst.morphism(), inst.subject(), inst.other(), budget);
    case Kind::BrCP:
      // Conjugacy is equality here.
      return brp_orbit(*inst.morphism(), inst.subject(), inst.other(), budget);
    case Kind::GBrP:
    case Kind::GBrCP: {
      const Target& k = inst.target();
      const Morphism& phi = *inst.morphism();
      if (k.kind() == Target::Kind::FiniteSet) {
        return orbit_search(
            phi, inst.subject(), budget, equality_key,
            [&](const Element& e, const Int&) -> std::optional<YesCertificate> {
              if (k.member(e)) {
                YesCertificate cert;
                cert.target_member = e;
                cert.conjugator = g->identity();
                return cert;
              }
              return std::nullopt;
            },
            true);
      }
      const Subgroup& sub = k.the_subgroup();
      Element rep = k.kind() == Target::Kind::Coset ? k.representative() : g->identity();
      return gbrp_coset_abelian(phi, inst.subject(), rep, sub.lattice(), budget);
    }
  }
  throw InputError("solve: unknown kind");
}

Verdict solve_free(const ProblemInstance& inst, const Budget& budget) {
  const GroupPtr& g = inst.group();
  switch (inst.kind()) {
    case Kind::CP:
      return cp_free(inst.subject(), inst.other());
    case Kind::GCP: {
      const Target& k = inst.target();
      if (k.kind() == Target::Kind::FiniteSet) {
        long long steps = 0;
        for (const auto& v : k.elements()) {
          Verdict sub = cp_free(inst.subject(), v);
          steps += sub.steps_used + 1;
          if (sub.is_yes()) {
            YesCertificate cert = *sub.yes;
            cert.target_member = v;
            return Verdict::yes_with(std::move(cert), steps);
          }
        }
        NoCertificate cert;
        cert.method = RefutationMethod::ExhaustedFinite;
        cert.swept = static_cast<long long>(k.elements().size());
        cert.note = "no target element is a rotation match";
        return Verdict::no_with(std::move(cert), steps);
      }
      if (k.kind() == Target::Kind::Subgroup)
        return conj_into_subgroup_free(inst.subject(), k.the_subgroup().stallings());
      throw CapabilityError(
          "conjugacy into a coset of a free-group subgroup is outside this build");
    }
    case Kind::TCP:
    case Kind::GTCP: {
      const Morphism& phi = *inst.morphism();
      Target k = kind_is_generalized(inst.kind())
                     ? inst.target()
                     : Target::finite_set(g, {inst.other()});
      ProblemInstance plain = [&]() {
        if (phi.is_identity_map())
          return ProblemInstance::generalized(Kind::GCP, std::nullopt, inst.subject(), k);
        const auto& via = phi.via_witness();
        if (via && via->power == 1)
          return inner_tcp_to_gcp(k, via->conjugator, inst.subject());
        throw CapabilityError(
            "free-group twisted conjugacy needs an inner morphism (virtually inner witness "
            "with power 1)");
      }();
      Verdict sub = solve_impl(plain, budget);
      if (sub.is_yes() && sub.yes->conjugator) {
        // Translate the member back: the plain GCP hit w*K at w*g.
        YesCertificate cert = *sub.yes;
        if (cert.target_member && !phi.is_identity_map()) {
          const Element& w = phi.via_witness()->conjugator;
          cert.target_member = g->mul(g->inv(w), *cert.target_member);
        }
        return Verdict::yes_with(std::move(cert), sub.steps_used);
      }
      return sub;
    }
    case Kind::BrP:
      return brp_orbit(*inst.morphism(), inst.subject(), inst.other(), budget);
    case Kind::BrCP:
      return orbit_search(
          *inst.morphism(), inst.subject(), budget, conjugacy_key,
          [&](const Element& e, const Int&) -> std::optional<YesCertificate> {
            if (auto z = find_conjugator(e, inst.other())) {
              YesCertificate cert;
              cert.conjugator = *z;
              cert.target_member = inst.other();
              return cert;
            }
            return std::nullopt;
          },
          true);
    case Kind::GBrP:
    case Kind::GBrCP: {
      const Target& k = inst.target();
      const Morphism& phi = *inst.morphism();
      if (k.kind() == Target::Kind::Subgroup && phi.via_witness() && phi.has_inverse())
        return gbrcp_via_free(inst.kind(), inst.subject(), phi, k.the_subgroup().stallings());
      if (k.kind() == Target::Kind::FiniteSet) {
        bool conj_kind = inst.kind() == Kind::GBrCP;
        return orbit_search(
            phi, inst.subject(), budget, conj_kind ? conjugacy_key : equality_key,
            [&](const Element& e, const Int&) -> std::optional<YesCertificate> {
              if (!conj_kind) {
                if (k.member(e)) {
                  YesCertificate cert;
                  cert.target_member = e;
                  cert.conjugator = g->identity();
                  return cert;
                }
                return std::nullopt;
              }
              for (const auto& v : k.elements())
                if (auto z = find_conjugator(e, v)) {
                  YesCertificate cert;
                  cert.conjugator = *z;
                  cert.target_member = v;
                  return cert;
                }
              return std::nullopt;
            },
            phi.has_inverse());
      }
      throw CapabilityError(
          "free-group orbit problems need a virtually-inner morphism for subgroup targets");
    }
  }
  throw InputError("solve: unknown kind");
}

// Semidirect handles route GCP through the extension-to-base plan and
// translate base certificates back to the ambient group.
Verdict solve_semidirect(const ProblemInstance& inst, const Budget& budget) {
  const GroupPtr& ambient = inst.group();
  if (inst.kind() == Kind::CP) {
    ProblemInstance gcp = ProblemInstance::generalized(
        Kind::GCP, std::nullopt, inst.subject(),
        Target::finite_set(ambient, {inst.other()}));
    return solve_impl(gcp, budget);
  }
  if (inst.kind() != Kind::GCP)
    throw CapabilityError("extension handles support (G)CP only; lower the instance first");

  ReductionPlan plan = lower_gcp(inst);
  const Int& r = inst.subject().t_exponent();
  long long steps = 0;
  bool any_unknown = false;
  std::vector<std::string> branch_notes;
  std::optional<NoCertificate> first_no;

  for (std::size_t idx = 0; idx < plan.instances.size(); ++idx) {
    Verdict sub = solve_impl(plan.instances[idx], budget);
    steps += sub.steps_used;
    if (sub.is_yes()) {
      const YesCertificate& base_cert = *sub.yes;
      Element z_base = base_cert.conjugator ? *base_cert.conjugator
                                            : ambient->semidirect_base()->identity();
      Int shift = r == 0 ? (base_cert.exponent ? *base_cert.exponent : Int(0))
                         : Int(static_cast<long long>(idx));
      Element z_amb(ambient, shift, z_base);
      Element landed = ambient->conjugate(inst.subject(), z_amb);
      if (!inst.target().member(landed))
        throw std::logic_error("solve_semidirect: translated witness missed the target");
      YesCertificate cert;
      cert.conjugator = z_amb;
      cert.target_member = landed;
      cert.note = plan.provenance;
      return Verdict::yes_with(std::move(cert), steps);
    }
    if (sub.is_unknown()) {
      any_unknown = true;
      branch_notes.push_back("branch " + std::to_string(idx) + ": unknown");
    } else {
      if (!first_no) first_no = *sub.no;
      branch_notes.push_back("branch " + std::to_string(idx) + ": " +
                             refutation_method_name(sub.no->method));
    }
  }
  if (any_unknown) {
    BudgetReport report;
    report.steps_used = steps;
    report.bound_reached = "some reduction branches exhausted their budget";
    return Verdict::unknown_with(report);
  }
  NoCertificate cert = first_no ? *first_no : NoCertificate{};
  std::ostringstream os;
  os << "every reduction branch refuted [";
  for (std::size_t i = 0; i < branch_notes.size(); ++i) os << (i ? "; " : "") << branch_notes[i];
  os << "]";
  cert.note = os.str();
  return Verdict::no_with(std::move(cert), steps);
}

Verdict solve_vf(const ProblemInstance& inst, const Budget& budget) {
  switch (inst.kind()) {
    case Kind::BrP:
      return brp_virtually_free(*inst.morphism(), inst.subject(), inst.other(), budget);
    case Kind::GBrP: {
      const Target& k = inst.target();
      if (k.kind() != Target::Kind::FiniteSet)
        throw CapabilityError("virtually free handles support GBrP for finite sets only");
      long long steps = 0;
      bool any_unknown = false;
      for (const auto& h : k.elements()) {
        Verdict sub = brp_virtually_free(*inst.morphism(), inst.subject(), h, budget);
        steps += sub.steps_used;
        if (sub.is_yes()) {
          YesCertificate cert = *sub.yes;
          cert.target_member = h;
          return Verdict::yes_with(std::move(cert), steps);
        }
        any_unknown |= sub.is_unknown();
      }
      if (any_unknown) {
        BudgetReport report;
        report.steps_used = steps;
        report.bound_reached = "suspension orbit budget";
        return Verdict::unknown_with(report);
      }
      NoCertificate cert;
      cert.method = RefutationMethod::OrbitCycle;
      cert.swept = static_cast<long long>(k.elements().size());
      cert.note = "every target element refuted";
      return Verdict::no_with(std::move(cert), steps);
    }
    default:
      throw CapabilityError(
          "virtually free handles support BrP (and finite-set GBrP) for endomorphisms only");
  }
}

Verdict solve_impl(const ProblemInstance& inst, const Budget& budget) {
  if (kind_is_generalized(inst.kind()) && inst.target().is_empty_set()) {
    NoCertificate cert;
    cert.method = RefutationMethod::ExhaustedFinite;
    cert.swept = 0;
    cert.note = "empty target";
    return Verdict::no_with(std::move(cert));
  }
  switch (inst.group()->family()) {
    case Family::Finite: return solve_finite(inst, budget);
    case Family::Abelian: return solve_abelian(inst, budget);
    case Family::Free: return solve_free(inst, budget);
    case Family::Semidirect: return solve_semidirect(inst, budget);
    case Family::VirtuallyFree: return solve_vf(inst, budget);
  }
  throw InputError("solve: unknown family");
}

}  // namespace

Verdict solve(const ProblemInstance& inst, const Budget& budget) {
  budget.validate();
  return solve_impl(inst, budget);
}

// ---------------------------------------------------------------- verify

bool verify_certificate(const ProblemInstance& inst, const Verdict& verdict) {
  if (!verdict.is_yes()) return true;
  if (!verdict.yes) return false;
  const YesCertificate& cert = *verdict.yes;
  const GroupPtr& g = inst.group();
  auto hit = [&](const Element& e) {
    return kind_is_generalized(inst.kind()) ? inst.target().member(e) : e == inst.other();
  };
  try {
    switch (inst.kind()) {
      case Kind::CP:
      case Kind::GCP: {
        if (!cert.conjugator) return false;
        return hit(g->conjugate(inst.subject(), *cert.conjugator));
      }
      case Kind::TCP:
      case Kind::GTCP: {
        if (!cert.conjugator) return false;
        const Morphism& phi = *inst.morphism();
        Element twisted = g->mul(
            g->mul(phi.apply(g->inv(*cert.conjugator)), inst.subject()), *cert.conjugator);
        return hit(twisted);
      }
      case Kind::BrP:
      case Kind::GBrP: {
        if (!cert.exponent) return false;
        return hit(apply_power(*inst.morphism(), *cert.exponent, inst.subject()));
      }
      case Kind::BrCP:
      case Kind::GBrCP: {
        if (!cert.exponent) return false;
        Element moved = apply_power(*inst.morphism(), *cert.exponent, inst.subject());
        Element conj = cert.conjugator ? g->conjugate(moved, *cert.conjugator) : moved;
        return hit(conj);
      }
    }
  } catch (const std::exception&) {
    return false;
  }
  return false;
}

}  // namespace gconj
