#include "gconj/separability.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "gconj/linalg.hpp"

namespace gconj {

namespace {

void require_extension_over_abelian(const GroupPtr& g, const char* who) {
  if (!g->is(Family::Semidirect) || !g->semidirect_base()->is(Family::Abelian))
    throw CapabilityError(std::string(who) + ": Z^n x| Z handle required");
}

std::vector<std::vector<long long>> matrix_mod(const Mat& a, const Int& m) {
  std::vector<std::vector<long long>> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (const auto& x : a[i]) out[i].push_back(to_ll(floor_mod(x, m)));
  return out;
}

}  // namespace

Int FiniteQuotientSpec::size(std::size_t base_rank) const {
  if (!is_congruence()) return Int(static_cast<long long>(explicit_group->finite_order()));
  Int s = t_order;
  for (std::size_t i = 0; i < base_rank; ++i) s *= modulus;
  return s;
}

std::string FiniteQuotientSpec::describe() const {
  std::ostringstream os;
  if (is_congruence())
    os << "congruence(m=" << modulus << ",d=" << t_order << ")";
  else
    os << "table(order=" << explicit_group->finite_order() << ")";
  return os.str();
}

Quotient Quotient::congruence(const GroupPtr& ambient, const Int& m, const Int& d) {
  require_extension_over_abelian(ambient, "quotient");
  Quotient q;
  q.ambient_ = ambient;
  q.spec_.modulus = m;
  q.spec_.t_order = d;
  q.rank_ = ambient->semidirect_base()->abelian_rank();
  q.m_ = to_ll(m);
  q.d_ = to_ll(d);
  Mat a = ambient->defining_morphism().to_matrix();
  Mat ad = mat_pow(a, d);
  for (std::size_t i = 0; i < q.rank_; ++i)
    for (std::size_t j = 0; j < q.rank_; ++j)
      if (floor_mod(ad[i][j] - (i == j ? 1 : 0), m) != 0)
        throw InputError("quotient: A^d is not the identity mod m");
  q.action_ = matrix_mod(a, m);
  q.action_inv_ = matrix_mod(mat_pow(a, Int(-1)), m);
  long long size = q.d_;
  for (std::size_t i = 0; i < q.rank_; ++i) {
    size *= q.m_;
    if (size > (1LL << 40)) throw BudgetError("quotient: size overflow");
  }
  q.size_ = size;
  return q;
}

Quotient Quotient::explicit_table(const GroupPtr& ambient, const FiniteQuotientSpec& spec) {
  require_extension_over_abelian(ambient, "quotient");
  Quotient q;
  q.ambient_ = ambient;
  q.spec_ = spec;
  q.rank_ = ambient->semidirect_base()->abelian_rank();
  if (spec.generator_images.size() != q.rank_ + 1)
    throw InputError("quotient: one image per base generator plus t required");
  q.size_ = static_cast<long long>(spec.explicit_group->finite_order());
  return q;
}

Quotient Quotient::materialize(const GroupPtr& ambient, const FiniteQuotientSpec& spec) {
  return spec.is_congruence() ? congruence(ambient, spec.modulus, spec.t_order)
                              : explicit_table(ambient, spec);
}

long long Quotient::identity() const {
  if (spec_.is_congruence()) return 0;
  return spec_.explicit_group->finite_identity();
}

// Congruence codes: r * m^rank + sum v_i * m^i.
long long Quotient::image(const Element& g) const {
  if (g.group() != ambient_) throw InputError("quotient image: element of another group");
  if (spec_.is_congruence()) {
    long long r = to_ll(floor_mod(g.t_exponent(), Int(d_)));
    const Vec& v = g.base_part().vector();
    long long code = r;
    for (std::size_t i = rank_; i-- > 0;) code = code * m_ + to_ll(floor_mod(v[i], Int(m_)));
    return code;
  }
  const GroupPtr& f = spec_.explicit_group;
  Element acc = f->pow(spec_.generator_images.back(), g.t_exponent());
  const Vec& v = g.base_part().vector();
  for (std::size_t i = 0; i < rank_; ++i)
    acc = f->mul(acc, f->pow(spec_.generator_images[i], v[i]));
  return acc.table_index();
}

long long Quotient::mul(long long a, long long b) const {
  if (!spec_.is_congruence())
    return spec_.explicit_group->finite_mul(static_cast<int>(a), static_cast<int>(b));
  // decode
  auto decode = [&](long long code, long long& r, std::vector<long long>& v) {
    v.assign(rank_, 0);
    for (std::size_t i = 0; i < rank_; ++i) {
      v[i] = code % m_;
      code /= m_;
    }
    r = code;
  };
  long long ra, rb;
  std::vector<long long> va, vb;
  decode(a, ra, va);
  decode(b, rb, vb);
  // (ra, va)(rb, vb) = (ra+rb, va * A^rb + vb)
  std::vector<long long> moved = va;
  const auto& act = rb >= 0 ? action_ : action_inv_;
  long long reps = rb >= 0 ? rb : -rb;
  for (long long s = 0; s < reps; ++s) {
    std::vector<long long> next(rank_, 0);
    for (std::size_t i = 0; i < rank_; ++i) {
      if (moved[i] == 0) continue;
      for (std::size_t j = 0; j < rank_; ++j)
        next[j] = (next[j] + moved[i] * act[i][j]) % m_;
    }
    moved = next;
  }
  long long r = (ra + rb) % d_;
  long long code = r;
  for (std::size_t i = rank_; i-- > 0;) code = code * m_ + (moved[i] + vb[i]) % m_;
  return code;
}

long long Quotient::inv(long long a) const {
  if (!spec_.is_congruence())
    return spec_.explicit_group->finite_inv(static_cast<int>(a));
  long long ra;
  std::vector<long long> va;
  {
    long long code = a;
    va.assign(rank_, 0);
    for (std::size_t i = 0; i < rank_; ++i) {
      va[i] = code % m_;
      code /= m_;
    }
    ra = code;
  }
  // (r, v)^-1 = (-r, -(v A^-r)); compute via repeated inverse action.
  std::vector<long long> moved = va;
  for (long long s = 0; s < ra; ++s) {
    std::vector<long long> next(rank_, 0);
    for (std::size_t i = 0; i < rank_; ++i) {
      if (moved[i] == 0) continue;
      for (std::size_t j = 0; j < rank_; ++j)
        next[j] = (next[j] + moved[i] * action_inv_[i][j]) % m_;
    }
    moved = next;
  }
  long long r = (d_ - ra % d_) % d_;
  long long code = r;
  for (std::size_t i = rank_; i-- > 0;) code = code * m_ + (m_ - moved[i] % m_) % m_;
  return code;
}

std::vector<long long> Quotient::conjugacy_class(long long x) const {
  std::set<long long> cls{x};
  std::deque<long long> queue{x};
  // Conjugate by the generators (and t) until closed.
  std::vector<long long> gens;
  if (spec_.is_congruence()) {
    // base generators e_i and the stable letter
    for (std::size_t i = 0; i < rank_; ++i) {
      long long code = 0;
      for (std::size_t j = rank_; j-- > 0;) code = code * m_ + (j == i ? 1 : 0);
      gens.push_back(code);
    }
    long long t_code = 1;
    for (std::size_t j = 0; j < rank_; ++j) t_code *= m_;
    gens.push_back(t_code);
  } else {
    for (const auto& im : spec_.generator_images) gens.push_back(im.table_index());
  }
  while (!queue.empty()) {
    long long cur = queue.front();
    queue.pop_front();
    for (long long z : gens) {
      long long c = mul(mul(inv(z), cur), z);
      if (cls.insert(c).second) queue.push_back(c);
      long long zi = inv(z);
      long long c2 = mul(mul(inv(zi), cur), zi);
      if (cls.insert(c2).second) queue.push_back(c2);
    }
  }
  return std::vector<long long>(cls.begin(), cls.end());
}

// ---------------------------------------------------------------- stream

std::vector<FiniteQuotientSpec> enumerate_quotients(const GroupPtr& ambient,
                                                    const Budget& budget) {
  require_extension_over_abelian(ambient, "enumerate_quotients");
  std::size_t n = ambient->semidirect_base()->abelian_rank();
  Mat a = ambient->defining_morphism().to_matrix();

  std::vector<FiniteQuotientSpec> specs;
  for (Int m = 2;; ++m) {
    Int m_pow = 1;
    for (std::size_t i = 0; i < n; ++i) m_pow *= m;
    if (m_pow * 1 > budget.max_quotient_size) break;
    // order of A mod m
    Mat cur = a;
    Int ord = 0;
    for (Int k = 1; k <= budget.max_quotient_size; ++k) {
      bool is_id = true;
      for (std::size_t i = 0; i < n && is_id; ++i)
        for (std::size_t j = 0; j < n && is_id; ++j)
          if (floor_mod(cur[i][j] - (i == j ? 1 : 0), m) != 0) is_id = false;
      if (is_id) {
        ord = k;
        break;
      }
      cur = mat_mul(cur, a);
      for (auto& row : cur)
        for (auto& x : row) x = floor_mod(x, m);
    }
    if (ord == 0) continue;  // order exceeds the cap; skip this modulus
    for (Int c = 1; c <= 3; ++c) {
      FiniteQuotientSpec spec;
      spec.modulus = m;
      spec.t_order = ord * c;
      if (spec.size(n) > budget.max_quotient_size) break;
      specs.push_back(spec);
    }
  }

  if (budget.generic_quotient_fallback) {
    // Small table groups with all generator assignments satisfying the
    // presentation relations; deliberately tiny.
    for (std::size_t order = 2; order <= 5; ++order) {
      std::vector<std::vector<int>> table(order, std::vector<int>(order, -1));
      for (std::size_t j = 0; j < order; ++j) {
        table[0][j] = static_cast<int>(j);
        table[j][0] = static_cast<int>(j);
      }
      std::vector<GroupPtr> groups;
      std::function<void(std::size_t, std::size_t)> fill = [&](std::size_t i, std::size_t j) {
        if (i == order) {
          try {
            std::vector<std::string> names;
            for (std::size_t e = 0; e < order; ++e) names.push_back("q" + std::to_string(e));
            groups.push_back(Group::finite(names, table));
          } catch (const InputError&) {
          }
          return;
        }
        if (j == order) {
          fill(i + 1, 1);
          return;
        }
        for (int v = 0; v < static_cast<int>(order); ++v) {
          bool row_ok = true, col_ok = true;
          for (std::size_t jj = 0; jj < j && row_ok; ++jj) row_ok = table[i][jj] != v;
          for (std::size_t ii = 0; ii < i && col_ok; ++ii) col_ok = table[ii][j] != v;
          if (!row_ok || !col_ok) continue;
          table[i][j] = v;
          fill(i, j + 1);
          table[i][j] = -1;
        }
      };
      fill(1, 1);
      for (const auto& f : groups) {
        // All images (alpha_1..alpha_n, tau) with commuting alphas and
        // tau^-1 alpha_i tau = prod alpha_j^(A_ij).
        std::size_t count = f->finite_order();
        std::vector<std::size_t> assign(n + 1, 0);
        while (true) {
          std::vector<Element> images;
          for (std::size_t i = 0; i <= n; ++i)
            images.push_back(Element(f, static_cast<int>(assign[i])));
          bool ok = true;
          for (std::size_t i = 0; i < n && ok; ++i)
            for (std::size_t j = i + 1; j < n && ok; ++j)
              ok = f->mul(images[i], images[j]) == f->mul(images[j], images[i]);
          for (std::size_t i = 0; i < n && ok; ++i) {
            Element lhs = f->mul(f->mul(f->inv(images[n]), images[i]), images[n]);
            Element rhs = f->identity();
            for (std::size_t j = 0; j < n; ++j) rhs = f->mul(rhs, f->pow(images[j], a[i][j]));
            ok = lhs == rhs;
          }
          if (ok) {
            FiniteQuotientSpec spec;
            spec.explicit_group = f;
            spec.generator_images = images;
            specs.push_back(spec);
          }
          std::size_t pos = 0;
          while (pos <= n && ++assign[pos] == count) assign[pos++] = 0;
          if (pos > n) break;
        }
      }
    }
  }

  std::stable_sort(specs.begin(), specs.end(),
                   [&](const FiniteQuotientSpec& x, const FiniteQuotientSpec& y) {
                     return x.size(n) < y.size(n);
                   });
  return specs;
}

// ---------------------------------------------------------------- no side

std::vector<FiniteQuotientSpec> CandidateState::specs() const {
  std::vector<FiniteQuotientSpec> out;
  for (const auto& c : quotients_) out.push_back(c.quotient->spec());
  return out;
}

long double CandidateState::fraction() const {
  if (combined_size_ <= 0) return 1.0L;
  return static_cast<long double>(candidate_count_) / static_cast<long double>(combined_size_);
}

void CandidateState::recompute(const GroupPtr& ambient, const Budget& budget) {
  if (quotients_.empty()) {
    candidate_count_ = -1;
    combined_size_ = -1;
    refuted_ = false;
    return;
  }
  std::size_t parts = quotients_.size();

  auto closure = [&](const std::vector<std::vector<long long>>& seed_tuples)
      -> std::optional<std::set<std::vector<long long>>> {
    std::set<std::vector<long long>> seen;
    std::vector<long long> id(parts);
    for (std::size_t i = 0; i < parts; ++i) id[i] = quotients_[i].quotient->identity();
    seen.insert(id);
    std::deque<std::vector<long long>> queue{id};
    while (!queue.empty()) {
      auto cur = queue.front();
      queue.pop_front();
      for (const auto& gen : seed_tuples) {
        std::vector<long long> nxt(parts);
        for (std::size_t i = 0; i < parts; ++i)
          nxt[i] = quotients_[i].quotient->mul(cur[i], gen[i]);
        if (static_cast<long long>(seen.size()) > budget.max_quotient_size) return std::nullopt;
        if (seen.insert(nxt).second) queue.push_back(nxt);
      }
    }
    return seen;
  };

  // Combined subgroup generated by the coset subgroup images.
  std::size_t gen_count = quotients_.front().subgroup_images.size();
  std::vector<std::vector<long long>> h_tuples(gen_count, std::vector<long long>(parts));
  for (std::size_t gi = 0; gi < gen_count; ++gi)
    for (std::size_t i = 0; i < parts; ++i)
      h_tuples[gi][i] = quotients_[i].subgroup_images[gi];
  auto h_closure = closure(h_tuples);
  if (!h_closure) {
    // Over budget: drop the oldest constraint (sound: S only grows).
    quotients_.erase(quotients_.begin());
    recompute(ambient, budget);
    return;
  }

  long long survivors = 0;
  for (const auto& tuple : *h_closure) {
    bool ok = true;
    for (std::size_t i = 0; i < parts && ok; ++i) {
      long long shifted = quotients_[i].quotient->mul(quotients_[i].rep_image, tuple[i]);
      ok = quotients_[i].allowed.count(shifted) > 0;
    }
    if (ok) ++survivors;
  }
  candidate_count_ = survivors;
  refuted_ = survivors == 0;

  // Combined ambient-image size, for the monotonicity measure.
  std::vector<std::vector<long long>> group_tuples;
  std::size_t rank = ambient->semidirect_base()->abelian_rank();
  for (std::size_t g = 0; g <= rank; ++g) {
    std::vector<long long> tup(parts);
    for (std::size_t i = 0; i < parts; ++i) {
      Element gen = g < rank
                        ? Element(ambient, Int(0), ambient->semidirect_base()->generator(g))
                        : Element(ambient, Int(1), ambient->semidirect_base()->identity());
      tup[i] = quotients_[i].quotient->image(gen);
    }
    group_tuples.push_back(tup);
    std::vector<long long> tview(parts);
    for (std::size_t i = 0; i < parts; ++i) tview[i] = quotients_[i].quotient->inv(tup[i]);
    group_tuples.push_back(tview);
  }
  auto q_closure = closure(group_tuples);
  combined_size_ = q_closure ? static_cast<long long>(q_closure->size()) : -1;
}

CandidateState no_side_refine(const CandidateState& state, const Quotient& q, const Element& a,
                              const Target& coset, const Budget& budget) {
  const GroupPtr& ambient = a.group();
  if (coset.group() != ambient) throw InputError("no_side_refine: mixed groups");
  if (coset.kind() == Target::Kind::FiniteSet)
    throw InputError("no_side_refine: coset target required");
  if (q.size() > budget.max_quotient_size) {
    // Skipped with a note: the state passes through unchanged.
    return state;
  }

  CandidateState next = state;
  CandidateState::Constraint c;
  c.quotient = std::make_shared<const Quotient>(q);
  long long a_image = q.image(a);
  for (long long x : q.conjugacy_class(a_image)) c.allowed.insert(x);
  const Subgroup& h = coset.the_subgroup();
  for (const auto& gen : h.generator_list()) c.subgroup_images.push_back(q.image(gen));
  Element rep = coset.kind() == Target::Kind::Coset ? coset.representative()
                                                    : ambient->identity();
  c.rep_image = q.image(rep);
  next.quotients_.push_back(std::move(c));
  next.recompute(ambient, budget);
  return next;
}

// ---------------------------------------------------------------- yes side

namespace {

// Breadth-first ball of the ambient group, deterministic order.
std::vector<Element> ball_elements(const GroupPtr& g, long long radius) {
  std::vector<Element> all{g->identity()};
  std::set<std::string> seen{g->identity().key()};
  std::vector<Element> frontier = all;
  std::vector<Element> steps;
  for (const auto& gen : g->generators()) {
    steps.push_back(gen);
    steps.push_back(g->inv(gen));
  }
  for (long long r = 0; r < radius; ++r) {
    std::vector<Element> next;
    for (const auto& e : frontier)
      for (const auto& s : steps) {
        Element w = g->mul(e, s);
        if (seen.insert(w.key()).second) {
          next.push_back(w);
          all.push_back(w);
        }
      }
    if (next.empty()) break;
    frontier = std::move(next);
  }
  return all;
}

}  // namespace

std::optional<Element> yes_side_step(const Element& a, const Target& coset, long long radius) {
  const GroupPtr& g = a.group();
  for (const auto& z : ball_elements(g, radius)) {
    if (coset.member(g->conjugate(a, z))) return z;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- the race

Verdict decide_gcp_coset(const Element& a, const Target& coset, const Budget& budget) {
  budget.validate();
  const GroupPtr& g = a.group();
  if (coset.group() != g) throw InputError("decide_gcp_coset: mixed groups");

  if (g->is(Family::Finite)) {
    ProblemInstance inst = ProblemInstance::generalized(Kind::GCP, std::nullopt, a, coset);
    return solve(inst, budget);
  }
  require_extension_over_abelian(g, "decide_gcp_coset");
  if (coset.kind() == Target::Kind::FiniteSet)
    throw InputError("decide_gcp_coset: coset target required");

  std::vector<FiniteQuotientSpec> stream = enumerate_quotients(g, budget);
  std::size_t next_spec = 0;
  CandidateState state;
  long long steps = 0;

  // Incremental ball for the yes side.
  std::vector<Element> frontier{g->identity()};
  std::set<std::string> seen{g->identity().key()};
  std::vector<Element> moves;
  for (const auto& gen : g->generators()) {
    moves.push_back(gen);
    moves.push_back(g->inv(gen));
  }
  long long radius = 0;
  bool yes_exhausted = false;

  // Check the identity conjugator first.
  if (coset.member(a)) {
    YesCertificate cert;
    cert.conjugator = g->identity();
    cert.target_member = a;
    return Verdict::yes_with(std::move(cert), 1);
  }
  ++steps;

  while (steps < budget.max_steps) {
    // One no-side refinement.
    if (next_spec < stream.size()) {
      Quotient q = Quotient::materialize(g, stream[next_spec]);
      ++next_spec;
      state = no_side_refine(state, q, a, coset, budget);
      steps += std::max<long long>(1, state.combined_size());
      if (state.refuted()) {
        NoCertificate cert;
        cert.method = RefutationMethod::QuotientObstruction;
        for (const auto& spec : state.specs()) {
          if (spec.is_congruence()) cert.quotient_specs.push_back({spec.modulus, spec.t_order});
        }
        if (!cert.quotient_specs.empty()) {
          cert.modulus = cert.quotient_specs.back().first;
          cert.quotient_exponent = cert.quotient_specs.back().second;
        }
        cert.note = "surviving candidate set became empty";
        return Verdict::no_with(std::move(cert), steps);
      }
    }

    // One yes-side layer.
    if (!yes_exhausted && radius < budget.max_ball_radius) {
      ++radius;
      std::vector<Element> next;
      for (const auto& e : frontier)
        for (const auto& s : moves) {
          Element w = g->mul(e, s);
          if (!seen.insert(w.key()).second) continue;
          next.push_back(w);
          ++steps;
          if (coset.member(g->conjugate(a, w))) {
            YesCertificate cert;
            cert.conjugator = w;
            cert.target_member = g->conjugate(a, w);
            std::ostringstream os;
            os << "conjugator found at radius " << radius;
            cert.note = os.str();
            return Verdict::yes_with(std::move(cert), steps);
          }
          if (steps >= budget.max_steps) break;
        }
      if (next.empty()) yes_exhausted = true;
      frontier = std::move(next);
    } else if (next_spec >= stream.size()) {
      break;  // both sides exhausted
    }
  }

  BudgetReport report;
  report.steps_used = steps;
  report.bound_reached = next_spec >= stream.size() && (yes_exhausted || radius >= budget.max_ball_radius)
                             ? "both semi-algorithms exhausted their streams"
                             : "step budget";
  return Verdict::unknown_with(report);
}

}  // namespace gconj
