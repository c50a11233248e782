#ifndef MARGOPEN_VERIFY_HPP
#define MARGOPEN_VERIFY_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "couple.hpp"
#include "error.hpp"
#include "measure.hpp"
#include "random.hpp"
#include "refine.hpp"
#include "weakstar.hpp"

namespace margopen {

// ---------------------------------------------------------------------------
// Independent coupling oracles
// ---------------------------------------------------------------------------

/// Northwest-corner coupling: walk both supports in atom order and ship
/// min(residual row, residual column) each step. Exact marginals, no tensor
/// products involved.
inline JointMeasure oracle_couple(const Measure& mu, const Measure& nu) {
  if (mass(mu) != mass(nu)) {
    throw Error(ErrorKind::mass_mismatch, "masses " + to_string(mass(mu)) + " and " + to_string(mass(nu)) + " differ");
  }
  std::vector<std::pair<std::size_t, Rational>> rows(mu.weights().begin(), mu.weights().end());
  std::vector<std::pair<std::size_t, Rational>> cols(nu.weights().begin(), nu.weights().end());
  JointMeasure::weight_map w;
  std::size_t i = 0, j = 0;
  while (i < rows.size() && j < cols.size()) {
    Rational f = std::min(rows[i].second, cols[j].second);
    w[{rows[i].first, cols[j].first}] += f;
    rows[i].second -= f;
    cols[j].second -= f;
    if (rows[i].second == 0) ++i;
    if (cols[j].second == 0) ++j;
  }
  return JointMeasure(Plane{mu.domain().space, nu.domain().space}, std::move(w));
}

/// μ ⊗ ν computed as the barycenter of x ↦ (image of ν under y ↦ (x,y))
/// weighted by μ. Shares no code path with tensor().
inline JointMeasure tensor_via_barycenter(const Measure& mu, const Measure& nu) {
  if (mass(mu) != 1 || mass(nu) != 1) throw Error(ErrorKind::mass, "tensor needs probability measures");
  const Plane plane{mu.domain().space, nu.domain().space};
  std::vector<MetaMeasure<Plane>::component> parts;
  for (const auto& [x, wx] : mu.weights()) {
    JointMeasure::weight_map fiber;
    for (const auto& [y, wy] : nu.weights()) fiber.emplace(std::pair{x, y}, wy);
    parts.emplace_back(wx, JointMeasure(plane, std::move(fiber)));
  }
  return barycenter(MetaMeasure<Plane>(plane, std::move(parts)));
}

// ---------------------------------------------------------------------------
// Neighborhood sampler
// ---------------------------------------------------------------------------

struct SamplerOptions {
  std::uint64_t denominator = std::uint64_t{1} << 16;
  bool fresh_atoms = true;
  bool reshuffle = true;
};

namespace detail {

inline std::vector<std::size_t> all_keys(const Line& d) {
  std::vector<std::size_t> out(d.space->size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
  return out;
}

inline std::vector<Plane::key_type> all_keys(const Plane& d) {
  std::vector<Plane::key_type> out;
  for (std::size_t i = 0; i < d.x->size(); ++i) {
    for (std::size_t j = 0; j < d.y->size(); ++j) out.emplace_back(i, j);
  }
  return out;
}

inline Rational interior_point(const Interval& iv, SplitMix64& rng, std::uint64_t den) {
  return iv.lo + (iv.hi - iv.lo) * rng.interior_fraction(den);
}

inline Rational interior_point(const IntervalSet& s, SplitMix64& rng, std::uint64_t den) {
  return interior_point(s.intervals()[rng.below(s.size())], rng, den);
}

inline Point2 interior_point(const BoxSet& s, SplitMix64& rng, std::uint64_t den) {
  const Box& b = s.boxes()[rng.below(s.size())];
  Rational x = interior_point(b.col, rng, den);
  Rational y = interior_point(b.row, rng, den);
  return Point2{std::move(x), std::move(y)};
}

inline bool nonempty(const IntervalSet& s) { return !s.empty(); }
inline bool nonempty(const BoxSet& s) { return !s.empty(); }

/// Adds fresh atoms at `points`; returns the new domain and their keys.
inline std::pair<Line, std::vector<std::size_t>> extend(const Line& d, const std::vector<Rational>& points) {
  const std::size_t n = d.space->size();
  std::vector<std::size_t> keys(points.size());
  for (std::size_t j = 0; j < keys.size(); ++j) keys[j] = n + j;
  return {Line{extend_space(*d.space, points)}, std::move(keys)};
}

inline std::pair<Plane, std::vector<Plane::key_type>> extend(const Plane& d, const std::vector<Point2>& points) {
  std::vector<Rational> xs, ys;
  for (const auto& p : points) {
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  const std::size_t nx = d.x->size(), ny = d.y->size();
  std::vector<Plane::key_type> keys;
  for (std::size_t j = 0; j < points.size(); ++j) keys.emplace_back(nx + j, ny + j);
  return {Plane{extend_space(*d.x, xs), extend_space(*d.y, ys)}, std::move(keys)};
}

}  // namespace detail

/// Draws a measure that is a strict member of O(center, sets, δ) by
/// construction.
///
/// From each (pairwise-disjoint) set at most δ/(2·|sets|) mass is removed;
/// the removed mass is then placed on random existing atoms or on fresh
/// atoms inside random sets. Independently, mass may be moved between atoms
/// of the same set, which leaves that set's mass unchanged. Total mass is
/// preserved, and every set loses strictly less than δ, so the gap is > −δ.
/// Fresh atoms live on an extended copy of the center's space.
template <class D>
BasicMeasure<D> sample_in_neighborhood(const BasicMeasure<D>& center, const std::vector<typename D::open_set>& sets,
                                       const Rational& delta, Seed seed, const SamplerOptions& opt = {}) {
  using key_type = typename D::key_type;
  using point_type = typename D::point_type;
  if (!(delta > 0)) throw Error(ErrorKind::parameter, "sampler needs delta > 0");

  SplitMix64 rng(seed);
  const auto den = opt.denominator;
  const std::vector<key_type> keys = detail::all_keys(center.domain());
  auto w = center.weights();
  std::vector<std::pair<point_type, Rational>> fresh;

  auto keys_in = [&](const typename D::open_set& s, bool positive_only) {
    std::vector<key_type> out;
    for (const auto& k : keys) {
      if (s.contains(center.domain().point(k)) && (!positive_only || (w.count(k) && w[k] > 0))) out.push_back(k);
    }
    return out;
  };

  const Rational budget = delta / (2 * static_cast<std::int64_t>(std::max<std::size_t>(sets.size(), 1)));
  Rational pool = 0;
  for (const auto& s : sets) {
    auto held = keys_in(s, true);
    Rational inside = 0;
    for (const auto& k : held) inside += w[k];

    Rational remaining = std::min(budget, inside) * rng.fraction(den);
    pool += remaining;
    std::shuffle(held.begin(), held.end(), rng);
    for (const auto& k : held) {
      if (remaining == 0) break;
      Rational take = std::min(w[k], remaining);
      w[k] -= take;
      remaining -= take;
    }

    if (opt.reshuffle && rng.coin()) {
      auto donors = keys_in(s, true);
      if (!donors.empty()) {
        const key_type from = donors[rng.below(donors.size())];
        Rational moved = w[from] * rng.fraction(den);
        w[from] -= moved;
        if (opt.fresh_atoms && rng.coin()) {
          fresh.emplace_back(detail::interior_point(s, rng, den), std::move(moved));
        } else {
          auto targets = keys_in(s, false);
          w[targets[rng.below(targets.size())]] += moved;
        }
      }
    }
  }

  const std::size_t chunks = 1 + rng.below(3);
  for (std::size_t c = 0; c < chunks && pool > 0; ++c) {
    Rational part = c + 1 == chunks ? pool : pool * rng.fraction(den);
    pool -= part;
    const bool to_fresh = opt.fresh_atoms && !sets.empty() && rng.coin();
    if (to_fresh) {
      const auto& s = sets[rng.below(sets.size())];
      if (detail::nonempty(s)) {
        fresh.emplace_back(detail::interior_point(s, rng, den), std::move(part));
        continue;
      }
    }
    w[keys[rng.below(keys.size())]] += part;
  }

  if (fresh.empty()) return BasicMeasure<D>(center.domain(), std::move(w));
  std::vector<point_type> points;
  for (const auto& f : fresh) points.push_back(f.first);
  auto [domain, fresh_keys] = detail::extend(center.domain(), points);
  for (std::size_t j = 0; j < fresh.size(); ++j) w[fresh_keys[j]] += fresh[j].second;
  return BasicMeasure<D>(std::move(domain), std::move(w));
}

// ---------------------------------------------------------------------------
// Openness certifier
// ---------------------------------------------------------------------------

struct CertifyOptions {
  AlphaRule rule = AlphaRule::min;
  SamplerOptions sampler{};
};

struct Violation {
  std::size_t trial = 0;
  Seed seed{};
  std::string reason;
  std::optional<std::size_t> cell;  // grid cell index, when the failure is cell-local
  std::optional<Rational> gap;
  std::optional<Measure> mu;
  std::optional<Measure> nu;
};

struct CertReport {
  std::size_t trials = 0;
  Rational delta;
  std::size_t cells = 0;
  std::vector<Violation> violations;
  std::optional<Rational> min_observed_gap;  // min over trials of gap(O(λ⁰, Vs, ε), λ)

  bool passed() const { return violations.empty(); }
};

/// Randomized evidence that every (μ, ν) close to the marginals of λ⁰ has a
/// preimage close to λ⁰.
///
/// Setup: the open sets are refined into a grid (after a disjoint
/// refinement when they overlap) which yields δ'; the sampling radius is
/// δ = min(admissible_delta(ε), δ'). Each trial samples μ, ν around the
/// marginals of λ⁰ on the grid columns/rows, builds the preimage, and checks
/// exact marginals, the per-cell lower bound and drop > −δ, membership in
/// O(λ⁰, cells, ε), and membership in O(λ⁰, Vs, ε).
class OpennessCertifier {
 public:
  struct TrialResult {
    std::vector<Violation> violations;
    std::optional<Rational> gap;
  };

  OpennessCertifier(JointMeasure lambda0, std::vector<BoxSet> vs, Rational eps, CertifyOptions options = {})
      : lambda0_(std::move(lambda0)),
        vs_(std::move(vs)),
        eps_(std::move(eps)),
        options_(options),
        base_(marginal_pair(lambda0_)),
        refined_(refine_grid(lambda0_, pairwise_disjoint(vs_) ? vs_ : disjoint_refinement(lambda0_, vs_), eps_)),
        delta_(std::min(admissible_delta(eps_), refined_.delta)) {}

  const RefineResult& refinement() const { return refined_; }
  const Grid& grid() const { return refined_.grid; }
  const Rational& delta() const { return delta_; }

  TrialResult run_trial(std::size_t trial, Seed trial_seed) const {
    TrialResult out;
    auto violation = [&](std::string reason) {
      Violation v;
      v.trial = trial;
      v.seed = trial_seed;
      v.reason = std::move(reason);
      return v;
    };
    const Grid& g = grid();
    Measure mu = sample_in_neighborhood(base_.mu, g.cols(), delta_, derive_seed(trial_seed, 1), options_.sampler);
    Measure nu = sample_in_neighborhood(base_.nu, g.rows(), delta_, derive_seed(trial_seed, 2), options_.sampler);
    auto record = [&](Violation v) {
      v.mu = mu;
      v.nu = nu;
      out.violations.push_back(std::move(v));
    };

    if (!g.cols().empty() && !is_member(Neighborhood<Line>(base_.mu, g.cols(), delta_), mu)) {
      record(violation("sampled first marginal left its neighborhood"));
    }
    if (!g.rows().empty() && !is_member(Neighborhood<Line>(base_.nu, g.rows(), delta_), nu)) {
      record(violation("sampled second marginal left its neighborhood"));
    }

    std::optional<PreimageReport> report;
    try {
      report = construct_preimage(lambda0_, g, mu, nu, options_.rule);
    } catch (const Error& e) {
      record(violation(std::string("construction failed: ") + e.what()));
      return out;
    }
    const JointMeasure& lambda = report->lambda;

    if (!(marginal_pair(lambda) == MarginalPair{mu, nu})) record(violation("marginals are not exact"));

    for (std::size_t c = 0; c < g.cell_count(); ++c) {
      const Rational& drop = report->cell_drops[c];
      const Rational base_mass = eval(lambda0_, g.cell(c));
      if (drop + base_mass < report->alphas[c].alpha) {
        auto v = violation("cell mass below its coefficient");
        v.cell = c;
        v.gap = drop;
        record(std::move(v));
      }
      if (!(drop > -delta_)) {
        auto v = violation("cell lost delta or more");
        v.cell = c;
        v.gap = drop;
        record(std::move(v));
      }
    }
    if (g.cell_count() > 0 && !is_member(Neighborhood<Plane>(lambda0_, g.cells(), eps_), lambda)) {
      record(violation("preimage outside the cell neighborhood"));
    }
    if (!vs_.empty()) {
      Neighborhood<Plane> target(lambda0_, vs_, eps_);
      out.gap = gap(target, lambda);
      if (!(*out.gap > -eps_)) {
        auto v = violation("preimage outside the target neighborhood");
        v.gap = out.gap;
        record(std::move(v));
      }
    }
    return out;
  }

  CertReport run(std::size_t trials, Seed seed) const {
    if (trials == 0) throw Error(ErrorKind::parameter, "certification needs at least one trial");
    CertReport rep;
    rep.trials = trials;
    rep.delta = delta_;
    rep.cells = grid().cell_count();
    for (std::size_t t = 0; t < trials; ++t) {
      auto res = run_trial(t, derive_seed(seed, t));
      for (auto& v : res.violations) rep.violations.push_back(std::move(v));
      if (res.gap && (!rep.min_observed_gap || *res.gap < *rep.min_observed_gap)) rep.min_observed_gap = res.gap;
    }
    return rep;
  }

 private:
  JointMeasure lambda0_;
  std::vector<BoxSet> vs_;
  Rational eps_;
  CertifyOptions options_;
  MarginalPair base_;
  RefineResult refined_;
  Rational delta_;
};

inline CertReport certify_openness(const JointMeasure& lambda0, const std::vector<BoxSet>& vs, const Rational& eps,
                                   std::size_t trials, Seed seed, const CertifyOptions& options = {}) {
  if (!(eps > 0)) throw Error(ErrorKind::parameter, "certification needs eps > 0");
  return OpennessCertifier(lambda0, vs, eps, options).run(trials, seed);
}

// ---------------------------------------------------------------------------
// Inequality validators for cylinder-difference bounds
// ---------------------------------------------------------------------------

struct LemmaCheck {
  Rational lhs;
  Rational bound;
  bool ok = false;
  friend bool operator==(const LemmaCheck&, const LemmaCheck&) = default;
};

/// λ((V∖V')×W) < ε whenever the marginal satisfies μ(V∖V') < ε.
/// With axis = second the roles flip: V, V' ⊂ Y and W ⊂ X, giving
/// λ(W×(V∖V')) < ε under ν(V∖V') < ε.
inline LemmaCheck check_lemma4(const JointMeasure& lambda, const IntervalSet& v, const IntervalSet& v_prime,
                               const IntervalSet& w, const Rational& eps, Axis axis = Axis::first) {
  const Measure marginal = push_proj(lambda, axis);
  const Rational hyp = eval_if(marginal, [&](const Rational& p) { return v.contains(p) && !v_prime.contains(p); });
  if (!(hyp < eps)) {
    throw Error(ErrorKind::hypothesis, "marginal mass of V\\V' is " + to_string(hyp) + ", not below " + to_string(eps));
  }
  const bool first = axis == Axis::first;
  LemmaCheck out;
  out.lhs = eval_if(lambda, [&](const Point2& p) {
    const Rational& a = first ? p.x : p.y;
    const Rational& b = first ? p.y : p.x;
    return v.contains(a) && !v_prime.contains(a) && w.contains(b);
  });
  out.bound = eps;
  out.ok = out.lhs < eps && out.lhs <= hyp;
  return out;
}

/// λ((V×W)∖(V'×W')) < ε₁+ε₂ under μ(V∖V') < ε₁ and ν(W∖W') < ε₂, together
/// with the subadditivity step through (V∖V')×W and V×(W∖W').
inline LemmaCheck check_lemma5(const JointMeasure& lambda, const IntervalSet& v, const IntervalSet& v_prime,
                               const IntervalSet& w, const IntervalSet& w_prime, const Rational& eps1,
                               const Rational& eps2) {
  const MarginalPair m = marginal_pair(lambda);
  const Rational h1 = eval_if(m.mu, [&](const Rational& p) { return v.contains(p) && !v_prime.contains(p); });
  const Rational h2 = eval_if(m.nu, [&](const Rational& p) { return w.contains(p) && !w_prime.contains(p); });
  if (!(h1 < eps1)) throw Error(ErrorKind::hypothesis, "first marginal mass of V\\V' is " + to_string(h1));
  if (!(h2 < eps2)) throw Error(ErrorKind::hypothesis, "second marginal mass of W\\W' is " + to_string(h2));

  LemmaCheck out;
  out.lhs = eval_if(lambda, [&](const Point2& p) {
    return v.contains(p.x) && w.contains(p.y) && !(v_prime.contains(p.x) && w_prime.contains(p.y));
  });
  const Rational left_strip =
      eval_if(lambda, [&](const Point2& p) { return v.contains(p.x) && !v_prime.contains(p.x) && w.contains(p.y); });
  const Rational right_strip =
      eval_if(lambda, [&](const Point2& p) { return v.contains(p.x) && w.contains(p.y) && !w_prime.contains(p.y); });
  out.bound = eps1 + eps2;
  out.ok = out.lhs <= left_strip + right_strip && out.lhs < out.bound;
  return out;
}

}  // namespace margopen

#endif  // MARGOPEN_VERIFY_HPP
