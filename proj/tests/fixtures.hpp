#ifndef MARGOPEN_TESTS_FIXTURES_HPP
#define MARGOPEN_TESTS_FIXTURES_HPP

// Shared fixtures and random instance generators for the unit and
// acceptance suites. Generators draw coordinates and interval endpoints from
// the same quarter-integer lattice so atoms regularly sit on set boundaries.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include <margopen/margopen.hpp>

namespace margopen::testing {

inline Rational R(std::int64_t n, std::int64_t d = 1) { return make_rational(n, d); }

inline IntervalSet iset(std::initializer_list<std::pair<Rational, Rational>> raw) {
  return IntervalSet::canonicalize(std::vector<std::pair<Rational, Rational>>(raw));
}

inline Box box(Rational c0, Rational c1, Rational r0, Rational r1) {
  return Box{Interval(std::move(c0), std::move(c1)), Interval(std::move(r0), std::move(r1))};
}

/// X = {a@0, b@1}, Y = {c@0, d@1}, λ⁰ = ½δ(a,c) + ½δ(b,d), the grid of unit
/// cells around the atoms, and the perturbed marginals μ = {a:2/5, b:3/5},
/// ν = {c:1/2, d:1/2}.
struct TwoByTwo {
  SpaceRef x = make_space({{"a", R(0)}, {"b", R(1)}});
  SpaceRef y = make_space({{"c", R(0)}, {"d", R(1)}});
  JointMeasure lambda0 = joint_from_ids(x, y, {{"a", "c", R(1, 2)}, {"b", "d", R(1, 2)}});
  IntervalSet low = IntervalSet(Interval(R(-1, 2), R(1, 2)));
  IntervalSet high = IntervalSet(Interval(R(1, 2), R(3, 2)));
  Grid grid = Grid({low, high}, {low, high});
  Measure mu = measure_from_ids(x, {{"a", R(2, 5)}, {"b", R(3, 5)}});
  Measure nu = measure_from_ids(y, {{"c", R(1, 2)}, {"d", R(1, 2)}});

  std::vector<BoxSet> cell_sets() const { return grid.cells(); }
};

/// Asymmetric reference used by the min→max mutation control:
/// λ⁰ = {(a,c):1/3, (a,d):1/6, (b,d):1/2} on the TwoByTwo spaces, with the
/// four unit cells as target sets. Its marginals differ ({a:1/2,b:1/2} vs
/// {c:1/3,d:2/3}), so the two mass ratios of a cell rarely coincide.
struct Asymmetric {
  TwoByTwo base;
  JointMeasure lambda0 =
      joint_from_ids(base.x, base.y, {{"a", "c", R(1, 3)}, {"a", "d", R(1, 6)}, {"b", "d", R(1, 2)}});
  std::vector<BoxSet> sets = base.grid.cells();
};

// ---------------------------------------------------------------------------
// Random generators
// ---------------------------------------------------------------------------

inline Rational lattice(SplitMix64& rng, std::int64_t lo = -8, std::int64_t hi = 8) {
  return R(rng.between(lo, hi), 4);
}

inline SpaceRef random_space(SplitMix64& rng, const std::string& prefix, std::size_t max_atoms = 6) {
  const std::size_t n = 1 + rng.below(max_atoms);
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < n; ++i) atoms.push_back(Atom{prefix + std::to_string(i), lattice(rng)});
  return make_space(std::move(atoms));
}

/// Random weights k/den on a random nonempty subset of atoms, normalized to `total`.
inline Measure random_measure(SplitMix64& rng, const SpaceRef& space, const Rational& total = 1,
                              std::int64_t den = 16) {
  Measure::weight_map w;
  Rational sum = 0;
  for (std::size_t i = 0; i < space->size(); ++i) {
    if (rng.below(3) == 0) continue;
    Rational v = R(rng.between(1, den), den);
    sum += v;
    w[i] = v;
  }
  if (w.empty()) {
    w[rng.below(space->size())] = 1;
    sum = 1;
  }
  for (auto& kv : w) kv.second = kv.second / sum * total;
  return Measure(Line{space}, std::move(w));
}

inline JointMeasure random_joint(SplitMix64& rng, const SpaceRef& x, const SpaceRef& y, std::int64_t den = 16) {
  JointMeasure::weight_map w;
  Rational sum = 0;
  for (std::size_t i = 0; i < x->size(); ++i) {
    for (std::size_t j = 0; j < y->size(); ++j) {
      if (rng.below(2) == 0) continue;
      Rational v = R(rng.between(1, den), den);
      sum += v;
      w[{i, j}] = v;
    }
  }
  if (w.empty()) {
    w[{rng.below(x->size()), rng.below(y->size())}] = 1;
    sum = 1;
  }
  for (auto& kv : w) kv.second /= sum;
  return JointMeasure(Plane{x, y}, std::move(w));
}

/// Canonical set made of 0..max_pieces random intervals (possibly overlapping).
inline IntervalSet random_interval_set(SplitMix64& rng, std::size_t max_pieces = 3) {
  std::vector<Interval> ivs;
  const std::size_t n = rng.below(max_pieces + 1);
  for (std::size_t i = 0; i < n; ++i) {
    Rational a = lattice(rng, -10, 10), b = lattice(rng, -10, 10);
    if (a == b) continue;
    if (b < a) std::swap(a, b);
    ivs.emplace_back(a, b);
  }
  return IntervalSet::canonicalize(std::move(ivs));
}

/// Up to `count` pairwise-disjoint single-interval sets; neighbours may abut.
inline std::vector<IntervalSet> random_disjoint_intervals(SplitMix64& rng, std::size_t count) {
  std::vector<Rational> cuts;
  for (std::int64_t k = -10; k <= 10; ++k) {
    if (rng.below(3) == 0) cuts.push_back(R(k, 4));
  }
  std::vector<IntervalSet> out;
  for (std::size_t i = 0; i + 1 < cuts.size() && out.size() < count; ++i) {
    if (rng.below(3) != 0) out.emplace_back(Interval(cuts[i], cuts[i + 1]));
  }
  return out;
}

inline Box random_box(SplitMix64& rng) {
  auto side = [&] {
    Rational a = lattice(rng, -10, 10), b = lattice(rng, -10, 10);
    while (a == b) b = lattice(rng, -10, 10);
    if (b < a) std::swap(a, b);
    return Interval(a, b);
  };
  Interval c = side();
  Interval r = side();
  return Box{std::move(c), std::move(r)};
}

/// Up to `count` pairwise-disjoint box sets of 1–2 boxes each (boxes inside
/// one set may overlap).
inline std::vector<BoxSet> random_disjoint_box_sets(SplitMix64& rng, std::size_t count) {
  std::vector<BoxSet> out;
  for (std::size_t attempt = 0; attempt < 40 && out.size() < count; ++attempt) {
    std::vector<Box> boxes;
    const std::size_t k = 1 + rng.below(2);
    for (std::size_t i = 0; i < k; ++i) boxes.push_back(random_box(rng));
    BoxSet candidate(std::move(boxes));
    const bool clear =
        std::all_of(out.begin(), out.end(), [&](const BoxSet& s) { return s.disjoint_from(candidate); });
    if (clear) out.push_back(std::move(candidate));
  }
  return out;
}

}  // namespace margopen::testing

#endif  // MARGOPEN_TESTS_FIXTURES_HPP
