#ifndef MARGOPEN_REFINE_HPP
#define MARGOPEN_REFINE_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "error.hpp"
#include "measure.hpp"
#include "space.hpp"

namespace margopen {

/// Base boxes of V that carry support atoms of λ. At finite support the
/// inner approximation is exact: the returned boxes cover every atom of λ
/// inside V, so λ(V) − λ(∪ boxes) = 0 < ε for any ε > 0.
inline BoxSet rect_inner_approx(const JointMeasure& lambda, const BoxSet& v, const Rational& eps) {
  if (!(eps > 0)) throw Error(ErrorKind::parameter, "rect_inner_approx needs eps > 0");
  std::vector<Box> kept;
  for (const auto& box : v.boxes()) {
    if (std::find(kept.begin(), kept.end(), box) != kept.end()) continue;
    const bool carries = std::any_of(lambda.weights().begin(), lambda.weights().end(),
                                     [&](const auto& kv) { return box.contains(lambda.point(kv.first)); });
    if (carries) kept.push_back(box);
  }
  return BoxSet(std::move(kept));
}

namespace detail {

using Signature = std::vector<bool>;

struct Representative {
  Rational at;
  Signature sig;
  Interval room;  // component of the intersection of all sets containing `at`
};

inline std::optional<Representative> represent(const std::vector<IntervalSet>& sets, const Rational& p) {
  Signature sig(sets.size(), false);
  std::optional<Rational> lo, hi;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    auto comp = sets[i].component(p);
    if (!comp) continue;
    sig[i] = true;
    if (!lo || *lo < comp->lo) lo = comp->lo;
    if (!hi || comp->hi < *hi) hi = comp->hi;
  }
  if (!lo) return std::nullopt;
  return Representative{p, std::move(sig), Interval(*lo, *hi)};
}

}  // namespace detail

/// Splits overlapping open sets into pairwise-disjoint pieces without
/// losing any forbidden coordinate.
///
/// Guarantee: for every forbidden c lying in some input, the piece holding
/// c is contained in *every* input that contains c. Pieces are grouped by
/// the set of inputs they lie in, so each piece is inside at least one
/// input. Cuts sit on input endpoints when that is legal and otherwise at
/// the midpoint between the two nearest relevant coordinates, so no cut
/// ever lands on a forbidden coordinate.
inline std::vector<IntervalSet> disjointify(const std::vector<IntervalSet>& sets,
                                            const std::vector<Rational>& forbidden) {
  std::vector<Rational> ends;
  for (const auto& s : sets) {
    for (const auto& iv : s.intervals()) {
      ends.push_back(iv.lo);
      ends.push_back(iv.hi);
    }
  }
  std::sort(ends.begin(), ends.end());
  ends.erase(std::unique(ends.begin(), ends.end()), ends.end());

  // Probe points: every forbidden coordinate plus one interior point of each
  // elementary gap of the endpoint arrangement (so uncovered-by-atoms parts
  // of the inputs survive too).
  std::vector<Rational> probes = forbidden;
  for (std::size_t i = 0; i + 1 < ends.size(); ++i) probes.push_back((ends[i] + ends[i + 1]) / 2);
  std::sort(probes.begin(), probes.end());
  probes.erase(std::unique(probes.begin(), probes.end()), probes.end());

  std::vector<detail::Representative> reps;
  for (const auto& p : probes) {
    if (auto r = detail::represent(sets, p)) reps.push_back(std::move(*r));
  }
  if (reps.empty()) return {};

  // Runs of consecutive representatives that may share a piece.
  struct Run {
    std::size_t first, last;
  };
  std::vector<Run> runs;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    if (!runs.empty()) {
      const auto& prev = reps[runs.back().last];
      if (prev.sig == reps[i].sig && prev.room == reps[i].room) {
        runs.back().last = i;
        continue;
      }
    }
    runs.push_back(Run{i, i});
  }

  std::vector<Rational> left(runs.size()), right(runs.size());
  left.front() = reps[runs.front().first].room.lo;
  right.back() = reps[runs.back().last].room.hi;
  for (std::size_t j = 0; j + 1 < runs.size(); ++j) {
    const auto& a = reps[runs[j].last];
    const auto& b = reps[runs[j + 1].first];
    if (b.room.lo >= a.room.hi) {
      right[j] = a.room.hi;
      left[j + 1] = b.room.lo;
      continue;
    }
    Rational cut;
    if (b.room.lo > a.at) {
      cut = b.room.lo;
    } else if (a.room.hi < b.at) {
      cut = a.room.hi;
    } else {
      cut = (a.at + b.at) / 2;
    }
    right[j] = cut;
    left[j + 1] = cut;
  }

  std::vector<detail::Signature> order;
  std::map<detail::Signature, std::vector<Interval>> grouped;
  for (std::size_t j = 0; j < runs.size(); ++j) {
    const auto& sig = reps[runs[j].first].sig;
    auto [it, inserted] = grouped.try_emplace(sig);
    if (inserted) order.push_back(sig);
    it->second.emplace_back(left[j], right[j]);
  }
  std::vector<IntervalSet> pieces;
  pieces.reserve(order.size());
  for (const auto& sig : order) pieces.push_back(IntervalSet::canonicalize(std::move(grouped[sig])));
  return pieces;
}

/// Column sets W'_q and row sets W''_s; the cells are all products
/// W'_q × W''_s. Columns are pairwise disjoint and so are rows, hence two
/// cells' projections on either axis are equal or disjoint.
class Grid {
 public:
  Grid() = default;

  Grid(std::vector<IntervalSet> cols, std::vector<IntervalSet> rows) : cols_(std::move(cols)), rows_(std::move(rows)) {
    auto check = [](const std::vector<IntervalSet>& sets, const char* what) {
      for (const auto& s : sets) {
        if (s.empty()) throw Error(ErrorKind::parameter, std::string("empty grid ") + what);
      }
      if (!pairwise_disjoint(sets)) throw Error(ErrorKind::parameter, std::string("grid ") + what + "s overlap");
    };
    check(cols_, "column");
    check(rows_, "row");
  }

  const std::vector<IntervalSet>& cols() const { return cols_; }
  const std::vector<IntervalSet>& rows() const { return rows_; }

  std::size_t cell_count() const { return cols_.size() * rows_.size(); }
  std::size_t index(std::size_t q, std::size_t s) const { return q * rows_.size() + s; }
  std::pair<std::size_t, std::size_t> coords(std::size_t cell) const {
    return {cell / rows_.size(), cell % rows_.size()};
  }

  BoxSet cell(std::size_t q, std::size_t s) const { return BoxSet::product(cols_.at(q), rows_.at(s)); }
  BoxSet cell(std::size_t idx) const {
    auto [q, s] = coords(idx);
    return cell(q, s);
  }

  std::vector<BoxSet> cells() const {
    std::vector<BoxSet> out;
    out.reserve(cell_count());
    for (std::size_t i = 0; i < cell_count(); ++i) out.push_back(cell(i));
    return out;
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::vector<IntervalSet> cols_;
  std::vector<IntervalSet> rows_;
};

struct RefineResult {
  Grid grid;
  Rational delta;
  std::vector<std::optional<std::size_t>> owner;  // per cell index

  std::vector<std::size_t> owned_cell_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < owner.size(); ++i) {
      if (owner[i]) out.push_back(i);
    }
    return out;
  }

  std::vector<BoxSet> owned_cells() const {
    std::vector<BoxSet> out;
    for (auto i : owned_cell_indices()) out.push_back(grid.cell(i));
    return out;
  }
};

namespace detail {

inline std::vector<Rational> support_coords(const Measure& m) {
  std::vector<Rational> out;
  for (const auto& kv : m.weights()) out.push_back(m.point(kv.first));
  return out;
}

inline Grid grid_over_boxes(const JointMeasure& lambda, const std::vector<Box>& boxes) {
  std::vector<IntervalSet> col_inputs, row_inputs;
  for (const auto& b : boxes) {
    IntervalSet c(b.col), r(b.row);
    if (std::find(col_inputs.begin(), col_inputs.end(), c) == col_inputs.end()) col_inputs.push_back(std::move(c));
    if (std::find(row_inputs.begin(), row_inputs.end(), r) == row_inputs.end()) row_inputs.push_back(std::move(r));
  }
  return Grid(disjointify(col_inputs, support_coords(push_proj(lambda, Axis::first))),
              disjointify(row_inputs, support_coords(push_proj(lambda, Axis::second))));
}

}  // namespace detail

/// Grid refinement of pairwise-disjoint open sets V_i.
///
/// Produces cells W_qs and δ such that
///   (i)   λ(V_i) equals the sum of λ over the cells owned by V_i, exactly;
///   (ii)  every λ' with λ'(W) > λ(W) − δ on owned cells satisfies
///         λ'(V_i) > λ(V_i) − ε₀ for every i;
///   (iii) same-axis projections of any two cells are equal or disjoint.
/// δ = ε₀/(4m), m the number of owned cells of positive λ-mass (at least 1).
inline RefineResult refine_grid(const JointMeasure& lambda, const std::vector<BoxSet>& vs, const Rational& eps0) {
  if (!(eps0 > 0)) throw Error(ErrorKind::parameter, "refine_grid needs eps0 > 0");
  if (!pairwise_disjoint(vs)) throw Error(ErrorKind::parameter, "refine_grid needs pairwise disjoint open sets");

  std::vector<Box> boxes;
  for (const auto& v : vs) {
    auto inner = rect_inner_approx(lambda, v, eps0 / 4);
    boxes.insert(boxes.end(), inner.boxes().begin(), inner.boxes().end());
  }

  RefineResult out{detail::grid_over_boxes(lambda, boxes), Rational(0), {}};
  out.owner.resize(out.grid.cell_count());
  std::size_t charged = 0;
  for (std::size_t c = 0; c < out.grid.cell_count(); ++c) {
    const BoxSet cell = out.grid.cell(c);
    for (std::size_t i = 0; i < vs.size(); ++i) {
      if (cell.subset_of(vs[i])) {
        out.owner[c] = i;
        break;
      }
    }
    if (out.owner[c] && eval(lambda, cell) > 0) ++charged;
  }
  out.delta = eps0 / (4 * static_cast<long>(std::max<std::size_t>(charged, 1)));
  return out;
}

/// Replaces possibly overlapping open sets by pairwise-disjoint ones that
/// lose no λ-mass: cells of the box arrangement are grouped by the set of
/// inputs containing them, so λ(V_i) equals the total λ-mass of the pieces
/// lying inside V_i.
inline std::vector<BoxSet> disjoint_refinement(const JointMeasure& lambda, const std::vector<BoxSet>& vs) {
  std::vector<Box> boxes;
  for (const auto& v : vs) boxes.insert(boxes.end(), v.boxes().begin(), v.boxes().end());
  const Grid grid = detail::grid_over_boxes(lambda, boxes);

  std::vector<detail::Signature> order;
  std::map<detail::Signature, std::vector<Box>> grouped;
  for (std::size_t c = 0; c < grid.cell_count(); ++c) {
    const BoxSet cell = grid.cell(c);
    detail::Signature sig(vs.size(), false);
    bool any = false;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      if (cell.subset_of(vs[i])) sig[i] = any = true;
    }
    if (!any) continue;
    auto [it, inserted] = grouped.try_emplace(sig);
    if (inserted) order.push_back(sig);
    it->second.insert(it->second.end(), cell.boxes().begin(), cell.boxes().end());
  }
  std::vector<BoxSet> out;
  for (const auto& sig : order) out.emplace_back(std::move(grouped[sig]));
  return out;
}

}  // namespace margopen

#endif  // MARGOPEN_REFINE_HPP
