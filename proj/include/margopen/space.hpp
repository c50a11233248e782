#ifndef MARGOPEN_SPACE_HPP
#define MARGOPEN_SPACE_HPP

#include <algorithm>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "error.hpp"
#include "rational.hpp"

namespace margopen {

// ---------------------------------------------------------------------------
// Open sets on the rational line and in the plane
// ---------------------------------------------------------------------------

/// Open interval (lo, hi) with lo < hi.
struct Interval {
  Rational lo;
  Rational hi;

  Interval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
    if (!(lo < hi)) {
      throw Error(ErrorKind::invalid_interval,
                  "(" + to_string(lo) + ", " + to_string(hi) + ") is empty");
    }
  }

  bool contains(const Rational& p) const { return lo < p && p < hi; }

  bool subset_of(const Interval& other) const { return other.lo <= lo && hi <= other.hi; }

  bool overlaps(const Interval& other) const { return std::max(lo, other.lo) < std::min(hi, other.hi); }

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Finite union of open intervals in canonical form: sorted, pairwise
/// disjoint, overlapping pieces merged. Abutting pieces such as (0,1) and
/// (1,2) stay separate because their shared endpoint is in neither.
class IntervalSet {
 public:
  IntervalSet() = default;

  explicit IntervalSet(Interval single) { intervals_.push_back(std::move(single)); }

  static IntervalSet canonicalize(std::vector<Interval> raw) {
    std::sort(raw.begin(), raw.end(), [](const Interval& a, const Interval& b) {
      return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
    });
    IntervalSet out;
    for (auto& iv : raw) {
      if (!out.intervals_.empty() && iv.lo < out.intervals_.back().hi) {
        auto& last = out.intervals_.back();
        if (last.hi < iv.hi) last.hi = iv.hi;
      } else {
        out.intervals_.push_back(std::move(iv));
      }
    }
    return out;
  }

  static IntervalSet canonicalize(const std::vector<std::pair<Rational, Rational>>& raw) {
    std::vector<Interval> ivs;
    ivs.reserve(raw.size());
    for (const auto& [lo, hi] : raw) ivs.emplace_back(lo, hi);
    return canonicalize(std::move(ivs));
  }

  const std::vector<Interval>& intervals() const { return intervals_; }
  bool empty() const { return intervals_.empty(); }
  std::size_t size() const { return intervals_.size(); }

  bool contains(const Rational& p) const {
    // First interval whose hi exceeds p is the only candidate.
    auto it = std::upper_bound(intervals_.begin(), intervals_.end(), p,
                               [](const Rational& v, const Interval& iv) { return v < iv.hi; });
    return it != intervals_.end() && it->contains(p);
  }

  /// Component interval containing p, if any.
  std::optional<Interval> component(const Rational& p) const {
    for (const auto& iv : intervals_) {
      if (iv.contains(p)) return iv;
    }
    return std::nullopt;
  }

  /// Every component lies inside a component of `other`.
  bool subset_of(const IntervalSet& other) const {
    return std::all_of(intervals_.begin(), intervals_.end(), [&](const Interval& iv) {
      return std::any_of(other.intervals_.begin(), other.intervals_.end(),
                         [&](const Interval& o) { return iv.subset_of(o); });
    });
  }

  bool disjoint_from(const IntervalSet& other) const {
    for (const auto& a : intervals_) {
      for (const auto& b : other.intervals_) {
        if (a.overlaps(b)) return false;
      }
    }
    return true;
  }

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  std::vector<Interval> intervals_;
};

inline IntervalSet intersect(const IntervalSet& a, const IntervalSet& b) {
  std::vector<Interval> pieces;
  for (const auto& x : a.intervals()) {
    for (const auto& y : b.intervals()) {
      Rational lo = std::max(x.lo, y.lo);
      Rational hi = std::min(x.hi, y.hi);
      if (lo < hi) pieces.emplace_back(std::move(lo), std::move(hi));
    }
  }
  return IntervalSet::canonicalize(std::move(pieces));
}

inline bool contains(const IntervalSet& set, const Rational& p) { return set.contains(p); }

struct Point2 {
  Rational x;
  Rational y;
  friend bool operator==(const Point2&, const Point2&) = default;
};

/// Open rectangle col × row, a base element of the product topology.
struct Box {
  Interval col;
  Interval row;

  bool contains(const Point2& p) const { return col.contains(p.x) && row.contains(p.y); }
  bool subset_of(const Box& other) const { return col.subset_of(other.col) && row.subset_of(other.row); }
  bool overlaps(const Box& other) const { return col.overlaps(other.col) && row.overlaps(other.row); }

  friend bool operator==(const Box&, const Box&) = default;
};

/// Finite union of open boxes. Boxes may overlap; no canonical form is imposed.
class BoxSet {
 public:
  BoxSet() = default;
  explicit BoxSet(std::vector<Box> boxes) : boxes_(std::move(boxes)) {}
  explicit BoxSet(Box single) { boxes_.push_back(std::move(single)); }

  /// Union of all products of components of `cols` and `rows`.
  static BoxSet product(const IntervalSet& cols, const IntervalSet& rows) {
    std::vector<Box> boxes;
    for (const auto& c : cols.intervals()) {
      for (const auto& r : rows.intervals()) boxes.push_back(Box{c, r});
    }
    return BoxSet(std::move(boxes));
  }

  const std::vector<Box>& boxes() const { return boxes_; }
  bool empty() const { return boxes_.empty(); }
  std::size_t size() const { return boxes_.size(); }

  bool contains(const Point2& p) const {
    return std::any_of(boxes_.begin(), boxes_.end(), [&](const Box& b) { return b.contains(p); });
  }

  /// Sufficient containment test: each box sits inside a single box of `other`.
  bool subset_of(const BoxSet& other) const {
    return std::all_of(boxes_.begin(), boxes_.end(), [&](const Box& b) {
      return std::any_of(other.boxes_.begin(), other.boxes_.end(),
                         [&](const Box& o) { return b.subset_of(o); });
    });
  }

  bool disjoint_from(const BoxSet& other) const {
    for (const auto& a : boxes_) {
      for (const auto& b : other.boxes_) {
        if (a.overlaps(b)) return false;
      }
    }
    return true;
  }

  friend bool operator==(const BoxSet&, const BoxSet&) = default;

 private:
  std::vector<Box> boxes_;
};

inline bool contains(const BoxSet& set, const Point2& p) { return set.contains(p); }

template <class Set>
bool pairwise_disjoint(const std::vector<Set>& sets) {
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = i + 1; j < sets.size(); ++j) {
      if (!sets[i].disjoint_from(sets[j])) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Ground spaces
// ---------------------------------------------------------------------------

struct Atom {
  std::string id;
  Rational coord;
  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Nonempty ordered list of labelled points on the line. Coordinates may repeat.
class Space {
 public:
  explicit Space(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    if (atoms_.empty()) throw Error(ErrorKind::invalid_space, "space has no atoms");
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      if (!index_.emplace(atoms_[i].id, i).second) {
        throw Error(ErrorKind::invalid_space, "duplicate atom id \"" + atoms_[i].id + "\"");
      }
    }
  }

  std::size_t size() const { return atoms_.size(); }
  const Atom& atom(std::size_t i) const { return atoms_.at(i); }
  const std::vector<Atom>& atoms() const { return atoms_; }

  std::optional<std::size_t> find(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t index_of(const std::string& id) const {
    auto i = find(id);
    if (!i) throw Error(ErrorKind::invalid_space, "unknown atom id \"" + id + "\"");
    return *i;
  }

  friend bool operator==(const Space& a, const Space& b) { return a.atoms_ == b.atoms_; }

 private:
  std::vector<Atom> atoms_;
  std::unordered_map<std::string, std::size_t> index_;
};

using SpaceRef = std::shared_ptr<const Space>;

inline SpaceRef make_space(std::vector<Atom> atoms) {
  return std::make_shared<const Space>(std::move(atoms));
}

/// Appends atoms at the given coordinates under fresh ids of the form "~N".
inline SpaceRef extend_space(const Space& base, const std::vector<Rational>& coords) {
  std::vector<Atom> atoms = base.atoms();
  std::size_t counter = 0;
  for (const auto& c : coords) {
    std::string id;
    do {
      id = "~" + std::to_string(counter++);
    } while (base.find(id));
    atoms.push_back(Atom{std::move(id), c});
  }
  return make_space(std::move(atoms));
}

inline bool same_space(const SpaceRef& a, const SpaceRef& b) { return a == b || *a == *b; }

// ---------------------------------------------------------------------------
// Measure domains: the line (a single space) and the product of two spaces.
// They tell BasicMeasure how keys map to points and which open sets apply.
// ---------------------------------------------------------------------------

struct Line {
  using key_type = std::size_t;
  using point_type = Rational;
  using open_set = IntervalSet;

  SpaceRef space;

  const point_type& point(key_type k) const { return space->atom(k).coord; }
  std::string label(key_type k) const { return space->atom(k).id; }
  bool valid(key_type k) const { return k < space->size(); }

  friend bool operator==(const Line& a, const Line& b) { return same_space(a.space, b.space); }
};

struct Plane {
  using key_type = std::pair<std::size_t, std::size_t>;
  using point_type = Point2;
  using open_set = BoxSet;

  SpaceRef x;
  SpaceRef y;

  point_type point(key_type k) const { return Point2{x->atom(k.first).coord, y->atom(k.second).coord}; }
  std::string label(key_type k) const { return "(" + x->atom(k.first).id + "," + y->atom(k.second).id + ")"; }
  bool valid(key_type k) const { return k.first < x->size() && k.second < y->size(); }

  friend bool operator==(const Plane& a, const Plane& b) {
    return same_space(a.x, b.x) && same_space(a.y, b.y);
  }
};

}  // namespace margopen

#endif  // MARGOPEN_SPACE_HPP
