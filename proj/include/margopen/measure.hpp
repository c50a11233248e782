#ifndef MARGOPEN_MEASURE_HPP
#define MARGOPEN_MEASURE_HPP

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "error.hpp"
#include "rational.hpp"
#include "space.hpp"

namespace margopen {

/// Finitely supported nonnegative measure on a domain (Line or Plane).
///
/// Weights are keyed by atom index, so iteration follows the space's atom
/// order. Zero weights are never stored: the keys are exactly the support.
template <class Domain>
class BasicMeasure {
 public:
  using domain_type = Domain;
  using key_type = typename Domain::key_type;
  using point_type = typename Domain::point_type;
  using open_set = typename Domain::open_set;
  using weight_map = std::map<key_type, Rational>;

  explicit BasicMeasure(Domain domain) : domain_(std::move(domain)) {}

  BasicMeasure(Domain domain, weight_map weights) : domain_(std::move(domain)) {
    for (auto& [k, w] : weights) {
      if (!domain_.valid(k)) throw Error(ErrorKind::invalid_space, "weight keyed on an atom outside the space");
      if (w < 0) throw Error(ErrorKind::negativity, "negative weight " + to_string(w) + " at " + domain_.label(k));
      if (w != 0) weights_.emplace(k, std::move(w));
    }
  }

  const Domain& domain() const { return domain_; }
  const weight_map& weights() const { return weights_; }

  Rational weight(const key_type& k) const {
    auto it = weights_.find(k);
    return it == weights_.end() ? Rational(0) : it->second;
  }

  point_type point(const key_type& k) const { return domain_.point(k); }

  std::vector<key_type> support() const {
    std::vector<key_type> keys;
    keys.reserve(weights_.size());
    for (const auto& kv : weights_) keys.push_back(kv.first);
    return keys;
  }

  bool is_zero() const { return weights_.empty(); }

  friend bool operator==(const BasicMeasure& a, const BasicMeasure& b) {
    return a.domain_ == b.domain_ && a.weights_ == b.weights_;
  }

 private:
  Domain domain_;
  weight_map weights_;
};

using Measure = BasicMeasure<Line>;
using JointMeasure = BasicMeasure<Plane>;

/// Builds a line measure from atom ids; unknown ids are an error.
inline Measure measure_from_ids(SpaceRef space, const std::vector<std::pair<std::string, Rational>>& entries) {
  Measure::weight_map w;
  for (const auto& [id, value] : entries) w[space->index_of(id)] += value;
  return Measure(Line{std::move(space)}, std::move(w));
}

inline JointMeasure joint_from_ids(SpaceRef x, SpaceRef y,
                                   const std::vector<std::tuple<std::string, std::string, Rational>>& entries) {
  JointMeasure::weight_map w;
  for (const auto& [xi, yi, value] : entries) w[{x->index_of(xi), y->index_of(yi)}] += value;
  return JointMeasure(Plane{std::move(x), std::move(y)}, std::move(w));
}

/// Atomwise linear combination; weights may be negative. Only a checked
/// promotion turns it back into a Measure.
template <class Domain>
class SignedMeasure {
 public:
  using key_type = typename Domain::key_type;
  using weight_map = std::map<key_type, Rational>;

  SignedMeasure(Domain domain, weight_map weights) : domain_(std::move(domain)) {
    for (auto& [k, w] : weights) {
      if (w != 0) weights_.emplace(k, std::move(w));
    }
  }

  const Domain& domain() const { return domain_; }
  const weight_map& weights() const { return weights_; }

  /// Throws a negativity error naming the first offending atom.
  BasicMeasure<Domain> to_measure() const {
    for (const auto& [k, w] : weights_) {
      if (w < 0) {
        throw Error(ErrorKind::negativity, "weight " + to_string(w) + " at atom " + domain_.label(k));
      }
    }
    return BasicMeasure<Domain>(domain_, weights_);
  }

 private:
  Domain domain_;
  weight_map weights_;
};

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

template <class D>
Rational mass(const BasicMeasure<D>& m) {
  Rational total = 0;
  for (const auto& kv : m.weights()) total += kv.second;
  return total;
}

/// Mass of the atoms whose point satisfies `pred`. This is how differences
/// and other non-open regions are measured.
template <class D, class Pred>
Rational eval_if(const BasicMeasure<D>& m, Pred&& pred) {
  Rational total = 0;
  for (const auto& [k, w] : m.weights()) {
    if (pred(m.point(k))) total += w;
  }
  return total;
}

template <class D>
Rational eval(const BasicMeasure<D>& m, const typename D::open_set& set) {
  return eval_if(m, [&](const auto& p) { return set.contains(p); });
}

template <class D, class Pred>
BasicMeasure<D> restrict_if(const BasicMeasure<D>& m, Pred&& pred) {
  typename BasicMeasure<D>::weight_map w;
  for (const auto& [k, v] : m.weights()) {
    if (pred(m.point(k))) w.emplace(k, v);
  }
  return BasicMeasure<D>(m.domain(), std::move(w));
}

/// μ|_A: keeps exactly the atoms lying in A.
template <class D>
BasicMeasure<D> restrict(const BasicMeasure<D>& m, const typename D::open_set& set) {
  return restrict_if(m, [&](const auto& p) { return set.contains(p); });
}

template <class D>
BasicMeasure<D> scale(const BasicMeasure<D>& m, const Rational& c) {
  if (c < 0) throw Error(ErrorKind::parameter, "negative scale factor");
  typename BasicMeasure<D>::weight_map w;
  for (const auto& [k, v] : m.weights()) w.emplace(k, v * c);
  return BasicMeasure<D>(m.domain(), std::move(w));
}

template <class D>
BasicMeasure<D> zero_measure(D domain) {
  return BasicMeasure<D>(std::move(domain));
}

enum class Axis { first = 1, second = 2 };

/// Marginal of a joint measure along a coordinate projection.
inline Measure push_proj(const JointMeasure& joint, Axis axis) {
  Measure::weight_map w;
  for (const auto& [k, v] : joint.weights()) {
    w[axis == Axis::first ? k.first : k.second] += v;
  }
  const Plane& pl = joint.domain();
  return Measure(Line{axis == Axis::first ? pl.x : pl.y}, std::move(w));
}

template <class D>
SignedMeasure<D> linear_combine(const std::vector<std::pair<Rational, BasicMeasure<D>>>& terms, const D& domain) {
  typename SignedMeasure<D>::weight_map w;
  for (const auto& [coef, m] : terms) {
    if (!(m.domain() == domain)) throw Error(ErrorKind::parameter, "linear_combine over measures on different spaces");
    for (const auto& [k, v] : m.weights()) w[k] += coef * v;
  }
  return SignedMeasure<D>(domain, std::move(w));
}

template <class D>
SignedMeasure<D> linear_combine(const std::vector<std::pair<Rational, BasicMeasure<D>>>& terms) {
  if (terms.empty()) throw Error(ErrorKind::parameter, "linear_combine needs at least one term to fix the space");
  return linear_combine(terms, terms.front().second.domain());
}

/// Sum of two measures on the same domain.
template <class D>
BasicMeasure<D> add(const BasicMeasure<D>& a, const BasicMeasure<D>& b) {
  return linear_combine<D>({{Rational(1), a}, {Rational(1), b}}).to_measure();
}

// ---------------------------------------------------------------------------
// Integration and the barycenter map
// ---------------------------------------------------------------------------

/// Bounded function on the atoms of a line space (total by construction).
class TestFunction {
 public:
  TestFunction(SpaceRef space, std::vector<Rational> values) : space_(std::move(space)), values_(std::move(values)) {
    if (values_.size() != space_->size()) {
      throw Error(ErrorKind::parameter, "test function must assign a value to every atom");
    }
  }

  static TestFunction constant(SpaceRef space, const Rational& c) {
    std::vector<Rational> v(space->size(), c);
    return TestFunction(std::move(space), std::move(v));
  }

  const SpaceRef& space() const { return space_; }
  const Rational& operator()(std::size_t atom) const { return values_.at(atom); }

  friend TestFunction operator+(const TestFunction& f, const TestFunction& g) {
    if (!same_space(f.space_, g.space_)) throw Error(ErrorKind::parameter, "test functions on different spaces");
    std::vector<Rational> v(f.values_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f.values_[i] + g.values_[i];
    return TestFunction(f.space_, std::move(v));
  }

 private:
  SpaceRef space_;
  std::vector<Rational> values_;
};

/// Σ_x φ(x)·μ{x}.
inline Rational integrate(const TestFunction& phi, const Measure& m) {
  if (!same_space(phi.space(), m.domain().space)) {
    throw Error(ErrorKind::parameter, "test function and measure live on different spaces");
  }
  Rational total = 0;
  for (const auto& [k, w] : m.weights()) total += phi(k) * w;
  return total;
}

/// Generic integral against a function of the atom key.
template <class D, class F>
Rational integrate_by_key(F&& f, const BasicMeasure<D>& m) {
  Rational total = 0;
  for (const auto& [k, w] : m.weights()) total += f(k) * w;
  return total;
}

/// Finite measure on measures: weighted components over one common domain.
template <class D>
class MetaMeasure {
 public:
  using component = std::pair<Rational, BasicMeasure<D>>;

  explicit MetaMeasure(D domain, std::vector<component> components = {})
      : domain_(std::move(domain)), components_(std::move(components)) {
    for (const auto& [w, m] : components_) {
      if (w < 0) throw Error(ErrorKind::negativity, "meta-measure component with negative weight");
      if (!(m.domain() == domain_)) throw Error(ErrorKind::parameter, "meta-measure components on different spaces");
    }
  }

  const D& domain() const { return domain_; }
  const std::vector<component>& components() const { return components_; }

  Rational meta_mass() const {
    Rational total = 0;
    for (const auto& c : components_) total += c.first;
    return total;
  }

 private:
  D domain_;
  std::vector<component> components_;
};

/// ψ(M): the average measure Σ_i w_i·μ_i. Integrating a test function
/// against it equals integrating φ ↦ μ(φ) against M.
template <class D>
BasicMeasure<D> barycenter(const MetaMeasure<D>& meta) {
  typename BasicMeasure<D>::weight_map w;
  for (const auto& [c, m] : meta.components()) {
    for (const auto& [k, v] : m.weights()) w[k] += c * v;
  }
  return BasicMeasure<D>(meta.domain(), std::move(w));
}

// ---------------------------------------------------------------------------
// Couplings
// ---------------------------------------------------------------------------

/// Independent coupling of two probability measures: weight μ{x}·ν{y} at (x,y).
inline JointMeasure tensor(const Measure& mu, const Measure& nu) {
  if (mass(mu) != 1 || mass(nu) != 1) {
    throw Error(ErrorKind::mass, "tensor needs probability measures, got masses " + to_string(mass(mu)) + " and " +
                                     to_string(mass(nu)));
  }
  JointMeasure::weight_map w;
  for (const auto& [x, a] : mu.weights()) {
    for (const auto& [y, b] : nu.weights()) w.emplace(std::pair{x, y}, a * b);
  }
  return JointMeasure(Plane{mu.domain().space, nu.domain().space}, std::move(w));
}

/// c·((μ/c) ⊗ (ν/c)) for equal masses c; the zero measure when c = 0.
inline JointMeasure couple_mass(const Measure& mu, const Measure& nu) {
  const Rational c = mass(mu);
  if (c != mass(nu)) {
    throw Error(ErrorKind::mass_mismatch, "masses " + to_string(c) + " and " + to_string(mass(nu)) + " differ");
  }
  if (c == 0) return zero_measure(Plane{mu.domain().space, nu.domain().space});
  const Rational inv = 1 / c;
  return scale(tensor(scale(mu, inv), scale(nu, inv)), c);
}

}  // namespace margopen

#endif  // MARGOPEN_MEASURE_HPP
