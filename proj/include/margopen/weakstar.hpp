#ifndef MARGOPEN_WEAKSTAR_HPP
#define MARGOPEN_WEAKSTAR_HPP

#include <utility>
#include <vector>

#include "error.hpp"
#include "measure.hpp"

namespace margopen {

/// One-sided weak-* base set {ν : ν(V_i) > center(V_i) − ε for every i}.
/// Only downward deviations are constrained.
template <class D>
class Neighborhood {
 public:
  using open_set = typename D::open_set;

  Neighborhood(BasicMeasure<D> center, std::vector<open_set> sets, Rational epsilon)
      : center_(std::move(center)), sets_(std::move(sets)), epsilon_(std::move(epsilon)) {
    if (!(epsilon_ > 0)) throw Error(ErrorKind::parameter, "neighborhood radius must be positive");
    if (sets_.empty()) throw Error(ErrorKind::parameter, "neighborhood needs at least one open set");
  }

  const BasicMeasure<D>& center() const { return center_; }
  const std::vector<open_set>& sets() const { return sets_; }
  const Rational& epsilon() const { return epsilon_; }

 private:
  BasicMeasure<D> center_;
  std::vector<open_set> sets_;
  Rational epsilon_;
};

/// min_i (ν(V_i) − center(V_i)). Membership is gap > −ε.
///
/// ν may live on a different space than the center (e.g. with extra atoms);
/// both are evaluated through coordinates, which is all open sets see.
template <class D>
Rational gap(const Neighborhood<D>& n, const BasicMeasure<D>& nu) {
  bool first = true;
  Rational best;
  for (const auto& set : n.sets()) {
    Rational g = eval(nu, set) - eval(n.center(), set);
    if (first || g < best) {
      best = std::move(g);
      first = false;
    }
  }
  return best;
}

template <class D>
bool is_member(const Neighborhood<D>& n, const BasicMeasure<D>& nu) {
  return gap(n, nu) > -n.epsilon();
}

}  // namespace margopen

#endif  // MARGOPEN_WEAKSTAR_HPP
