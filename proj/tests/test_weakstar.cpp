#include "catch_support.hpp"
#include "fixtures.hpp"

using namespace margopen;
using margopen::testing::R;

namespace {

struct Setup {
  SpaceRef x = make_space({{"a", R(0)}, {"b", R(1)}});
  Measure center = measure_from_ids(x, {{"a", R(1, 2)}, {"b", R(1, 2)}});
  Neighborhood<Line> n{center, {IntervalSet(Interval(R(-1, 2), R(1, 2)))}, R(1, 10)};
};

}  // namespace

TEST_CASE("gap and membership examples", "[weakstar]") {
  Setup s;
  auto delta_a = measure_from_ids(s.x, {{"a", R(1)}});
  auto delta_b = measure_from_ids(s.x, {{"b", R(1)}});
  CHECK(gap(s.n, delta_a) == R(1, 2));
  CHECK(gap(s.n, s.center) == 0);
  CHECK(is_member(s.n, s.center));
  CHECK(gap(s.n, delta_b) == R(-1, 2));
  CHECK_FALSE(is_member(s.n, delta_b));

  // Gap exactly −ε is outside.
  auto edge = measure_from_ids(s.x, {{"a", R(2, 5)}, {"b", R(3, 5)}});
  CHECK(gap(s.n, edge) == R(-1, 10));
  CHECK_FALSE(is_member(s.n, edge));

  Neighborhood<Line> wide(s.center, s.n.sets(), R(2));
  CHECK(is_member(wide, delta_b));
}

TEST_CASE("neighborhood parameters are validated", "[weakstar]") {
  Setup s;
  CHECK_THROWS_AS(Neighborhood<Line>(s.center, s.n.sets(), R(0)), Error);
  CHECK_THROWS_AS(Neighborhood<Line>(s.center, {}, R(1)), Error);
}

TEST_CASE("box neighborhoods on the 2x2 fixture", "[weakstar]") {
  testing::TwoByTwo f;
  Neighborhood<Plane> n(f.lambda0, f.cell_sets(), R(1, 5));
  CHECK(is_member(n, f.lambda0));
  auto shifted = joint_from_ids(f.x, f.y, {{"a", "c", R(2, 5)}, {"b", "c", R(1, 10)}, {"b", "d", R(1, 2)}});
  CHECK(gap(n, shifted) == R(-1, 10));
  CHECK(is_member(n, shifted));
  CHECK_FALSE(is_member(Neighborhood<Plane>(f.lambda0, f.cell_sets(), R(1, 10)), shifted));
}

TEST_CASE("measures on extended spaces compare by coordinates", "[weakstar]") {
  Setup s;
  auto ext = extend_space(*s.x, {R(1, 4)});
  auto moved = measure_from_ids(ext, {{ext->atom(2).id, R(1, 2)}, {"b", R(1, 2)}});
  CHECK(gap(s.n, moved) == 0);
}

TEST_CASE("neighborhood monotonicity", "[weakstar][property]") {
  SplitMix64 rng(21);
  for (int trial = 0; trial < 400; ++trial) {
    auto x = testing::random_space(rng, "x");
    auto center = testing::random_measure(rng, x);
    auto other = testing::random_measure(rng, x);
    std::vector<IntervalSet> sets;
    const std::size_t k = 1 + rng.below(3);
    for (std::size_t i = 0; i < k; ++i) sets.push_back(testing::random_interval_set(rng));
    const Rational eps = R(rng.between(1, 8), 8);
    Neighborhood<Line> n(center, sets, eps);

    CHECK(is_member(n, center));
    if (is_member(n, other)) {
      CHECK(is_member(Neighborhood<Line>(center, sets, eps + R(1, 16)), other));
      if (sets.size() > 1) {
        auto fewer = sets;
        fewer.erase(fewer.begin() + static_cast<std::ptrdiff_t>(rng.below(fewer.size())));
        CHECK(is_member(Neighborhood<Line>(center, fewer, eps), other));
      }
    }
  }
}
