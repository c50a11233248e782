#include "catch_support.hpp"
#include "fixtures.hpp"

using namespace margopen;
using margopen::testing::R;

TEST_CASE("parse_rational accepts exact forms only", "[space][rational]") {
  CHECK(parse_rational("1/2") == R(1, 2));
  CHECK(parse_rational("-3/6") == R(-1, 2));
  CHECK(parse_rational("7") == R(7));
  CHECK(to_string(parse_rational("4/8")) == "1/2");
  CHECK(to_string(R(-5)) == "-5");
  for (const char* bad : {"", "0.1", "1/0", "1e3", "+1", "1/", "/2", " 1", "1/-2", "--1"}) {
    CHECK_THROWS_AS(parse_rational(bad), Error);
  }
}

TEST_CASE("canonicalize merges overlaps but keeps abutting pieces", "[space]") {
  auto merged = IntervalSet::canonicalize(std::vector<std::pair<Rational, Rational>>{{R(0), R(2)}, {R(1), R(3)}});
  REQUIRE(merged.size() == 1);
  CHECK(merged.intervals()[0] == Interval(R(0), R(3)));

  auto abutting = IntervalSet::canonicalize(std::vector<std::pair<Rational, Rational>>{{R(1), R(2)}, {R(0), R(1)}});
  REQUIRE(abutting.size() == 2);
  CHECK(abutting.intervals()[0] == Interval(R(0), R(1)));
  CHECK(abutting.intervals()[1] == Interval(R(1), R(2)));
  CHECK_FALSE(abutting.contains(R(1)));

  try {
    IntervalSet::canonicalize(std::vector<std::pair<Rational, Rational>>{{R(2), R(1)}});
    FAIL("expected invalid-interval");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::invalid_interval);
  }
  CHECK_THROWS_AS(Interval(R(1), R(1)), Error);
}

TEST_CASE("open sets exclude their endpoints", "[space]") {
  CHECK_FALSE(IntervalSet(Interval(R(0), R(1))).contains(R(0)));
  CHECK(IntervalSet(Interval(R(-1, 2), R(1, 2))).contains(R(0)));
  BoxSet b(testing::box(R(-1, 2), R(1, 2), R(-1, 2), R(1, 2)));
  CHECK(b.contains(Point2{R(0), R(0)}));
  CHECK_FALSE(b.contains(Point2{R(1, 2), R(0)}));
  CHECK_FALSE(BoxSet().contains(Point2{R(0), R(0)}));
}

TEST_CASE("intersect examples", "[space]") {
  using testing::iset;
  CHECK(intersect(iset({{R(0), R(2)}}), iset({{R(1), R(3)}})) == iset({{R(1), R(2)}}));
  CHECK(intersect(iset({{R(0), R(1)}}), iset({{R(2), R(3)}})).empty());
  CHECK(intersect(iset({{R(0), R(3)}}), iset({{R(1), R(2)}, {R(5), R(6)}})) == iset({{R(1), R(2)}}));
}

TEST_CASE("space rejects duplicate ids and emptiness", "[space]") {
  CHECK_THROWS_AS(make_space({}), Error);
  CHECK_THROWS_AS(make_space({{"a", R(0)}, {"a", R(1)}}), Error);
  auto s = make_space({{"a", R(0)}, {"b", R(0)}});  // repeated coordinates are fine
  CHECK(s->index_of("b") == 1);
  CHECK_FALSE(s->find("z"));
}

TEST_CASE("interval set algebra properties", "[space][property]") {
  SplitMix64 rng(0x5eed);
  auto probe_points = [&](const std::vector<IntervalSet>& sets) {
    std::vector<Rational> pts;
    for (const auto& s : sets) {
      for (const auto& iv : s.intervals()) {
        pts.push_back(iv.lo);
        pts.push_back(iv.hi);
        pts.push_back((iv.lo + iv.hi) / 2);
      }
    }
    for (int i = 0; i < 8; ++i) pts.push_back(R(rng.between(-24, 24), 8));
    return pts;
  };

  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Interval> raw;
    const auto n = rng.below(5);
    for (std::size_t i = 0; i < n; ++i) {
      Rational a = testing::lattice(rng), b = testing::lattice(rng);
      if (a == b) continue;
      if (b < a) std::swap(a, b);
      raw.emplace_back(a, b);
    }
    const IntervalSet s = IntervalSet::canonicalize(raw);
    CHECK(IntervalSet::canonicalize(s.intervals()) == s);
    for (std::size_t i = 0; i + 1 < s.size(); ++i) CHECK(s.intervals()[i].hi <= s.intervals()[i + 1].lo);

    const IntervalSet a = testing::random_interval_set(rng);
    const IntervalSet b = testing::random_interval_set(rng);
    const IntervalSet c = testing::random_interval_set(rng);
    CHECK(intersect(a, b) == intersect(b, a));
    CHECK(intersect(intersect(a, b), c) == intersect(a, intersect(b, c)));

    for (const auto& p : probe_points({s, a, b})) {
      CHECK(intersect(a, b).contains(p) == (a.contains(p) && b.contains(p)));
    }
  }
}

TEST_CASE("canonical membership equals raw union membership", "[space][property]") {
  // Only strictly overlapping pieces are fused, so no endpoint is ever gained.
  SplitMix64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Interval> raw;
    for (int i = 0; i < 4; ++i) {
      Rational a = testing::lattice(rng), b = testing::lattice(rng);
      if (a == b) continue;
      if (b < a) std::swap(a, b);
      raw.emplace_back(a, b);
    }
    const IntervalSet s = IntervalSet::canonicalize(raw);
    for (std::int64_t k = -40; k <= 40; ++k) {
      const Rational p = R(k, 8);
      const bool in_raw = std::any_of(raw.begin(), raw.end(), [&](const Interval& iv) { return iv.contains(p); });
      CHECK(s.contains(p) == in_raw);
    }
  }
}
