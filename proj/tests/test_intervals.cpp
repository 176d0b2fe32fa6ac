#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "declab/intervals.hpp"

using namespace declab;

TEST_CASE("normalize merges and sorts") {
  auto v = normalize({{3, 4}, {0, 1}, {0.5, 2}, {5, 5}, {2, 2.5}});
  REQUIRE(v.size() == 2);
  CHECK(v[0].lo == 0);
  CHECK(v[0].hi == 2.5);
  CHECK(v[1].lo == 3);
  CHECK(measure(v) == doctest::Approx(3.5));
}

TEST_CASE("intersection against brute grid count") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0, 10);
  for (int trial = 0; trial < 20; ++trial) {
    IntervalList a, b;
    for (int i = 0; i < 6; ++i) {
      double x = u(rng), y = u(rng);
      a.push_back({std::min(x, y), std::max(x, y)});
      x = u(rng), y = u(rng);
      b.push_back({std::min(x, y), std::max(x, y)});
    }
    a = normalize(a);
    b = normalize(b);
    const int n = 200000;
    int hits = 0;
    for (int i = 0; i < n; ++i) {
      double x = (i + 0.5) * 10.0 / n;
      bool ia = false, ib = false;
      for (auto& s : a) ia |= (s.lo <= x && x < s.hi);
      for (auto& s : b) ib |= (s.lo <= x && x < s.hi);
      hits += ia && ib;
    }
    CHECK(intersection_measure(a, b) == doctest::Approx(hits * 10.0 / n).epsilon(1e-3));
    CHECK(intersection_measure(a, b) == doctest::Approx(measure(intersect(a, b))));
    CHECK(intersection_measure(a, b) == doctest::Approx(intersection_measure(b, a)));
  }
}

TEST_CASE("containment and distance") {
  IntervalList outer{{0, 2}, {3, 6}};
  CHECK(contains(outer, IntervalList{{0.5, 1}, {3, 4}, {5, 6}}));
  CHECK_FALSE(contains(outer, IntervalList{{1.5, 3.5}}));
  CHECK(distance(IntervalList{{0, 1}}, IntervalList{{2.5, 3}}) == doctest::Approx(1.5));
  CHECK(distance(outer, outer) == 0.0);
}

TEST_CASE("cover count of half-open translates") {
  IntervalList p{{0, 1}, {1, 2}, {2, 3}};
  auto c = cover_count(p, {0, 3});
  CHECK(c.min == 1);
  CHECK(c.max == 1);
  p.push_back({0.5, 1.5});
  c = cover_count(p, {0, 3});
  CHECK(c.max == 2);
}

TEST_CASE("level sets of weighted sums") {
  IntervalList p{{0, 2}, {1, 3}};
  auto l = level_set(p, {1.0, 1.0}, 2.0);
  REQUIRE(l.size() == 1);
  CHECK(l[0].lo == 1);
  CHECK(l[0].hi == 2);
  CHECK(measure(level_set(p, {1.0, 1.0}, 1.0)) == doctest::Approx(3.0));
}
