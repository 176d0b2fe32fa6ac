#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "declab/fatap.hpp"

using namespace declab;

TEST_CASE("dual is an involution") {
  FatAP P{0.0, 0.01, 0.1, 10.0};
  FatAP D = dual(P);
  CHECK(D.delta == doctest::Approx(0.1));
  CHECK(D.v == doctest::Approx(10));
  CHECK(D.R == doctest::Approx(100));
  FatAP DD = dual(D);
  CHECK(DD.delta == doctest::Approx(P.delta).epsilon(1e-15));
  CHECK(DD.v == doctest::Approx(P.v).epsilon(1e-15));
  CHECK(DD.R == doctest::Approx(P.R).epsilon(1e-15));
}

TEST_CASE("exact measures") {
  FatAP P{0.0, 0.1, 1.0, 4.5};
  CHECK(intervals(P).size() == 9);
  CHECK(measure(P) == doctest::Approx(1.8));
  CHECK(intersection_measure(P, P) == doctest::Approx(1.8));
  CHECK(intersection_measure(FatAP{0, 0.1, 1, 2}, FatAP{0.5, 0.1, 1, 2}) == 0.0);
  CHECK(contains(P, 3.05));
  CHECK_FALSE(contains(P, 3.5));
  CHECK_FALSE(contains(P, 5.0));
  FatAP Q{0.3, 0.2, 0.7, 3.0};
  const double pq = intersection_measure(P, Q);
  CHECK(pq == doctest::Approx(intersection_measure(Q, P)));
  CHECK(pq <= std::min(measure(P), measure(Q)));
}

TEST_CASE("canonical partition") {
  auto s = gen_log(4096);
  const int M = static_cast<int>(s.size());
  CHECK(canonical_partition(s, M).size() == 1);
  auto ones = canonical_partition(s, 1);
  CHECK(ones.size() == static_cast<std::size_t>(M));
  for (auto& c : ones) CHECK(intervals(c.enclosing).size() == 1);
  auto cells = canonical_partition(s, 8);
  CHECK(cells.size() == static_cast<std::size_t>(M / 8));
  const double n = 4096.0;
  for (std::size_t j = 0; j + 1 < cells.size(); ++j) CHECK(cells[j + 1].v - cells[j].v >= 8 / (4 * n * n));
  CHECK_THROWS(canonical_partition(s, M + 1));
}

TEST_CASE("small caps refine canonical cells") {
  auto s = gen_random(1024, 1.0, 5);
  auto big = canonical_partition(s, 4);
  auto small = small_cap_partition(s, 4, 1);
  CHECK(small.size() == 4 * big.size());
  auto same = small_cap_partition(s, 4, 4);
  REQUIRE(same.size() == big.size());
  for (std::size_t j = 0; j < big.size(); ++j) CHECK(same[j].first == big[j].first);
  const auto a = omega(big), b = omega(small);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].lo == b[i].lo);
    CHECK(a[i].hi == b[i].hi);
  }
  for (std::size_t j = 0; j < big.size(); ++j)
    for (int i = 0; i < 4; ++i) CHECK(contains(big[j].balls, small[4 * j + i].balls));
}

TEST_CASE("P(L) shapes") {
  auto s = gen_log(256);
  FatAP small = ball_P_of_L(s, 2);
  CHECK(intervals(small).size() == 1);
  CHECK(measure(small) == doctest::Approx(2 * 256.0 * 256.0 / (2 * 4)));
  FatAP big = ball_P_of_L(s, 16);
  CHECK(big.delta == doctest::Approx(4 * 16.0));
  CHECK(big.delta < big.v / 2);
}

TEST_CASE("P_I meeting P(L) lies in 2P(L)") {
  for (long N : {256L, 1024L}) {
    auto s = gen_log(N);
    for (int L : {4, 16}) {
      auto cells = canonical_partition(s, L);
      FatAP ball = ball_P_of_L(s, L);
      FatAP twice = scaled(ball, 2);
      const auto outer = intervals(twice);
      for (auto& c : cells)
        for (int t = -40; t <= 40; ++t) {
          FatAP p = P_I(c, t * ball.R / 20);
          auto pi = intervals(p);
          if (intersection_measure(pi, intervals(ball)) > 0) CHECK(contains(outer, pi));
        }
    }
  }
}

TEST_CASE("transversality") {
  auto s = gen_log(4096);
  auto cells = canonical_partition(s, 4);
  CHECK_FALSE(transversal(cells[0], cells[1], 4096));
  CHECK(transversal(cells.front(), cells.back(), 4096));
  CHECK_FALSE(transversal(cells[3], cells[3], 4096));
}

TEST_CASE("weights") {
  WeightSpec W{FatAP{1.0, 0.1, 1.0, 10.0}, 100};
  CHECK(weight_eval(W, 1.0) == 1.0);
  CHECK(weight_eval(W, 1.0 + 20.0) == doctest::Approx(std::pow(2.0, -100)).epsilon(1e-12));
  CHECK(weight_eval(W, 1.5) < 1e-20);
  CHECK(weight_eval(W, 1.05) == 1.0);
  CHECK(weight_support(W) == doctest::Approx(10.0 * std::pow(1e12, 0.01)));
}

TEST_CASE("tiles partition the window") {
  for (FatAP P : {FatAP{0.3, 0.07, 1.0, 5.2}, FatAP{0.0, 2.0, 1.0, 3.0}, FatAP{0.0, 0.1, 1.0, 0.5}}) {
    const Interval window{-40.0, 37.0};
    auto tiles = tile(P, window);
    IntervalList all;
    for (auto& t : tiles) {
      auto iv = intervals(t);
      all.insert(all.end(), iv.begin(), iv.end());
    }
    auto c = cover_count(all, window, 1e-9);
    CHECK(c.min >= 1);
    CHECK(c.max <= 2);
    CHECK(intersection_measure(normalize(all), IntervalList{window}) == doctest::Approx(window.length()).epsilon(1e-12));
  }
}
