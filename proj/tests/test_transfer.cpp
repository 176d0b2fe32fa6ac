#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "declab/transfer.hpp"

using namespace declab;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

TEST_CASE("lift interpolates the normalized sequence") {
  for (long N : {256L, 1024L, 4096L}) {
    for (const auto& raw : {gen_log(N), gen_random(N, 1.0, 7)}) {
      auto s = normalize_unit_gap(raw);
      auto L = build_lift(s);
      CHECK(L.e[0] == 0.0);
      CHECK(std::abs(L.e[1]) < 1e-15);
      CHECK(std::abs(L.g(0.0)) <= 0.25 / N);
      CHECK(L.defect() <= 0.25 / N);
      for (Eigen::Index n = 2; n < L.e.size(); ++n) {
        const double r = L.e[n] * N * N / static_cast<double>(n * n);
        CHECK(r >= 1.0 / 8);
        CHECK(r <= 8.0);
      }
      CHECK(L.e_linear(1.5) == doctest::Approx(0.5 * (L.e[0] + L.e[1])));
    }
  }
  CHECK_THROWS_WITH(build_lift(gen_log(256)), "sequence not normalized");
}

TEST_CASE("padding to the period") {
  CHECK(pad_to_period(2 * kPi * 256 * 3, 256) == doctest::Approx(2 * kPi * 256 * 3));
  CHECK(pad_to_period(256 * 256, 256) == doctest::Approx(2 * kPi * 256 * 41));
}

TEST_CASE("Abel decomposition with a single term") {
  const long N = 256;
  auto s = normalize_unit_gap(gen_log(N));
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(s.size());
  b[0] = 1;
  auto a = abel_decompose(s, b, 4096, 4);
  CHECK(a.padded);
  CHECK(a.direct == doctest::Approx(a.T).epsilon(1e-9));
  CHECK(a.A == doctest::Approx(a.T).epsilon(1e-9));
  CHECK(a.B == doctest::Approx(a.T * std::pow((s.size() - 1) / 16.0, 4)).epsilon(1e-9));
  CHECK_THROWS(abel_decompose(s, b, 100, 4));
}

TEST_CASE("Abel triangle relation") {
  for (long N : {256L, 1024L}) {
    auto s = normalize_unit_gap(gen_random(N, 1.0, 3));
    Eigen::VectorXcd b = Eigen::VectorXcd::Ones(s.size());
    for (double T : {static_cast<double>(N), std::pow(N, 1.5), static_cast<double>(N) * N}) {
      auto a = abel_decompose(s, b, T, 4);
      CHECK(std::pow(a.direct, 0.25) <= 2 * (std::pow(a.A, 0.25) + std::pow(a.B, 0.25)));
    }
  }
}

TEST_CASE("2D sum of a single term is the weight mass") {
  auto s = normalize_unit_gap(gen_log(256));
  auto L = build_lift(s);
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(s.size());
  b[3] = cdouble(0, 2);
  CHECK(eval_2d_curve_sum(L, b, 40, 4) == doctest::Approx(16 * weight_mass_2d(40)).epsilon(1e-5));
}

TEST_CASE("2D orthogonality at p = 2") {
  auto s = normalize_unit_gap(gen_log(256));
  auto L = build_lift(s);
  Eigen::VectorXcd b = Eigen::VectorXcd::Ones(s.size());
  const double v = eval_2d_curve_sum(L, b, 2000, 2) / weight_mass_2d(2000);
  CHECK(v == doctest::Approx(16.0).epsilon(0.02));
}

TEST_CASE("2D grid budget") {
  auto s = normalize_unit_gap(gen_log(1024));
  CHECK_THROWS(eval_2d_curve_sum(build_lift(s), Eigen::VectorXcd::Ones(s.size()), 1e6, 4, 1 << 10));
}

TEST_CASE("parabola bound formula") {
  CHECK(parabola_small_cap_bound(1024, 32, 6) == doctest::Approx(std::pow(32, 1.0 / 3) + std::pow(1024, 0.5 * 5 / 6 - 1.5 / 6)));
}

TEST_CASE("bush overlap") {
  for (long N : {1024L, 4096L, 16384L}) {
    auto r = bush_diagnostic(gen_log(N), 4);
    CHECK(r.linear);
  }
  auto wide = gen_random(16384, 1.0, 1, 2048);
  CHECK_FALSE(bush_diagnostic(wide, 16).linear);
}
