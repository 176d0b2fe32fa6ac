#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "declab/kernels.hpp"

using namespace declab;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

TEST_CASE("plateau profile") {
  CHECK(plateau(0.0) == 1.0);
  CHECK(plateau(1.0) == 1.0);
  CHECK(plateau(2.0) == 0.0);
  CHECK(plateau(-1.5) == doctest::Approx(0.5));
  CHECK(plateau(1.3) + plateau(1.7) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(plateau(1.0f) == 1.0f);
}

TEST_CASE("phi against direct quadrature") {
  CHECK(phi(0.0) == doctest::Approx(3.0).epsilon(1e-12));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 20.0);
  for (int t = 0; t < 20; ++t) {
    const double x = u(rng);
    // midpoint rule on the transition, exact plateau part
    const int n = 400000;
    double s = std::sin(2 * kPi * x) / (2 * kPi * x) * 2;
    for (int i = 0; i < n; ++i) {
      const double xi = 1.0 + (i + 0.5) / n;
      s += 2 * plateau(xi) * std::cos(2 * kPi * x * xi) / n;
    }
    CHECK(std::abs(phi(x) - s) < 1e-8);
    CHECK(phi(-x) == phi(x));
  }
  CHECK(phi(100.0) == 0.0);
}

TEST_CASE("Dirichlet kernel") {
  CHECK(dirichlet_kernel(2, 0.0) == 5.0);
  CHECK(dirichlet_kernel(1, 0.5) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(dirichlet_kernel(3, 7.0) == 7.0);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const long M = 1 + static_cast<long>(rng() % 32);
    const double x = u(rng);
    worst = std::max(worst, std::abs(dirichlet_kernel(M, x) - dirichlet_direct(M, x)));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("tilde_D weights and closed form") {
  CHECK(tilde_D(1, 5, 0.123) == doctest::Approx(dirichlet_kernel(5, 0.123)));
  Eigen::VectorXd b = tilde_D_weights(2, 4);
  const long S = (b.size() - 1) / 2;
  CHECK(S == tilde_D_support(2, 4));
  for (long j = -4; j <= 4; ++j) CHECK(b[S + j] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(b.minCoeff() >= 0.0);
  CHECK(b.maxCoeff() <= 1.0 + 1e-15);
  for (double y : {0.0, 0.013, 0.2, 0.37, 0.5}) {
    double s = 0.0;
    for (long j = -S; j <= S; ++j) s += b[S + j] * std::cos(2 * kPi * j * y);
    CHECK(tilde_D(2, 4, y) == doctest::Approx(s).epsilon(1e-10));
  }
  CHECK(tilde_D(3, 2, 0.0) == doctest::Approx(2 * 32 * 2 + 1));
}

TEST_CASE("tilde_D decay on dyadic shells") {
  const long M = 16;
  std::vector<double> sup;
  for (int m = 1; std::ldexp(1.0, -m - 1) >= 1.0 / M; ++m) {
    double s = 0.0;
    const double lo = std::ldexp(1.0, -m - 1), hi = std::ldexp(1.0, -m);
    for (int i = 0; i <= 4000; ++i) {
      const double d = lo + (hi - lo) * i / 4000;
      s = std::max(s, std::abs(tilde_D(2, M, d)) * std::pow(d * M, 2));
    }
    sup.push_back(s);
  }
  REQUIRE(sup.size() >= 2);
  const double top = *std::max_element(sup.begin(), sup.end());
  const double bottom = *std::min_element(sup.begin(), sup.end());
  CHECK(top / bottom < 8.0);
}

TEST_CASE("adapted kernel spectrum") {
  for (int k : {1, 2}) {
    for (long M : {1L, 4L}) {
      auto psi = build_psi(FatAP{0.0, 0.01, 0.05, 0.0}, M, k);
      CHECK(std::abs(psi(0.0)) == doctest::Approx(0.01 * 3.0 * (2 * tilde_D_levels(k, M).back() + 1)).epsilon(1e-10));
      auto r = check_spectrum(psi);
      CHECK(r.leakage <= 1e-8);
      CHECK(r.core_min >= 1 - 1e-6);
      CHECK(r.core_max <= 1 + 1e-6);
    }
  }
  CHECK_THROWS(build_psi(FatAP{0.0, 0.3, 0.5, 0.0}, 2, 1));
}

TEST_CASE("mollifier and wave packets") {
  auto s = gen_log(1024);
  auto cells = canonical_partition(s, 4);
  Mollifier rho = build_rho(cells[2]);
  CHECK(rho.cdf(rho.support()) == 1.0);
  CHECK(rho.cdf(0.0) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(rho(0.0) > 0.0);
  CHECK(rho(0.37 * rho.support()) >= 0.0);
  const FatAP base = tile_base(rho.dual_tile());
  const double span = 3 * base.R;
  WavePackets wp(rho, {-span, span});
  double defect = 0.0;
  for (int i = 0; i <= 400; ++i) defect = std::max(defect, std::abs(wp.sum(-span + 2 * span * i / 400) - 1.0));
  CHECK(defect <= 1e-6);
  for (std::size_t i = 0; i < wp.size(); ++i) {
    const FatAP& t = wp.tile(i);
    if (std::abs(t.x0) > span) continue;
    CHECK(wp.eval(i, t.x0) >= 0.5);
  }
  // translation invariance
  std::size_t a = 0, b = 1;
  const double shift = wp.tile(b).x0 - wp.tile(a).x0;
  for (double x : {-3.0, 0.0, 11.0}) CHECK(std::abs(wp.eval(b, x + shift) - wp.eval(a, x)) <= 1e-10);
}

TEST_CASE("low-pass symbols") {
  LowPass e = build_eta(8, 1024), f = build_eta(4, 1024);
  CHECK(e(0.0) == 1.0);
  CHECK(e(2.0 * 8 / 1024) == 0.0);
  CHECK(e(3.3e-3) == doctest::Approx(f(3.3e-3 * 4 / 8)));
}
