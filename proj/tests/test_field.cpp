#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>

#include "declab/field.hpp"
#include "declab/kernels.hpp"

using namespace declab;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

TEST_CASE("atomic evaluation") {
  Eigen::VectorXd a(1);
  a << 0.7;
  auto f = make_atomic(a, Eigen::VectorXcd::Ones(1));
  CHECK(std::abs(eval(f, 3.1)) == doctest::Approx(1.0));
  Eigen::VectorXd b(2);
  b << -0.7, 0.7;
  CHECK(std::abs(eval(make_atomic(b, Eigen::VectorXcd::Ones(2)), 0.0)) == doctest::Approx(2.0));
  auto s = gen_log(4096);
  CHECK(std::abs(eval(make_atomic(s.terms, Eigen::VectorXcd::Ones(s.size())), 0.0)) == doctest::Approx(64.0));
}

TEST_CASE("grid sampling matches direct evaluation") {
  auto s = gen_random(4096, 1.0, 9);
  auto f = make_atomic(s.terms, Eigen::VectorXcd::Ones(s.size()));
  GridField g = to_grid(f, -5000.0, 1.7, 20000);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < g.size(); i += 997) worst = std::max(worst, std::abs(g.samples[i] - eval(f, g.x(i))));
  CHECK(worst < 1e-10);
}

TEST_CASE("atomic projection") {
  auto s = gen_log(1024);
  auto cells = canonical_partition(s, 8);
  AtomicSum f = make_atomic(s.terms, Eigen::VectorXcd::Ones(s.size()));
  f.has_envelope = true;
  f.envelope.width = cells[0].radius / 2;
  Eigen::Index total = 0;
  for (std::size_t j = 0; j < cells.size(); ++j) total += project(f, cells, j).size();
  CHECK(total == s.size() - s.size() % 8);
  auto one = canonical_partition(s, static_cast<int>(s.size()));
  CHECK(project(f, one, 0).size() == s.size());
  f.envelope.width = 10.0 / 1024;
  CHECK_THROWS_WITH(project(f, cells, 0), "non-nested atom");
}

TEST_CASE("grid round trip and Plancherel") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  GridField g{0.0, 0.5, Eigen::VectorXcd(1024)};
  for (Eigen::Index i = 0; i < g.size(); ++i) g.samples[i] = {n(rng), n(rng)};
  GridField r = project(g, IntervalList{{-100.0, 100.0}});
  CHECK((r.samples - g.samples).norm() / g.samples.norm() < 1e-10);
  auto lo = project(g, IntervalList{{-3.0, 0.0}});
  auto hi = project(g, IntervalList{{0.0, 100.0}});
  // disjoint bands are orthogonal
  CHECK(std::abs(lo.samples.dot(hi.samples)) < 1e-9 * g.samples.squaredNorm());
}

TEST_CASE("lp norms") {
  Eigen::VectorXd a(1);
  a << 0.3;
  auto f = make_atomic(a, Eigen::VectorXcd::Ones(1));
  const double T = 50.0;
  for (double p : {1.0, 2.0, 4.0, 6.0})
    CHECK(lp_norm(f, p, Interval{-T, T}, 0.01).value == doctest::Approx(std::pow(2 * T, 1.0 / p)).epsilon(1e-4));
  Eigen::VectorXd b(2);
  b << 0.3, 1.1;
  auto g = make_atomic(b, Eigen::VectorXcd::Ones(2));
  const double avg = std::pow(lp_norm(g, 2, Interval{-2000, 2000}, 0, true).value, 2);
  CHECK(std::abs(avg - 2.0) < 4.0 / (2000 * 0.8));
  for (long M : {3L, 8L}) {
    Eigen::VectorXd fr(2 * M + 1);
    for (long j = -M; j <= M; ++j) fr[j + M] = 2 * kPi * j;
    auto d = make_atomic(fr, Eigen::VectorXcd::Ones(2 * M + 1));
    auto r = lp_norm(d, 2, Interval{0.0, 1.0}, 1.0 / 4096);
    CHECK(std::abs(r.value * r.value - (2 * M + 1)) < 1e-8);
  }
}

TEST_CASE("weighted and fat AP regions") {
  GridField g{-100.0, 0.01, Eigen::VectorXcd::Ones(20001)};
  FatAP P{0.0, 0.1, 1.0, 4.5};
  CHECK(std::pow(lp_norm(g, 1, P).value, 1) == doctest::Approx(1.8).epsilon(0.02));
  WeightSpec W{FatAP{0.0, 1.0, 1.0, 10.0}, 100};
  CHECK(lp_norm(g, 2, W, true).value == doctest::Approx(1.0));
  CHECK_THROWS(lp_norm(g, 2, Interval{-200, 0}));
}

TEST_CASE("convolution") {
  GridField g{0.0, 0.1, Eigen::VectorXcd::Zero(500)};
  for (Eigen::Index i = 0; i < g.size(); ++i) g.samples[i] = std::exp(-std::pow((g.x(i) - 25.0) / 3.0, 2));
  GridField delta{-0.1, 0.1, Eigen::VectorXcd::Zero(3)};
  delta.samples[1] = 10.0;
  CHECK((convolve(g, delta).samples - g.samples).cwiseAbs().maxCoeff() < 1e-12);
  auto k = sample_kernel([](double x) { return std::exp(-x * x / 2) / std::sqrt(2 * kPi); }, 0.1, 10.0);
  auto c = convolve(g, k);
  CHECK(c.samples.sum().real() == doctest::Approx(g.samples.sum().real()).epsilon(1e-8));
  GridField tone{0.0, 1.0, Eigen::VectorXcd(4096)};
  for (Eigen::Index i = 0; i < tone.size(); ++i)
    tone.samples[i] = std::cos(0.5 * i) * std::exp(-std::pow((i - 2048.0) / 300.0, 2));
  auto low = convolve(tone, build_eta(8, 1024), 1024);
  CHECK(low.samples.cwiseAbs().maxCoeff() < 1e-8);
  GridField flat{0.0, 1.0, Eigen::VectorXcd::Ones(4096)};
  auto kept = convolve(flat, build_eta(8, 1024), 0);  // periodic: constants pass
  CHECK((kept.samples - flat.samples).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("square function of a single atom") {
  auto s = gen_log(1024);
  auto cells = canonical_partition(s, 32);
  Mollifier rho = build_rho(cells[0]);
  Eigen::VectorXd a(1);
  a << s[0];
  auto f = make_atomic(a, Eigen::VectorXcd::Ones(1));
  const double h = rho.support() / 2000;
  const Eigen::Index n = 12001;
  GridField g = to_grid(f, -3 * rho.support(), h, n);
  GridField k = sample_kernel([&](double x) { return rho(x); }, h, rho.support());
  GridField sq = square_function({g}, {k});
  CHECK(std::abs(sq.samples[n / 2] - 1.0) < 1e-6);
  CHECK(sq.samples.real().minCoeff() >= -1e-12);
}

TEST_CASE("dump round trip") {
  GridField g{-1.5, 0.25, Eigen::VectorXcd(5)};
  for (int i = 0; i < 5; ++i) g.samples[i] = {i * 0.5, -i * 1.0};
  const std::string path = "field_dump_test.bin";
  dump(g, path);
  GridField r = load_dump(path);
  CHECK(r.origin == -1.5);
  CHECK(r.h == 0.25);
  CHECK((r.samples - g.samples).norm() == 0.0);
  std::remove(path.c_str());
}
