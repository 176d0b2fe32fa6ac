#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "declab/highlow.hpp"

using namespace declab;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

struct Setup {
  GenDirichletSeq s;
  ScaleLadder ladder;
  AtomicSum f;
};

Setup bump(long N, int levels = 3) {
  Setup u{gen_log(N), make_ladder(N, 0.1, levels), {}};
  u.f = extremal_family(Family::ConstantBump, u.s, canonical_partition(u.s, u.ladder.L.back()));
  return u;
}
}  // namespace

TEST_CASE("ladder is dyadic and strictly decreasing") {
  CHECK(make_ladder(256).L == std::vector<int>{8, 4, 2});
  CHECK(make_ladder(16384).L == std::vector<int>{64, 32, 16});
  CHECK(make_ladder(65536).L == std::vector<int>{64, 16, 4});
  CHECK_THROWS(make_ladder(256, 0.1, 5));
  CHECK(make_ladder(256, 0.1, 4).L == std::vector<int>{8, 4, 2, 1});
  CHECK_THROWS(make_ladder(64, 0.1, 4));
}

TEST_CASE("huge lambda keeps every packet") {
  auto u = bump(256);
  HighLowOptions o;
  o.alpha = 1e-300;
  o.r = 1.0;
  auto st = prune(u.s, u.f, u.ladder, o);
  const double scale = st.f.cwiseAbs().maxCoeff();
  for (int m = 0; m < 3; ++m) {
    CHECK(st.kept[m] == st.packets[m]);
    CHECK((st.fm[m] - st.f).cwiseAbs().maxCoeff() <= 1e-12 * scale);
  }
}

TEST_CASE("zero lambda prunes everything") {
  auto u = bump(256);
  HighLowOptions o;
  o.lambda = 0.0;
  auto st = prune(u.s, u.f, u.ladder, o);
  CHECK(st.kept[2] == 0);
  for (int m = 0; m < 3; ++m) CHECK(st.fm[m].cwiseAbs().maxCoeff() == 0.0);
  CHECK(st.g.back().maxCoeff() > 0.0);
}

TEST_CASE("partial pruning is monotone and spectrally contained") {
  auto u = bump(1024);
  HighLowOptions o;
  o.C_eps = 0.1;
  o.check_leakage = true;
  auto st = prune(u.s, u.f, u.ladder, o);
  std::size_t kept = 0, total = 0;
  for (int m = 0; m < 3; ++m) {
    kept += st.kept[m];
    total += st.packets[m];
  }
  CHECK(kept < total);
  CHECK(kept > 0);
  CHECK(st.monotone_violations == 0);
  CHECK(st.max_leakage <= 1e-6);
}

TEST_CASE("square functions are nonnegative and g_M ignores alpha and r") {
  auto u = bump(256);
  HighLowOptions a, b;
  b.alpha = 0.01;
  b.r = 3.0;
  auto s1 = prune(u.s, u.f, u.ladder, a);
  auto s2 = prune(u.s, u.f, u.ladder, b);
  for (const auto& g : s1.g) CHECK(g.minCoeff() >= -1e-12 * g.maxCoeff());
  CHECK((s1.g.back() - s2.g.back()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("single atom has g_M near one at the centre") {
  auto s = gen_log(256);
  auto lad = make_ladder(256);
  auto cells = canonical_partition(s, lad.L.back());
  Eigen::VectorXd fr(1);
  fr[0] = s[3];
  AtomicSum f = make_atomic(fr, Eigen::VectorXcd::Ones(1));
  f.has_envelope = true;
  f.envelope.width = cells[0].radius;
  auto st = prune(s, f, lad);
  const Eigen::Index c = st.n / 2;
  CHECK(st.x(c) == doctest::Approx(0.0));
  CHECK(st.g.back()[c] == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("split reconstructs and filters") {
  auto u = bump(256);
  auto st = prune(u.s, u.f, u.ladder);
  for (int m = 1; m < 3; ++m) {
    auto p = highlow_split(st, m);
    const Eigen::VectorXd& g = st.g[m - 1];
    CHECK((p.low + p.high - g).cwiseAbs().maxCoeff() <= 1e-12 * g.maxCoeff());
  }
  CHECK_THROWS(highlow_split(st, 3));

  const Eigen::Index n = 4096;
  const double h = 0.5;
  const LowPass eta{0.2};
  auto c = highlow_split(Eigen::VectorXd::Constant(n, 2.5), h, eta);
  CHECK((c.low.array() - 2.5).abs().maxCoeff() <= 1e-10);
  CHECK(c.high.cwiseAbs().maxCoeff() <= 1e-10);

  const double df = 2 * kPi / (n * h);
  const double xi = df * std::ceil(2.2 * eta.cutoff / df);
  Eigen::VectorXd tone(n);
  for (Eigen::Index i = 0; i < n; ++i) tone[i] = std::cos(xi * i * h);
  auto t = highlow_split(tone, h, eta);
  CHECK(t.low.cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("labels partition P(L_M) and are written as csv") {
  auto u = bump(256);
  auto st = prune(u.s, u.f, u.ladder);
  auto c = classify(st);
  CHECK(c.points.size() == st.inside.size());
  std::size_t sum = 0;
  for (auto k : c.counts) sum += k;
  CHECK(sum == st.inside.size());
  for (int l : c.label) CHECK((l >= 0 && l <= 3));
  auto c2 = classify(st);
  CHECK(c2.label == c.label);

  const std::string path = "test_highlow_labels.csv";
  write_labels(path, st, c);
  std::ifstream is(path);
  std::string line;
  std::getline(is, line);
  CHECK(line == "x,label");
  std::size_t rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == c.points.size());
  std::remove(path.c_str());
}

TEST_CASE("one-level ladder uses only the outer labels") {
  auto u = bump(256, 1);
  auto st = prune(u.s, u.f, u.ladder);
  auto c = classify(st);
  CHECK(c.counts.size() == 2);
  CHECK(c.counts[0] + c.counts[1] == st.inside.size());
  CHECK(low_lemma_check(st).ratio == 0.0);
  CHECK(high_lemma_check(st).ratio == 0.0);
}

TEST_CASE("empty U and zero f are vacuous") {
  auto u = bump(256);
  HighLowOptions o;
  o.r = 1e300;
  o.alpha = 1.0;
  auto st = prune(u.s, u.f, u.ladder, o);
  auto c = classify(st);
  for (bool b : c.in_U) CHECK(!b);
  CHECK(fm_comparable_check(st, c).ratio == 0.0);

  AtomicSum z = u.f;
  z.coef.setZero();
  auto sz = prune(u.s, z, u.ladder);
  CHECK(std::isinf(sz.lambda));
  CHECK(low_lemma_check(sz).ratio == 0.0);
  CHECK(high_lemma_check(sz).ratio == 0.0);
}

TEST_CASE("lemma constants on the bump family") {
  auto u = bump(256);
  auto st = prune(u.s, u.f, u.ladder);
  CHECK(st.monotone_violations == 0);
  CHECK(low_lemma_check(st).ratio < 4.0);
  CHECK(high_lemma_check(st).ratio < 0.1);
  CHECK(fm_comparable_check(st, classify(st)).ratio <= 0.05);
}
