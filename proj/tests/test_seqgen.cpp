#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "declab/seqgen.hpp"

using namespace declab;

TEST_CASE("validate rejects short input") {
  Eigen::VectorXd a(2);
  a << 0, 1;
  CHECK_THROWS_WITH_AS(validate(a, 100, 1.0), "too short to test convexity", std::invalid_argument);
}

TEST_CASE("arithmetic progression has no convexity") {
  Eigen::VectorXd a = Eigen::VectorXd::LinSpaced(10, 1.0, 10.0) / 100.0;
  auto r = validate(a, 100, 1.0);
  CHECK_FALSE(r.valid);
  CHECK(r.violating.has_value());
}

TEST_CASE("literal log block is concave, its reflection is admissible") {
  Eigen::VectorXd a(10);
  for (int n = 0; n < 10; ++n) a[n] = std::log(101.0 + n) - std::log(101.0);
  CHECK_FALSE(validate(a, 100, 1.0).valid);
  Eigen::VectorXd b(10);
  for (int n = 0; n < 10; ++n) b[n] = a[9] - a[9 - n];
  CHECK(validate(b, 100, 1.0).valid);
}

TEST_CASE("gen_log") {
  CHECK(log_terms(100)[1] == doctest::Approx(std::log(102.0) - std::log(101.0)).epsilon(1e-12));
  CHECK(log_terms(100)[1] == doctest::Approx(0.0098523).epsilon(1e-5));
  for (long N : {64L, 256L, 1024L, 4096L, 16384L}) {
    auto s = gen_log(N);
    CHECK(s.size() == short_length(N));
    CHECK(s[0] == 0.0);
    CHECK(validate(s).valid);
  }
  CHECK(short_length(99) == 9);
  CHECK(short_length(100) == 10);
}

TEST_CASE("ap-rich sequence") {
  CHECK(ap_rich_value(64, 7) == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(ap_rich_value(64, 0) == 0.0);
  auto s = gen_ap_rich(64);
  CHECK(s.size() == 64 / 8 + 1);
  CHECK(validate(s).valid);
  for (long n = 0; n <= ap_rich_admissible_end(64); ++n) CHECK(s[n] == ap_rich_value(64, double(n)));
  // the closed form itself leaves the admissible range before n = 8 at N = 64
  Eigen::VectorXd g(9);
  for (int n = 0; n <= 8; ++n) g[n] = ap_rich_value(64, n);
  CHECK_FALSE(validate(g, 64, 1.0).valid);
  for (long N : {256L, 1024L, 4096L}) {
    const double r = std::sqrt(double(N));
    for (long k = 1; k * r - k * k <= N / 8; ++k)
      CHECK(std::abs(ap_rich_value(N, k * r - k * k) - k / r) <= 1e-12);
    CHECK(validate(gen_ap_rich(N)).valid);
  }
  CHECK_THROWS_AS(gen_ap_rich(36), std::invalid_argument);
}

TEST_CASE("gen_random determinism and admissibility") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto s = gen_random(1024, 0.5, seed);
    CHECK(validate(s).valid);
    CHECK(s.terms == gen_random(1024, 0.5, seed).terms);
    CHECK(s.terms != gen_random(1024, 0.5, seed + 1).terms);
  }
}

TEST_CASE("rescale_segment") {
  auto s = gen_log(10000);
  auto r = rescale_segment(s, 10, 0, 10);
  CHECK(r.N == 100);
  CHECK(validate(r).valid);
  auto id = rescale_segment(s, 1, 0, s.size());
  CHECK((id.terms - s.terms).cwiseAbs().maxCoeff() == 0.0);
  // second differences scale by K^2
  auto t = rescale_segment(s, 10, 3, 20);
  for (int i = 0; i + 2 < 20; ++i) {
    double d0 = s[3 + i + 2] - 2 * s[3 + i + 1] + s[3 + i];
    double d1 = t[i + 2] - 2 * t[i + 1] + t[i];
    CHECK(d1 == doctest::Approx(100 * d0).epsilon(1e-9));
  }
  auto twice = rescale_segment(rescale_segment(s, 10, 0, 30), 1, 0, 30);
  CHECK((twice.terms - rescale_segment(s, 10, 0, 30).terms).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS(rescale_segment(s, 3, 0, 5));
}

TEST_CASE("normalize_unit_gap") {
  auto s = normalize_unit_gap(gen_random(4096, 1.0, 3));
  CHECK(s[0] == 0.0);
  CHECK(s[1] == doctest::Approx(1.0 / 4096).epsilon(1e-12));
}

TEST_CASE("extension keeps the last second difference") {
  auto s = gen_ap_rich(1024);
  const long keep = ap_rich_admissible_end(1024);
  CHECK(keep < 1024 / 8);
  CHECK(double(keep) > 0.09 * 1024);
  const double d = s[keep] - 2 * s[keep - 1] + s[keep - 2];
  CHECK(s[keep + 3] - 2 * s[keep + 2] + s[keep + 1] == doctest::Approx(d).epsilon(1e-6));
}
