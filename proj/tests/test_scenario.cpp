#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "declab/scenario.hpp"

using namespace declab;

namespace {

CsvTable synthetic(const std::vector<double>& x, const std::vector<double>& y) {
  CsvTable t;
  for (std::size_t i = 0; i < x.size(); ++i)
    t.push_back({{"scenario", "s"}, {"N", std::to_string(x[i])}, {"ratio", std::to_string(y[i])}, {"fit_group", "g"}});
  return t;
}

}  // namespace

TEST_CASE("synthetic power laws are recovered") {
  std::vector<double> x, y, c;
  for (int e = 8; e <= 16; e += 2) {
    x.push_back(std::ldexp(1.0, e));
    y.push_back(7 * std::sqrt(x.back()));
    c.push_back(3.0);
  }
  auto f = fit_table(synthetic(x, y), "N", {"scenario"});
  REQUIRE(f.size() == 1);
  CHECK(std::abs(f[0].fit.slope - 0.5) <= 1e-9);
  CHECK(std::abs(fit_table(synthetic(x, c), "N", {"scenario"})[0].fit.slope) <= 1e-12);
  CHECK_THROWS(fit_table(synthetic({256, 1024}, {1, 2}), "N", {"scenario"}));
  CHECK_THROWS(fit_table({}, "N", {"scenario"}));
  CHECK_THROWS(fit_table(synthetic(x, y), "N", {"nope"}));
}

TEST_CASE("noisy slope lands within two standard errors") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> noise(0.0, 0.05);
  std::vector<double> x, y;
  for (int e = 8; e <= 20; ++e)
    for (int k = 0; k < 4; ++k) {
      x.push_back(std::ldexp(1.0, e));
      y.push_back(std::pow(x.back(), 0.3) * std::exp2(noise(rng)));
    }
  auto f = fit_table(synthetic(x, y), "N", {"scenario"})[0];
  double sxx = 0, mean = 0;
  for (double v : x) mean += std::log2(v) / x.size();
  for (double v : x) sxx += (std::log2(v) - mean) * (std::log2(v) - mean);
  CHECK(std::abs(f.fit.slope - 0.3) <= 2 * 0.05 / std::sqrt(sxx));
}

TEST_CASE("presets expand to valid grids") {
  for (const auto& n : preset_names()) {
    auto c = preset(n);
    CHECK(!expand(c).empty());
  }
  CHECK_THROWS(preset("nope"));
  auto s = preset("smallcap-constant");
  auto pts = expand(s);
  CHECK(pts[0].params.L == 4);
  CHECK(pts[0].params.q == 4.0);
}

TEST_CASE("empty grid gives a header-only csv") {
  auto c = preset("canonical-p6");
  c.N.clear();
  auto rows = run(c);
  CHECK(rows.empty());
  CHECK(to_csv(rows) == "scenario,N,theta,L,L1,p,q,T,seed,lhs,rhs,ratio,paper_bound,fit_group,seconds\n");
}

TEST_CASE("runs are deterministic and round trip through csv") {
  auto c = config_from_json(R"({"scenario": "smallcap-random", "N": [256, 1024], "seeds": [3, 4], "threads": 2})");
  CHECK(c.threads == 2);
  const auto a = to_csv(run(c));
  c.threads = 1;
  CHECK(to_csv(run(c)) == a);

  const std::string path = "test_scenario_rows.csv";
  write_csv(path, run(c));
  auto t = read_csv(path);
  CHECK(t.size() == 4);
  CHECK(t[0].at("scenario") == "smallcap-random");
  CHECK(t[0].at("seed") == "3");
  CHECK(t[0].at("fit_group") == "random");
  std::remove(path.c_str());
}

TEST_CASE("invalid points and configs are reported") {
  auto c = preset("smallcap-constant");
  c.p = {3.0};
  try {
    expand(c);
    FAIL("expected an error");
  } catch (const std::invalid_argument& e) {
    const std::string m = e.what();
    CHECK(m.find("N=256") != std::string::npos);
    CHECK(m.find("p=3") != std::string::npos);
  }
  CHECK_THROWS(config_from_json(R"({"scenario": "highlow", "bogus": 1})"));
  CHECK_THROWS(config_from_json(R"({"N": [256]})"));
  CHECK_THROWS(config_from_json(R"({"scenario": "highlow", "kind": "weird"})"));
  auto o = config_from_json(R"({"options": {"configs": 5}})", preset("bikakeya"));
  CHECK(o.option("configs", 50) == 5.0);
  CHECK(o.scenario == "bikakeya");
}
