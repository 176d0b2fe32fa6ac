#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "declab/ineqlab.hpp"
#include "declab/seqgen.hpp"

namespace declab {

struct ScenarioConfig {
  std::string scenario;
  std::vector<long> N;
  std::vector<int> L{1};       // 0 means round(N^{1/4})
  std::vector<int> L1{1};
  std::vector<double> p{4.0};
  std::vector<double> q{0.0};  // 0 means q = p
  std::vector<double> gamma{0.0};  // T = N^gamma, 0 when unused
  std::vector<double> theta{1.0};
  SeqKind kind = SeqKind::Log;
  std::vector<std::uint64_t> seeds{0};
  std::map<std::string, double> options;
  bool timing = false;
  unsigned threads = 0;

  double option(const std::string& key, double fallback) const;
};

struct GridPoint {
  Params params;
  double gamma = 0.0;
  std::size_t index = 0;
};

struct ResultRow {
  std::string scenario;
  Params params;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  std::optional<double> paper_bound;
  std::string fit_group;
  double seconds = 0.0;
};

const std::vector<std::string>& preset_names();
ScenarioConfig preset(const std::string& name);
// Keys of the JSON object override the base; "scenario" selects the preset when base is empty.
ScenarioConfig load_config(const std::string& path, const std::optional<ScenarioConfig>& base = std::nullopt);
ScenarioConfig config_from_json(const std::string& text, const std::optional<ScenarioConfig>& base = std::nullopt);

// Cartesian product in the order N, L, L1, p, q, gamma, theta, seed; throws on the first invalid point.
std::vector<GridPoint> expand(const ScenarioConfig& cfg);

std::vector<ResultRow> run_point(const ScenarioConfig& cfg, const GridPoint& pt, const std::string& out_dir = "");
// Points run on a worker pool; rows come back in grid order.
std::vector<ResultRow> run(const ScenarioConfig& cfg, const std::string& out_dir = "");

const std::vector<std::string>& csv_columns();
std::string to_csv(const std::vector<ResultRow>& rows);
void write_csv(const std::string& path, const std::vector<ResultRow>& rows);

// Rows as string maps keyed by column name.
using CsvTable = std::vector<std::map<std::string, std::string>>;
CsvTable read_csv(const std::string& path);

struct GroupFit {
  std::string group;
  ExponentFit fit;
  std::size_t points = 0;
};

// OLS of log2(ratio) against log2(x) per group of identical key columns.
std::vector<GroupFit> fit_table(const CsvTable& rows, const std::string& x, const std::vector<std::string>& keys,
                                std::size_t min_points = 4);
// Per fit_group fit of the per-N median ratio.
std::vector<GroupFit> summary_fits(const std::vector<ResultRow>& rows);
std::string summary_json(const ScenarioConfig& cfg, const std::vector<ResultRow>& rows);

}  // namespace declab
