#include "declab/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "declab/counting.hpp"
#include "declab/highlow.hpp"
#include "declab/parallel.hpp"
#include "declab/transfer.hpp"

namespace declab {

namespace {

using json = nlohmann::json;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string tag(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::vector<long> powers(int lo, int hi, int step = 2) {
  std::vector<long> v;
  for (int e = lo; e <= hi; e += step) v.push_back(1L << e);
  return v;
}

std::vector<std::uint64_t> seed_range(std::uint64_t n) {
  std::vector<std::uint64_t> v;
  for (std::uint64_t i = 0; i < n; ++i) v.push_back(i);
  return v;
}

SeqKind parse_kind(const std::string& s) {
  if (s == "log") return SeqKind::Log;
  if (s == "ap_rich") return SeqKind::ApRich;
  if (s == "random") return SeqKind::Random;
  throw std::invalid_argument("unknown sequence kind " + s);
}

GenDirichletSeq make_seq(const ScenarioConfig& cfg, const Params& P) {
  switch (cfg.kind) {
    case SeqKind::Log: return gen_log(P.N);
    case SeqKind::ApRich: return gen_ap_rich(P.N);
    case SeqKind::Random: return gen_random(P.N, P.theta, P.seed);
    default: throw std::invalid_argument("custom sequences are not available from a config");
  }
}

std::string describe(const GridPoint& pt) {
  const Params& P = pt.params;
  return "N=" + std::to_string(P.N) + " L=" + std::to_string(P.L) + " L1=" + std::to_string(P.L1) + " p=" + tag(P.p) +
         " q=" + tag(P.q) + " gamma=" + tag(pt.gamma) + " theta=" + tag(P.theta) + " seed=" + std::to_string(P.seed);
}

std::mt19937_64 point_rng(const Params& P, std::uint64_t salt) {
  std::seed_seq seq{static_cast<std::uint64_t>(P.N), static_cast<std::uint64_t>(P.L), P.seed, salt};
  return std::mt19937_64(seq);
}

ResultRow base_row(const ScenarioConfig& cfg, const Params& P, std::string group) {
  ResultRow r;
  r.scenario = cfg.scenario;
  r.params = P;
  r.fit_group = std::move(group);
  return r;
}

ResultRow from_report(const ScenarioConfig& cfg, const Params& P, const RatioReport& rep, std::string group) {
  ResultRow r = base_row(cfg, P, std::move(group));
  r.lhs = rep.lhs;
  r.rhs = rep.rhs;
  r.ratio = rep.ratio;
  r.paper_bound = rep.paper_bound;
  return r;
}

using Rows = std::vector<ResultRow>;

Rows canonical(const ScenarioConfig& cfg, const GridPoint& pt) {
  const Params& P = pt.params;
  const auto s = make_seq(cfg, P);
  const auto cells = canonical_partition(s, P.L);
  const auto f = extremal_family(Family::ConstantBump, s, cells);
  auto rep = decoupling_ratio(f, cells, P.p);
  rep.paper_bound = P.p > 6 ? std::pow(std::sqrt(static_cast<double>(P.N)) / P.L, 0.5 - 3.0 / P.p) : 1.0;
  return {from_report(cfg, P, rep, "p=" + tag(P.p) + ";L=" + std::to_string(P.L))};
}

Rows smallcap(const ScenarioConfig& cfg, const GridPoint& pt, bool random) {
  const Params& P = pt.params;
  const auto s = make_seq(cfg, P);
  const auto cells = small_cap_partition(s, P.L, P.L1);
  const auto f = extremal_family(random ? Family::RandomSignSmallBall : Family::ConstantBump, s, cells, P.seed);
  const auto rep = small_cap_ratio(f, cells, P.N, P.L, P.L1, P.p, P.q);
  return {from_report(cfg, P, rep, random ? "random" : "constant")};
}

// Cells in the lower and upper thirds of the frequency range, every cross pair transversal.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> transversal_groups(const std::vector<FreqCell>& cells, long N) {
  std::vector<std::size_t> A, B;
  if (cells.size() < 2) return {A, B};
  const double lo = cells.front().balls.front().lo, hi = cells.back().balls.back().hi;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i].balls.back().hi <= lo + (hi - lo) / 3) A.push_back(i);
    if (cells[i].balls.front().lo >= hi - (hi - lo) / 3) B.push_back(i);
  }
  std::vector<std::size_t> Bt;
  for (std::size_t b : B) {
    bool ok = true;
    for (std::size_t a : A) ok = ok && transversal(cells[a], cells[b], N);
    if (ok) Bt.push_back(b);
  }
  if (Bt.empty()) A.clear();
  return {A, Bt};
}

std::vector<std::size_t> pick(std::vector<std::size_t> from, std::size_t k, std::mt19937_64& rng) {
  std::shuffle(from.begin(), from.end(), rng);
  from.resize(std::min(k, from.size()));
  std::sort(from.begin(), from.end());
  return from;
}

Rows bikakeya(const ScenarioConfig& cfg, const GridPoint& pt) {
  const Params& P = pt.params;
  const auto s = make_seq(cfg, P);
  const auto cells = canonical_partition(s, P.L);
  const FatAP ball = ball_P_of_L(s, P.L);
  const std::string Ltag = ";L=" + std::to_string(P.L);
  Rows rows;

  const auto [A, B] = transversal_groups(cells, P.N);
  RatioReport best;
  if (!A.empty()) {
    auto rng = point_rng(P, 1);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const int configs = static_cast<int>(cfg.option("configs", 50));
    auto family = [&](const std::vector<std::size_t>& group) {
      std::vector<WeightedAP> fam;
      for (std::size_t c : pick(group, 1 + rng() % 4, rng)) {
        const int copies = 1 + static_cast<int>(rng() % 3);
        for (int k = 0; k < copies; ++k)
          fam.push_back({P_I(cells[c], (2 * U(rng) - 1) * ball.R), 0.1 + 0.9 * U(rng), c});
      }
      return fam;
    };
    for (int k = 0; k < configs; ++k) {
      const auto f1 = family(A);
      const auto f2 = family(B);
      const auto rep = bilinear_kakeya_check(f1, f2, ball, cells, P.N);
      if (rep.ratio >= best.ratio) best = rep;
    }
  }
  rows.push_back(from_report(cfg, P, best, "kakeya" + Ltag));

  const auto sweep = transversal_intersection_sweep(s, P.L);
  ResultRow r = base_row(cfg, P, "intersection" + Ltag);
  r.lhs = sweep.intersection;
  r.rhs = sweep.constant > 0 ? sweep.intersection / sweep.constant : 0.0;
  r.ratio = sweep.constant;
  rows.push_back(r);

  const auto cont = ball_containment(s, P.L);
  ResultRow c = base_row(cfg, P, "containment" + Ltag);
  c.lhs = static_cast<double>(cont.violations);
  c.rhs = static_cast<double>(cont.cells);
  c.ratio = c.lhs / c.rhs;
  rows.push_back(c);
  return rows;
}

Rows birestriction(const ScenarioConfig& cfg, const GridPoint& pt) {
  const Params& P = pt.params;
  const auto s = make_seq(cfg, P);
  const auto cells = canonical_partition(s, P.L);
  const FatAP ball = ball_P_of_L(s, P.L);
  const auto [A, B] = transversal_groups(cells, P.N);
  RatioReport best;
  if (!A.empty()) {
    auto rng = point_rng(P, 2);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const int configs = static_cast<int>(cfg.option("configs", 50));
    auto atoms = [&](const std::vector<std::size_t>& group) {
      std::vector<double> fr;
      std::vector<cdouble> co;
      for (std::size_t c : pick(group, 1 + rng() % 4, rng))
        for (Eigen::Index i = cells[c].first; i < cells[c].first + cells[c].count; ++i) {
          fr.push_back(s[i]);
          co.push_back(std::polar(1.0, 2 * 3.141592653589793 * U(rng)));
        }
      AtomicSum f = make_atomic(Eigen::Map<Eigen::VectorXd>(fr.data(), static_cast<Eigen::Index>(fr.size())),
                                Eigen::Map<Eigen::VectorXcd>(co.data(), static_cast<Eigen::Index>(co.size())));
      f.has_envelope = true;
      f.envelope.width = cells.front().radius;
      return f;
    };
    for (int k = 0; k < configs; ++k) {
      const AtomicSum F1 = atoms(A), F2 = atoms(B);
      const FatAP B0 = translated(ball, (U(rng) - 0.5) * ball.R);
      const auto rep = bilinear_restriction_check(F1, F2, B0, P.N);
      if (rep.ratio >= best.ratio) best = rep;
    }
  }
  return {from_report(cfg, P, best, "restriction;L=" + std::to_string(P.L))};
}

Rows highlow(const ScenarioConfig& cfg, const GridPoint& pt, const std::string& out_dir) {
  const Params& P = pt.params;
  const auto s = make_seq(cfg, P);
  const auto lad = make_ladder(P.N, cfg.option("epsilon", 0.1), static_cast<int>(cfg.option("levels", 3)));
  const auto f = extremal_family(Family::ConstantBump, s, canonical_partition(s, lad.L.back()));
  HighLowOptions o;
  o.C_eps = cfg.option("C_eps", 10.0);
  const PruneState st = prune(s, f, lad, o);
  Rows rows;
  rows.push_back(from_report(cfg, P, low_lemma_check(st), "low_lemma"));
  rows.push_back(from_report(cfg, P, high_lemma_check(st), "high_lemma"));
  const Classification cls = classify(st);
  rows.push_back(from_report(cfg, P, fm_comparable_check(st, cls), "fm_comparable"));

  double split_err = 0.0;
  for (int m = 1; m < lad.levels(); ++m) {
    const auto parts = highlow_split(st, m);
    const auto& g = st.g[static_cast<std::size_t>(m - 1)];
    const double scale = g.cwiseAbs().maxCoeff();
    if (scale > 0) split_err = std::max(split_err, (parts.low + parts.high - g).cwiseAbs().maxCoeff() / scale);
  }
  ResultRow sp = base_row(cfg, P, "split");
  sp.lhs = split_err;
  sp.rhs = 1.0;
  sp.ratio = split_err;
  rows.push_back(sp);

  HighLowOptions tight = o;
  tight.C_eps = cfg.option("pruning_C_eps", 0.1);
  tight.check_leakage = true;
  const PruneState pr = prune(s, f, lad, tight);
  std::size_t kept = 0, packets = 0;
  for (int m = 0; m < lad.levels(); ++m) {
    kept += pr.kept[m];
    packets += pr.packets[m];
  }
  ResultRow mono = base_row(cfg, P, "monotone");
  mono.lhs = static_cast<double>(pr.monotone_violations);
  mono.rhs = static_cast<double>(pr.n) * lad.levels();
  mono.ratio = mono.lhs / mono.rhs;
  rows.push_back(mono);
  ResultRow leak = base_row(cfg, P, "leakage");
  leak.lhs = static_cast<double>(packets - kept);
  leak.rhs = static_cast<double>(packets);
  leak.ratio = pr.max_leakage;
  leak.paper_bound = 1e-6;
  rows.push_back(leak);

  if (!out_dir.empty()) {
    const std::string stem = out_dir + "/highlow_N" + std::to_string(P.N);
    write_labels(stem + "_labels.csv", st, cls);
    for (int m = 0; m < lad.levels(); ++m)
      dump(GridField{st.origin, st.h, st.g[static_cast<std::size_t>(m)].cast<cdouble>()},
           stem + "_g" + std::to_string(m + 1) + ".bin");
  }
  return rows;
}

Rows count_rows(const ScenarioConfig& cfg, const GridPoint& pt) {
  const Params& P = pt.params;
  const auto s = make_seq(cfg, P);
  const double n = static_cast<double>(P.N);
  const auto c = count_solutions(s, cfg.option("tol_scale", 1.0) * P.theta / (n * n));
  ResultRow r = base_row(cfg, P, kind_name(cfg.kind));
  r.lhs = static_cast<double>(c.total);
  r.rhs = static_cast<double>(c.diagonal);
  r.ratio = r.lhs;
  r.paper_bound = std::pow(n, 1.5);
  return {r};
}

Rows ap_rows(const ScenarioConfig& cfg, const GridPoint& pt) {
  const Params& P = pt.params;
  const double rt = std::sqrt(static_cast<double>(P.N));
  const auto s = gen_ap_rich(P.N);
  Rows rows;
  ResultRow r = base_row(cfg, P, "ap_rich");
  r.lhs = static_cast<double>(ap_intersection_count(s.terms, 1.0 / rt));
  r.rhs = std::floor(rt / 10);
  r.ratio = r.lhs;
  r.paper_bound = r.rhs;
  rows.push_back(r);

  const long k0 = std::lround(rt);
  if (k0 * k0 == P.N) {
    const long keep = ap_rich_admissible_end(P.N);
    double err = 0.0, used = 0.0;
    for (long k = 1; k * k0 - k * k <= keep && k < k0; ++k) {
      err = std::max(err, std::abs(s[k * k0 - k * k] - static_cast<double>(k) / rt));
      used += 1;
    }
    ResultRow id = base_row(cfg, P, "identity");
    id.lhs = err;
    id.rhs = used;
    id.ratio = err;
    id.paper_bound = 1e-12;
    rows.push_back(id);
  }

  ResultRow lg = base_row(cfg, P, "log");
  lg.lhs = static_cast<double>(ap_intersection_count(gen_log(P.N).terms, 1.0 / rt));
  lg.rhs = std::pow(static_cast<double>(P.N), 1.0 / 3 + 0.5 / 3);
  lg.ratio = lg.lhs;
  lg.paper_bound = lg.rhs;
  rows.push_back(lg);
  return rows;
}

Rows incidence_rows(const ScenarioConfig& cfg, const GridPoint& pt) {
  const Params& P = pt.params;
  const auto s = make_seq(cfg, P);
  IncidenceSpec spec;
  spec.N = P.N;
  spec.L = P.L;
  spec.L1 = P.L1;
  spec.M = static_cast<int>(cfg.option("multiplicity", 1));
  spec.seed = P.seed;
  spec.keep = cfg.option("keep", 0.5);
  spec.bush = cfg.option("bush", 0) != 0;
  const auto coll = incidence_collection(s, spec);
  Rows rows;
  for (int r : {1, 2, 4}) {
    const auto rep = incidence_experiment(coll, P.N, P.L, r);
    ResultRow row = base_row(cfg, P, "r=" + std::to_string(r) + (spec.bush ? ";bush" : ""));
    row.lhs = rep.Qr;
    row.rhs = rep.bound;
    row.ratio = rep.constant;
    row.paper_bound = 16.0;
    rows.push_back(row);
  }
  return rows;
}

Rows transfer_rows(const ScenarioConfig& cfg, const GridPoint& pt) {
  const Params& P = pt.params;
  const auto s = normalize_unit_gap(make_seq(cfg, P));
  const double p = P.p, n = static_cast<double>(P.N);
  const Eigen::Index M = s.size();
  const double bnorm = std::pow(static_cast<double>(M), 1.0 / p);
  const double bound = std::sqrt(n) + std::pow(P.T, 1.0 / p) * std::pow(n, 0.25 - 0.5 / p);
  const std::string g = ";gamma=" + tag(pt.gamma);
  Rows rows;
  auto direct = [&](const Eigen::VectorXcd& b, const std::string& group) {
    const AtomicSum f = make_atomic(s.terms, b);
    ResultRow r = base_row(cfg, P, group);
    r.lhs = lp_norm(f, p, Interval{0.0, P.T}).value;
    r.rhs = bnorm;
    r.ratio = r.lhs / r.rhs;
    r.paper_bound = bound;
    return r;
  };
  rows.push_back(direct(random_signs(M, P.seed).cast<cdouble>(), "direct;b=random" + g));
  if (P.seed != cfg.seeds.front()) return rows;

  const Eigen::VectorXcd one = Eigen::VectorXcd::Ones(M);
  rows.push_back(direct(one, "direct;b=one" + g));
  const CurveLift lift = build_lift(s);
  if (pt.gamma >= cfg.option("gamma_2d_min", 1.5)) {
    const double I = eval_2d_curve_sum(lift, one, P.T / n, p);
    ResultRow r = base_row(cfg, P, "predicted;b=one" + g);
    r.lhs = transfer_prediction(P.N, P.T, I, p);
    r.rhs = bnorm;
    r.ratio = r.lhs / r.rhs;
    r.paper_bound = bound;
    rows.push_back(r);
  }
  ResultRow d = base_row(cfg, P, "defect" + g);
  d.lhs = lift.defect();
  d.rhs = 1.0 / n;
  d.ratio = d.lhs / d.rhs;
  d.paper_bound = 0.25;
  rows.push_back(d);
  return rows;
}

void check_point(const ScenarioConfig& cfg, const GridPoint& pt) {
  const Params& P = pt.params;
  const std::string& id = cfg.scenario;
  auto fail = [&](const std::string& why) { throw std::invalid_argument("invalid grid point " + describe(pt) + ": " + why); };
  if (P.N < 64) fail("N must be at least 64");
  if (P.theta <= 0 || P.theta > 1) fail("theta outside (0, 1]");
  const long M = short_length(P.N);
  if (P.L < 1 || P.L > M) fail("L outside [1, floor(sqrt N)]");
  if (P.L1 < 1 || P.L1 > P.L) fail("L1 outside [1, L]");
  if (P.p < 2) fail("p below 2");
  if (id.rfind("smallcap", 0) == 0) {
    if (P.p < 4) fail("small cap needs p >= 4");
    if (P.q != P.p && !(P.L1 == 1 && 1 / P.q + 3 / P.p <= 1)) fail("q outside the admissible range");
  }
  if (id == "transfer-sweep" && (pt.gamma < 1 || pt.gamma > 2)) fail("gamma outside [1, 2]");
  if (id == "count-solutions" && P.N > (1L << 16)) fail("N above 2^16");
}

}  // namespace

double ScenarioConfig::option(const std::string& key, double fallback) const {
  auto it = options.find(key);
  return it == options.end() ? fallback : it->second;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"canonical-p6",   "canonical-p8-sharp", "smallcap-constant", "smallcap-random",
                                              "bikakeya",       "birestriction",      "highlow",           "count-solutions",
                                              "ap-intersect",   "incidence",          "transfer-sweep"};
  return names;
}

ScenarioConfig preset(const std::string& name) {
  ScenarioConfig c;
  c.scenario = name;
  if (name == "canonical-p6" || name == "canonical-p8-sharp") {
    c.N = powers(8, 14);
    c.p = {name == "canonical-p6" ? 6.0 : 8.0};
  } else if (name == "smallcap-constant" || name == "smallcap-random") {
    c.N = powers(8, 14);
    c.L = {0};
    if (name == "smallcap-random") c.seeds = seed_range(32);
  } else if (name == "bikakeya") {
    c.N = powers(8, 14);
    c.L = {1, 4, 16};
  } else if (name == "birestriction") {
    c.N = powers(8, 14);
    c.L = {4};
  } else if (name == "highlow") {
    c.N = powers(8, 14);
  } else if (name == "count-solutions") {
    c.N = powers(8, 16, 1);
  } else if (name == "ap-intersect") {
    c.N = powers(8, 14);
  } else if (name == "incidence") {
    c.N = {256, 1024};
    c.L = {4};
    c.seeds = seed_range(8);
  } else if (name == "transfer-sweep") {
    c.N = powers(8, 14);
    c.gamma = {1.0, 1.5, 1.75, 2.0};
    c.seeds = seed_range(8);
  } else {
    throw std::invalid_argument("unknown preset " + name);
  }
  return c;
}

ScenarioConfig config_from_json(const std::string& text, const std::optional<ScenarioConfig>& base) {
  const json j = json::parse(text);
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  ScenarioConfig c;
  if (base)
    c = *base;
  else if (j.contains("scenario"))
    c = preset(j.at("scenario").get<std::string>());
  else
    throw std::invalid_argument("config names no scenario");
  auto list = [&](const json& v, auto& out) {
    using T = typename std::decay_t<decltype(out)>::value_type;
    out.clear();
    if (v.is_array())
      for (const auto& x : v) out.push_back(x.get<T>());
    else
      out.push_back(v.get<T>());
  };
  for (const auto& [key, v] : j.items()) {
    if (key == "scenario") {
      if (base && v.get<std::string>() != c.scenario) c.scenario = v.get<std::string>();
    } else if (key == "N") {
      list(v, c.N);
    } else if (key == "L") {
      list(v, c.L);
    } else if (key == "L1") {
      list(v, c.L1);
    } else if (key == "p") {
      list(v, c.p);
    } else if (key == "q") {
      list(v, c.q);
    } else if (key == "gamma") {
      list(v, c.gamma);
    } else if (key == "theta") {
      list(v, c.theta);
    } else if (key == "kind") {
      c.kind = parse_kind(v.get<std::string>());
    } else if (key == "seeds") {
      list(v, c.seeds);
    } else if (key == "seed_count") {
      c.seeds = seed_range(v.get<std::uint64_t>());
    } else if (key == "options") {
      for (const auto& [k, x] : v.items()) c.options[k] = x.get<double>();
    } else if (key == "timing") {
      c.timing = v.get<bool>();
    } else if (key == "threads") {
      c.threads = v.get<unsigned>();
    } else {
      throw std::invalid_argument("unknown config key " + key);
    }
  }
  if (c.seeds.empty()) throw std::invalid_argument("config needs at least one seed");
  return c;
}

ScenarioConfig load_config(const std::string& path, const std::optional<ScenarioConfig>& base) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return config_from_json(ss.str(), base);
}

std::vector<GridPoint> expand(const ScenarioConfig& cfg) {
  std::vector<GridPoint> out;
  for (long N : cfg.N)
    for (int L0 : cfg.L)
      for (int L1 : cfg.L1)
        for (double p : cfg.p)
          for (double q0 : cfg.q)
            for (double g : cfg.gamma)
              for (double th : cfg.theta)
                for (std::uint64_t seed : cfg.seeds) {
                  GridPoint pt;
                  Params& P = pt.params;
                  P.N = N;
                  P.L = L0 > 0 ? L0 : static_cast<int>(std::lround(std::pow(static_cast<double>(N), 0.25)));
                  P.L1 = L1;
                  P.p = p;
                  P.q = q0 > 0 ? q0 : p;
                  P.theta = th;
                  P.seed = seed;
                  pt.gamma = g;
                  P.T = g > 0 ? pad_to_period(std::pow(static_cast<double>(N), g), N) : 0.0;
                  pt.index = out.size();
                  check_point(cfg, pt);
                  out.push_back(pt);
                }
  return out;
}

std::vector<ResultRow> run_point(const ScenarioConfig& cfg, const GridPoint& pt, const std::string& out_dir) {
  const auto t0 = std::chrono::steady_clock::now();
  Rows rows;
  const std::string& id = cfg.scenario;
  if (id == "canonical-p6" || id == "canonical-p8-sharp")
    rows = canonical(cfg, pt);
  else if (id == "smallcap-constant" || id == "smallcap-random")
    rows = smallcap(cfg, pt, id == "smallcap-random");
  else if (id == "bikakeya")
    rows = bikakeya(cfg, pt);
  else if (id == "birestriction")
    rows = birestriction(cfg, pt);
  else if (id == "highlow")
    rows = highlow(cfg, pt, out_dir);
  else if (id == "count-solutions")
    rows = count_rows(cfg, pt);
  else if (id == "ap-intersect")
    rows = ap_rows(cfg, pt);
  else if (id == "incidence")
    rows = incidence_rows(cfg, pt);
  else if (id == "transfer-sweep")
    rows = transfer_rows(cfg, pt);
  else
    throw std::invalid_argument("unknown scenario " + id);
  if (cfg.timing) {
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (auto& r : rows) r.seconds = dt;
  }
  return rows;
}

std::vector<ResultRow> run(const ScenarioConfig& cfg, const std::string& out_dir) {
  if (cfg.threads) set_thread_budget(cfg.threads);
  const auto points = expand(cfg);
  std::vector<Rows> results(points.size());
  std::vector<std::string> errors(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      try {
        results[i] = run_point(cfg, points[i], out_dir);
      } catch (const std::exception& e) {
        errors[i] = describe(points[i]) + ": " + e.what();
      }
    }
  };
  const std::size_t n = std::min<std::size_t>(thread_budget(), points.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (!e.empty()) throw std::runtime_error(e);
  Rows out;
  for (auto& r : results) out.insert(out.end(), r.begin(), r.end());
  return out;
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols{"scenario", "N",   "theta", "L",     "L1",          "p",         "q",      "T",
                                             "seed",     "lhs", "rhs",   "ratio", "paper_bound", "fit_group", "seconds"};
  return cols;
}

std::string to_csv(const std::vector<ResultRow>& rows) {
  std::string out;
  for (std::size_t i = 0; i < csv_columns().size(); ++i) out += (i ? "," : "") + csv_columns()[i];
  out += "\n";
  for (const auto& r : rows) {
    if (r.fit_group.find(',') != std::string::npos || r.scenario.find(',') != std::string::npos)
      throw std::invalid_argument("comma in a text field");
    const Params& P = r.params;
    out += r.scenario + "," + std::to_string(P.N) + "," + num(P.theta) + "," + std::to_string(P.L) + "," +
           std::to_string(P.L1) + "," + num(P.p) + "," + num(P.q) + "," + num(P.T) + "," + std::to_string(P.seed) + "," +
           num(r.lhs) + "," + num(r.rhs) + "," + num(r.ratio) + "," + (r.paper_bound ? num(*r.paper_bound) : "") + "," +
           r.fit_group + "," + num(r.seconds) + "\n";
  }
  return out;
}

void write_csv(const std::string& path, const std::vector<ResultRow>& rows) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path);
  os << to_csv(rows);
}

CsvTable read_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  auto split = [](const std::string& line) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string x;
    while (std::getline(ss, x, ',')) f.push_back(x);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    return f;
  };
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("empty csv " + path);
  const auto header = split(line);
  CsvTable rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != header.size()) throw std::runtime_error("ragged csv row: " + line);
    std::map<std::string, std::string> row;
    for (std::size_t i = 0; i < f.size(); ++i) row[header[i]] = f[i];
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<GroupFit> fit_table(const CsvTable& rows, const std::string& x, const std::vector<std::string>& keys,
                                std::size_t min_points) {
  if (rows.empty()) throw std::invalid_argument("no rows to fit");
  for (const auto& k : keys)
    if (!rows.front().count(k)) throw std::invalid_argument("unknown column " + k);
  if (!rows.front().count(x)) throw std::invalid_argument("unknown column " + x);
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> groups;
  for (const auto& r : rows) {
    std::string g;
    for (std::size_t i = 0; i < keys.size(); ++i) g += (i ? "," : "") + keys[i] + "=" + r.at(keys[i]);
    const double xv = std::stod(r.at(x)), yv = std::stod(r.at("ratio"));
    if (!(xv > 0) || !(yv > 0)) continue;
    groups[g].first.push_back(xv);
    groups[g].second.push_back(yv);
  }
  std::vector<GroupFit> out;
  for (const auto& [g, xy] : groups) {
    if (xy.first.size() < min_points)
      throw std::invalid_argument("group " + g + " has " + std::to_string(xy.first.size()) + " points");
    out.push_back({g, fit_exponent(xy.first, xy.second, min_points), xy.first.size()});
  }
  return out;
}

std::vector<GroupFit> summary_fits(const std::vector<ResultRow>& rows) {
  std::map<std::string, std::map<long, std::vector<double>>> groups;
  for (const auto& r : rows)
    if (r.ratio > 0) groups[r.fit_group][r.params.N].push_back(r.ratio);
  std::vector<GroupFit> out;
  for (auto& [g, byN] : groups) {
    if (byN.size() < 2) continue;
    std::vector<double> x, y;
    for (auto& [N, v] : byN) {
      std::sort(v.begin(), v.end());
      x.push_back(static_cast<double>(N));
      y.push_back(v[v.size() / 2]);
    }
    out.push_back({g, fit_exponent(x, y, 2), x.size()});
  }
  return out;
}

std::string summary_json(const ScenarioConfig& cfg, const std::vector<ResultRow>& rows) {
  json j;
  j["scenario"] = cfg.scenario;
  j["kind"] = kind_name(cfg.kind);
  j["rows"] = rows.size();
  j["fits"] = json::array();
  for (const auto& f : summary_fits(rows))
    j["fits"].push_back({{"group", f.group},
                         {"x", "N"},
                         {"points", f.points},
                         {"slope", f.fit.slope},
                         {"intercept", f.fit.intercept},
                         {"residual", f.fit.residual}});
  return j.dump(2) + "\n";
}

}  // namespace declab
