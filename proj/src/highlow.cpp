#include "declab/highlow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "declab/kernels.hpp"

namespace declab {

namespace {

constexpr double kPiHL = 3.141592653589793238462643383279502884;

Eigen::Index next_pow2(Eigen::Index n) {
  Eigen::Index p = 1;
  while (p < n) p <<= 1;
  return p;
}

long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Segments of length e starting at s0; segment j belongs to tile key(j).
struct Tiling {
  double s0 = 0.0;
  double e = 1.0;
  long A = 1;
  long block = 1;

  explicit Tiling(const FatAP& dual_tile) {
    const FatAP B = tile_base(dual_tile);
    const double V = B.v;
    e = 2 * B.delta;
    A = std::max(1L, std::lround(V / e));
    const long K = std::max(0L, std::lround(B.R / V - 0.5));
    block = A * (2 * K + 1);
    s0 = B.x0 - static_cast<double>(K) * V - B.delta;
  }
  long segment(double x) const { return static_cast<long>(std::floor((x - s0) / e)); }
  long key(long j) const {
    const long b = floor_div(j, block);
    return b * A + (j - b * block) % A;
  }
};

struct Level {
  std::vector<FreqCell> cells;
  std::vector<std::vector<std::size_t>> children;
};

GridField unit_kernel(const Mollifier& rho, double h, double cap) {
  GridField k = sample_kernel([&](double x) { return rho(x); }, h, std::min(rho.support(), cap));
  const double mass = k.samples.real().sum() * h;
  if (mass > 0) k.samples /= mass;
  return k;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t m = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<long>(m), v.end());
  return v[m];
}

class Cascade {
 public:
  Cascade(PruneState& st, const AtomicSum& f, const std::vector<Level>& levels, const HighLowOptions& opt)
      : st_(st), f_(f), levels_(levels), opt_(opt) {}

  Eigen::VectorXcd level_M_part(std::size_t j) const {
    const AtomicSum part = project(f_, levels_.back().cells, j);
    return to_grid(part, st_.origin, st_.h, st_.n, st_.demod).samples;
  }

  GridField kernel(int m, std::size_t j) const {
    const Mollifier rho(cell_kernel(levels_[static_cast<std::size_t>(m - 1)].cells[j]), opt_.rho_reach);
    return unit_kernel(rho, st_.h, st_.h * static_cast<double>(st_.n) / 2);
  }

  Eigen::VectorXd smooth_square(const Eigen::VectorXcd& v, const GridField& k) const {
    GridField sq{st_.origin, st_.h, v.cwiseAbs2().cast<cdouble>()};
    return convolve(sq, k).samples.real();
  }

  Eigen::VectorXcd run(int m, std::size_t j) {
    const int M = st_.ladder.levels();
    const Level& lv = levels_[static_cast<std::size_t>(m - 1)];
    Eigen::VectorXcd base;
    if (m == M) {
      base = level_M_part(j);
    } else {
      base = Eigen::VectorXcd::Zero(st_.n);
      for (std::size_t c : lv.children[j]) base += run(m + 1, c);
    }
    const std::size_t L = static_cast<std::size_t>(m - 1);
    const Mollifier rho(cell_kernel(lv.cells[j]), opt_.rho_reach);
    const GridField k = unit_kernel(rho, st_.h, st_.h * static_cast<double>(st_.n) / 2);
    st_.g[L] += smooth_square(base, k);
    st_.quartic[L] += (base.cwiseAbs2().array().square() * st_.weight.array()).sum() * st_.h;

    Eigen::VectorXcd out = prune_cell(base, rho, k, L);
    for (Eigen::Index i = 0; i < st_.n; ++i)
      if (std::norm(out[i]) > std::norm(base[i])) ++st_.monotone_violations;
    if (opt_.check_leakage) leakage(out, lv.cells[j]);
    st_.fm[L] += out;
    return out;
  }

 private:
  Eigen::VectorXcd prune_cell(const Eigen::VectorXcd& base, const Mollifier& rho, const GridField& k, std::size_t L) {
    const Tiling T(rho.dual_tile());
    if (T.e < st_.h) throw std::runtime_error("grid too coarse for level-M packets");
    std::unordered_map<long, double> height;
    for (Eigen::Index i = 0; i < st_.n; ++i) {
      double& hp = height[T.key(T.segment(st_.x(i)))];
      hp = std::max(hp, std::abs(base[i]));
    }
    std::size_t kept = 0;
    for (const auto& [key, hp] : height)
      if (hp <= st_.lambda) ++kept;
    st_.kept[L] += kept;
    st_.packets[L] += height.size();
    if (kept == height.size()) return base;
    if (kept == 0) return Eigen::VectorXcd::Zero(st_.n);

    auto is_kept = [&](long j) {
      auto it = height.find(T.key(j));
      return it == height.end() || it->second <= st_.lambda;
    };
    GridField u{st_.origin, st_.h, Eigen::VectorXcd::Zero(st_.n)};
    for (Eigen::Index i = 0; i < st_.n; ++i) {
      const double lo = st_.x(i) - st_.h / 2, hi = lo + st_.h;
      double cover = 0.0;
      for (long j = T.segment(lo); j <= T.segment(hi); ++j) {
        const double a = std::max(lo, T.s0 + static_cast<double>(j) * T.e);
        const double b = std::min(hi, T.s0 + static_cast<double>(j + 1) * T.e);
        if (b > a && is_kept(j)) cover += b - a;
      }
      u.samples[i] = cover / st_.h;
    }
    const Eigen::VectorXd s = convolve(u, k).samples.real().cwiseMax(0.0).cwiseMin(1.0);
    Eigen::VectorXcd out(st_.n);
    for (Eigen::Index i = 0; i < st_.n; ++i) out[i] = s[i] * base[i];
    return out;
  }

  void leakage(const Eigen::VectorXcd& v, const FreqCell& cell) {
    const double total = v.squaredNorm();
    if (total == 0.0) return;
    IntervalList band = intervals(scaled(cell.enclosing, opt_.leak_scale));
    for (auto& b : band) {
      b.lo -= st_.demod;
      b.hi -= st_.demod;
    }
    const GridField g{st_.origin, st_.h, v};
    const double out = (v - project(g, band).samples).squaredNorm();
    st_.max_leakage = std::max(st_.max_leakage, std::sqrt(out / total));
  }

  PruneState& st_;
  const AtomicSum& f_;
  const std::vector<Level>& levels_;
  const HighLowOptions& opt_;
};

}  // namespace

ScaleLadder make_ladder(long N, double epsilon, int levels) {
  if (levels < 1 || levels > 4) throw std::invalid_argument("ladder needs 1 to 4 levels");
  if (epsilon <= 0) throw std::invalid_argument("epsilon must be positive");
  ScaleLadder lad;
  lad.epsilon = epsilon;
  const double l2n = std::log2(static_cast<double>(N));
  const long top = std::lround(l2n / 2);
  const long d = std::max(1L, std::lround(epsilon * l2n));
  for (int m = 1; m <= levels; ++m) {
    const long e = top - m * d;
    if (e < 0) throw std::invalid_argument("ladder collapses below 1");
    lad.L.push_back(1 << e);
  }
  return lad;
}

PruneState prune(const GenDirichletSeq& s, const AtomicSum& f, const ScaleLadder& ladder, const HighLowOptions& opt) {
  const int M = ladder.levels();
  if (M < 1) throw std::invalid_argument("empty ladder");
  for (int m = 1; m < M; ++m)
    if (ladder.L[m] >= ladder.L[m - 1]) throw std::invalid_argument("ladder not strictly decreasing");
  if (!f.has_envelope) throw std::invalid_argument("f needs an envelope");
  if (f.size() == 0) throw std::invalid_argument("empty f");

  std::vector<Level> levels(static_cast<std::size_t>(M));
  for (int m = 0; m < M; ++m) levels[m].cells = canonical_partition(s, ladder.L[m]);
  for (int m = 0; m + 1 < M; ++m) {
    const auto& up = levels[m].cells;
    const auto& down = levels[m + 1].cells;
    levels[m].children.assign(up.size(), {});
    std::size_t p = 0;
    for (std::size_t c = 0; c < down.size(); ++c) {
      while (p < up.size() && down[c].first >= up[p].first + up[p].count) ++p;
      if (p == up.size() || down[c].first + down[c].count > up[p].first + up[p].count)
        throw std::invalid_argument("cells do not nest");
      levels[m].children[p].push_back(c);
    }
  }
  segment_atoms(f, levels.back().cells);

  PruneState st;
  st.ladder = ladder;
  st.N = s.N;
  st.cells.reserve(levels.size());
  for (const auto& lv : levels) st.cells.push_back(lv.cells);
  st.ball = ball_P_of_L(s, ladder.L.back());

  const double lo = f.freq.minCoeff(), hi = f.freq.maxCoeff();
  st.demod = (lo + hi) / 2;
  const double sigma = f.envelope.sigma();
  double band = hi - lo + 8 * sigma;
  for (const auto& lv : levels)
    for (const auto& c : lv.cells) band = std::max(band, 4 * kPiHL * cell_kernel(c).spectral_radius());
  st.h = kPiHL / (1.5 * band);
  const WeightSpec W{st.ball, 100};
  const double half = std::max(f.envelope.reach(2.0), weight_support(W));
  st.n = next_pow2(static_cast<Eigen::Index>(std::ceil(2 * half / st.h)) + 1);
  st.origin = st.ball.x0 - static_cast<double>(st.n / 2) * st.h;

  st.weight.resize(st.n);
  for (Eigen::Index i = 0; i < st.n; ++i) {
    st.weight[i] = weight_eval(W, st.x(i));
    if (contains(st.ball, st.x(i))) st.inside.push_back(i);
  }
  st.f = to_grid(f, st.origin, st.h, st.n, st.demod).samples;
  st.g.assign(static_cast<std::size_t>(M), Eigen::VectorXd::Zero(st.n));
  st.fm.assign(static_cast<std::size_t>(M), Eigen::VectorXcd::Zero(st.n));
  st.quartic.assign(static_cast<std::size_t>(M), 0.0);
  st.kept.assign(static_cast<std::size_t>(M), 0);
  st.packets.assign(static_cast<std::size_t>(M), 0);

  Cascade cascade(st, f, levels, opt);
  st.alpha = opt.alpha;
  st.r = opt.r;
  if (st.alpha <= 0 || st.r <= 0) {
    Eigen::VectorXd gM = Eigen::VectorXd::Zero(st.n);
    for (std::size_t j = 0; j < levels.back().cells.size(); ++j)
      gM += cascade.smooth_square(cascade.level_M_part(j), cascade.kernel(M, j));
    std::vector<double> af, ag;
    for (Eigen::Index i : st.inside) {
      af.push_back(std::abs(st.f[i]));
      ag.push_back(gM[i]);
    }
    if (st.alpha <= 0) st.alpha = median(af);
    if (st.r <= 0) st.r = median(ag);
  }
  if (opt.lambda)
    st.lambda = *opt.lambda;
  else if (st.alpha > 0)
    st.lambda = opt.C_eps * std::pow(static_cast<double>(s.N), ladder.epsilon) * st.r / st.alpha;
  else
    st.lambda = std::numeric_limits<double>::infinity();

  for (std::size_t j = 0; j < levels.front().cells.size(); ++j) cascade.run(1, j);
  return st;
}

LowHigh highlow_split(const Eigen::VectorXd& g, double h, const LowPass& eta) {
  GridField gf{0.0, h, g.cast<cdouble>()};
  LowHigh r;
  r.low = convolve(gf, [&](double xi) { return eta(xi); }, 0).samples.real();
  r.high = g - r.low;
  return r;
}

LowHigh highlow_split(const PruneState& st, int m) {
  if (m < 1 || m >= st.ladder.levels()) throw std::invalid_argument("split level out of range");
  return highlow_split(st.g[static_cast<std::size_t>(m - 1)], st.h, build_eta(st.ladder.L[static_cast<std::size_t>(m)], st.N));
}

RatioReport low_lemma_check(const PruneState& st) {
  RatioReport rep;
  rep.id = "low_lemma";
  rep.params.N = st.N;
  const int M = st.ladder.levels();
  for (int m = 1; m < M; ++m) {
    const LowHigh s = highlow_split(st, m);
    const Eigen::VectorXd& next = st.g[static_cast<std::size_t>(m)];
    const double floor = 1e-12 * next.maxCoeff();
    for (Eigen::Index i : st.inside) {
      if (next[i] <= floor) continue;
      const double r = std::abs(s.low[i]) / next[i];
      if (r > rep.ratio) {
        rep.ratio = r;
        rep.lhs = std::abs(s.low[i]);
        rep.rhs = next[i];
        rep.note = "m=" + std::to_string(m);
      }
    }
  }
  return rep;
}

RatioReport high_lemma_check(const PruneState& st) {
  RatioReport rep;
  rep.id = "high_lemma";
  rep.params.N = st.N;
  const int M = st.ladder.levels();
  for (int m = 1; m < M; ++m) {
    const LowHigh s = highlow_split(st, m);
    const double lhs = (s.high.array().square() * st.weight.array()).sum() * st.h;
    const double rhs = st.quartic[static_cast<std::size_t>(m - 1)];
    if (rhs <= 0) continue;
    if (lhs / rhs >= rep.ratio) {
      rep.ratio = lhs / rhs;
      rep.lhs = lhs;
      rep.rhs = rhs;
      rep.note = "m=" + std::to_string(m);
    }
  }
  return rep;
}

Classification classify(const PruneState& st) {
  const int M = st.ladder.levels();
  std::vector<LowHigh> parts;
  for (int m = 1; m < M; ++m) parts.push_back(highlow_split(st, m));
  Classification c;
  c.counts.assign(static_cast<std::size_t>(M + 1), 0);
  const Eigen::VectorXd& gM = st.g.back();
  for (Eigen::Index i : st.inside) {
    auto low = [&](int k) {
      const auto& p = parts[static_cast<std::size_t>(k - 1)];
      return st.g[static_cast<std::size_t>(k - 1)][i] <= 2 * std::abs(p.low[i]);
    };
    auto high = [&](int k) {
      const auto& p = parts[static_cast<std::size_t>(k - 1)];
      return st.g[static_cast<std::size_t>(k - 1)][i] <= 2 * std::abs(p.high[i]);
    };
    auto low_from = [&](int k0) {
      for (int k = k0; k < M; ++k)
        if (!low(k)) return false;
      return true;
    };
    int label = M;
    if (low_from(1)) {
      label = 0;
    } else {
      for (int m = 1; m < M; ++m)
        if (high(m) && low_from(m + 1)) {
          label = m;
          break;
        }
    }
    const double a = std::abs(st.f[i]);
    c.points.push_back(i);
    c.label.push_back(label);
    c.in_U.push_back(st.r / 2 < gM[i] && gM[i] <= 2 * st.r && st.alpha / 2 < a && a <= 2 * st.alpha);
    ++c.counts[static_cast<std::size_t>(label)];
  }
  return c;
}

RatioReport fm_comparable_check(const PruneState& st, const Classification& c) {
  RatioReport rep;
  rep.id = "fm_comparable";
  rep.params.N = st.N;
  const int M = st.ladder.levels();
  std::vector<std::size_t> bad(static_cast<std::size_t>(M), 0), total(static_cast<std::size_t>(M), 0);
  for (std::size_t q = 0; q < c.points.size(); ++q) {
    const int m = c.label[q];
    if (!c.in_U[q] || m >= M) continue;
    const Eigen::VectorXcd& fm = st.fm[static_cast<std::size_t>(std::max(m, 1) - 1)];
    const double a = std::abs(fm[c.points[q]]);
    ++total[static_cast<std::size_t>(m)];
    if (a < st.alpha / 4 || a > 4 * st.alpha) ++bad[static_cast<std::size_t>(m)];
  }
  for (int m = 0; m < M; ++m) {
    rep.note += (m ? " " : "") + std::to_string(bad[m]) + "/" + std::to_string(total[m]);
    if (total[m] == 0) continue;
    const double r = static_cast<double>(bad[m]) / static_cast<double>(total[m]);
    if (r >= rep.ratio) {
      rep.ratio = r;
      rep.lhs = static_cast<double>(bad[m]);
      rep.rhs = static_cast<double>(total[m]);
    }
  }
  return rep;
}

void write_labels(const std::string& path, const PruneState& st, const Classification& c) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  os << "x,label\n";
  char buf[64];
  for (std::size_t q = 0; q < c.points.size(); ++q) {
    std::snprintf(buf, sizeof buf, "%.17g,%d\n", st.x(c.points[q]), c.label[q]);
    os << buf;
  }
}

}  // namespace declab
