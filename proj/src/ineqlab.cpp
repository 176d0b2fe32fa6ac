#include "declab/ineqlab.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "declab/parallel.hpp"

namespace declab {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double powp(double abs2, double p) {
  const double half = 0.5 * p;
  if (half == std::floor(half) && half <= 8) {
    double r = 1.0;
    for (int i = 0; i < static_cast<int>(half); ++i) r *= abs2;
    return r;
  }
  return std::pow(abs2, half);
}

bool real_coefficients(const AtomicSum& f) { return f.coef.imag().cwiseAbs().maxCoeff() == 0.0; }

double spread(const AtomicSum& f) { return f.size() ? f.freq.maxCoeff() - f.freq.minCoeff() : 0.0; }

AtomicSum sub_sum(const AtomicSum& f, Eigen::Index b, Eigen::Index e) {
  AtomicSum g;
  g.freq = f.freq.segment(b, e - b);
  g.coef = f.coef.segment(b, e - b);
  g.has_envelope = f.has_envelope;
  g.envelope = f.envelope;
  return g;
}

}  // namespace

ExponentFit fit_exponent(const std::vector<double>& x, const std::vector<double>& y, std::size_t min_points) {
  if (x.size() != y.size()) throw std::invalid_argument("x and y differ in length");
  if (x.size() < min_points) throw std::invalid_argument("need at least " + std::to_string(min_points) + " points");
  const Eigen::Index n = static_cast<Eigen::Index>(x.size());
  ExponentFit f;
  f.x.resize(n);
  f.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    f.x[i] = std::log2(x[static_cast<std::size_t>(i)]);
    f.y[i] = std::log2(y[static_cast<std::size_t>(i)]);
  }
  const double mx = f.x.mean(), my = f.y.mean();
  const Eigen::ArrayXd dx = f.x.array() - mx, dy = f.y.array() - my;
  f.slope = (dx * dy).sum() / (dx * dx).sum();
  f.intercept = my - f.slope * mx;
  f.residual = std::sqrt(((dy - f.slope * dx).square()).mean());
  return f;
}

Eigen::VectorXd random_signs(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Eigen::VectorXd s(n);
  for (Eigen::Index i = 0; i < n; ++i) s[i] = (rng() >> 63) ? 1.0 : -1.0;
  return s;
}

AtomicSum extremal_family(Family kind, const GenDirichletSeq& s, const std::vector<FreqCell>& cells, std::uint64_t seed,
                          const Eigen::VectorXcd* coef) {
  if (cells.empty()) throw std::invalid_argument("no cells");
  std::vector<double> fr;
  std::vector<cdouble> co;
  switch (kind) {
    case Family::ConstantBump:
    case Family::Custom:
      for (const auto& c : cells)
        for (Eigen::Index i = c.first; i < c.first + c.count; ++i) {
          fr.push_back(s[i]);
          co.push_back(1.0);
        }
      if (kind == Family::Custom) {
        if (!coef || coef->size() != static_cast<Eigen::Index>(fr.size()))
          throw std::invalid_argument("custom family needs one coefficient per atom");
        for (std::size_t i = 0; i < co.size(); ++i) co[i] = (*coef)[static_cast<Eigen::Index>(i)];
      }
      break;
    case Family::RandomSignSmallBall: {
      const Eigen::VectorXd sg = random_signs(static_cast<Eigen::Index>(cells.size()), seed);
      for (std::size_t j = 0; j < cells.size(); ++j) {
        fr.push_back(s[cells[j].first]);
        co.push_back(sg[static_cast<Eigen::Index>(j)]);
      }
      break;
    }
    case Family::SingleCell:
      for (Eigen::Index i = cells[0].first; i < cells[0].first + cells[0].count; ++i) {
        fr.push_back(s[i]);
        co.push_back(1.0);
      }
      break;
  }
  AtomicSum f = make_atomic(Eigen::Map<Eigen::VectorXd>(fr.data(), static_cast<Eigen::Index>(fr.size())),
                            Eigen::Map<Eigen::VectorXcd>(co.data(), static_cast<Eigen::Index>(co.size())));
  f.has_envelope = true;
  f.envelope.width = cells[0].radius;
  return f;
}

std::vector<Eigen::Index> segment_atoms(const AtomicSum& f, const std::vector<FreqCell>& cells) {
  std::vector<Eigen::Index> b{0};
  Eigen::Index n = 0;
  for (const auto& c : cells) {
    const double lo = c.balls.front().lo, hi = c.balls.back().hi;
    while (n < f.size() && f.freq[n] >= lo && f.freq[n] <= hi) ++n;
    b.push_back(n);
  }
  if (n != f.size()) throw std::invalid_argument("atom outside every cell");
  return b;
}

std::vector<Eigen::Index> segment_by_floor(const AtomicSum& f, long M) {
  std::vector<Eigen::Index> b{0};
  Eigen::Index n = 0;
  for (long m = 0; m < M; ++m) {
    while (n < f.size() && f.freq[n] >= m && f.freq[n] < m + 1) ++n;
    b.push_back(n);
  }
  if (n != f.size()) throw std::invalid_argument("spectrum outside [0, M)");
  return b;
}

Interval default_window(const AtomicSum& f, double p) {
  if (!f.has_envelope) throw std::invalid_argument("unbounded region");
  const double T = f.envelope.reach(p);
  return {-T, T};
}

Moments moments(const AtomicSum& f, const std::vector<Eigen::Index>& bounds, double p, Interval window, double h) {
  const std::size_t K = bounds.size() - 1;
  Moments m;
  m.cells = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(K));
  m.window = window;
  if (f.size() == 0) return m;
  double band = spread(f) + (f.has_envelope ? 8 * f.envelope.sigma() : 0.0);
  if (band <= 0) band = 2 * kPi / window.length();
  if (h <= 0) h = exact_step(band, p);
  m.h = h;
  const bool even = real_coefficients(f) && window.lo == -window.hi;
  const double lo = even ? 0.0 : window.lo;
  const auto n = static_cast<std::size_t>(std::floor((window.hi - lo) / h)) + 1;
  const double demod = 0.5 * (f.freq.minCoeff() + f.freq.maxCoeff());
  const Eigen::ArrayXd w = f.freq.array() - demod;
  const Eigen::ArrayXcd rot = (w * h).unaryExpr([](double x) { return std::polar(1.0, x); });

  constexpr std::size_t kBlock = 1 << 15;
  const std::size_t nb = (n + kBlock - 1) / kBlock;
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(K) + 2, static_cast<Eigen::Index>(nb));
  parallel_for(nb, [&](std::size_t b0, std::size_t b1) {
    Eigen::ArrayXcd z(f.size());
    for (std::size_t blk = b0; blk < b1; ++blk) {
      const std::size_t s = blk * kBlock, e = std::min(n, s + kBlock);
      auto col = acc.col(static_cast<Eigen::Index>(blk));
      for (std::size_t i = s; i < e; ++i) {
        const double t = lo + static_cast<double>(i) * h;
        if ((i - s) % 1024 == 0)
          for (Eigen::Index a = 0; a < f.size(); ++a) z[a] = f.coef[a] * std::polar(1.0, t * w[a]);
        double wt = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        if (f.has_envelope) wt *= powp(f.envelope(t) * f.envelope(t), p);
        cdouble tot = 0.0;
        for (std::size_t j = 0; j < K; ++j) {
          const Eigen::Index b = bounds[j], len = bounds[j + 1] - bounds[j];
          if (!len) continue;
          const cdouble sj = z.segment(b, len).sum();
          tot += sj;
          col[static_cast<Eigen::Index>(j)] += wt * powp(std::norm(sj), p);
        }
        const double v = wt * powp(std::norm(tot), p);
        col[static_cast<Eigen::Index>(K)] += v;
        if (i % 2 == 0) col[static_cast<Eigen::Index>(K) + 1] += 2.0 * v;
        z *= rot;
      }
    }
  }, 1);
  Eigen::VectorXd sums(acc.rows());
  for (Eigen::Index r = 0; r < acc.rows(); ++r) {
    Eigen::VectorXd row = acc.row(r).transpose();
    sums[r] = pairwise_sum(row.data(), static_cast<std::size_t>(row.size()));
  }
  const double scale = h * (even ? 2.0 : 1.0);
  m.cells = sums.head(static_cast<Eigen::Index>(K)) * scale;
  m.total = sums[static_cast<Eigen::Index>(K)] * scale;
  m.error = std::abs(sums[static_cast<Eigen::Index>(K) + 1] * scale - m.total);
  return m;
}

double fourth_moment(const AtomicSum& f) {
  if (!f.has_envelope) throw std::invalid_argument("fourth moment needs an envelope");
  const Eigen::Index M = f.size();
  if (M == 0) return 0.0;
  const double sigma = f.envelope.sigma();
  const double c0 = f.freq.mean();
  struct Pair {
    double s;
    cdouble c;
  };
  std::vector<Pair> P;
  P.reserve(static_cast<std::size_t>(M * M));
  for (Eigen::Index i = 0; i < M; ++i)
    for (Eigen::Index j = 0; j < M; ++j) P.push_back({(f.freq[i] - c0) + (f.freq[j] - c0), f.coef[i] * f.coef[j]});
  std::sort(P.begin(), P.end(), [](const Pair& a, const Pair& b) { return a.s < b.s; });
  // kernel below 1e-18 of its peak beyond cut
  const double cut = sigma * std::sqrt(8 * std::log(1e18));
  const double amp = std::sqrt(kPi / 2) / sigma, inv = 1.0 / (8 * sigma * sigma);
  double total = 0.0;
  std::size_t lo = 0;
  for (std::size_t a = 0; a < P.size(); ++a) {
    while (P[lo].s < P[a].s - cut) ++lo;
    cdouble s = 0.0;
    for (std::size_t b = lo; b < P.size() && P[b].s <= P[a].s + cut; ++b) {
      const double d = P[a].s - P[b].s;
      s += std::conj(P[b].c) * std::exp(-d * d * inv);
    }
    total += (P[a].c * s).real();
  }
  return amp * total;
}

double second_moment(const AtomicSum& f) {
  if (!f.has_envelope) throw std::invalid_argument("second moment needs an envelope");
  const double sigma = f.envelope.sigma();
  const double cut = sigma * std::sqrt(4 * std::log(1e18));
  double total = 0.0;
  for (Eigen::Index i = 0; i < f.size(); ++i)
    for (Eigen::Index j = 0; j < f.size(); ++j) {
      const double d = f.freq[i] - f.freq[j];
      if (std::abs(d) > cut) continue;
      total += (f.coef[i] * std::conj(f.coef[j])).real() * std::exp(-d * d / (4 * sigma * sigma));
    }
  return std::sqrt(kPi) / sigma * total;
}

RatioReport decoupling_ratio(const AtomicSum& f, const std::vector<FreqCell>& cells, double p, std::optional<Interval> region) {
  if (p < 2) throw std::invalid_argument("p must be at least 2");
  const auto bounds = segment_atoms(f, cells);
  const Interval win = region ? *region : default_window(f, p);
  const Moments m = moments(f, bounds, p, win);
  RatioReport r;
  r.id = "decoupling";
  r.params.p = p;
  r.params.q = 2;
  r.lhs = std::pow(m.total, 1.0 / p);
  double agg = 0.0;
  for (Eigen::Index j = 0; j < m.cells.size(); ++j) agg += std::pow(m.cells[j], 2.0 / p);
  r.rhs = std::sqrt(agg);
  if (!(r.rhs > 0)) throw std::invalid_argument("zero rhs");
  r.ratio = r.lhs / r.rhs;
  r.error = m.total > 0 ? m.error / m.total / p : 0.0;
  return r;
}

std::pair<double, double> small_cap_terms(double N, double L, double L1, double p, double q) {
  const double first = std::pow(N, 0.5 - 0.5 / q - 1.5 / p) * std::pow(L, 2.0 / p) / std::pow(L1, 1.0 - 1.0 / p - 1.0 / q);
  const double second = std::pow(std::sqrt(N) / L1, 0.5 - 1.0 / q);
  return {first, second};
}

double small_cap_bound(double N, double L, double L1, double p, double q) {
  auto [a, b] = small_cap_terms(N, L, L1, p, q);
  return a + b;
}

RatioReport small_cap_ratio(const AtomicSum& f, const std::vector<FreqCell>& cells, long N, int L, int L1, double p, double q) {
  if (p < 4) throw std::invalid_argument("p must be at least 4");
  if (!(q == p || (L1 == 1 && 1.0 / q + 3.0 / p <= 1.0))) throw std::invalid_argument("unsupported (p, q, L1) combination");
  const auto bounds = segment_atoms(f, cells);
  RatioReport r;
  r.id = "small_cap";
  r.params.N = N;
  r.params.L = L;
  r.params.L1 = L1;
  r.params.p = p;
  r.params.q = q;
  Eigen::VectorXd cellp(static_cast<Eigen::Index>(cells.size()));
  double total;
  if (p == 4 && f.has_envelope) {
    total = fourth_moment(f);
    for (std::size_t j = 0; j < cells.size(); ++j)
      cellp[static_cast<Eigen::Index>(j)] = fourth_moment(sub_sum(f, bounds[j], bounds[j + 1]));
    r.note = "exact pair-sum fourth moment";
  } else {
    const Moments m = moments(f, bounds, p, default_window(f, p));
    total = m.total;
    cellp = m.cells;
    r.error = m.total > 0 ? m.error / m.total / p : 0.0;
  }
  r.lhs = std::pow(total, 1.0 / p);
  double agg = 0.0;
  for (Eigen::Index j = 0; j < cellp.size(); ++j) agg += std::pow(cellp[j], q / p);
  r.rhs = std::pow(agg, 1.0 / q);
  if (!(r.rhs > 0)) throw std::invalid_argument("zero rhs");
  r.ratio = r.lhs / r.rhs;
  r.paper_bound = small_cap_bound(static_cast<double>(N), L, L1, p, q);
  return r;
}

RatioReport flat_decoupling_ratio(const AtomicSum& f, long M, double p, std::optional<Interval> region) {
  const auto bounds = segment_by_floor(f, M);
  const Interval win = region ? *region : default_window(f, p);
  const Moments m = moments(f, bounds, p, win);
  RatioReport r;
  r.id = "flat";
  r.params.p = p;
  r.lhs = std::pow(m.total, 1.0 / p);
  double agg = 0.0;
  for (Eigen::Index j = 0; j < m.cells.size(); ++j) agg += std::pow(m.cells[j], 2.0 / p);
  r.rhs = std::pow(static_cast<double>(M), 0.5 - 1.0 / p) * std::sqrt(agg);
  r.ratio = r.lhs / r.rhs;
  r.paper_bound = std::pow(static_cast<double>(M), 0.5 - 1.0 / p);
  return r;
}

RatioReport refined_flat_ratio(const AtomicSum& f, const std::vector<FreqCell>& subcells, long multiplicity, int L, int L1,
                               double p, double q, std::optional<Interval> region) {
  if (multiplicity < 1) throw std::invalid_argument("multiplicity must be positive");
  const auto bounds = segment_atoms(f, subcells);
  const Interval win = region ? *region : default_window(f, p);
  const Moments m = moments(f, bounds, p, win);
  RatioReport r;
  r.id = "refined_flat";
  r.params.L = L;
  r.params.L1 = L1;
  r.params.p = p;
  r.params.q = q;
  r.lhs = std::pow(m.total, 1.0 / p);
  double agg = 0.0;
  for (Eigen::Index j = 0; j < m.cells.size(); ++j) agg += std::pow(m.cells[j], q / p);
  r.rhs = std::pow(static_cast<double>(multiplicity), 1.0 / p - 0.5) *
          std::pow(static_cast<double>(L) / L1, 1.0 - 1.0 / p - 1.0 / q) * std::pow(agg, 1.0 / q);
  r.ratio = r.lhs / r.rhs;
  return r;
}

RatioReport refined_decoupling_ratio(const GenDirichletSeq& s, const AtomicSum& f, const std::vector<FreqCell>& cells, int L,
                                     const IntervalList& X, double p, int sup_points) {
  if (X.empty()) throw std::invalid_argument("empty X");
  const FatAP ball = ball_P_of_L(s, L);
  const WeightSpec Wb{ball, 100};
  const double reach = weight_support(Wb);
  const auto bounds = segment_atoms(f, cells);
  double tau = std::numeric_limits<double>::infinity();
  if (ball.delta < ball.v / 2) tau = ball.delta;
  for (const auto& c : cells) {
    const FatAP P = P_I(c);
    if (P.delta < P.v / 2) tau = std::min(tau, P.delta);
  }
  double band = spread(f) + (f.has_envelope ? 8 * f.envelope.sigma() : 0.0);
  const double h = std::min(exact_step(band, p), tau / 16);
  const Eigen::Index n = static_cast<Eigen::Index>(std::ceil(2 * reach / h)) + 1;
  const double origin = ball.x0 - reach;
  const double demod = 0.5 * (f.freq.minCoeff() + f.freq.maxCoeff());
  std::vector<GridField> parts;
  GridField total{origin, h, Eigen::VectorXcd::Zero(n)};
  for (std::size_t j = 0; j < cells.size(); ++j) {
    parts.push_back(to_grid(sub_sum(f, bounds[j], bounds[j + 1]), origin, h, n, demod));
    total.samples += parts.back().samples;
  }
  RatioReport r;
  r.id = "refined_decoupling";
  r.params.N = s.N;
  r.params.L = L;
  r.params.p = p;
  double lhs = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = total.x(i);
    if (std::any_of(X.begin(), X.end(), [x](const Interval& iv) { return iv.lo <= x && x <= iv.hi; }))
      lhs += powp(std::norm(total.samples[i]), p);
  }
  r.lhs = std::pow(lhs * h, 1.0 / p);
  double energy = 0.0;
  for (const auto& g : parts) energy += std::pow(lp_norm(g, 2, Wb).value, 2);
  const double lo = X.front().lo, hi = X.back().hi;
  double sup = 0.0;
  for (int k = 0; k < sup_points; ++k) {
    const double x = sup_points == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * k / (sup_points - 1);
    if (!std::any_of(X.begin(), X.end(), [x](const Interval& iv) { return iv.lo <= x && x <= iv.hi; })) continue;
    double e = 0.0;
    for (std::size_t j = 0; j < cells.size(); ++j) {
      const WeightSpec W{P_I(cells[j], x), 100};
      double num = 0.0, den = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double wv = weight_eval(W, parts[j].x(i));
        num += wv * std::norm(parts[j].samples[i]);
        den += wv;
      }
      e += den > 0 ? num / den : 0.0;
    }
    sup = std::max(sup, e);
  }
  r.rhs = std::pow(sup, 0.5 - 1.0 / p) * std::pow(energy, 1.0 / p);
  r.ratio = r.rhs > 0 ? r.lhs / r.rhs : 0.0;
  r.note = "sup over a finite grid of X: rhs is a lower estimate";
  return r;
}

RatioReport bilinear_kakeya_check(const std::vector<WeightedAP>& fam1, const std::vector<WeightedAP>& fam2, const FatAP& ball,
                                  const std::vector<FreqCell>& cells, long N) {
  for (std::size_t i = 0; i < fam1.size(); ++i)
    for (std::size_t j = 0; j < fam2.size(); ++j)
      if (!transversal(cells.at(fam1[i].cell), cells.at(fam2[j].cell), N))
        throw std::invalid_argument("non-transversal pair (" + std::to_string(i) + ", " + std::to_string(j) + ")");
  RatioReport r;
  r.id = "bilinear_kakeya";
  r.params.N = N;
  if (fam1.empty() || fam2.empty()) return r;
  const IntervalList B = intervals(ball), B2 = intervals(scaled(ball, 2));
  const double mB = measure(B), mB2 = measure(B2);
  std::vector<IntervalList> A1, A2;
  double avg1 = 0.0, avg2 = 0.0;
  for (const auto& a : fam1) {
    const IntervalList I = intervals(a.P);
    A1.push_back(intersect(I, B));
    avg1 += a.w * intersection_measure(I, B2);
  }
  for (const auto& b : fam2) {
    const IntervalList I = intervals(b.P);
    A2.push_back(intersect(I, B));
    avg2 += b.w * intersection_measure(I, B2);
  }
  double lhs = 0.0;
  for (std::size_t i = 0; i < fam1.size(); ++i)
    for (std::size_t j = 0; j < fam2.size(); ++j) lhs += fam1[i].w * fam2[j].w * intersection_measure(A1[i], A2[j]);
  r.lhs = lhs / mB;
  r.rhs = (avg1 / mB2) * (avg2 / mB2);
  r.ratio = r.rhs > 0 ? r.lhs / r.rhs : 0.0;
  return r;
}

RatioReport bilinear_restriction_check(const AtomicSum& F1, const AtomicSum& F2, const FatAP& ball, long N, double h) {
  RatioReport r;
  r.id = "bilinear_restriction";
  r.params.N = N;
  if (F1.size() == 0 || F2.size() == 0) return r;
  const double w1 = F1.has_envelope ? F1.envelope.width : 0.0, w2 = F2.has_envelope ? F2.envelope.width : 0.0;
  const double gap = std::max(F2.freq.minCoeff() - w2 - (F1.freq.maxCoeff() + w1), F1.freq.minCoeff() - w1 - (F2.freq.maxCoeff() + w2));
  if (gap < 0.25 / std::sqrt(static_cast<double>(N))) throw std::invalid_argument("transversality violation");
  const double d1 = spread(F1) + 8 * F1.envelope.sigma(), d2 = spread(F2) + 8 * F2.envelope.sigma();
  if (h <= 0) h = 2 * kPi / (3 * (d1 + d2));
  const double m1 = 0.5 * (F1.freq.minCoeff() + F1.freq.maxCoeff()), m2 = 0.5 * (F2.freq.minCoeff() + F2.freq.maxCoeff());
  double lhs = 0.0;
  const IntervalList B = intervals(ball);
  for (const auto& iv : B) {
    const Eigen::Index n = std::max<Eigen::Index>(static_cast<Eigen::Index>(std::floor(iv.length() / h)) + 1, 65);
    const double hh = n > 1 ? iv.length() / static_cast<double>(n - 1) : 0.0;
    const GridField g1 = to_grid(F1, iv.lo, hh, n, m1), g2 = to_grid(F2, iv.lo, hh, n, m2);
    Eigen::ArrayXd v = g1.samples.cwiseAbs2().array() * g2.samples.cwiseAbs2().array();
    if (n > 1) {
      v[0] *= 0.5;
      v[n - 1] *= 0.5;
    }
    lhs += hh * v.sum();
  }
  const double mB = measure(B);
  r.lhs = lhs / mB;
  r.rhs = second_moment(F1) * second_moment(F2) / (mB * mB);
  r.ratio = r.lhs / r.rhs;
  return r;
}

}  // namespace declab
