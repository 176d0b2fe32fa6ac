#include "declab/fatap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace declab {

IntervalList intervals(const FatAP& P) {
  if (P.delta >= P.v / 2) return {{P.x0 - P.R, P.x0 + P.R}};
  const long kmin = static_cast<long>(std::ceil((-P.R - P.delta) / P.v));
  const long kmax = static_cast<long>(std::floor((P.R + P.delta) / P.v));
  IntervalList out;
  out.reserve(static_cast<std::size_t>(std::max(0L, kmax - kmin + 1)));
  for (long k = kmin; k <= kmax; ++k) {
    const double c = k * P.v;
    const double lo = std::max(c - P.delta, -P.R), hi = std::min(c + P.delta, P.R);
    if (hi > lo) out.push_back({P.x0 + lo, P.x0 + hi});
  }
  return normalize(std::move(out));
}

double measure(const FatAP& P) { return measure(intervals(P)); }

bool contains(const FatAP& P, double x) {
  const double y = x - P.x0;
  if (std::abs(y) > P.R) return false;
  if (P.delta >= P.v / 2) return true;
  const double d = std::abs(y - P.v * std::round(y / P.v));
  return d <= P.delta;
}

FatAP dual(const FatAP& P) { return {P.x0, 1.0 / P.R, 1.0 / P.v, 1.0 / P.delta}; }

FatAP scaled(const FatAP& P, double s) { return {P.x0, s * P.delta, P.v, s * P.R}; }

FatAP translated(const FatAP& P, double s) { return {P.x0 + s, P.delta, P.v, P.R}; }

double intersection_measure(const FatAP& P, const FatAP& Q) {
  return intersection_measure(intervals(P), intervals(Q));
}

bool contains(const FatAP& P, const FatAP& Q) { return contains(intervals(P), intervals(Q)); }

namespace {

FreqCell make_cell(const GenDirichletSeq& s, int index, Eigen::Index first, Eigen::Index count, int L,
                   const GeometryConstants& c) {
  const double n = static_cast<double>(s.N);
  const Eigen::Index M = s.size();
  FreqCell cell;
  cell.index = index;
  cell.first = first;
  cell.count = count;
  cell.radius = s.theta * L * L / (n * n);
  IntervalList b;
  for (Eigen::Index i = first; i < first + count; ++i) b.push_back({s[i] - cell.radius, s[i] + cell.radius});
  cell.balls = normalize(std::move(b));
  cell.v = first + 1 < M ? s[first + 1] - s[first] : s[first] - s[first - 1];
  const double delta = c.thick * s.theta * L * L / (n * n);
  const double centre = s[first + count - 1];
  if (count == 1)
    cell.enclosing = {centre, delta, cell.v, delta};
  else
    cell.enclosing = {centre, delta, cell.v, c.rad * static_cast<double>(count) / n};
  if (!contains(intervals(cell.enclosing), cell.balls))
    throw std::logic_error("cell " + std::to_string(index) + " escapes its enclosing fat AP");
  return cell;
}

}  // namespace

std::vector<FreqCell> small_cap_partition(const GenDirichletSeq& s, int L, int L1, const GeometryConstants& c) {
  const Eigen::Index M = s.size();
  if (L < 1 || L > M) throw std::invalid_argument("L must lie in [1, M]");
  if (L1 < 1 || L1 > L) throw std::invalid_argument("L1 must lie in [1, L]");
  if (M < 2) throw std::invalid_argument("sequence too short");
  // trailing partial canonical cell dropped
  const Eigen::Index used = (M / L) * L;
  std::vector<FreqCell> cells;
  int j = 0;
  for (Eigen::Index first = 0; first < used; first += L)
    for (Eigen::Index sub = first; sub < first + L; sub += L1)
      cells.push_back(make_cell(s, j++, sub, std::min<Eigen::Index>(L1, first + L - sub), L, c));
  return cells;
}

std::vector<FreqCell> canonical_partition(const GenDirichletSeq& s, int L, const GeometryConstants& c) {
  return small_cap_partition(s, L, L, c);
}

IntervalList omega(const std::vector<FreqCell>& cells) {
  IntervalList all;
  for (const auto& c : cells) all.insert(all.end(), c.balls.begin(), c.balls.end());
  return normalize(std::move(all));
}

FatAP P_I(const FreqCell& cell, double x) {
  FatAP d = dual(cell.enclosing);
  d.x0 = x;
  return d;
}

FatAP ball_P_of_L(const GenDirichletSeq& s, int L, double y, const GeometryConstants& c) {
  const double n = static_cast<double>(s.N);
  const double l2 = static_cast<double>(L) * L;
  const double v1 = s[1] - s[0];
  FatAP P{y, c.ball * std::pow(n, 1.5) / l2, 1.0 / v1, n * n / (2 * l2 * s.theta)};
  if (P.delta >= P.v / 2) P.delta = P.v / 2;
  return P;
}

bool transversal(const FreqCell& a, const FreqCell& b, long N, double, const GeometryConstants& c) {
  return distance(a.balls, b.balls) >= c.trans / std::sqrt(static_cast<double>(N));
}

double weight_eval(const WeightSpec& W, double x) {
  const FatAP& P = W.base;
  const double y = x - P.x0;
  double f1 = 1.0;
  if (P.delta < P.v / 2) {
    const double d = std::max(std::abs(y - P.v * std::round(y / P.v)) - P.delta, 0.0);
    f1 = std::pow(1.0 + d / P.delta, -W.k);
  }
  const double d2 = std::max(std::abs(y) - P.R, 0.0);
  return f1 * std::pow(1.0 + d2 / P.R, -W.k);
}

double weight_support(const WeightSpec& W, double tail) {
  return W.base.R * std::pow(tail, -1.0 / W.k);
}

FatAP tile_base(const FatAP& P) {
  if (P.delta >= P.v / 2 || P.v > P.R) return {P.x0, P.R, 2 * P.R, P.R};
  const double A = std::ceil(P.v / (2 * P.delta));
  const double K = std::floor(P.R / P.v);
  return {P.x0, P.v / (2 * A), P.v, (K + 0.5) * P.v};
}

std::vector<FatAP> tile(const FatAP& P, Interval window) {
  std::vector<FatAP> out;
  const FatAP B = tile_base(P);
  if (B.delta >= B.v / 2) {
    const double step = 2 * B.R;
    const long bmin = static_cast<long>(std::floor((window.lo - B.x0 - B.R) / step));
    const long bmax = static_cast<long>(std::ceil((window.hi - B.x0 + B.R) / step));
    for (long b = bmin; b <= bmax; ++b) {
      FatAP t = translated(B, b * step);
      if (t.x0 + t.R > window.lo && t.x0 - t.R < window.hi) out.push_back(t);
    }
    return out;
  }
  const long A = std::lround(B.v / (2 * B.delta));
  const double period = 2 * B.R;  // (2K+1) V
  const long bmin = static_cast<long>(std::floor((window.lo - B.x0 - B.R - B.v) / period));
  const long bmax = static_cast<long>(std::ceil((window.hi - B.x0 + B.R + B.v) / period));
  for (long b = bmin; b <= bmax; ++b)
    for (long a = 0; a < A; ++a) {
      FatAP t = translated(B, a * 2 * B.delta + b * period);
      if (t.x0 + t.R > window.lo && t.x0 - t.R < window.hi) out.push_back(t);
    }
  return out;
}

}  // namespace declab

namespace declab {

PairIntersection transversal_intersection_sweep(const GenDirichletSeq& s, int L, int shifts, const GeometryConstants& c) {
  const auto cells = canonical_partition(s, L, c);
  const double mball = measure(ball_P_of_L(s, L, 0.0, c));
  std::vector<IntervalList> P;
  std::vector<double> mP;
  for (const auto& cell : cells) {
    P.push_back(intervals(P_I(cell)));
    mP.push_back(measure(P.back()));
  }
  PairIntersection out;
  for (std::size_t i = 0; i < cells.size(); ++i)
    for (std::size_t j = i + 1; j < cells.size(); ++j) {
      if (!transversal(cells[i], cells[j], s.N, s.theta, c)) continue;
      ++out.pairs;
      const FatAP Q = P_I(cells[j]);
      for (int l = -shifts; l <= shifts; ++l) {
        const double m = intersection_measure(P[i], intervals(translated(Q, l * Q.v)));
        const double k = m * mball / (mP[i] * mP[j]);
        if (k > out.constant) {
          out.constant = k;
          out.intersection = m;
          out.i = static_cast<int>(i);
          out.j = static_cast<int>(j);
        }
      }
    }
  return out;
}

ContainmentReport ball_containment(const GenDirichletSeq& s, int L, const GeometryConstants& c) {
  const auto cells = canonical_partition(s, L, c);
  const FatAP ball = ball_P_of_L(s, L, 0.0, c);
  const IntervalList Q = intervals(ball), Q2 = intervals(scaled(ball, 2));
  ContainmentReport out;
  for (const auto& cell : cells) {
    ++out.cells;
    const IntervalList P = intervals(P_I(cell));
    IntervalList touch;
    for (const auto& q : Q)
      for (const auto& p : P) touch.push_back({q.lo - p.hi, q.hi - p.lo});
    touch = normalize(std::move(touch));
    IntervalList inside;
    bool first = true;
    for (const auto& p : P) {
      IntervalList ok;
      for (const auto& q : Q2)
        if (q.hi - q.lo >= p.hi - p.lo) ok.push_back({q.lo - p.lo, q.hi - p.hi});
      ok = normalize(std::move(ok));
      inside = first ? ok : intersect(inside, ok);
      first = false;
    }
    if (!contains(inside, touch)) ++out.violations;
  }
  return out;
}

}  // namespace declab
