#include "declab/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unsupported/Eigen/FFT>

#include "declab/kernels.hpp"
#include "declab/parallel.hpp"

namespace declab {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

void check_normalized(const GenDirichletSeq& s) {
  if (s.size() < 3) throw std::invalid_argument("need three terms");
  const double v = 1.0 / static_cast<double>(s.N);
  if (std::abs(s[0]) > 1e-15 || std::abs(s[1] - s[0] - v) > 1e-12 * v) throw std::invalid_argument("sequence not normalized");
}

std::size_t next_pow2(double x) {
  std::size_t k = 1;
  while (static_cast<double>(k) < x) k *= 2;
  return k;
}

double powp(double a, double p) {
  if (p == 4) return (a * a) * (a * a);
  if (p == 2) return a * a;
  if (p == 6) return (a * a) * (a * a) * (a * a);
  return std::pow(a, p);
}

double sum_ordered(std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

}  // namespace

double CurveLift::g0(double t) const {
  const Eigen::Index M = x.size();
  const double h = x[1] - x[0];
  const Eigen::Index k = std::clamp<Eigen::Index>(static_cast<Eigen::Index>(std::floor(t / h)), 0, M - 2);
  const double d = t - x[k];
  return static_cast<double>(N) * e[k] + slope[k] * d + 0.5 * curv[k] * d * d;
}

double CurveLift::g(double t) const {
  constexpr int n = 64;
  const double step = 2 * width / n;
  double num = 0.0, den = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double y = -width + i * step;
    const double w = (i == 0 || i == n ? 1.0 : (i % 2 ? 4.0 : 2.0)) * plateau(2 * y / width);
    num += w * g0(t - y);
    den += w;
  }
  return num / den;
}

double CurveLift::defect() const {
  double d = 0.0;
  for (Eigen::Index n = 0; n < x.size(); ++n) d = std::max(d, std::abs(g(x[n]) - static_cast<double>(N) * e[n]));
  return d;
}

std::pair<double, double> CurveLift::curvature_range(int points) const {
  const double d = 1.0 / (points - 1);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int i = 1; i + 1 < points; ++i) {
    const double t = i * d;
    const double q = (g(t + d) - 2 * g(t) + g(t - d)) / (d * d);
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  return {lo, hi};
}

double CurveLift::e_linear(double u) const {
  const Eigen::Index M = e.size();
  if (u < 1 || u > static_cast<double>(M)) throw std::out_of_range("u outside [1, M]");
  const Eigen::Index k = std::min<Eigen::Index>(static_cast<Eigen::Index>(std::floor(u)), M - 1);
  const double f = u - static_cast<double>(k);
  return (1 - f) * e[k - 1] + f * e[k];
}

CurveLift build_lift(const GenDirichletSeq& s, double c) {
  check_normalized(s);
  if (!(c > 0)) throw std::invalid_argument("c must be positive");
  CurveLift L;
  L.N = s.N;
  L.c = c;
  const Eigen::Index M = s.size();
  const double n = static_cast<double>(s.N), rt = std::sqrt(n), h = 1.0 / rt;
  L.e.resize(M);
  L.x.resize(M);
  for (Eigen::Index i = 0; i < M; ++i) {
    L.e[i] = s[i] - static_cast<double>(i) / n;
    L.x[i] = static_cast<double>(i) * h;
  }
  L.slope = Eigen::VectorXd::Zero(M);
  L.curv = Eigen::VectorXd::Zero(M);
  for (Eigen::Index i = 0; i + 1 < M; ++i) {
    const double chord = n * (L.e[i + 1] - L.e[i]) / h;
    L.curv[i] = 2 * (chord - L.slope[i]) / h;
    L.slope[i + 1] = 2 * chord - L.slope[i];
  }
  L.curv[M - 1] = L.curv[M - 2];
  double gp = L.slope.cwiseAbs().maxCoeff();
  gp = std::max(gp, std::abs(L.slope[M - 2] + L.curv[M - 2] * (1.0 - L.x[M - 2])));
  L.max_g0_prime = gp;
  L.width = c / (gp + 1) / n;
  return L;
}

double pad_to_period(double T, long N) {
  const double P = 2 * kPi * static_cast<double>(N);
  return std::ceil(T / P - 1e-9) * P;
}

AbelParts abel_decompose(const GenDirichletSeq& s, const Eigen::VectorXcd& b, double T, double p) {
  check_normalized(s);
  const double n = static_cast<double>(s.N);
  if (b.size() != s.size()) throw std::invalid_argument("one coefficient per term");
  if (T < n * (1 - 1e-12) || T > n * n * (1 + 1e-12)) throw std::invalid_argument("T outside [N, N^2]");
  AbelParts out;
  out.T = pad_to_period(T, s.N);
  out.padded = std::abs(out.T - T) > 1e-9 * T;
  const Eigen::Index M = s.size();
  const auto J = static_cast<std::size_t>(std::llround(out.T / (2 * kPi * n)));

  AtomicSum f = make_atomic(s.terms, b);
  out.direct = std::pow(lp_norm(f, p, Interval{0, out.T}).value, p);

  Eigen::VectorXd e(M);
  for (Eigen::Index i = 0; i < M; ++i) e[i] = s[i] - static_cast<double>(i) / n;

  const std::size_t K = next_pow2(p * static_cast<double>(M) + 1);
  const std::size_t KB = next_pow2(4 * p * static_cast<double>(M));
  std::vector<double> a_part(J), b_part(J);
  const double rt = std::sqrt(n);
  const auto Mi = static_cast<std::size_t>(M);
  const double tail = rt - static_cast<double>(M);
  std::vector<cdouble> root(KB);
  for (std::size_t k = 0; k < KB; ++k) root[k] = std::polar(1.0, 2 * kPi * static_cast<double>(k) / static_cast<double>(KB));
  parallel_for(J, [&](std::size_t j0, std::size_t j1) {
    Eigen::FFT<double> fft;
    std::vector<cdouble> in(K), outv(K);
    std::vector<cdouble> c(Mi);
    for (std::size_t j = j0; j < j1; ++j) {
      const double t1 = 2 * kPi * n * static_cast<double>(j);
      for (std::size_t i = 0; i < Mi; ++i) c[i] = b[static_cast<Eigen::Index>(i)] * std::polar(1.0, t1 * e[static_cast<Eigen::Index>(i)]);
      std::fill(in.begin(), in.end(), cdouble(0));
      for (std::size_t i = 0; i < Mi; ++i) in[i] = std::conj(c[i]);
      fft.fwd(outv, in);
      double acc = 0.0;
      for (std::size_t k = 0; k < K; ++k) acc += powp(std::abs(outv[k]), p);
      a_part[j] = acc * 2 * kPi * n / static_cast<double>(K);
      double bacc = 0.0;
      for (std::size_t k = 0; k < KB; ++k) {
        cdouble S = 0.0;
        double avg = 0.0;
        for (std::size_t i = 0; i < Mi; ++i) {
          S += c[i] * root[(i * k) % KB];
          avg += (i + 1 < Mi ? 1.0 : tail) * std::abs(S);
        }
        bacc += powp(avg / rt, p);
      }
      b_part[j] = bacc * 2 * kPi * n / static_cast<double>(KB);
    }
  }, 1);
  out.A = sum_ordered(a_part);
  out.B = sum_ordered(b_part);
  return out;
}

double weight_mass_2d(double R) { return kPi * R * R * (1 + 2.0 / 98); }

double eval_2d_curve_sum(const CurveLift& lift, const Eigen::VectorXcd& b, double R, double p, std::size_t max_grid) {
  const Eigen::Index M = lift.e.size();
  if (b.size() != M) throw std::invalid_argument("one coefficient per term");
  if (!(R > 0)) throw std::invalid_argument("radius must be positive");
  const double n = static_cast<double>(lift.N), rt = std::sqrt(n);
  const Eigen::VectorXd y = n * lift.e;
  const double spread = std::max(y.maxCoeff() - y.minCoeff(), 1e-300);
  const double reach = R * std::pow(1e-12, -1.0 / 100);
  const double P2 = 2 * kPi * rt;
  const std::size_t K = next_pow2(std::max(p * static_cast<double>(M) + 1, 256 * P2 / R));
  const double h1 = std::min(2 * kPi / ((p + 2) * spread), R / 256);
  const auto n1 = static_cast<std::size_t>(std::ceil(2 * reach / h1)) + 1;
  if (n1 * K > max_grid)
    throw std::invalid_argument("2D grid of " + std::to_string(n1 * K) + " points exceeds budget " + std::to_string(max_grid));
  const double h2 = P2 / static_cast<double>(K);
  auto W = [R](double r) { return r <= R ? 1.0 : std::pow(1 + (r - R) / R, -100.0); };
  std::vector<double> rows(n1);
  parallel_for(n1, [&](std::size_t r0, std::size_t r1) {
    Eigen::FFT<double> fft;
    std::vector<cdouble> in(K), outv(K);
    for (std::size_t r = r0; r < r1; ++r) {
      const double t1 = -reach + static_cast<double>(r) * h1;
      std::fill(in.begin(), in.end(), cdouble(0));
      for (Eigen::Index i = 0; i < M; ++i) in[static_cast<std::size_t>(i)] = std::conj(b[i] * std::polar(1.0, t1 * y[i]));
      fft.fwd(outv, in);
      const double rin = std::abs(t1) < R ? std::sqrt(R * R - t1 * t1) : -1.0;
      const double rout = std::abs(t1) < reach ? std::sqrt(reach * reach - t1 * t1) : -1.0;
      double acc = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        const double u = static_cast<double>(k) * h2;
        double w = 0.0;
        long jlo = static_cast<long>(std::ceil((-rout - u) / P2)), jhi = static_cast<long>(std::floor((rout - u) / P2));
        long ilo = 1, ihi = 0;
        if (rin >= 0) {
          ilo = static_cast<long>(std::ceil((-rin - u) / P2));
          ihi = static_cast<long>(std::floor((rin - u) / P2));
          if (ihi >= ilo) w += static_cast<double>(ihi - ilo + 1);
        }
        for (long j = jlo; j <= jhi; ++j) {
          if (ihi >= ilo && j >= ilo && j <= ihi) {
            j = ihi;
            continue;
          }
          w += W(std::hypot(t1, u + static_cast<double>(j) * P2));
        }
        acc += w * powp(std::abs(outv[k]), p);
      }
      rows[r] = acc * h1 * h2;
    }
  }, 1);
  return sum_ordered(rows);
}

double parabola_small_cap_bound(double R, double M, double p) {
  const double a = std::log(M) / std::log(R);
  return std::pow(R, a * (0.5 - 1 / p)) + std::pow(R, a * (1 - 1 / p) - (1 + a) / p);
}

double transfer_prediction(long N, double T, double I2d, double p) {
  const double n = static_cast<double>(N);
  return std::pow(std::sqrt(n) * std::pow(n, 1.5) / T * I2d, 1 / p);
}

BushReport bush_diagnostic(const GenDirichletSeq& s, int L, int points, double max_constant) {
  if (L < 1) throw std::invalid_argument("L must be positive");
  const double n = static_cast<double>(s.N);
  const double r = s.theta * L * static_cast<double>(L) / (n * n);
  std::vector<IntervalList> sets;
  for (Eigen::Index f = 0; f < s.size(); f += L) {
    IntervalList d;
    const Eigen::Index e = std::min<Eigen::Index>(s.size(), f + L);
    for (Eigen::Index i = f; i < e; ++i)
      for (Eigen::Index j = f; j <= i; ++j) d.push_back({s[i] - s[j] - 2 * r, s[i] - s[j] + 2 * r});
    sets.push_back(normalize(std::move(d)));
  }
  BushReport rep;
  const double lo = 1 / n, hi = L / n;
  for (int k = 0; k < points; ++k) {
    const double t = points == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(k) / (points - 1));
    int c = 0;
    for (const auto& S : sets) {
      auto it = std::upper_bound(S.begin(), S.end(), t, [](double x, const Interval& iv) { return x < iv.lo; });
      if (it != S.begin() && std::prev(it)->hi >= t) ++c;
    }
    rep.t.push_back(t);
    rep.overlap.push_back(c);
    rep.constant = std::max(rep.constant, c * t * n * L / std::sqrt(n));
  }
  rep.linear = rep.constant <= max_constant;
  return rep;
}

}  // namespace declab
