#include "declab/kernels.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <stdexcept>
#include <unsupported/Eigen/FFT>

namespace declab {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTableStep = 1.0 / 256;
constexpr int kStencil = 10;

const Eigen::VectorXd& phi_table() {
  static const Eigen::VectorXd table = [] {
    const double d = 1.0 / 512;
    const int nxi = 1024;
    Eigen::ArrayXd xi = Eigen::ArrayXd::LinSpaced(nxi + 1, 0.0, 2.0);
    Eigen::ArrayXd w = xi.unaryExpr([](double t) { return plateau(t); }) * d;
    w[0] *= 0.5;
    const int n = static_cast<int>(kPhiRange / kTableStep) + kStencil;
    Eigen::VectorXd t(n + 1);
    for (int i = 0; i <= n; ++i) t[i] = 2.0 * (w * (2 * kPi * i * kTableStep * xi).cos()).sum();
    return t;
  }();
  return table;
}

const std::array<double, kStencil>& lagrange_weights() {
  static const std::array<double, kStencil> w = [] {
    std::array<double, kStencil> a{};
    double c = 1.0;
    for (int j = 0; j < kStencil; ++j) {
      a[j] = (j % 2 ? -c : c);
      c = c * (kStencil - 1 - j) / (j + 1);
    }
    return a;
  }();
  return w;
}

}  // namespace

double phi(double x) {
  x = std::abs(x);
  if (x >= kPhiRange) return 0.0;
  const auto& t = phi_table();
  const double u = x / kTableStep;
  const long i0 = std::max(0L, static_cast<long>(std::floor(u)) - kStencil / 2 + 1);
  const auto& w = lagrange_weights();
  double num = 0.0, den = 0.0;
  for (int j = 0; j < kStencil; ++j) {
    const long i = i0 + j;
    const double dx = u - static_cast<double>(i);
    if (dx == 0.0) return t[i];
    const double q = w[j] / dx;
    num += q * t[i];
    den += q;
  }
  return num / den;
}

std::vector<long> tilde_D_levels(int k, long M) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  std::vector<long> H{M};
  long p = 4 * M;
  for (int s = 2; s <= k; ++s) {
    if (p > (1L << 40)) throw std::overflow_error("frequency budget exceeded");
    H.push_back(p);
    p *= 8;
  }
  return H;
}

long tilde_D_support(int k, long M) {
  long s = 0;
  for (long h : tilde_D_levels(k, M)) s += h;
  return s;
}

double tilde_D(int k, long M, double y) {
  const auto H = tilde_D_levels(k, M);
  double v = dirichlet_kernel(H[0], y);
  for (std::size_t s = 1; s < H.size(); ++s) v *= dirichlet_kernel(H[s], y) / static_cast<double>(2 * H[s - 1] + 1);
  return v;
}

Eigen::VectorXd tilde_D_weights(int k, long M) {
  const auto H = tilde_D_levels(k, M);
  Eigen::VectorXd b = Eigen::VectorXd::Ones(2 * H[0] + 1);
  for (std::size_t s = 1; s < H.size(); ++s) {
    const long h = H[s];
    const long S = (b.size() - 1) / 2;
    Eigen::VectorXd c = Eigen::VectorXd::Zero(2 * (S + h) + 1);
    for (long i = 0; i < b.size(); ++i) c.segment(i, 2 * h + 1).array() += b[i];
    b = c / static_cast<double>(2 * H[s - 1] + 1);
  }
  return b;
}

std::complex<double> AdaptedKernel::operator()(double x) const {
  return envelope(x) * std::polar(1.0, 2 * kPi * x0 * x);
}

AdaptedKernel build_psi(const FatAP& target, long M, int k) {
  if (!(target.delta > 0) || !(target.v > 0)) throw std::invalid_argument("target must have positive thickness and step");
  if (M > 0 && target.delta > target.v / 2) throw std::invalid_argument("thickness exceeds half the step");
  if (M < 0) throw std::invalid_argument("M must be nonnegative");
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  return {target.x0, target.delta, target.v, M, k};
}

SpectrumCheck check_spectrum(const AdaptedKernel& psi, double window_factor, int oversample) {
  SpectrumCheck r;
  const double bw = psi.spectral_radius() + std::abs(psi.x0);
  // 2 H v integral so that lattice frequencies fall on bins
  const double H = std::ceil(2 * window_factor / psi.delta * psi.v) / (2 * psi.v);
  long n = 1;
  while (static_cast<double>(n) < 2 * H * 2 * bw * oversample) n <<= 1;
  const double h = 2 * H / static_cast<double>(n);
  std::vector<std::complex<double>> in(n), out;
  for (long i = 0; i < n; ++i) in[i] = psi(-H + static_cast<double>(i) * h);
  Eigen::FFT<double> fft;
  fft.fwd(out, in);
  r.h = h;
  r.half_window = H;
  r.samples = n;
  const double df = 1.0 / (2 * H);
  const double S = static_cast<double>(tilde_D_support(psi.k, psi.M));
  double peak = 0.0, outside = 0.0;
  r.core_min = std::numeric_limits<double>::infinity();
  r.core_max = 0.0;
  for (long kbin = 0; kbin < n; ++kbin) {
    const long kk = kbin <= n / 2 ? kbin : kbin - n;
    const double xi = static_cast<double>(kk) * df;
    const double mag = std::abs(out[kbin]) * h;
    peak = std::max(peak, mag);
    const double rel = xi - psi.x0;
    const double j = std::round(rel / psi.v);
    const double dl = std::abs(rel - j * psi.v);
    const bool inside = dl <= 2 * psi.delta && std::abs(j) <= S;
    if (!inside) outside = std::max(outside, mag);
    if (std::abs(j) <= static_cast<double>(psi.M) && dl < 0.5 * df) {
      r.core_min = std::min(r.core_min, mag);
      r.core_max = std::max(r.core_max, mag);
    }
  }
  r.leakage = peak > 0 ? outside / peak : 0.0;
  return r;
}

Mollifier::Mollifier(const AdaptedKernel& psi, double reach) : psi_(psi) {
  X_ = reach / psi.delta;
  h_ = 1.0 / (32.0 * psi.spectral_radius());
  long n = static_cast<long>(std::ceil(2 * X_ / h_));
  if (n % 2) ++n;
  h_ = 2 * X_ / static_cast<double>(n);
  f_.resize(n + 1);
  for (long i = 0; i <= n; ++i) {
    const double e = psi.envelope(-X_ + static_cast<double>(i) * h_);
    f_[i] = e * e;
  }
  F_.resize(n + 1);
  F_[0] = 0.0;
  for (long i = 0; i < n; ++i) {
    const double xm = -X_ + (static_cast<double>(i) + 0.5) * h_;
    const double em = psi.envelope(xm);
    F_[i + 1] = F_[i] + h_ / 6 * (f_[i] + 4 * em * em + f_[i + 1]);
  }
  mass_ = F_[n];
  norm2_ = mass_;
  f_ /= norm2_;
  F_ /= norm2_;
}

double Mollifier::operator()(double x) const {
  if (std::abs(x) > X_) return 0.0;
  const double e = psi_.envelope(x);
  return e * e / norm2_;
}

double Mollifier::cdf(double x) const {
  if (x <= -X_) return 0.0;
  if (x >= X_) return 1.0;
  const double u = (x + X_) / h_;
  const long i = std::min(static_cast<long>(u), static_cast<long>(F_.size()) - 2);
  const double t = u - static_cast<double>(i);
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * F_[i] + (t3 - 2 * t2 + t) * h_ * f_[i] + (-2 * t3 + 3 * t2) * F_[i + 1] +
         (t3 - t2) * h_ * f_[i + 1];
}

FatAP Mollifier::dual_tile() const {
  const double v = psi_.v;
  return {0.0, 1.0 / ((2 * psi_.M + 1) * v), 1.0 / v, 1.0 / psi_.delta};
}

long cell_core(long count, int) { return count <= 1 ? 0 : count / 2 + 1; }

AdaptedKernel cell_kernel(const FreqCell& cell, int k) {
  const double twopi = 2 * kPi;
  const FatAP& E = cell.enclosing;
  double delta = E.delta / twopi;
  const double v = cell.v / twopi;
  long M = cell_core(cell.count, k);
  const double lo = cell.balls.front().lo, hi = cell.balls.back().hi;
  const double centre = 0.5 * (lo + hi) / twopi;
  if (M > 0 && delta > v / 4) {
    M = 0;
    delta = 0.5 * (hi - lo) / twopi + delta;
  }
  if (M == 0) k = 1;
  return {centre, delta, v, M, k};
}

Mollifier build_rho(const FreqCell& cell, int k) { return Mollifier(cell_kernel(cell, k)); }

WavePackets::WavePackets(const Mollifier& rho, Interval window) : rho_(&rho) {
  const double X = rho.support();
  tiles_ = declab::tile(rho.dual_tile(), {window.lo - X, window.hi + X});
  pieces_.reserve(tiles_.size());
  for (const auto& t : tiles_) {
    IntervalList p = intervals(t);
    // half-open translates of a partition
    pieces_.push_back(std::move(p));
  }
}

double WavePackets::eval(std::size_t i, double x) const {
  const auto& p = pieces_[i];
  const double X = rho_->support();
  auto it = std::lower_bound(p.begin(), p.end(), x - X, [](const Interval& a, double v) { return a.hi < v; });
  double s = 0.0;
  for (; it != p.end() && it->lo <= x + X; ++it) s += rho_->cdf(x - it->lo) - rho_->cdf(x - it->hi);
  return s;
}

double WavePackets::sum(double x) const {
  double s = 0.0;
  for (std::size_t i = 0; i < tiles_.size(); ++i) s += eval(i, x);
  return s;
}

LowPass build_eta(long L_next, long N) { return {static_cast<double>(L_next) / static_cast<double>(N)}; }

}  // namespace declab
