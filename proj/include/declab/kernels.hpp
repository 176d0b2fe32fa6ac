#pragma once

#include <Eigen/Core>
#include <cmath>
#include <complex>
#include <vector>

#include "declab/fatap.hpp"

namespace declab {

// Smooth even plateau: 1 on |xi| <= 1, 0 for |xi| >= 2.
template <typename Scalar>
Scalar plateau(Scalar xi) {
  using std::abs;
  using std::exp;
  const Scalar a = abs(xi);
  if (a <= Scalar(1)) return Scalar(1);
  if (a >= Scalar(2)) return Scalar(0);
  const Scalar u = exp(-Scalar(1) / (Scalar(2) - a));
  const Scalar d = exp(-Scalar(1) / (a - Scalar(1)));
  return u / (u + d);
}

// Inverse Fourier transform of the plateau, phi(x) = ∫ plateau(xi) e^{2 pi i x xi} dxi.
// Tabulated on [0, 80]; zero beyond.
double phi(double x);
inline double phi_scaled(double x, double delta) { return delta * phi(delta * x); }
constexpr double kPhiRange = 80.0;

template <typename Scalar>
Scalar dirichlet_kernel(long M, Scalar x) {
  using std::abs;
  using std::round;
  using std::sin;
  const Scalar pi = Scalar(3.141592653589793238462643383279502884L);
  const Scalar r = x - round(x);
  const Scalar a = Scalar(2 * M + 1);
  const Scalar t = pi * r;
  if (abs(t) < Scalar(1e-5)) return a * (Scalar(1) - (a * a - Scalar(1)) * t * t / Scalar(6));
  return sin(a * t) / sin(t);
}

template <typename Scalar>
Scalar dirichlet_direct(long M, Scalar x) {
  using std::cos;
  const Scalar pi = Scalar(3.141592653589793238462643383279502884L);
  Scalar s(1);
  for (long j = 1; j <= M; ++j) s += Scalar(2) * cos(Scalar(2) * pi * Scalar(j) * x);
  return s;
}

// Half-lengths H_1 = M, H_s = 4 * 8^{s-2} M of the Dirichlet factors in tilde_D.
std::vector<long> tilde_D_levels(int k, long M);
// Largest frequency carried by tilde_D(k, M, .).
long tilde_D_support(int k, long M);

// tilde_D_k(y) = D_M(y) prod_{s=2..k} D_{H_s}(y) / (2 H_{s-1} + 1); Fourier weights equal 1 on |j| <= M.
double tilde_D(int k, long M, double y);
// Fourier weights b_j, j = -S..S, by discrete convolution.
Eigen::VectorXd tilde_D_weights(int k, long M);

// psi(x) = phi_{1/delta}(x) tilde_D_k(v x) e^{2 pi i x0 x}; spectrum 1 on the core lattice
// frequencies x0 + j v, |j| <= M, and supported in P^{2 delta}_v(x0) ∩ B_{S v + 2 delta}(x0).
struct AdaptedKernel {
  double x0 = 0.0;
  double delta = 0.0;
  double v = 1.0;
  long M = 1;
  int k = 1;

  double envelope(double x) const { return phi_scaled(x, delta) * tilde_D(k, M, v * x); }
  std::complex<double> operator()(double x) const;
  double spectral_radius() const { return static_cast<double>(tilde_D_support(k, M)) * v + 2 * delta; }
  FatAP target() const { return {x0, delta, v, static_cast<double>(M) * v}; }
};

AdaptedKernel build_psi(const FatAP& target, long M, int k);

struct SpectrumCheck {
  double core_min = 0.0;   // min |psi^| over core lattice frequencies
  double core_max = 0.0;
  double leakage = 0.0;    // max |psi^| outside the support, relative to max |psi^|
  double h = 0.0;
  double half_window = 0.0;
  long samples = 0;
};

// Discrete Fourier check on [-H, H), H >= window_factor / delta, oversampled past Nyquist.
SpectrumCheck check_spectrum(const AdaptedKernel& psi, double window_factor = 32.0, int oversample = 8);

// rho = |psi|^2 / ||psi||_2^2 with its distribution function tabulated.
class Mollifier {
 public:
  Mollifier() = default;
  Mollifier(const AdaptedKernel& psi, double reach = 16.0);

  double operator()(double x) const;
  double cdf(double x) const;
  double support() const { return X_; }
  double mass() const { return mass_; }
  const AdaptedKernel& psi() const { return psi_; }
  // Dual fat AP of the kernel's spectrum: thickness 1/((2M+1)v), step 1/v, radius 1/delta.
  FatAP dual_tile() const;

 private:
  AdaptedKernel psi_;
  double X_ = 0.0;
  double h_ = 0.0;
  double norm2_ = 1.0;
  double mass_ = 0.0;
  Eigen::VectorXd F_;
  Eigen::VectorXd f_;
};

// Core half-length used for a cell of `count` balls.
long cell_core(long count, int k);

// psi adapted to a cell's enclosing fat AP, converted to cycles (frequencies a / 2 pi).
AdaptedKernel cell_kernel(const FreqCell& cell, int k = 1);
Mollifier build_rho(const FreqCell& cell, int k = 1);

// phi_P = 1_P * rho for a partition of the line by tiles P.
class WavePackets {
 public:
  WavePackets(const Mollifier& rho, Interval window);

  std::size_t size() const { return tiles_.size(); }
  const FatAP& tile(std::size_t i) const { return tiles_[i]; }
  const std::vector<FatAP>& tiles() const { return tiles_; }
  double eval(std::size_t i, double x) const;
  double sum(double x) const;

 private:
  const Mollifier* rho_;
  std::vector<FatAP> tiles_;
  std::vector<IntervalList> pieces_;
};

// Low-pass symbol in angular frequency: 1 on |xi| <= cutoff, 0 for |xi| >= 2 cutoff.
struct LowPass {
  double cutoff = 1.0;
  double operator()(double xi) const { return plateau(xi / cutoff); }
};

LowPass build_eta(long L_next, long N);

}  // namespace declab
