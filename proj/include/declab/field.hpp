#pragma once

#include <Eigen/Core>
#include <complex>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "declab/fatap.hpp"

namespace declab {

using cdouble = std::complex<double>;

// Gaussian physical envelope exp(-(sigma t)^2 / 2), sigma = width / 4 in angular frequency.
struct Envelope {
  double width = 0.0;
  double sigma() const { return width / 4; }
  double operator()(double t) const {
    const double s = sigma() * t;
    return std::exp(-0.5 * s * s);
  }
  // |t| beyond which envelope^p < tail
  double reach(double p, double tail = 1e-12) const;
};

// sum_n c_n e^{i t a_n}, optionally times an envelope
struct AtomicSum {
  Eigen::VectorXd freq;
  Eigen::VectorXcd coef;
  bool has_envelope = false;
  Envelope envelope;

  Eigen::Index size() const { return freq.size(); }
};

AtomicSum make_atomic(const Eigen::Ref<const Eigen::VectorXd>& freq, const Eigen::Ref<const Eigen::VectorXcd>& coef);
cdouble eval(const AtomicSum& f, double t);

struct GridField {
  double origin = 0.0;
  double h = 1.0;
  Eigen::VectorXcd samples;

  Eigen::Index size() const { return samples.size(); }
  double x(Eigen::Index i) const { return origin + static_cast<double>(i) * h; }
  Interval span() const { return {origin, origin + static_cast<double>(samples.size() - 1) * h}; }
};

// Samples f at origin + i h, i < n; rotation recurrence with periodic exact resync.
GridField to_grid(const AtomicSum& f, double origin, double h, Eigen::Index n);
// Same, with the carrier e^{i t demod} removed.
GridField to_grid(const AtomicSum& f, double origin, double h, Eigen::Index n, double demod);

// Atoms whose frequency lies in the cell's ball list. Throws "non-nested atom" if an atom's
// declared support crosses a cell boundary.
AtomicSum project(const AtomicSum& f, const std::vector<FreqCell>& cells, std::size_t j);

// Spectral projection of a grid field onto the union of intervals (angular frequency).
GridField project(const GridField& g, const IntervalList& band);

using Region = std::variant<Interval, FatAP, WeightSpec>;

struct NormReport {
  double p = 2.0;
  double value = 0.0;
  double h = 0.0;
  double error = 0.0;
  bool averaged = false;
};

// Trapezoid sum of |g|^p w over the region; p = infinity gives the grid max.
// Averaged norms divide by the region mass.
NormReport lp_norm(const GridField& g, double p, const Region& region, bool averaged = false);
// Sampled at step h (default from the frequency spread) over a bounded interval.
NormReport lp_norm(const AtomicSum& f, double p, Interval region, double h = 0.0, bool averaged = false);

// Trapezoid-rule step that integrates |f|^p exactly for f with frequencies in a band of width D.
double exact_step(double band, double p);

// Real kernel sampled at the grid step, centred: kernel[i] at (i - (n-1)/2) h.
GridField sample_kernel(const std::function<double(double)>& k, double h, double half_width);

// Linear (zero-padded) convolution evaluated on g's grid.
GridField convolve(const GridField& g, const GridField& kernel);
// Spectral multiplier in angular frequency; pad samples of zeros on each side.
GridField convolve(const GridField& g, const std::function<double(double)>& symbol, Eigen::Index pad);

GridField square_function(const std::vector<GridField>& parts, const std::vector<GridField>& kernels);

// little-endian {origin f64, step f64, len u64} then len (re, im) float32 pairs
void dump(const GridField& g, const std::string& path);
GridField load_dump(const std::string& path);

// Pairwise summation, independent of thread count.
double pairwise_sum(const double* x, std::size_t n);

}  // namespace declab
