#include "declab/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <unsupported/Eigen/FFT>

#include "declab/parallel.hpp"

namespace declab {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

Eigen::Index next_pow2(Eigen::Index n) {
  Eigen::Index m = 1;
  while (m < n) m <<= 1;
  return m;
}

}  // namespace

double Envelope::reach(double p, double tail) const {
  return std::sqrt(-2.0 * std::log(tail) / p) / sigma();
}

AtomicSum make_atomic(const Eigen::Ref<const Eigen::VectorXd>& freq, const Eigen::Ref<const Eigen::VectorXcd>& coef) {
  if (freq.size() != coef.size()) throw std::invalid_argument("frequency and coefficient counts differ");
  std::vector<Eigen::Index> idx(freq.size());
  for (Eigen::Index i = 0; i < freq.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) { return freq[a] < freq[b]; });
  AtomicSum f;
  f.freq.resize(freq.size());
  f.coef.resize(freq.size());
  for (Eigen::Index i = 0; i < freq.size(); ++i) {
    f.freq[i] = freq[idx[i]];
    f.coef[i] = coef[idx[i]];
  }
  return f;
}

cdouble eval(const AtomicSum& f, double t) {
  cdouble s = 0.0;
  for (Eigen::Index n = 0; n < f.size(); ++n) s += f.coef[n] * std::polar(1.0, t * f.freq[n]);
  return f.has_envelope ? s * f.envelope(t) : s;
}

GridField to_grid(const AtomicSum& f, double origin, double h, Eigen::Index n, double demod) {
  GridField g;
  g.origin = origin;
  g.h = h;
  g.samples = Eigen::VectorXcd::Zero(n);
  constexpr Eigen::Index kResync = 2048;
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t b, std::size_t e) {
    for (Eigen::Index a = 0; a < f.size(); ++a) {
      const double w = f.freq[a] - demod;
      const cdouble rot = std::polar(1.0, h * w);
      cdouble z;
      for (auto i = static_cast<Eigen::Index>(b); i < static_cast<Eigen::Index>(e); ++i) {
        if ((i - static_cast<Eigen::Index>(b)) % kResync == 0) z = f.coef[a] * std::polar(1.0, g.x(i) * w);
        g.samples[i] += z;
        z *= rot;
      }
    }
    if (f.has_envelope)
      for (auto i = static_cast<Eigen::Index>(b); i < static_cast<Eigen::Index>(e); ++i) g.samples[i] *= f.envelope(g.x(i));
  });
  return g;
}

GridField to_grid(const AtomicSum& f, double origin, double h, Eigen::Index n) { return to_grid(f, origin, h, n, 0.0); }

AtomicSum project(const AtomicSum& f, const std::vector<FreqCell>& cells, std::size_t j) {
  const double w = f.has_envelope ? f.envelope.width : 0.0;
  const IntervalList& own = cells.at(j).balls;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index n = 0; n < f.size(); ++n) {
    const double a = f.freq[n];
    if (w == 0.0) {
      if (std::none_of(own.begin(), own.end(), [a](const Interval& i) { return i.lo <= a && a <= i.hi; })) continue;
    } else {
      const double in = intersection_measure(own, IntervalList{{a - w, a + w}});
      if (in <= 0.0) continue;
      if (in < 2 * w * (1 - 1e-12)) throw std::invalid_argument("non-nested atom");
    }
    keep.push_back(n);
  }
  AtomicSum out;
  out.has_envelope = f.has_envelope;
  out.envelope = f.envelope;
  out.freq.resize(static_cast<Eigen::Index>(keep.size()));
  out.coef.resize(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) {
    out.freq[static_cast<Eigen::Index>(i)] = f.freq[keep[i]];
    out.coef[static_cast<Eigen::Index>(i)] = f.coef[keep[i]];
  }
  return out;
}

GridField project(const GridField& g, const IntervalList& band) {
  const Eigen::Index n = g.size();
  Eigen::FFT<double> fft;
  std::vector<cdouble> in(g.samples.data(), g.samples.data() + n), spec, out;
  fft.fwd(spec, in);
  const double df = 2 * kPi / (static_cast<double>(n) * g.h);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double xi = static_cast<double>(k <= n / 2 ? k : k - n) * df;
    auto it = std::upper_bound(band.begin(), band.end(), xi, [](double v, const Interval& a) { return v < a.hi; });
    if (it == band.end() || it->lo > xi) spec[k] = 0.0;
  }
  fft.inv(out, spec);
  GridField r = g;
  r.samples = Eigen::Map<Eigen::VectorXcd>(out.data(), n);
  return r;
}

double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 64) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t m = n / 2;
  return pairwise_sum(x, m) + pairwise_sum(x + m, n - m);
}

namespace {

Eigen::VectorXd region_weights(const GridField& g, const Region& region) {
  const Interval span = g.span();
  Eigen::VectorXd w(g.size());
  if (const auto* iv = std::get_if<Interval>(&region)) {
    if (iv->lo < span.lo - g.h || iv->hi > span.hi + g.h) throw std::invalid_argument("region exceeds grid");
    for (Eigen::Index i = 0; i < g.size(); ++i) w[i] = (g.x(i) >= iv->lo && g.x(i) <= iv->hi) ? 1.0 : 0.0;
  } else if (const auto* P = std::get_if<FatAP>(&region)) {
    if (P->x0 - P->R < span.lo - g.h || P->x0 + P->R > span.hi + g.h) throw std::invalid_argument("region exceeds grid");
    for (Eigen::Index i = 0; i < g.size(); ++i) w[i] = contains(*P, g.x(i)) ? 1.0 : 0.0;
  } else {
    const auto& W = std::get<WeightSpec>(region);
    const double reach = weight_support(W);
    if (W.base.x0 - reach < span.lo - g.h || W.base.x0 + reach > span.hi + g.h)
      throw std::invalid_argument("weight tail exceeds grid");
    for (Eigen::Index i = 0; i < g.size(); ++i) w[i] = weight_eval(W, g.x(i));
  }
  return w;
}

NormReport finish(const Eigen::VectorXd& f, const Eigen::VectorXd& w, double p, double h, bool averaged) {
  NormReport r;
  r.p = p;
  r.h = h;
  r.averaged = averaged;
  if (std::isinf(p)) {
    double m = 0.0;
    for (Eigen::Index i = 0; i < f.size(); ++i)
      if (w[i] > 0) m = std::max(m, f[i]);
    r.value = m;
    return r;
  }
  Eigen::VectorXd t = (f.array().pow(p) * w.array()).matrix();
  const double full = h * pairwise_sum(t.data(), static_cast<std::size_t>(t.size()));
  double even = 0.0, mass = h * w.sum(), mass2 = 0.0;
  for (Eigen::Index i = 0; i < t.size(); i += 2) {
    even += t[i];
    mass2 += w[i];
  }
  even *= 2 * h;
  mass2 *= 2 * h;
  double a = full, b = even;
  if (averaged) {
    if (!(mass > 0)) throw std::invalid_argument("empty region");
    a /= mass;
    b = mass2 > 0 ? b / mass2 : a;
  }
  r.value = std::pow(a, 1.0 / p);
  r.error = std::abs(r.value - std::pow(b, 1.0 / p));
  return r;
}

}  // namespace

NormReport lp_norm(const GridField& g, double p, const Region& region, bool averaged) {
  if (!(p >= 1)) throw std::invalid_argument("p must be at least 1");
  return finish(g.samples.cwiseAbs(), region_weights(g, region), p, g.h, averaged);
}

double exact_step(double band, double p) {
  const double q = std::isinf(p) ? 8.0 : p + 2.0;
  return 2 * kPi / (q * band);
}

NormReport lp_norm(const AtomicSum& f, double p, Interval region, double h, bool averaged) {
  if (!std::isfinite(region.lo) || !std::isfinite(region.hi)) throw std::invalid_argument("unbounded region");
  if (f.size() == 0) return NormReport{p, 0.0, h, 0.0, averaged};
  const double lo = f.freq.minCoeff(), hi = f.freq.maxCoeff();
  if (h <= 0) {
    double band = hi - lo;
    if (f.has_envelope) band += 8 * f.envelope.sigma();
    if (band <= 0) band = 1.0 / std::max(region.length(), 1e-300);
    h = exact_step(band, p);
  }
  const Eigen::Index n = std::max<Eigen::Index>(static_cast<Eigen::Index>(std::ceil(region.length() / h)), 1) + 1;
  h = region.length() / static_cast<double>(n - 1);
  GridField g = to_grid(f, region.lo, h, n, 0.5 * (lo + hi));
  Eigen::VectorXd w = Eigen::VectorXd::Ones(n);
  w[0] = 0.5;
  w[n - 1] = 0.5;
  return finish(g.samples.cwiseAbs(), w, p, h, averaged);
}

GridField sample_kernel(const std::function<double(double)>& k, double h, double half_width) {
  const Eigen::Index c = static_cast<Eigen::Index>(std::ceil(half_width / h));
  GridField g;
  g.h = h;
  g.origin = -static_cast<double>(c) * h;
  g.samples.resize(2 * c + 1);
  for (Eigen::Index i = 0; i < g.size(); ++i) g.samples[i] = k(g.x(i));
  return g;
}

GridField convolve(const GridField& g, const GridField& kernel) {
  if (std::abs(kernel.h - g.h) > 1e-12 * g.h) throw std::invalid_argument("incompatible grids");
  if (kernel.size() % 2 == 0) throw std::invalid_argument("kernel must be centred with odd length");
  const Eigen::Index n = g.size(), m = kernel.size(), c = (m - 1) / 2;
  const Eigen::Index len = next_pow2(n + m - 1);
  std::vector<cdouble> a(len, 0.0), b(len, 0.0), A, B, out;
  for (Eigen::Index i = 0; i < n; ++i) a[i] = g.samples[i];
  for (Eigen::Index i = 0; i < m; ++i) b[i] = kernel.samples[i];
  Eigen::FFT<double> fft;
  fft.fwd(A, a);
  fft.fwd(B, b);
  for (Eigen::Index i = 0; i < len; ++i) A[i] *= B[i];
  fft.inv(out, A);
  GridField r = g;
  for (Eigen::Index i = 0; i < n; ++i) r.samples[i] = g.h * out[i + c];
  return r;
}

GridField convolve(const GridField& g, const std::function<double(double)>& symbol, Eigen::Index pad) {
  const Eigen::Index n = g.size();
  const Eigen::Index len = next_pow2(n + 2 * pad);
  std::vector<cdouble> a(len, 0.0), A, out;
  for (Eigen::Index i = 0; i < n; ++i) a[pad + i] = g.samples[i];
  Eigen::FFT<double> fft;
  fft.fwd(A, a);
  const double df = 2 * kPi / (static_cast<double>(len) * g.h);
  for (Eigen::Index k = 0; k < len; ++k) A[k] *= symbol(static_cast<double>(k <= len / 2 ? k : k - len) * df);
  fft.inv(out, A);
  GridField r = g;
  for (Eigen::Index i = 0; i < n; ++i) r.samples[i] = out[pad + i];
  return r;
}

GridField square_function(const std::vector<GridField>& parts, const std::vector<GridField>& kernels) {
  if (parts.empty()) throw std::invalid_argument("no parts");
  if (parts.size() != kernels.size()) throw std::invalid_argument("one kernel per part");
  GridField total = parts.front();
  total.samples.setZero();
  for (std::size_t i = 0; i < parts.size(); ++i) {
    GridField sq = parts[i];
    sq.samples = parts[i].samples.cwiseAbs2().cast<cdouble>();
    total.samples += convolve(sq, kernels[i]).samples.real().cast<cdouble>();
  }
  return total;
}

void dump(const GridField& g, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path);
  const std::uint64_t n = static_cast<std::uint64_t>(g.size());
  os.write(reinterpret_cast<const char*>(&g.origin), 8);
  os.write(reinterpret_cast<const char*>(&g.h), 8);
  os.write(reinterpret_cast<const char*>(&n), 8);
  std::vector<float> buf(2 * n);
  for (std::uint64_t i = 0; i < n; ++i) {
    buf[2 * i] = static_cast<float>(g.samples[static_cast<Eigen::Index>(i)].real());
    buf[2 * i + 1] = static_cast<float>(g.samples[static_cast<Eigen::Index>(i)].imag());
  }
  os.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(float)));
}

GridField load_dump(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  GridField g;
  std::uint64_t n = 0;
  is.read(reinterpret_cast<char*>(&g.origin), 8);
  is.read(reinterpret_cast<char*>(&g.h), 8);
  is.read(reinterpret_cast<char*>(&n), 8);
  std::vector<float> buf(2 * n);
  is.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(float)));
  if (!is) throw std::runtime_error("truncated dump " + path);
  g.samples.resize(static_cast<Eigen::Index>(n));
  for (std::uint64_t i = 0; i < n; ++i) g.samples[static_cast<Eigen::Index>(i)] = {buf[2 * i], buf[2 * i + 1]};
  return g;
}

}  // namespace declab
