#include "declab/seqgen.hpp"

#include <cmath>
#include <json.hpp>
#include <random>
#include <stdexcept>

namespace declab {

const char* kind_name(SeqKind k) {
  switch (k) {
    case SeqKind::Log: return "log";
    case SeqKind::ApRich: return "ap_rich";
    case SeqKind::Random: return "random";
    default: return "custom";
  }
}

ValidationReport validate(const Eigen::Ref<const Eigen::VectorXd>& a, long N, double theta) {
  if (a.size() < 3) throw std::invalid_argument("too short to test convexity");
  ValidationReport r;
  const double n = static_cast<double>(N);
  r.first_gap = a[1] - a[0];
  const Eigen::VectorXd d1 = a.tail(a.size() - 1) - a.head(a.size() - 1);
  const Eigen::VectorXd d2 = d1.tail(d1.size() - 1) - d1.head(d1.size() - 1);
  r.min_second = d2.minCoeff();
  r.max_second = d2.maxCoeff();
  if (r.first_gap < 1.0 / (4 * n) || r.first_gap > 4.0 / n) {
    r.violating = 0;
    r.reason = "first gap";
  } else {
    const double lo = theta / (4 * n * n), hi = 4 * theta / (n * n);
    for (Eigen::Index i = 0; i < d2.size(); ++i) {
      if (d2[i] < lo || d2[i] > hi) {
        r.violating = i;
        r.reason = d2[i] < lo ? "second difference below range" : "second difference above range";
        break;
      }
    }
  }
  r.valid = !r.violating.has_value();
  return r;
}

long short_length(long N) {
  long m = static_cast<long>(std::floor(std::sqrt(static_cast<double>(N))));
  while ((m + 1) * (m + 1) <= N) ++m;
  while (m * m > N) --m;
  return m;
}

Eigen::VectorXd log_terms(long N) {
  if (N < 4) throw std::invalid_argument("N must be at least 4");
  const long M = short_length(N);
  Eigen::VectorXd a(M);
  for (long n = 1; n <= M; ++n) a[n - 1] = std::log1p(static_cast<double>(n - 1) / (N + 1));
  return a;
}

GenDirichletSeq gen_log(long N) {
  if (N < 4) throw std::invalid_argument("N must be at least 4");
  const long M = short_length(N);
  GenDirichletSeq s;
  s.N = N;
  s.theta = 1.0;
  s.kind = SeqKind::Log;
  s.terms.resize(M);
  const double top = static_cast<double>(N + M);
  for (long n = 1; n <= M; ++n) s.terms[n - 1] = -std::log1p(-static_cast<double>(n - 1) / top);
  return s;
}

double ap_rich_value(long N, double x) {
  const double n = static_cast<double>(N);
  const double d = std::sqrt(n) - std::sqrt(n - 4 * x);
  return (4 * x + d * d) / (4 * n);
}

long ap_rich_admissible_end(long N) {
  const long end = N / 8;
  const double n = static_cast<double>(N);
  const double lo = 1.0 / (4 * n * n), hi = 4.0 / (n * n);
  long last = 1;
  for (long k = 2; k <= end; ++k) {
    double d2 = ap_rich_value(N, k) - 2 * ap_rich_value(N, k - 1) + ap_rich_value(N, k - 2);
    if (d2 < lo || d2 > hi) break;
    last = k;
  }
  return last;
}

Eigen::VectorXd extend_constant_d2(const Eigen::Ref<const Eigen::VectorXd>& a, Eigen::Index M) {
  if (a.size() < 3) throw std::invalid_argument("need three terms to extend");
  Eigen::VectorXd out(std::max(M, a.size()));
  out.head(a.size()) = a;
  const Eigen::Index k = a.size();
  const double d2 = a[k - 1] - 2 * a[k - 2] + a[k - 3];
  double gap = a[k - 1] - a[k - 2];
  for (Eigen::Index i = k; i < out.size(); ++i) {
    gap += d2;
    out[i] = out[i - 1] + gap;
  }
  return out;
}

GenDirichletSeq gen_ap_rich(long N, long N0) {
  if (N < N0) throw std::invalid_argument("Lemma constants need large N");
  const long end = N / 8;
  const long keep = ap_rich_admissible_end(N);
  Eigen::VectorXd g(keep + 1);
  for (long n = 0; n <= keep; ++n) g[n] = ap_rich_value(N, static_cast<double>(n));
  GenDirichletSeq s;
  s.N = N;
  s.theta = 1.0;
  s.kind = SeqKind::ApRich;
  s.terms = extend_constant_d2(g, end + 1);
  return s;
}

namespace {

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

GenDirichletSeq gen_random(long N, double theta, std::uint64_t seed, long M) {
  if (N < 4) throw std::invalid_argument("N must be at least 4");
  if (!(theta > 0 && theta <= 1)) throw std::invalid_argument("theta must lie in (0,1]");
  if (M < 0) M = short_length(N);
  std::mt19937_64 rng(seed);
  const double n = static_cast<double>(N);
  GenDirichletSeq s;
  s.N = N;
  s.theta = theta;
  s.kind = SeqKind::Random;
  s.seed = seed;
  s.terms.resize(M);
  if (M == 0) return s;
  s.terms[0] = 0.0;
  double gap = 1.0 / (2 * n) + unit(rng) * (2.0 / n - 1.0 / (2 * n));
  for (long i = 1; i < M; ++i) {
    s.terms[i] = s.terms[i - 1] + gap;
    gap += theta / (2 * n * n) + unit(rng) * (2 * theta / (n * n) - theta / (2 * n * n));
  }
  return s;
}

GenDirichletSeq rescale_segment(const GenDirichletSeq& s, long K, Eigen::Index start, Eigen::Index count) {
  if (K < 1) throw std::invalid_argument("K must be positive");
  if (start < 0 || count < 1 || start + count > s.size()) throw std::out_of_range("segment out of bounds");
  const long K2 = K * K;
  if (s.N % K2 != 0 || s.N / K2 < 4) throw std::invalid_argument("N/K^2 is not an integer at least 4");
  GenDirichletSeq r;
  r.N = s.N / K2;
  r.theta = s.theta / static_cast<double>(K2);
  r.kind = s.kind;
  r.seed = s.seed;
  r.terms = static_cast<double>(K2) * (s.terms.segment(start, count).array() - s.terms[start]).matrix();
  return r;
}

GenDirichletSeq normalize_unit_gap(const GenDirichletSeq& s) {
  if (s.size() < 2) throw std::invalid_argument("need two terms");
  const double gap = s.terms[1] - s.terms[0];
  if (!(gap > 0)) throw std::invalid_argument("sequence not increasing");
  GenDirichletSeq r = s;
  const double scale = 1.0 / (static_cast<double>(s.N) * gap);
  r.terms = scale * (s.terms.array() - s.terms[0]).matrix();
  // second differences scale with the first gap
  r.theta = s.theta * scale;
  return r;
}

std::string to_json(const GenDirichletSeq& s) {
  nlohmann::json j;
  j["kind"] = kind_name(s.kind);
  j["N"] = s.N;
  j["theta"] = s.theta;
  j["seed"] = s.seed;
  j["terms"] = std::vector<double>(s.terms.data(), s.terms.data() + s.size());
  return j.dump();
}

}  // namespace declab
