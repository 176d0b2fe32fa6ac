#include "declab/counting.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace declab {

std::uint64_t diagonal_count(std::uint64_t M) {
  if (M == 0) return 0;
  return 6 * M * (M - 1) * (M > 1 ? M - 2 : 0) + 9 * M * (M - 1) + M;
}

SolutionCount count_solutions(const Eigen::VectorXd& a, double tol, CountMethod method, std::size_t memory_budget) {
  if (!(tol >= 0)) throw std::invalid_argument("tolerance must be nonnegative");
  const auto M = static_cast<std::size_t>(a.size());
  SolutionCount out;
  out.tolerance = tol;
  out.method = method;
  out.diagonal = diagonal_count(M);
  if (method == CountMethod::Brute) {
    if (M > 12) throw std::invalid_argument("brute force limited to 12 terms");
    std::uint64_t c = 0;
    for (std::size_t i = 0; i < M; ++i)
      for (std::size_t j = 0; j < M; ++j)
        for (std::size_t k = 0; k < M; ++k) {
          const double x = (a[i] + a[j]) + a[k];
          for (std::size_t l = 0; l < M; ++l)
            for (std::size_t m = 0; m < M; ++m)
              for (std::size_t n = 0; n < M; ++n)
                if (std::abs(x - ((a[l] + a[m]) + a[n])) <= tol) ++c;
        }
    out.total = c;
    return out;
  }
  const std::size_t bytes = M * M * M * sizeof(double);
  if (bytes > memory_budget)
    throw std::invalid_argument("mitm needs " + std::to_string(bytes) + " bytes, budget " + std::to_string(memory_budget));
  std::vector<double> S;
  S.reserve(M * M * M);
  for (std::size_t i = 0; i < M; ++i)
    for (std::size_t j = 0; j < M; ++j)
      for (std::size_t k = 0; k < M; ++k) S.push_back((a[i] + a[j]) + a[k]);
  std::sort(S.begin(), S.end());
  std::uint64_t c = 0;
  std::size_t lo = 0, hi = 0;
  for (std::size_t x = 0; x < S.size(); ++x) {
    while (S[x] - S[lo] > tol) ++lo;
    if (hi < x) hi = x;
    while (hi + 1 < S.size() && S[hi + 1] - S[x] <= tol) ++hi;
    c += hi - lo + 1;
  }
  out.total = c;
  return out;
}

SolutionCount count_solutions(const GenDirichletSeq& s, double tol, CountMethod method) {
  SolutionCount c = count_solutions(s.terms, tol, method);
  c.N = s.N;
  return c;
}

TripleProductStats triple_product_stats(long N, double c) {
  if (N < 1 || N > (1L << 16)) throw std::invalid_argument("N must lie in [1, 2^16]");
  if (!(c > 0)) throw std::invalid_argument("c must be positive");
  TripleProductStats t;
  t.N = N;
  t.M = static_cast<long>(std::floor(std::sqrt(static_cast<double>(N))));
  t.c = c;
  const std::int64_t n = N, m = t.M, base = n * n * n;
  const double width = c * static_cast<double>(N);
  t.intervals = static_cast<std::uint64_t>(std::ceil(static_cast<double>((n + m) * (n + m) * (n + m) - base) / width));
  std::vector<std::uint64_t> bins;
  bins.reserve(static_cast<std::size_t>(m * m * m));
  for (std::int64_t i = 1; i <= m; ++i)
    for (std::int64_t j = 1; j <= m; ++j)
      for (std::int64_t k = 1; k <= m; ++k)
        bins.push_back(static_cast<std::uint64_t>(static_cast<double>((n + i) * (n + j) * (n + k) - base) / width));
  std::sort(bins.begin(), bins.end());
  std::vector<std::uint64_t> runs;
  for (std::size_t i = 0; i < bins.size();) {
    std::size_t j = i;
    while (j < bins.size() && bins[j] == bins[i]) ++j;
    runs.push_back(j - i);
    i = j;
  }
  t.nonempty = runs.size();
  const std::uint64_t top = runs.empty() ? 0 : *std::max_element(runs.begin(), runs.end());
  for (std::uint64_t lam = 1; lam <= std::max<std::uint64_t>(top, 1); lam *= 2) {
    const auto e = static_cast<std::uint64_t>(std::count_if(runs.begin(), runs.end(), [lam](std::uint64_t r) { return r >= lam; }));
    t.lambda.push_back(lam);
    t.E.push_back(e);
    t.lambda2E.push_back(static_cast<double>(lam) * static_cast<double>(lam) * static_cast<double>(e));
  }
  return t;
}

long ap_intersection_count(const Eigen::VectorXd& terms, double a) {
  if (!(a > 0)) throw std::invalid_argument("step must be positive");
  long c = 0;
  for (Eigen::Index i = 0; i < terms.size(); ++i) {
    const double t = terms[i];
    const double k = std::round(t / a);
    if (std::abs(t - k * a) <= 1e-9 * std::max(std::abs(t), a)) ++c;
  }
  return c;
}

IncidenceCollection incidence_collection(const GenDirichletSeq& s, const IncidenceSpec& spec) {
  if (spec.M < 1) throw std::invalid_argument("multiplicity must be positive");
  IncidenceCollection c;
  c.cells = canonical_partition(s, spec.L);
  c.ball = ball_P_of_L(s, spec.L);
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (std::size_t j = 0; j < c.cells.size(); ++j) {
    const FatAP P0 = P_I(c.cells[j]);
    const double room = c.ball.R - P0.R;
    if (room < 0) throw std::invalid_argument("P_I does not fit in P(L)");
    if (spec.bush) {
      c.P.push_back(P0);
      c.cell.push_back(static_cast<int>(j));
      continue;
    }
    if (coin(rng) >= spec.keep) continue;
    std::uniform_real_distribution<double> centre(-room, room);
    for (int m = 0; m < spec.M; ++m) {
      c.P.push_back(translated(P0, centre(rng)));
      c.cell.push_back(static_cast<int>(j));
    }
  }
  // every cell carries M or 0 translates
  std::vector<int> per(c.cells.size(), 0);
  for (int j : c.cell) ++per[static_cast<std::size_t>(j)];
  const int want = spec.bush ? 1 : spec.M;
  for (int k : per)
    if (k != 0 && k != want) throw std::logic_error("multiplicity hypothesis violated");
  return c;
}

IncidenceReport incidence_experiment(const IncidenceCollection& c, long N, int L, int r, double max_constant) {
  if (r < 1) throw std::invalid_argument("r must be positive");
  IncidenceReport rep;
  rep.r = r;
  const IntervalList B = intervals(c.ball);
  rep.ball_measure = measure(B);
  rep.P_count = static_cast<double>(c.P.size());
  if (c.P.empty()) return rep;
  IntervalList pieces;
  double pm = 0.0;
  for (const auto& P : c.P) {
    const IntervalList I = intervals(P);
    pm += measure(I);
    pieces.insert(pieces.end(), I.begin(), I.end());
  }
  rep.P_measure = pm / rep.P_count;
  rep.Qr = intersection_measure(level_set(pieces, std::vector<double>(pieces.size(), 1.0), r), B);
  if (rep.Qr <= 0) return rep;
  rep.case2_constant = r / (rep.P_count * rep.P_measure / rep.ball_measure);
  const double sqrtN = std::sqrt(static_cast<double>(N));
  const double smax = std::min<double>(L, sqrtN / L);
  const std::size_t K = c.cells.size();
  std::vector<int> per(K, 0);
  for (int j : c.cell) ++per[static_cast<std::size_t>(j)];
  double best = std::numeric_limits<double>::infinity();
  for (int s = 1; s <= smax; s *= 2) {
    int Ms = 0;
    for (std::size_t g = 0; g < K; g += static_cast<std::size_t>(s)) {
      int k = 0;
      for (std::size_t j = g; j < std::min(K, g + static_cast<std::size_t>(s)); ++j) k += per[j];
      Ms = std::max(Ms, k);
    }
    const double b103 = Ms / (static_cast<double>(s) * r * r) * rep.P_count * rep.P_measure;
    const double b104 = Ms * sqrtN / (static_cast<double>(s) * s * L);
    const double k1 = std::max(rep.Qr / b103, r / b104);
    rep.case1_constants.push_back(k1);
    if (k1 < best) {
      best = k1;
      rep.s = s;
      rep.M_s = Ms;
      rep.bound = b103;
    }
  }
  if (best <= max_constant || best <= rep.case2_constant) {
    rep.matched_case = 1;
    rep.constant = best;
  } else {
    rep.matched_case = 2;
    rep.constant = rep.case2_constant;
    rep.bound = rep.P_count * rep.P_measure / rep.ball_measure;
    rep.s = 0;
    rep.M_s = 0;
  }
  return rep;
}

}  // namespace declab
