#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "declab/fatap.hpp"
#include "declab/seqgen.hpp"

namespace declab {

enum class CountMethod { Brute, Mitm };

struct SolutionCount {
  long N = 0;
  double tolerance = 0.0;
  std::uint64_t total = 0;     // ordered 6-tuples
  std::uint64_t diagonal = 0;  // {n1,n2,n3} = {n4,n5,n6} as multisets
  CountMethod method = CountMethod::Mitm;
};

// Ordered 6-tuples with |(a1+a2)+a3 - ((a4+a5)+a6)| <= tol.
// Brute force only for at most 12 terms; mitm needs 8 M^3 bytes below memory_budget.
SolutionCount count_solutions(const Eigen::VectorXd& terms, double tol, CountMethod method = CountMethod::Mitm,
                              std::size_t memory_budget = std::size_t{1} << 31);
SolutionCount count_solutions(const GenDirichletSeq& s, double tol, CountMethod method = CountMethod::Mitm);

std::uint64_t diagonal_count(std::uint64_t M);

struct TripleProductStats {
  long N = 0;
  long M = 0;
  double c = 1.0;
  std::uint64_t intervals = 0;  // bins of width cN covering [N^3, (N+M)^3]
  std::uint64_t nonempty = 0;
  std::vector<std::uint64_t> lambda;  // dyadic thresholds
  std::vector<std::uint64_t> E;       // bins holding at least lambda products
  std::vector<double> lambda2E;
};

// Products n1 n2 n3 with n_i in N+1..N+M, M = floor(sqrt N), binned into intervals of length cN.
TripleProductStats triple_product_stats(long N, double c = 1.0);

// Terms within 1e-9 relative of a multiple of a (0 included).
long ap_intersection_count(const Eigen::VectorXd& terms, double a);

struct IncidenceSpec {
  long N = 256;
  int L = 4;
  int L1 = 1;
  int M = 1;  // translates per selected cell
  std::uint64_t seed = 0;
  double keep = 0.5;  // probability a cell is selected
  bool bush = false;  // all translates concentric at 0
};

struct IncidenceReport {
  int r = 0;
  double Qr = 0.0;
  double P_count = 0.0;
  double P_measure = 0.0;  // mean |P|
  double ball_measure = 0.0;
  int matched_case = 0;
  int s = 0;
  double M_s = 0.0;
  double bound = 0.0;     // matched case bound with constant one
  double constant = 0.0;  // measured / bound
  std::vector<double> case1_constants;  // per dyadic s
  double case2_constant = 0.0;
};

struct IncidenceCollection {
  std::vector<FatAP> P;
  std::vector<int> cell;
  FatAP ball;
  std::vector<FreqCell> cells;
};

IncidenceCollection incidence_collection(const GenDirichletSeq& s, const IncidenceSpec& spec);
IncidenceReport incidence_experiment(const IncidenceCollection& c, long N, int L, int r, double max_constant = 16.0);

}  // namespace declab
