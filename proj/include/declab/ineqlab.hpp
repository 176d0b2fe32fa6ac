#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "declab/fatap.hpp"
#include "declab/field.hpp"

namespace declab {

struct Params {
  long N = 0;
  double theta = 1.0;
  int L = 0;
  int L1 = 0;
  double p = 0.0;
  double q = 0.0;
  std::uint64_t seed = 0;
  double T = 0.0;
};

struct RatioReport {
  std::string id;
  Params params;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  std::optional<double> paper_bound;
  double error = 0.0;  // quadrature error estimate on lhs
  std::string note;
};

struct ExponentFit {
  Eigen::VectorXd x;  // log2 parameter
  Eigen::VectorXd y;  // log2 ratio
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // root mean square
};

// Least squares slope of log2(y) against log2(x); needs at least 4 points unless min_points is lowered.
ExponentFit fit_exponent(const std::vector<double>& x, const std::vector<double>& y, std::size_t min_points = 4);

enum class Family { ConstantBump, RandomSignSmallBall, SingleCell, Custom };

// Atoms for a bump family; envelope width = cell ball radius.
AtomicSum extremal_family(Family kind, const GenDirichletSeq& s, const std::vector<FreqCell>& cells, std::uint64_t seed = 0,
                          const Eigen::VectorXcd* coef = nullptr);

// Rademacher signs from the documented generator.
Eigen::VectorXd random_signs(Eigen::Index n, std::uint64_t seed);

// Boundaries b_0 < ... < b_K of the sorted atom list so that cell j owns atoms [b_j, b_{j+1}).
// Throws if an atom falls in no cell.
std::vector<Eigen::Index> segment_atoms(const AtomicSum& f, const std::vector<FreqCell>& cells);
std::vector<Eigen::Index> segment_by_floor(const AtomicSum& f, long M);

struct Moments {
  double total = 0.0;        // ∫ |sum f|^p
  Eigen::VectorXd cells;     // ∫ |f_j|^p
  double error = 0.0;        // |full - half-rate| on total
  double h = 0.0;
  Interval window;
};

// Fused quadrature of |sum|^p and per-segment |f_j|^p over the window.
Moments moments(const AtomicSum& f, const std::vector<Eigen::Index>& bounds, double p, Interval window, double h = 0.0);

// Window on which envelope^p exceeds 1e-12 of its peak.
Interval default_window(const AtomicSum& f, double p);

// ∫ |f|^4 exactly for a Gaussian envelope via sorted pair sums.
double fourth_moment(const AtomicSum& f);
// ∫ |f|^2 exactly for a Gaussian envelope.
double second_moment(const AtomicSum& f);

RatioReport decoupling_ratio(const AtomicSum& f, const std::vector<FreqCell>& cells, double p,
                             std::optional<Interval> region = std::nullopt);

// First and second terms of the small cap bound for general q.
std::pair<double, double> small_cap_terms(double N, double L, double L1, double p, double q);
double small_cap_bound(double N, double L, double L1, double p, double q);

RatioReport small_cap_ratio(const AtomicSum& f, const std::vector<FreqCell>& cells, long N, int L, int L1, double p, double q);

RatioReport flat_decoupling_ratio(const AtomicSum& f, long M, double p, std::optional<Interval> region = std::nullopt);

RatioReport refined_flat_ratio(const AtomicSum& f, const std::vector<FreqCell>& subcells, long multiplicity, int L, int L1,
                               double p, double q, std::optional<Interval> region = std::nullopt);

// Grid sup of sum_I averaged L^2(W_{P_I(x)}) energies over X; lhs over X.
RatioReport refined_decoupling_ratio(const GenDirichletSeq& s, const AtomicSum& f, const std::vector<FreqCell>& cells, int L,
                                     const IntervalList& X, double p, int sup_points = 33);

struct WeightedAP {
  FatAP P;
  double w = 1.0;
  std::size_t cell = 0;
};

RatioReport bilinear_kakeya_check(const std::vector<WeightedAP>& fam1, const std::vector<WeightedAP>& fam2, const FatAP& ball,
                                  const std::vector<FreqCell>& cells, long N);

RatioReport bilinear_restriction_check(const AtomicSum& F1, const AtomicSum& F2, const FatAP& ball, long N, double h = 0.0);

}  // namespace declab
