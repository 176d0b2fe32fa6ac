#pragma once

#include <Eigen/Core>
#include <vector>

#include "declab/fatap.hpp"
#include "declab/field.hpp"
#include "declab/seqgen.hpp"

namespace declab {

struct CurveLift {
  long N = 0;
  Eigen::VectorXd e;       // e_n = a_n - (n-1)/N
  Eigen::VectorXd x;       // nodes (n-1)/sqrt N
  Eigen::VectorXd slope;   // g0' at the nodes
  Eigen::VectorXd curv;    // g0'' on each piece
  double width = 0.0;      // mollification radius c'/N
  double c = 0.25;
  double max_g0_prime = 0.0;

  // piecewise quadratic interpolant, extended past the end nodes
  double g0(double t) const;
  // g0 mollified by the plateau bump of radius width
  double g(double t) const;
  // max_n |g(x_n) - N e_n|
  double defect() const;
  // min and max of second difference quotients of g on a uniform grid of [0, 1]
  std::pair<double, double> curvature_range(int points = 257) const;
  // piecewise linear e(x) on [1, M]
  double e_linear(double u) const;
};

// Requires a_1 = 0 and a_2 - a_1 = 1/N.
CurveLift build_lift(const GenDirichletSeq& s, double c = 0.25);

struct AbelParts {
  double T = 0.0;       // padded to a multiple of 2 pi N
  bool padded = false;
  double A = 0.0;
  double B = 0.0;
  double direct = 0.0;  // ∫_0^T |sum b_n e^{i t a_n}|^p
};

double pad_to_period(double T, long N);

// Normalized sequence; N <= T <= N^2 before padding.
AbelParts abel_decompose(const GenDirichletSeq& s, const Eigen::VectorXcd& b, double T, double p);

// ∫∫ |sum b_n e^{i(t1 N e_n + t2 (n-1)/sqrt N)}|^p W_{B_R(0),100}(t1, t2).
double eval_2d_curve_sum(const CurveLift& lift, const Eigen::VectorXcd& b, double R, double p,
                         std::size_t max_grid = std::size_t{1} << 26);

// ∫∫ W_{B_R(0),100}
double weight_mass_2d(double R);

// Bound (R^{a(1/2-1/p)} + R^{a(1-1/p)-(1+a)/p}) with R^a = M.
double parabola_small_cap_bound(double R, double M, double p);

// 1D prediction (N^{1/2} (N^{3/2}/T) I)^{1/p} from the 2D integral I.
double transfer_prediction(long N, double T, double I2d, double p);

struct BushReport {
  std::vector<double> t;
  std::vector<double> overlap;  // number of cells I with t in I - I
  double constant = 0.0;        // max overlap * t * N * L / sqrt N over [1/N, L/N]
  bool linear = false;
};

// Overlap of the difference sets of cells of L consecutive terms, balls of radius L^2/N^2.
BushReport bush_diagnostic(const GenDirichletSeq& s, int L, int points = 128, double max_constant = 4.0);

}  // namespace declab
