#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "declab/fatap.hpp"
#include "declab/field.hpp"
#include "declab/ineqlab.hpp"
#include "declab/kernels.hpp"
#include "declab/seqgen.hpp"

namespace declab {

struct ScaleLadder {
  double epsilon = 0.1;
  std::vector<int> L;  // L_1 > ... > L_M, powers of two so cells nest
  int levels() const { return static_cast<int>(L.size()); }
};

// L_m = 2^{round(log2 sqrt N) - m d}, d = max(1, round(eps log2 N)): dyadic N^{1/2 - eps m}, at most 4 levels.
ScaleLadder make_ladder(long N, double epsilon = 0.1, int levels = 3);

struct HighLowOptions {
  double C_eps = 10.0;
  std::optional<double> lambda;  // overrides C_eps N^eps r / alpha
  double alpha = 0.0;            // <= 0: median of |f| over P(L_M)
  double r = 0.0;                // <= 0: median of g_M over P(L_M)
  bool check_leakage = false;
  double leak_scale = 6.0;       // containment in leak_scale * enclosing fat AP
  double rho_reach = 4.0;        // mollifier truncated at rho_reach / delta
};

struct PruneState {
  ScaleLadder ladder;
  long N = 0;
  double alpha = 0.0, r = 0.0, lambda = 0.0;
  double origin = 0.0, h = 1.0, demod = 0.0;
  Eigen::Index n = 0;
  FatAP ball;                                // P(L_M)
  std::vector<std::vector<FreqCell>> cells;  // cells[m-1] at scale L_m
  Eigen::VectorXcd f;                        // f = f_{M+1}
  std::vector<Eigen::VectorXcd> fm;          // fm[m-1] = f_m
  std::vector<Eigen::VectorXd> g;            // g[m-1] = g_m
  std::vector<double> quartic;               // ∫ sum_{I_m} |f_{m+1,I_m}|^4 W_{P(L_M),100}
  std::vector<std::size_t> kept, packets;    // per level
  std::size_t monotone_violations = 0;
  double max_leakage = 0.0;
  Eigen::VectorXd weight;                    // W_{P(L_M),100} on the grid
  std::vector<Eigen::Index> inside;          // grid points in P(L_M)

  double x(Eigen::Index i) const { return origin + static_cast<double>(i) * h; }
};

PruneState prune(const GenDirichletSeq& s, const AtomicSum& f, const ScaleLadder& ladder, const HighLowOptions& opt = {});

struct LowHigh {
  Eigen::VectorXd low;
  Eigen::VectorXd high;
};

// g^l = g * eta_m^, eta_m cutoff L_{m+1}/N in angular frequency; g^h = g - g^l.
LowHigh highlow_split(const PruneState& st, int m);
// Periodic split of a uniformly sampled g.
LowHigh highlow_split(const Eigen::VectorXd& g, double h, const LowPass& eta);

// sup over P(L_M) of |g_m^l| / g_{m+1} for m = 1..M-1; reports the largest.
RatioReport low_lemma_check(const PruneState& st);
// ∫|g_m^h|^2 W / ∫ sum |f_{m+1,I_m}|^4 W, largest over m = 1..M-1.
RatioReport high_lemma_check(const PruneState& st);

struct Classification {
  std::vector<Eigen::Index> points;  // grid indices inside P(L_M)
  std::vector<int> label;            // 0..M
  std::vector<bool> in_U;
  std::vector<std::size_t> counts;   // per label
};

Classification classify(const PruneState& st);

// Fraction of points of U ∩ Omega_m where |f_m| leaves [alpha/4, 4 alpha]; worst over m.
RatioReport fm_comparable_check(const PruneState& st, const Classification& c);

// CSV with header "x,label".
void write_labels(const std::string& path, const PruneState& st, const Classification& c);

}  // namespace declab
