#pragma once

#include <vector>

#include "declab/intervals.hpp"
#include "declab/seqgen.hpp"

namespace declab {

// P^delta_v(x0) ∩ B_R(x0)
struct FatAP {
  double x0 = 0.0;
  double delta = 0.0;
  double v = 1.0;
  double R = 0.0;

  // collapses to one interval (a ball or a single thickened point)
  bool degenerate() const { return delta >= v / 2 || v > R + delta; }
  Interval hull() const { return {x0 - R, x0 + R}; }
};

IntervalList intervals(const FatAP& P);
double measure(const FatAP& P);
bool contains(const FatAP& P, double x);
FatAP dual(const FatAP& P);
// sP = P^{s delta}_v ∩ B_{sR}
FatAP scaled(const FatAP& P, double s);
FatAP translated(const FatAP& P, double s);
double intersection_measure(const FatAP& P, const FatAP& Q);
// Q ⊆ P
bool contains(const FatAP& P, const FatAP& Q);

struct GeometryConstants {
  double thick = 4.0;   // thickness of the enclosing fat AP, in units of theta L^2/N^2
  double rad = 16.0;    // radius of the enclosing fat AP, in units of L/N
  double ball = 4.0;    // thickness of P(L), in units of N^{3/2}/L^2
  double trans = 0.25;  // transversality threshold, in units of N^{-1/2}
};

struct FreqCell {
  int index = 0;
  Eigen::Index first = 0;  // index of the first term
  Eigen::Index count = 0;
  double radius = 0.0;     // ball radius theta L^2/N^2
  IntervalList balls;      // normalized
  double v = 0.0;
  FatAP enclosing;
};

std::vector<FreqCell> canonical_partition(const GenDirichletSeq& s, int L, const GeometryConstants& c = {});
// Cells of L1 consecutive balls of radius theta L^2/N^2; enclosing fat APs use scale L.
std::vector<FreqCell> small_cap_partition(const GenDirichletSeq& s, int L, int L1, const GeometryConstants& c = {});

IntervalList omega(const std::vector<FreqCell>& cells);

// Physical dual of a cell's enclosing fat AP, centred at x.
FatAP P_I(const FreqCell& cell, double x = 0.0);
FatAP ball_P_of_L(const GenDirichletSeq& s, int L, double y = 0.0, const GeometryConstants& c = {});

bool transversal(const FreqCell& a, const FreqCell& b, long N, double theta = 1.0, const GeometryConstants& c = {});

struct WeightSpec {
  FatAP base;
  int k = 100;
};

double weight_eval(const WeightSpec& W, double x);
// Half-width around x0 beyond which W < tail.
double weight_support(const WeightSpec& W, double tail = 1e-12);

struct PairIntersection {
  double constant = 0.0;       // max |P_I ∩ (P_J + tau)| |P(L)| / (|P_I| |P_J|)
  double intersection = 0.0;   // at the maximiser
  std::size_t pairs = 0;       // transversal pairs swept
  int i = -1, j = -1;
};

// All transversal pairs of canonical cells, P_J shifted by l / v_J with |l| <= shifts.
PairIntersection transversal_intersection_sweep(const GenDirichletSeq& s, int L, int shifts = 8,
                                                const GeometryConstants& c = {});

struct ContainmentReport {
  std::size_t cells = 0;
  std::size_t violations = 0;  // cells with some touching translate not inside 2P(L)
};

// Every translate of P_I meeting P(L) lies in 2P(L); decided exactly with interval arithmetic.
ContainmentReport ball_containment(const GenDirichletSeq& s, int L, const GeometryConstants& c = {});

// Exact partition of a window into translates of a normalized copy of P.
// Non-degenerate P is replaced by P^{tau*}_V ∩ B_{(K+1/2)V} with
// tau* = V/(2 ceil(V/(2 tau))) and K = floor(R/V); translates are by a*2 tau* + b*(2K+1)V.
// Degenerate P is tiled by shifts of 2R. Pieces are half-open.
std::vector<FatAP> tile(const FatAP& P, Interval window);
FatAP tile_base(const FatAP& P);

}  // namespace declab
