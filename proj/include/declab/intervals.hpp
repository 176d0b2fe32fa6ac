#pragma once

#include <vector>

namespace declab {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi > lo ? hi - lo : 0.0; }
};

using IntervalList = std::vector<Interval>;

// Sorted, pairwise disjoint, empty pieces dropped.
IntervalList normalize(IntervalList v);

double measure(const IntervalList& normalized);

IntervalList intersect(const IntervalList& a, const IntervalList& b);
double intersection_measure(const IntervalList& a, const IntervalList& b);
IntervalList unite(const IntervalList& a, const IntervalList& b);

// inner is contained in the union of outer (both normalized)
bool contains(const IntervalList& outer, const IntervalList& inner);

double distance(const IntervalList& a, const IntervalList& b);

// Max and min number of intervals covering a point inside window; the input
// need not be normalized. Stretches shorter than slack are ignored.
struct CoverCount {
  int min = 0;
  int max = 0;
};
CoverCount cover_count(const IntervalList& pieces, Interval window, double slack = 0.0);

// Sum of weights of pieces covering each point, returned as level sets
// {x : sum >= r}.
IntervalList level_set(const IntervalList& pieces, const std::vector<double>& weights, double r);

}  // namespace declab
