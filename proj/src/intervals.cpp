#include "declab/intervals.hpp"

#include <algorithm>
#include <limits>
#include <utility>

namespace declab {

IntervalList normalize(IntervalList v) {
  v.erase(std::remove_if(v.begin(), v.end(), [](const Interval& i) { return !(i.hi > i.lo); }), v.end());
  std::sort(v.begin(), v.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  IntervalList out;
  out.reserve(v.size());
  for (const auto& i : v) {
    if (!out.empty() && i.lo <= out.back().hi)
      out.back().hi = std::max(out.back().hi, i.hi);
    else
      out.push_back(i);
  }
  return out;
}

double measure(const IntervalList& normalized) {
  double s = 0.0;
  for (const auto& i : normalized) s += i.length();
  return s;
}

IntervalList intersect(const IntervalList& a, const IntervalList& b) {
  IntervalList out;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    double lo = std::max(a[i].lo, b[j].lo);
    double hi = std::min(a[i].hi, b[j].hi);
    if (hi > lo) out.push_back({lo, hi});
    if (a[i].hi < b[j].hi)
      ++i;
    else
      ++j;
  }
  return out;
}

double intersection_measure(const IntervalList& a, const IntervalList& b) {
  double s = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    double lo = std::max(a[i].lo, b[j].lo);
    double hi = std::min(a[i].hi, b[j].hi);
    if (hi > lo) s += hi - lo;
    if (a[i].hi < b[j].hi)
      ++i;
    else
      ++j;
  }
  return s;
}

IntervalList unite(const IntervalList& a, const IntervalList& b) {
  IntervalList v = a;
  v.insert(v.end(), b.begin(), b.end());
  return normalize(std::move(v));
}

bool contains(const IntervalList& outer, const IntervalList& inner) {
  std::size_t j = 0;
  for (const auto& i : inner) {
    if (!(i.hi > i.lo)) continue;
    while (j < outer.size() && outer[j].hi < i.hi) ++j;
    if (j == outer.size()) return false;
    if (outer[j].lo > i.lo) return false;
  }
  return true;
}

double distance(const IntervalList& a, const IntervalList& b) {
  double d = std::numeric_limits<double>::infinity();
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    double gap = std::max(a[i].lo, b[j].lo) - std::min(a[i].hi, b[j].hi);
    d = std::min(d, std::max(gap, 0.0));
    if (a[i].hi < b[j].hi)
      ++i;
    else
      ++j;
  }
  return d;
}

namespace {

struct Event {
  double x;
  double w;
};

std::vector<Event> events(const IntervalList& pieces, const std::vector<double>* weights) {
  std::vector<Event> ev;
  ev.reserve(2 * pieces.size());
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    if (!(pieces[k].hi > pieces[k].lo)) continue;
    double w = weights ? (*weights)[k] : 1.0;
    ev.push_back({pieces[k].lo, w});
    ev.push_back({pieces[k].hi, -w});
  }
  // half-open pieces: closings before openings at equal x
  std::sort(ev.begin(), ev.end(), [](const Event& a, const Event& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.w < b.w;
  });
  return ev;
}

}  // namespace

CoverCount cover_count(const IntervalList& pieces, Interval window, double slack) {
  auto ev = events(pieces, nullptr);
  CoverCount c{std::numeric_limits<int>::max(), 0};
  int cur = 0;
  double x = window.lo;
  std::size_t k = 0;
  while (k < ev.size() && ev[k].x <= window.lo) cur += static_cast<int>(ev[k++].w);
  while (x < window.hi) {
    double next = k < ev.size() ? std::min(ev[k].x, window.hi) : window.hi;
    if (next - x > slack) {
      c.min = std::min(c.min, cur);
      c.max = std::max(c.max, cur);
    }
    x = next;
    while (k < ev.size() && ev[k].x <= x) cur += static_cast<int>(ev[k++].w);
  }
  if (c.min == std::numeric_limits<int>::max()) c.min = 0;
  return c;
}

IntervalList level_set(const IntervalList& pieces, const std::vector<double>& weights, double r) {
  auto ev = events(pieces, &weights);
  IntervalList out;
  double cur = 0.0;
  std::size_t k = 0;
  while (k < ev.size()) {
    double x = ev[k].x;
    while (k < ev.size() && ev[k].x == x) cur += ev[k++].w;
    if (k < ev.size() && cur >= r - 1e-12 * std::max(1.0, r)) out.push_back({x, ev[k].x});
  }
  return normalize(std::move(out));
}

}  // namespace declab
