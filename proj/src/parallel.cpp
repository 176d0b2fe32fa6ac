#include "declab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace declab {

namespace {

std::atomic<unsigned> g_budget{0};

}  // namespace

unsigned thread_budget() {
  unsigned b = g_budget.load();
  if (b) return b;
  if (const char* s = std::getenv("DECLAB_THREADS")) {
    int v = std::atoi(s);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void set_thread_budget(unsigned n) { g_budget = n; }

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body, std::size_t min_block) {
  const std::size_t t = std::min<std::size_t>(thread_budget(), (n + min_block - 1) / std::max<std::size_t>(min_block, 1));
  if (t <= 1) {
    if (n) body(0, n);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t step = (n + t - 1) / t;
  for (std::size_t b = 0; b < n; b += step) pool.emplace_back(body, b, std::min(n, b + step));
  for (auto& th : pool) th.join();
}

}  // namespace declab
