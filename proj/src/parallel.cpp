#include "rfree/parallel.hpp"

#include <omp.h>

#include <atomic>

namespace rfree {

namespace {
std::atomic<int> g_workers{0};
}

int worker_count() {
  const int w = g_workers.load();
  return w > 0 ? w : omp_get_max_threads();
}

void set_worker_count(int workers) {
  if (workers < 0) throw std::invalid_argument("worker count must be non-negative");
  g_workers.store(workers);
}

}  // namespace rfree
