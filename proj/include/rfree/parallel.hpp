#pragma once

#include <cstdint>
#include <exception>
#include <stdexcept>

namespace rfree {

/// Number of OpenMP threads used by the parallel kernels; 0 means the
/// runtime default.
int worker_count();
void set_worker_count(int workers);

/// Thrown when an element count, enumeration size or exponent exceeds its cap.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: spec files, matrices, words, certificates.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Runs body(i) for i in [0, n) on worker_count() threads. The first
/// exception thrown by any iteration is rethrown after the loop.
template <class Body>
void parallel_for(long n, Body&& body) {
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
  for (long i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
#pragma omp critical(rfree_parallel_for_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

/// splitmix64 step; also used to derive per-index seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t s = master ^ (index * 0xd1342543de82ef95ULL);
  splitmix64(s);
  return splitmix64(s);
}

}  // namespace rfree
