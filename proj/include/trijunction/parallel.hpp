#ifndef TRIJUNCTION_PARALLEL_HPP
#define TRIJUNCTION_PARALLEL_HPP

// Deterministic parallel reductions. Every sum is accumulated per fixed-size
// chunk (each chunk summed sequentially) and the chunk partials are combined
// in index order, so the result is bit-identical for any worker count.

#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace trijunction {

inline constexpr std::int64_t kReductionChunk = 4096;

inline int workerCount() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void setWorkerCount(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

// Sums body(i) for i in [0, n). body must be pure w.r.t. i.
template <class Body>
double deterministicSum(std::int64_t n, Body&& body) {
  if (n <= 0) return 0.0;
  const std::int64_t nChunks = (n + kReductionChunk - 1) / kReductionChunk;
  std::vector<double> partial(static_cast<std::size_t>(nChunks), 0.0);
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < nChunks; ++c) {
    const std::int64_t lo = c * kReductionChunk;
    const std::int64_t hi = std::min(n, lo + kReductionChunk);
    double acc = 0.0;
    for (std::int64_t i = lo; i < hi; ++i) acc += body(i);
    partial[static_cast<std::size_t>(c)] = acc;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

// Two sums in one sweep (body writes its two contributions into s0, s1).
template <class Body>
void deterministicSum2(std::int64_t n, Body&& body, double& out0, double& out1) {
  out0 = 0.0;
  out1 = 0.0;
  if (n <= 0) return;
  const std::int64_t nChunks = (n + kReductionChunk - 1) / kReductionChunk;
  std::vector<double> p0(static_cast<std::size_t>(nChunks), 0.0);
  std::vector<double> p1(static_cast<std::size_t>(nChunks), 0.0);
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < nChunks; ++c) {
    const std::int64_t lo = c * kReductionChunk;
    const std::int64_t hi = std::min(n, lo + kReductionChunk);
    double a0 = 0.0, a1 = 0.0;
    for (std::int64_t i = lo; i < hi; ++i) body(i, a0, a1);
    p0[static_cast<std::size_t>(c)] = a0;
    p1[static_cast<std::size_t>(c)] = a1;
  }
  for (std::size_t c = 0; c < p0.size(); ++c) {
    out0 += p0[c];
    out1 += p1[c];
  }
}

// Max reduction; max is order-independent so a plain per-chunk max is fine.
template <class Body>
double deterministicMax(std::int64_t n, Body&& body, double init) {
  if (n <= 0) return init;
  const std::int64_t nChunks = (n + kReductionChunk - 1) / kReductionChunk;
  std::vector<double> partial(static_cast<std::size_t>(nChunks), init);
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < nChunks; ++c) {
    const std::int64_t lo = c * kReductionChunk;
    const std::int64_t hi = std::min(n, lo + kReductionChunk);
    double m = init;
    for (std::int64_t i = lo; i < hi; ++i) {
      const double v = body(i);
      if (v > m) m = v;
    }
    partial[static_cast<std::size_t>(c)] = m;
  }
  double m = init;
  for (double p : partial) m = std::max(m, p);
  return m;
}

template <class Body>
void parallelFor(std::int64_t n, Body&& body) {
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) body(i);
}

}  // namespace trijunction

#endif
