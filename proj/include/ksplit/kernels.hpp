#pragma once

// Data-parallel loop kernels. Every kernel has a serial reference and an
// OpenMP variant; the two must agree bit-for-bit (reductions here are max,
// which is order independent, and per-index work is written to disjoint
// slots). Callables passed to the OpenMP variants must not throw.

#include <algorithm>
#include <cstdint>
#include <limits>

namespace ksplit::kernels {

enum class Exec { kSerial, kParallel };

/// Process-wide default used by the library entry points.
Exec default_exec();
void set_default_exec(Exec exec);

/// Applies KSPLIT_THREADS (if set and positive) as the OpenMP thread cap.
/// Returns the effective maximum thread count.
int apply_thread_limit_from_env();

template <typename Fn>
double max_reduce_serial(std::int64_t count, Fn&& fn) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::int64_t i = 0; i < count; ++i) best = std::max(best, fn(i));
  return best;
}

template <typename Fn>
double max_reduce_omp(std::int64_t count, Fn&& fn) {
  double best = -std::numeric_limits<double>::infinity();
#pragma omp parallel for reduction(max : best) schedule(static)
  for (std::int64_t i = 0; i < count; ++i) best = std::max(best, fn(i));
  return best;
}

template <typename Fn>
double max_reduce(std::int64_t count, Fn&& fn, Exec exec = default_exec()) {
  return exec == Exec::kParallel ? max_reduce_omp(count, fn)
                                 : max_reduce_serial(count, fn);
}

template <typename Fn>
void for_each_serial(std::int64_t count, Fn&& fn) {
  for (std::int64_t i = 0; i < count; ++i) fn(i);
}

template <typename Fn>
void for_each_omp(std::int64_t count, Fn&& fn) {
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i) fn(i);
}

template <typename Fn>
void for_each(std::int64_t count, Fn&& fn, Exec exec = default_exec()) {
  if (exec == Exec::kParallel)
    for_each_omp(count, fn);
  else
    for_each_serial(count, fn);
}

}  // namespace ksplit::kernels
