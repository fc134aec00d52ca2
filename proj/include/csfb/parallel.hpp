#pragma once

#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace csfb {

// Runs fn(trial_index) for trial_index in [0, trials) and returns the results
// in index order. workers <= 1 is a plain serial loop and is the reference
// path; workers > 1 schedules trials across OpenMP threads. Each trial must
// derive its randomness from the trial index alone, so both paths produce
// identical vectors and reductions over them stay deterministic.
template <typename T, typename Fn>
std::vector<T> run_trials(std::int64_t trials, int workers, Fn&& fn) {
  std::vector<T> out(static_cast<std::size_t>(trials));
  if (workers <= 1) {
    for (std::int64_t t = 0; t < trials; ++t) out[t] = fn(t);
    return out;
  }
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8) num_threads(workers)
  for (std::int64_t t = 0; t < trials; ++t) out[t] = fn(t);
#else
  for (std::int64_t t = 0; t < trials; ++t) out[t] = fn(t);
#endif
  return out;
}

}  // namespace csfb
