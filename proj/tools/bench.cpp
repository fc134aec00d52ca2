// Compares the serial reference path against OpenMP execution on the two
// heaviest Monte Carlo kernels and checks that the results are identical.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <thread>

#include "csfb/analysis.hpp"

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

int main() {
  int workers = static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 2) workers = 2;
  int failures = 0;

  {
    csfb::ProtocolConfig cfg;  // n=100, p=4, s=5, c_half=0.8 -> r=19
    const std::int64_t trials = 240;

    auto t0 = std::chrono::steady_clock::now();
    const csfb::ThroughputEstimate serial = csfb::rbf_throughput_mc(
        cfg, csfb::ProtocolVariant::AnalogShared, trials, 7, 1);
    const double ts = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const csfb::ThroughputEstimate parallel = csfb::rbf_throughput_mc(
        cfg, csfb::ProtocolVariant::AnalogShared, trials, 7, workers);
    const double tp = seconds_since(t0);

    const bool same = serial.value == parallel.value &&
                      serial.ci_half_width == parallel.ci_half_width;
    if (!same) ++failures;
    std::printf(
        "analog round MC  (%lld trials): serial %.3fs, %d workers %.3fs, "
        "speedup %.2fx, results %s\n",
        static_cast<long long>(trials), ts, workers, tp, ts / tp,
        same ? "identical" : "DIFFER");
  }

  {
    const std::int64_t trials = 200000;

    auto t0 = std::chrono::steady_clock::now();
    const csfb::EcmStats serial = csfb::ecm_shared_mc(6, 11, 1.0, 0.1, trials, 11, 1);
    const double ts = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const csfb::EcmStats parallel =
        csfb::ecm_shared_mc(6, 11, 1.0, 0.1, trials, 11, workers);
    const double tp = seconds_since(t0);

    const bool same = serial.trace == parallel.trace &&
                      serial.determinant == parallel.determinant;
    if (!same) ++failures;
    std::printf(
        "error cov MC     (%lld trials): serial %.3fs, %d workers %.3fs, "
        "speedup %.2fx, results %s\n",
        static_cast<long long>(trials), ts, workers, tp, ts / tp,
        same ? "identical" : "DIFFER");
  }

  if (failures) {
    std::fprintf(stderr, "bench: %d kernel(s) gave different results\n",
                 failures);
    return 1;
  }
  return 0;
}
