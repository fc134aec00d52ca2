#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "csfb/protocol.hpp"

namespace csfb {

enum class ExperimentKind {
  Fig1EcmTrace,
  Fig2AnalogSweep,
  Fig3Methods,
  Fig5DigitalSweep,
  Fig6BitBudget,
  Custom,
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::Custom;
  int n = 100;
  int p = 4;
  double rho_dl_db = 10.0;
  double rho_ul_db = 10.0;
  std::vector<int> s_values;
  std::vector<double> c_half_values;
  std::vector<int> k_values;
  std::vector<int> r_values;       // fig1 sweep grid
  std::vector<int> budgets_bits;   // fig6 budgets
  RecoveryMethod recovery = RecoveryMethod::MaxCorrelation;
  std::int64_t trials = 500;
  std::uint64_t master_seed = 1;
  std::string out_path = "results.csv";
  int workers = 1;

  bool operator==(const ExperimentConfig&) const = default;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parses a JSON config document; unknown keys, type mismatches, and
// invariant violations throw ConfigError naming the key. Absent keys fall
// back to defaults (n=100, p=4, 10 dB both links; sweep grids depend on the
// experiment preset).
ExperimentConfig parse_config(const std::string& text);

// full round-trippable JSON rendering of a config
std::string serialize_config(const ExperimentConfig& cfg);

struct ResultRow {
  std::string experiment;
  double c_half = 0.0;
  int s = 0;
  int k = 0;
  int r = 0;
  std::string metric;
  double value = 0.0;
  double ci = 0.0;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
};

// Runs the configured experiment; identical configs (including seed) produce
// identical rows for any worker count. A failing sweep point emits its rows
// with NaN value/ci markers and the sweep continues.
std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg);

// back-off report: delta, eta, effective and approximate throughput per
// (s, c_half) point at the configured SNRs
std::vector<ResultRow> run_backoff_report(const ExperimentConfig& cfg);

// ECM report: Monte Carlo, closed-form, approximate, and dedicated
// trace/determinant per (s, r) point
std::vector<ResultRow> run_ecm_report(const ExperimentConfig& cfg);

// fixed-header CSV rendering: experiment,c_half,s,k,r,metric,value,ci,trials,seed
std::string csv_string(const std::vector<ResultRow>& rows);

// writes csv_string to path (throws on I/O failure)
void emit_csv(const std::vector<ResultRow>& rows, const std::string& path);

// writes a matplotlib script next to the CSV that plots its curves
void emit_plot_script(const std::string& csv_path);

}  // namespace csfb
