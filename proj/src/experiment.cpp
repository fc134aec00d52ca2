#include "csfb/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>

#include <json.hpp>

#include "csfb/analysis.hpp"
#include "csfb/recovery.hpp"

namespace csfb {

namespace {

using nlohmann::json;

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

const char* kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Fig1EcmTrace: return "fig1_ecm_trace";
    case ExperimentKind::Fig2AnalogSweep: return "fig2_analog_sweep";
    case ExperimentKind::Fig3Methods: return "fig3_methods";
    case ExperimentKind::Fig5DigitalSweep: return "fig5_digital_sweep";
    case ExperimentKind::Fig6BitBudget: return "fig6_bit_budget";
    case ExperimentKind::Custom: return "custom";
  }
  return "custom";
}

ExperimentKind kind_from(const std::string& name) {
  for (ExperimentKind k :
       {ExperimentKind::Fig1EcmTrace, ExperimentKind::Fig2AnalogSweep,
        ExperimentKind::Fig3Methods, ExperimentKind::Fig5DigitalSweep,
        ExperimentKind::Fig6BitBudget, ExperimentKind::Custom})
    if (name == kind_name(k)) return k;
  throw ConfigError("config: unknown experiment '" + name + "'");
}

void apply_preset_defaults(ExperimentConfig& cfg) {
  const std::vector<int> r_grid = {2,  3,  4,  5,  6,  8,  11,
                                   14, 17, 20, 25, 30, 40, 50};
  switch (cfg.experiment) {
    case ExperimentKind::Fig1EcmTrace:
      if (cfg.s_values.empty()) cfg.s_values = {2, 6, 10};
      break;
    case ExperimentKind::Fig2AnalogSweep:
      if (cfg.s_values.empty()) cfg.s_values = {5};
      if (cfg.c_half_values.empty())
        cfg.c_half_values = {0.2, 0.4, 0.6, 0.8, 1.0, 1.2};
      break;
    case ExperimentKind::Fig3Methods:
      if (cfg.s_values.empty()) cfg.s_values = {4};
      if (cfg.c_half_values.empty())
        cfg.c_half_values = {0.4, 0.6, 0.8, 1.0, 1.2};
      break;
    case ExperimentKind::Fig5DigitalSweep:
      if (cfg.s_values.empty()) cfg.s_values = {1};
      if (cfg.c_half_values.empty())
        cfg.c_half_values = {0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
      if (cfg.k_values.empty()) cfg.k_values = {1, 2, 4, 8};
      break;
    case ExperimentKind::Fig6BitBudget:
      if (cfg.s_values.empty()) cfg.s_values = {1};
      if (cfg.k_values.empty()) cfg.k_values = {1, 2, 4, 8};
      break;
    case ExperimentKind::Custom:
      break;
  }
  if (cfg.s_values.empty()) cfg.s_values = {5};
  if (cfg.c_half_values.empty()) cfg.c_half_values = {0.8};
  if (cfg.k_values.empty()) cfg.k_values = {1};
  if (cfg.r_values.empty()) cfg.r_values = r_grid;
  if (cfg.budgets_bits.empty()) cfg.budgets_bits = {80, 160, 320};
}

[[noreturn]] void bad_type(const std::string& key) {
  throw ConfigError("config: type mismatch for key '" + key + "'");
}

long long get_integer(const json& doc, const std::string& key, long long lo,
                      long long hi) {
  const json& v = doc.at(key);
  if (!v.is_number_integer()) bad_type(key);
  const long long x = v.get<long long>();
  if (x < lo || x > hi)
    throw ConfigError("config: value out of range for key '" + key + "'");
  return x;
}

double get_real(const json& doc, const std::string& key) {
  const json& v = doc.at(key);
  if (!v.is_number()) bad_type(key);
  const double x = v.get<double>();
  if (!std::isfinite(x))
    throw ConfigError("config: value must be finite for key '" + key + "'");
  return x;
}

template <typename T>
std::vector<T> get_list(const json& doc, const std::string& key, bool integer,
                        double lo) {
  const json& v = doc.at(key);
  if (!v.is_array()) bad_type(key);
  if (v.empty()) throw ConfigError("config: empty list for key '" + key + "'");
  std::vector<T> out;
  for (const json& e : v) {
    if (integer ? !e.is_number_integer() : !e.is_number()) bad_type(key);
    const double x = e.get<double>();
    if (!(x > lo) || !std::isfinite(x))
      throw ConfigError("config: value out of range for key '" + key + "'");
    out.push_back(e.get<T>());
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid document: ") + e.what());
  }
  if (!doc.is_object())
    throw ConfigError("config: top level must be an object");
  static const std::set<std::string> known = {
      "experiment", "n",          "p",           "rho_dl_db", "rho_ul_db",
      "s_values",   "c_half_values", "k_values", "r_values",  "budgets_bits",
      "recovery",   "trials",     "master_seed", "out_path",  "workers"};
  for (const auto& item : doc.items())
    if (!known.count(item.key()))
      throw ConfigError("config: unknown key '" + item.key() + "'");

  ExperimentConfig cfg;
  if (doc.contains("experiment")) {
    if (!doc["experiment"].is_string()) bad_type("experiment");
    cfg.experiment = kind_from(doc["experiment"].get<std::string>());
  }
  if (doc.contains("n")) cfg.n = static_cast<int>(get_integer(doc, "n", 1, 1000000));
  if (doc.contains("p")) cfg.p = static_cast<int>(get_integer(doc, "p", 1, 1024));
  if (cfg.n < cfg.p)
    throw ConfigError("config: invariant violation for key 'n' (need n >= p)");
  if (doc.contains("rho_dl_db")) cfg.rho_dl_db = get_real(doc, "rho_dl_db");
  if (doc.contains("rho_ul_db")) cfg.rho_ul_db = get_real(doc, "rho_ul_db");
  if (doc.contains("s_values"))
    cfg.s_values = get_list<int>(doc, "s_values", true, 0.0);
  if (doc.contains("c_half_values"))
    cfg.c_half_values = get_list<double>(doc, "c_half_values", false, 0.0);
  if (doc.contains("k_values"))
    cfg.k_values = get_list<int>(doc, "k_values", true, 0.0);
  if (doc.contains("r_values"))
    cfg.r_values = get_list<int>(doc, "r_values", true, 0.0);
  if (doc.contains("budgets_bits"))
    cfg.budgets_bits = get_list<int>(doc, "budgets_bits", true, 0.0);
  if (doc.contains("recovery")) {
    if (!doc["recovery"].is_string()) bad_type("recovery");
    const std::string name = doc["recovery"].get<std::string>();
    if (name == "max_correlation")
      cfg.recovery = RecoveryMethod::MaxCorrelation;
    else if (name == "lasso")
      cfg.recovery = RecoveryMethod::Lasso;
    else
      throw ConfigError("config: unknown value for key 'recovery'");
  }
  if (doc.contains("trials"))
    cfg.trials = get_integer(doc, "trials", 1,
                             std::numeric_limits<long long>::max());
  if (doc.contains("master_seed")) {
    const json& v = doc["master_seed"];
    if (!v.is_number_integer()) bad_type("master_seed");
    cfg.master_seed = v.get<std::uint64_t>();
  }
  if (doc.contains("out_path")) {
    if (!doc["out_path"].is_string()) bad_type("out_path");
    cfg.out_path = doc["out_path"].get<std::string>();
  }
  if (doc.contains("workers"))
    cfg.workers = static_cast<int>(get_integer(doc, "workers", 1, 4096));
  apply_preset_defaults(cfg);
  return cfg;
}

std::string serialize_config(const ExperimentConfig& cfg) {
  json doc;
  doc["experiment"] = kind_name(cfg.experiment);
  doc["n"] = cfg.n;
  doc["p"] = cfg.p;
  doc["rho_dl_db"] = cfg.rho_dl_db;
  doc["rho_ul_db"] = cfg.rho_ul_db;
  doc["s_values"] = cfg.s_values;
  doc["c_half_values"] = cfg.c_half_values;
  doc["k_values"] = cfg.k_values;
  doc["r_values"] = cfg.r_values;
  doc["budgets_bits"] = cfg.budgets_bits;
  doc["recovery"] =
      cfg.recovery == RecoveryMethod::Lasso ? "lasso" : "max_correlation";
  doc["trials"] = cfg.trials;
  doc["master_seed"] = cfg.master_seed;
  doc["out_path"] = cfg.out_path;
  doc["workers"] = cfg.workers;
  return doc.dump(2) + "\n";
}

namespace {

struct RowBuilder {
  const ExperimentConfig& cfg;
  std::vector<ResultRow> rows;
  std::uint64_t sweep = 0;

  std::uint64_t next_base() { return (sweep++) << 32; }

  void add(double c_half, int s, int k, int r, const std::string& metric,
           double value, double ci, std::int64_t trials) {
    rows.push_back({kind_name(cfg.experiment), c_half, s, k, r, metric, value,
                    ci, trials, cfg.master_seed});
  }

  // runs fn() -> (value, ci, trials); NaN row on failure
  template <typename Fn>
  void add_checked(double c_half, int s, int k, int r,
                   const std::string& metric, Fn&& fn) {
    try {
      const auto [value, ci, trials] = fn();
      add(c_half, s, k, r, metric, value, ci, trials);
    } catch (const std::exception&) {
      add(c_half, s, k, r, metric, kNan, kNan, 0);
    }
  }
};

using Triple = std::tuple<double, double, std::int64_t>;

ProtocolConfig protocol_from(const ExperimentConfig& cfg, int s, double c_half,
                             int k, int groups) {
  ProtocolConfig pc;
  pc.n = cfg.n;
  pc.p = cfg.p;
  pc.rho_dl = db_to_linear(cfg.rho_dl_db);
  pc.rho_ul = db_to_linear(cfg.rho_ul_db);
  pc.s = s;
  pc.c_half = c_half;
  pc.k = k;
  pc.groups = groups;
  pc.recovery = cfg.recovery;
  return pc;
}

Triple mc_triple(const ExperimentConfig& cfg, const ProtocolConfig& pc,
                 ProtocolVariant variant, std::uint64_t base) {
  const ThroughputEstimate est = rbf_throughput_mc(
      pc, variant, cfg.trials, cfg.master_seed, cfg.workers, base);
  return {est.value, est.ci_half_width, est.trials};
}

void run_fig1(const ExperimentConfig& cfg, RowBuilder& rb) {
  const double rho = db_to_linear(cfg.rho_ul_db);
  for (const int s : cfg.s_values) {
    for (const int r : cfg.r_values) {
      if (r < s) continue;
      const std::uint64_t base = rb.next_base();
      rb.add_checked(0.0, s, 0, r, "ecm_trace_mc", [&]() -> Triple {
        const EcmStats mc = ecm_shared_mc(s, r, 1.0, 1.0 / rho, cfg.trials,
                                          cfg.master_seed, cfg.workers, base);
        return {mc.trace, 0.0, cfg.trials};
      });
      rb.add_checked(0.0, s, 0, r, "ecm_trace_closed", [&]() -> Triple {
        return {ecm_shared_trace_closed(s, r, rho), 0.0, 0};
      });
      rb.add_checked(0.0, s, 0, r, "ecm_trace_approx", [&]() -> Triple {
        return {ecm_shared_approx(s, r, rho).trace, 0.0, 0};
      });
      rb.add_checked(0.0, s, 0, r, "ecm_trace_dedicated", [&]() -> Triple {
        return {ecm_dedicated(cfg.n, rho).trace, 0.0, 0};
      });
    }
  }
}

void run_fig2(const ExperimentConfig& cfg, RowBuilder& rb) {
  for (const int s : cfg.s_values) {
    for (const double c : cfg.c_half_values) {
      const std::uint64_t base = rb.next_base();
      const ProtocolConfig pc = protocol_from(cfg, s, c, 1, 1);
      int r = 0;
      try {
        r = shared_channels(pc);
      } catch (const std::exception&) {
        rb.add(c, s, 1, 0, "throughput_analog", kNan, kNan, 0);
        continue;
      }
      rb.add_checked(c, s, 1, r, "throughput_analog", [&] {
        return mc_triple(cfg, pc, ProtocolVariant::AnalogShared, base);
      });
      rb.add_checked(c, s, 1, r, "throughput_noiseless_dedicated", [&] {
        return mc_triple(cfg, pc, ProtocolVariant::NoiselessDedicated, base);
      });
      rb.add_checked(c, s, 1, r, "throughput_genie", [&] {
        return mc_triple(cfg, pc, ProtocolVariant::GenieDedicated, base);
      });
    }
  }
}

void run_fig3(const ExperimentConfig& cfg, RowBuilder& rb) {
  for (const int s : cfg.s_values) {
    for (const double c : cfg.c_half_values) {
      const std::uint64_t base = rb.next_base();
      ProtocolConfig mc = protocol_from(cfg, s, c, 1, 1);
      mc.recovery = RecoveryMethod::MaxCorrelation;
      ProtocolConfig la = mc;
      la.recovery = RecoveryMethod::Lasso;
      ProtocolConfig bd = mc;
      bd.groups = 2;
      int r = 0;
      try {
        r = shared_channels(mc);
      } catch (const std::exception&) {
      }
      rb.add_checked(c, s, 1, r, "throughput_maxcorr", [&] {
        return mc_triple(cfg, mc, ProtocolVariant::AnalogShared, base);
      });
      rb.add_checked(c, s, 1, r, "throughput_lasso", [&] {
        return mc_triple(cfg, la, ProtocolVariant::AnalogShared, base);
      });
      int r_bd = 0;
      try {
        r_bd = shared_channels(bd);
      } catch (const std::exception&) {
      }
      rb.add_checked(c, s, 1, r_bd, "throughput_maxcorr_bd2", [&] {
        return mc_triple(cfg, bd, ProtocolVariant::AnalogShared, base);
      });
    }
  }
}

void run_fig5(const ExperimentConfig& cfg, RowBuilder& rb) {
  const double rho_dl = db_to_linear(cfg.rho_dl_db);
  for (const int s : cfg.s_values) {
    for (const int k : cfg.k_values) {
      for (const double c : cfg.c_half_values) {
        const std::uint64_t base = rb.next_base();
        const ProtocolConfig pc = protocol_from(cfg, s, c, k, 1);
        int r = 0;
        try {
          r = shared_channels(pc);
        } catch (const std::exception&) {
          rb.add(c, s, k, 0, "throughput_digital_mc", kNan, kNan, 0);
          continue;
        }
        rb.add_checked(c, s, k, r, "throughput_digital_mc", [&] {
          return mc_triple(cfg, pc, ProtocolVariant::DigitalShared, base);
        });
        rb.add_checked(c, s, k, r, "throughput_digital_closed",
                       [&]() -> Triple {
                         const ThresholdSet th = digital_thresholds(
                             s, cfg.n, k, rho_dl, cfg.p);
                         return {digital_throughput_closed(cfg.n, cfg.p,
                                                           rho_dl, th),
                                 0.0, 0};
                       });
        rb.add_checked(c, s, k, r, "throughput_noiseless_dedicated", [&] {
          return mc_triple(cfg, pc, ProtocolVariant::NoiselessDedicated, base);
        });
      }
    }
  }
}

void run_fig6(const ExperimentConfig& cfg, RowBuilder& rb) {
  const double rho_dl = db_to_linear(cfg.rho_dl_db);
  for (const int budget : cfg.budgets_bits) {
    const std::string suffix = "_b" + std::to_string(budget);
    for (const int s : cfg.s_values) {
      for (const int k : cfg.k_values) {
        const int r = budget / (cfg.p * k);
        if (r < 1) continue;
        const std::uint64_t base = rb.next_base();
        ProtocolConfig pc = protocol_from(cfg, s, 1.0, k, 1);
        pc.r_override = r;
        rb.add_checked(0.0, s, k, r, "throughput_digital_mc" + suffix, [&] {
          return mc_triple(cfg, pc, ProtocolVariant::DigitalShared, base);
        });
        rb.add_checked(0.0, s, k, r, "throughput_digital_closed" + suffix,
                       [&]() -> Triple {
                         const ThresholdSet th = digital_thresholds(
                             s, cfg.n, k, rho_dl, cfg.p);
                         return {digital_throughput_closed(cfg.n, cfg.p,
                                                           rho_dl, th),
                                 0.0, 0};
                       });
      }
    }
  }
}

void run_custom(const ExperimentConfig& cfg, RowBuilder& rb) {
  const double rho_dl = db_to_linear(cfg.rho_dl_db);
  for (const int s : cfg.s_values) {
    for (const int k : cfg.k_values) {
      for (const double c : cfg.c_half_values) {
        const std::uint64_t base = rb.next_base();
        const ProtocolConfig pc = protocol_from(cfg, s, c, k, 1);
        int r = 0;
        try {
          r = shared_channels(pc);
        } catch (const std::exception&) {
          rb.add(c, s, k, 0, "throughput_shared", kNan, kNan, 0);
          continue;
        }
        if (k == 1) {
          rb.add_checked(c, s, k, r, "throughput_analog", [&] {
            return mc_triple(cfg, pc, ProtocolVariant::AnalogShared, base);
          });
        } else {
          rb.add_checked(c, s, k, r, "throughput_digital_mc", [&] {
            return mc_triple(cfg, pc, ProtocolVariant::DigitalShared, base);
          });
          rb.add_checked(c, s, k, r, "throughput_digital_closed",
                         [&]() -> Triple {
                           const ThresholdSet th = digital_thresholds(
                               s, cfg.n, k, rho_dl, cfg.p);
                           return {digital_throughput_closed(cfg.n, cfg.p,
                                                             rho_dl, th),
                                   0.0, 0};
                         });
        }
        rb.add_checked(c, s, k, r, "throughput_noiseless_dedicated", [&] {
          return mc_triple(cfg, pc, ProtocolVariant::NoiselessDedicated, base);
        });
      }
    }
  }
}

}  // namespace

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg) {
  RowBuilder rb{cfg};
  switch (cfg.experiment) {
    case ExperimentKind::Fig1EcmTrace: run_fig1(cfg, rb); break;
    case ExperimentKind::Fig2AnalogSweep: run_fig2(cfg, rb); break;
    case ExperimentKind::Fig3Methods: run_fig3(cfg, rb); break;
    case ExperimentKind::Fig5DigitalSweep: run_fig5(cfg, rb); break;
    case ExperimentKind::Fig6BitBudget: run_fig6(cfg, rb); break;
    case ExperimentKind::Custom: run_custom(cfg, rb); break;
  }
  return std::move(rb.rows);
}

std::vector<ResultRow> run_backoff_report(const ExperimentConfig& cfg) {
  RowBuilder rb{cfg};
  const double rho_dl = db_to_linear(cfg.rho_dl_db);
  const double rho_ul = db_to_linear(cfg.rho_ul_db);
  for (const int s : cfg.s_values) {
    for (const double c : cfg.c_half_values) {
      int r = 0;
      try {
        r = required_channels(c, s, cfg.n);
      } catch (const std::exception&) {
        rb.add(c, s, 0, 0, "backoff_delta", kNan, kNan, 0);
        continue;
      }
      const double sigma_eff = std::sqrt(1.0 / (rho_ul * r));
      rb.add_checked(c, s, 0, r, "backoff_delta", [&]() -> Triple {
        return {make_backoff(cfg.n, cfg.p, rho_dl, sigma_eff).delta, 0.0, 0};
      });
      rb.add_checked(c, s, 0, r, "backoff_eta", [&]() -> Triple {
        return {make_backoff(cfg.n, cfg.p, rho_dl, sigma_eff).eta, 0.0, 0};
      });
      rb.add_checked(c, s, 0, r, "throughput_effective", [&]() -> Triple {
        const BackoffParams bo = make_backoff(cfg.n, cfg.p, rho_dl, sigma_eff);
        return {effective_throughput(bo.beta, bo.delta, sigma_eff, cfg.p), 0.0,
                0};
      });
      rb.add_checked(c, s, 0, r, "throughput_approx", [&]() -> Triple {
        return {rbf_throughput_approx(cfg.n, cfg.p, rho_dl), 0.0, 0};
      });
    }
  }
  return std::move(rb.rows);
}

std::vector<ResultRow> run_ecm_report(const ExperimentConfig& cfg) {
  RowBuilder rb{cfg};
  const double rho = db_to_linear(cfg.rho_ul_db);
  for (const int s : cfg.s_values) {
    for (const int r : cfg.r_values) {
      if (r < s) continue;
      const std::uint64_t base = rb.next_base();
      EcmStats mc;
      bool mc_ok = true;
      try {
        mc = ecm_shared_mc(s, r, 1.0, 1.0 / rho, cfg.trials, cfg.master_seed,
                           cfg.workers, base);
      } catch (const std::exception&) {
        mc_ok = false;
      }
      if (mc_ok) {
        rb.add(0.0, s, 0, r, "ecm_trace_mc", mc.trace, 0.0, cfg.trials);
        rb.add(0.0, s, 0, r, "ecm_det_mc", mc.determinant, 0.0, cfg.trials);
      } else {
        rb.add(0.0, s, 0, r, "ecm_trace_mc", kNan, kNan, 0);
        rb.add(0.0, s, 0, r, "ecm_det_mc", kNan, kNan, 0);
      }
      rb.add_checked(0.0, s, 0, r, "ecm_trace_closed", [&]() -> Triple {
        return {ecm_shared_trace_closed(s, r, rho), 0.0, 0};
      });
      rb.add_checked(0.0, s, 0, r, "ecm_det_closed", [&]() -> Triple {
        return {ecm_shared_det_closed(s, r, rho), 0.0, 0};
      });
      rb.add_checked(0.0, s, 0, r, "ecm_trace_approx", [&]() -> Triple {
        return {ecm_shared_approx(s, r, rho).trace, 0.0, 0};
      });
      rb.add_checked(0.0, s, 0, r, "ecm_det_approx", [&]() -> Triple {
        return {ecm_shared_approx(s, r, rho).determinant, 0.0, 0};
      });
      rb.add_checked(0.0, s, 0, r, "ecm_trace_dedicated", [&]() -> Triple {
        return {ecm_dedicated(cfg.n, rho).trace, 0.0, 0};
      });
    }
  }
  return std::move(rb.rows);
}

std::string csv_string(const std::vector<ResultRow>& rows) {
  std::string out = "experiment,c_half,s,k,r,metric,value,ci,trials,seed\n";
  char buf[512];
  for (const ResultRow& row : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%.9g,%d,%d,%d,%s,%.9g,%.9g,%lld,%llu\n",
                  row.experiment.c_str(), row.c_half, row.s, row.k, row.r,
                  row.metric.c_str(), row.value, row.ci,
                  static_cast<long long>(row.trials),
                  static_cast<unsigned long long>(row.seed));
    out += buf;
  }
  return out;
}

void emit_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("emit_csv: cannot open " + path);
  f << csv_string(rows);
  if (!f) throw std::runtime_error("emit_csv: write failed for " + path);
}

void emit_plot_script(const std::string& csv_path) {
  std::string dir = ".";
  const auto slash = csv_path.find_last_of('/');
  if (slash != std::string::npos) dir = csv_path.substr(0, slash);
  const std::string script_path = dir + "/plot_results.py";
  std::ofstream f(script_path, std::ios::binary);
  if (!f)
    throw std::runtime_error("emit_plot_script: cannot open " + script_path);
  f << R"PY(#!/usr/bin/env python3
"""Plot curves from a results CSV (one PNG per experiment/metric family)."""
import collections
import csv
import os
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else "results.csv"
with open(path, newline="") as fh:
    rows = [r for r in csv.DictReader(fh)]
if not rows:
    sys.exit("no rows in " + path)

experiment = rows[0]["experiment"]
# pick the sweep axis: whichever coordinate actually varies
for axis in ("c_half", "r", "k"):
    if len({r[axis] for r in rows}) > 1:
        break

series = collections.defaultdict(list)
for r in rows:
    label = r["metric"]
    extras = [f"{c}={r[c]}" for c in ("s", "k") if c != axis and len({x[c] for x in rows}) > 1]
    if extras:
        label += " (" + ", ".join(extras) + ")"
    try:
        x = float(r[axis]); y = float(r["value"]); e = float(r["ci"])
    except ValueError:
        continue
    if y != y:  # NaN marker
        continue
    series[label].append((x, y, e))

plt.figure(figsize=(7, 5))
for label, pts in sorted(series.items()):
    pts.sort()
    xs = [p[0] for p in pts]; ys = [p[1] for p in pts]; es = [p[2] for p in pts]
    plt.errorbar(xs, ys, yerr=es, marker="o", capsize=2, label=label)
plt.xlabel(axis)
plt.ylabel("value")
plt.title(experiment)
plt.grid(True, alpha=0.3)
plt.legend(fontsize=7)
out = os.path.splitext(path)[0] + ".png"
plt.savefig(out, dpi=150, bbox_inches="tight")
print(out)
)PY";
  if (!f)
    throw std::runtime_error("emit_plot_script: write failed for " +
                             script_path);
}

}  // namespace csfb
