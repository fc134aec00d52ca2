// Command-line front end: figure presets, custom sweeps, back-off and ECM
// reports. Writes one CSV per invocation plus a small plotting script.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "csfb/experiment.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string figure_name(const std::string& id) {
  if (id == "1" || id == "fig1_ecm_trace") return "fig1_ecm_trace";
  if (id == "2" || id == "fig2_analog_sweep") return "fig2_analog_sweep";
  if (id == "3" || id == "fig3_methods") return "fig3_methods";
  if (id == "5" || id == "fig5_digital_sweep") return "fig5_digital_sweep";
  if (id == "6" || id == "fig6_bit_budget") return "fig6_bit_budget";
  if (id == "4")
    throw std::runtime_error(
        "figure 4 is the back-off study; use the `backoff` subcommand");
  throw std::runtime_error("unknown figure id: " + id +
                           " (expected 1, 2, 3, 5 or 6)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"opportunistic feedback simulation harness"};
  app.require_subcommand(1);

  std::string config_path;
  std::string figure_id;
  std::uint64_t seed = 0;
  std::int64_t trials = 0;
  std::string out_path;
  int workers = 0;

  CLI::App* fig = app.add_subcommand("figure", "run a figure preset");
  fig->add_option("id", figure_id, "figure id: 1, 2, 3, 5 or 6")->required();
  CLI::App* sweep =
      app.add_subcommand("sweep", "run the sweep described by the config");
  CLI::App* backoff = app.add_subcommand(
      "backoff", "report back-off deltas and effective throughput");
  CLI::App* ecm = app.add_subcommand(
      "ecm", "report channel-estimate error covariance metrics");

  for (CLI::App* sub : {fig, sweep, backoff, ecm}) {
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--seed", seed, "override the master seed");
    sub->add_option("--trials", trials, "override the trial count");
    sub->add_option("--out", out_path, "output CSV path");
    sub->add_option("--workers", workers, "worker threads (default 1)");
  }

  CLI11_PARSE(app, argc, argv);
  CLI::App* sub = app.get_subcommands().front();

  try {
    std::string text = config_path.empty() ? "{}" : read_file(config_path);
    nlohmann::json doc = nlohmann::json::parse(text);
    if (!doc.is_object())
      throw csfb::ConfigError("config root must be a JSON object");
    if (*fig) doc["experiment"] = figure_name(figure_id);
    if (sub->count("--seed")) doc["master_seed"] = seed;
    if (sub->count("--trials")) doc["trials"] = trials;
    if (sub->count("--out")) doc["out_path"] = out_path;
    if (sub->count("--workers")) doc["workers"] = workers;

    const csfb::ExperimentConfig cfg = csfb::parse_config(doc.dump());

    std::vector<csfb::ResultRow> rows;
    if (*backoff) {
      rows = csfb::run_backoff_report(cfg);
    } else if (*ecm) {
      rows = csfb::run_ecm_report(cfg);
    } else {
      rows = csfb::run_experiment(cfg);
    }

    csfb::emit_csv(rows, cfg.out_path);
    csfb::emit_plot_script(cfg.out_path);
    std::printf("wrote %s (%zu rows)\n", cfg.out_path.c_str(), rows.size());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "csfb: %s\n", e.what());
    return 1;
  }
  return 0;
}
