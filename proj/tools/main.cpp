// covpath command line: run scenarios, the lawnmower baseline, the
// invariant/oracle suites, and turn raw run CSVs into plot-ready tables.

#include <algorithm>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "covpath/csv.hpp"
#include "covpath/sim.hpp"
#include "suites.hpp"

namespace {

struct RunFlags {
  std::string scenario;
  std::string out;
  double duration = -1.0;
  double dt = -1.0;
  std::string mode;
  std::string fidelity;
  std::int64_t seed = -1;
};

void add_run_flags(CLI::App* app, RunFlags& f, bool with_mode) {
  app->add_option("--scenario", f.scenario, "scenario JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  app->add_option("--duration", f.duration, "override duration, seconds");
  app->add_option("--dt", f.dt, "override time step, seconds");
  app->add_option("--out", f.out, "output directory");
  if (with_mode)
    app->add_option("--mode", f.mode, "circle | ellipse | baseline");
  app->add_option("--fidelity", f.fidelity, "ideal | actuated");
  app->add_option("--seed", f.seed, "override RNG seed");
}

covpath::SimConfig load_with_overrides(const RunFlags& f) {
  covpath::SimConfig cfg = covpath::SimConfig::from_json_file(f.scenario);
  if (f.duration >= 0.0) cfg.duration = f.duration;
  if (f.dt > 0.0) cfg.dt = f.dt;
  if (!f.out.empty()) cfg.output.directory = f.out;
  if (f.seed >= 0) cfg.seed = static_cast<std::uint64_t>(f.seed);
  if (!f.mode.empty()) {
    if (f.mode == "circle")
      cfg.mode = covpath::Mode::Circle;
    else if (f.mode == "ellipse")
      cfg.mode = covpath::Mode::Ellipse;
    else if (f.mode == "baseline")
      cfg.mode = covpath::Mode::Baseline;
    else
      throw covpath::ConfigError("unknown mode: " + f.mode);
  }
  if (!f.fidelity.empty()) {
    if (f.fidelity == "ideal")
      cfg.fidelity = covpath::Fidelity::Ideal;
    else if (f.fidelity == "actuated")
      cfg.fidelity = covpath::Fidelity::Actuated;
    else
      throw covpath::ConfigError("unknown fidelity: " + f.fidelity);
  }
  return cfg;
}

int run_and_export(const covpath::SimConfig& cfg) {
  const covpath::SimLog log = covpath::run_simulation(cfg);
  covpath::export_log(log, cfg, cfg.output.directory);
  double final_phi = log.phi.empty() ? 0.0 : log.phi.back().sum_phi;
  std::cout << "wrote " << cfg.output.directory << ": " << log.agents.size()
            << " agent records, " << log.phi.size()
            << " field totals, final sum_phi = " << final_phi << "\n";
  return 0;
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw covpath::ConfigError("cannot open " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

int export_plots(const std::string& dir, double window) {
  namespace fs = std::filesystem;
  const auto table = read_csv(dir + "/phi_sum.csv");
  if (table.size() < 2)
    throw covpath::ConfigError("phi_sum.csv has no data rows");

  // Trailing-window mean of total importance, one row per sample.
  {
    covpath::CsvFile out(dir + "/plot_phi_trailing.csv");
    out.cell("t_s").cell("sum_phi").cell("trailing_mean").end_row();
    std::deque<std::pair<double, double>> win;
    double acc = 0.0;
    for (std::size_t i = 1; i < table.size(); ++i) {
      const double t = covpath::parse_double(table[i][0]);
      const double v = covpath::parse_double(table[i][1]);
      win.emplace_back(t, v);
      acc += v;
      while (!win.empty() && win.front().first < t - window) {
        acc -= win.front().second;
        win.pop_front();
      }
      out.cell(t).cell(v).cell(acc / static_cast<double>(win.size()))
          .end_row();
    }
  }

  // Per-column minima over every barrier series found in the run.
  covpath::CsvFile out(dir + "/plot_barrier_summary.csv");
  out.cell("file").cell("column").cell("min").cell("negative_rows").end_row();
  for (const char* name : {"barriers.csv", "wall.csv"}) {
    const std::string path = dir + "/" + name;
    if (!fs::exists(path)) continue;
    const auto rows = read_csv(path);
    if (rows.size() < 2) continue;
    for (std::size_t col = 0; col < rows[0].size(); ++col) {
      const std::string& header = rows[0][col];
      if (header.rfind("b", 0) != 0) continue;  // barrier columns only
      double lo = std::numeric_limits<double>::infinity();
      long negatives = 0;
      for (std::size_t i = 1; i < rows.size(); ++i) {
        const double v = covpath::parse_double(rows[i][col]);
        lo = std::min(lo, v);
        if (v < 0.0) ++negatives;
      }
      out.cell(name).cell(header).cell(lo).cell(static_cast<double>(negatives))
          .end_row();
    }
  }
  std::cout << "wrote " << dir << "/plot_phi_trailing.csv and "
            << dir << "/plot_barrier_summary.csv\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"constraint-driven coverage path generation"};
  app.require_subcommand(1);

  RunFlags sim_flags;
  CLI::App* sim = app.add_subcommand("sim", "run a scenario");
  add_run_flags(sim, sim_flags, true);

  RunFlags base_flags;
  CLI::App* baseline =
      app.add_subcommand("baseline", "run the lawnmower baseline");
  add_run_flags(baseline, base_flags, false);

  CLI::App* check = app.add_subcommand("check", "run invariant/oracle suites");

  std::string plots_dir = "out";
  double plots_window = 60.0;
  CLI::App* plots =
      app.add_subcommand("export-plots", "derive plot-ready tables from a run");
  plots->add_option("--out", plots_dir, "run output directory")->required();
  plots->add_option("--window", plots_window, "trailing mean window, seconds");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return run_and_export(load_with_overrides(sim_flags));
    if (baseline->parsed()) {
      covpath::SimConfig cfg = load_with_overrides(base_flags);
      cfg.mode = covpath::Mode::Baseline;
      cfg.safety.enabled = false;  // the baseline runs without the wall filter
      return run_and_export(cfg);
    }
    if (check->parsed()) {
      bool ok = true;
      for (const auto& r : covpath::checks::run_fast_checks()) {
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << ": "
                  << r.detail << "\n";
        ok = ok && r.pass;
      }
      return ok ? 0 : 1;
    }
    if (plots->parsed()) return export_plots(plots_dir, plots_window);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
