// Command-line front end: run / compare / sweep / validate.
//
// Exit statuses: 0 clean, 1 usage or validation failure, 2 blow-up detected,
// 3 clogged halt, 4 solver failure. sweep returns the worst status of its
// batch. MHT_LOG=quiet|info|debug controls chatter on stderr (default info).

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "mht/csv_io.hpp"
#include "mht/errors.hpp"
#include "mht/scenario.hpp"
#include "mht/simulate.hpp"

namespace {

enum class LogLevel { quiet = 0, info = 1, debug = 2 };

LogLevel log_level() {
  const char* v = std::getenv("MHT_LOG");
  if (!v) return LogLevel::info;
  const std::string s(v);
  if (s == "quiet") return LogLevel::quiet;
  if (s == "debug") return LogLevel::debug;
  return LogLevel::info;
}

void info(const std::string& msg) {
  if (log_level() >= LogLevel::info) std::cerr << msg << "\n";
}

void debug(const std::string& msg) {
  if (log_level() >= LogLevel::debug) std::cerr << msg << "\n";
}

mht::Scenario load_with_overrides(const std::string& path, std::optional<int> nx,
                                  std::optional<double> dt, std::optional<double> t_end) {
  mht::Scenario sc = mht::load_scenario(path);
  mht::apply_overrides(sc, nx, dt, t_end);
  return sc;
}

int cmd_run(const std::string& scenario_path, const std::string& out_dir,
            std::optional<int> nx, std::optional<double> dt, std::optional<double> t_end) {
  const mht::Scenario sc = load_with_overrides(scenario_path, nx, dt, t_end);
  debug("digest " + sc.digest());
  const mht::RunOutcome out = mht::run_scenario_to(sc, out_dir);
  for (const auto& [key, value] : mht::report_entries(out.report)) {
    info(key + ": " + value);
  }
  std::cout << out.report.status_word << " " << out_dir << "/trajectory.csv\n";
  return out.report.status;
}

int cmd_validate(const std::string& scenario_path) {
  const mht::Scenario sc = mht::load_scenario(scenario_path);
  std::cout << "ok " << sc.digest() << "\n";
  return 0;
}

void print_compare_rows(const std::string& label, const std::vector<mht::CompareRow>& rows) {
  std::printf("# %s\n", label.c_str());
  std::printf("%-12s %6s %12s %12s %12s %12s %12s %12s\n", "t", "cells", "l1_u", "linf_u",
              "l1_chi", "linf_chi", "l1_S", "linf_S");
  for (const auto& r : rows) {
    std::printf("%-12.6g %6d %12.6e %12.6e %12.6e %12.6e %12.6e %12.6e\n", r.t, r.cells,
                r.l1_u, r.linf_u, r.l1_chi, r.linf_chi, r.l1_S, r.linf_S);
  }
}

int cmd_compare(const std::string& scenario_path, const std::vector<std::string>& traj_paths,
                const std::vector<double>& times) {
  const mht::Scenario sc = mht::load_scenario(scenario_path);
  std::vector<std::vector<mht::CompareRow>> all;
  for (const auto& path : traj_paths) {
    const mht::TrajectoryTable tb = mht::read_trajectory_csv(path);
    all.push_back(mht::compare_with_exact(sc, tb, times));
    print_compare_rows(path, all.back());
  }
  if (all.size() >= 2) {
    // Successive-refinement summary: error ratio coarse/fine per time.
    std::printf("# refinement ratios (successive trajectories)\n");
    std::printf("%-12s %12s %12s %12s\n", "t", "l1_u", "l1_chi", "l1_S");
    for (size_t f = 1; f < all.size(); ++f) {
      for (size_t k = 0; k < all[f].size(); ++k) {
        const auto& coarse = all[f - 1][k];
        const auto& fine = all[f][k];
        auto ratio = [](double a, double b) { return b > 0.0 ? a / b : 0.0; };
        std::printf("%-12.6g %12.4f %12.4f %12.4f\n", fine.t, ratio(coarse.l1_u, fine.l1_u),
                    ratio(coarse.l1_chi, fine.l1_chi), ratio(coarse.l1_S, fine.l1_S));
      }
    }
  }
  return 0;
}

int cmd_sweep(const std::string& dir, const std::string& out_dir, int jobs) {
  namespace fs = std::filesystem;
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path().string());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    std::cerr << "no .json scenarios in '" << dir << "'\n";
    return 1;
  }

  std::mutex out_mutex;
  std::atomic<size_t> next{0};
  std::atomic<int> worst{0};
  auto worker = [&]() {
    for (;;) {
      const size_t k = next.fetch_add(1);
      if (k >= files.size()) return;
      const std::string& path = files[k];
      const std::string stem = fs::path(path).stem().string();
      std::string line;
      int status = 0;
      try {
        const mht::Scenario sc = mht::load_scenario(path);
        const mht::RunOutcome out =
            mht::run_scenario_to(sc, (fs::path(out_dir) / stem).string());
        status = out.report.status;
        line = stem + ": " + out.report.status_word;
      } catch (const std::exception& e) {
        status = 1;
        line = stem + ": error: " + e.what();
      }
      int prev = worst.load();
      while (prev < status && !worst.compare_exchange_weak(prev, status)) {
      }
      std::lock_guard<std::mutex> lock(out_mutex);
      std::cout << line << "\n";
    }
  };

  std::vector<std::thread> pool;
  const int k = std::max(1, jobs);
  pool.reserve(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return worst.load();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"1-D methane-hydrate transport simulator"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir = "out", sweep_dir;
  std::optional<int> nx;
  std::optional<double> dt, t_end;
  std::vector<std::string> traj_paths;
  std::vector<double> times;
  int jobs = 1;

  CLI::App* run = app.add_subcommand("run", "run a scenario and write CSV + report");
  run->add_option("scenario", scenario_path, "scenario JSON file")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--nx", nx, "override grid cell count");
  run->add_option("--dt", dt, "override time step (steps = ceil(t_end/dt))");
  run->add_option("--t-end", t_end, "override time horizon");

  CLI::App* cmp = app.add_subcommand("compare", "errors against the closed-form solution");
  cmp->add_option("scenario", scenario_path, "scenario JSON file")->required();
  cmp->add_option("--traj", traj_paths, "trajectory CSV (repeat for a refinement family)")
      ->required();
  cmp->add_option("--times", times, "comma-separated knot times")
      ->required()
      ->delimiter(',');

  CLI::App* sweep = app.add_subcommand("sweep", "run every scenario in a directory");
  sweep->add_option("dir", sweep_dir, "directory of scenario JSON files")->required();
  sweep->add_option("--out", out_dir, "output root (one subdirectory per scenario)");
  sweep->add_option("--jobs", jobs, "concurrent runs");

  CLI::App* val = app.add_subcommand("validate", "check a scenario file");
  val->add_option("scenario", scenario_path, "scenario JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) return cmd_run(scenario_path, out_dir, nx, dt, t_end);
    if (cmp->parsed()) return cmd_compare(scenario_path, traj_paths, times);
    if (sweep->parsed()) return cmd_sweep(sweep_dir, out_dir, jobs);
    if (val->parsed()) return cmd_validate(scenario_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
