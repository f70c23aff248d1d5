#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mht/advection_exact.hpp"
#include "mht/csv_io.hpp"
#include "mht/evolution.hpp"
#include "mht/scenario.hpp"

namespace mht {

// Exit statuses of a run (also the CLI process statuses).
inline constexpr int kStatusClean = 0;
inline constexpr int kStatusBlowup = 2;
inline constexpr int kStatusCloggedHalt = 3;
inline constexpr int kStatusSolverFailure = 4;

struct RunReport {
  std::string name;
  std::string digest;
  int grid_cells = 0;
  int time_steps = 0;
  int status = kStatusClean;  // failure > clogged halt > blow-up > clean
  std::string status_word = "clean";
  double max_S = 0.0;
  std::optional<double> blowup_knot_time;
  std::optional<double> blowup_interp_time;
  double mass_defect = 0.0;
  double quadrature_defect = 0.0;
  bool clogged = false;
  bool halted = false;
  long long total_iterations = 0;
  int max_step_iterations = 0;
  double final_time = 0.0;
  double final_mass = 0.0;
  double wall_time_s = 0.0;
  std::string failure;  // solver message when status = solver failure
};

struct RunOutcome {
  Trajectory trajectory;
  RunReport report;
};

// Runs the scenario (fixed-velocity or pressure-driven) and summarizes. A
// non-converged step yields status solver_failure with the partial
// trajectory; it does not throw.
RunOutcome run_scenario(const Scenario& sc);

// Same, then writes <out_dir>/trajectory.csv and <out_dir>/report.txt
// (created if needed); partial outputs are still written on failure.
RunOutcome run_scenario_to(const Scenario& sc, const std::string& out_dir);

// Report file content, fixed key order.
std::vector<std::pair<std::string, std::string>> report_entries(const RunReport& r);

// Interprets a pure-advection pulse scenario as the closed-form setup;
// throws HypothesisError when the scenario is outside the closed form
// (diffusion, pressure coupling, non-pulse data, trailing inflow, truncated
// pulse).
AdvectionScenario advection_setup(const Scenario& sc);

// Errors of a stored trajectory against the closed form at one time, over
// the cells of (0, D_max) still inside the validity window.
struct CompareRow {
  double t = 0.0;
  int cells = 0;  // cells compared
  double l1_u = 0.0, linf_u = 0.0;
  double l1_chi = 0.0, linf_chi = 0.0;
  double l1_S = 0.0, linf_S = 0.0;
};

// One row per requested time. ValidationError when a time is missing from
// the table or the grid does not match the scenario domain; OutsideValidity
// when no cell is comparable at a requested time.
std::vector<CompareRow> compare_with_exact(const Scenario& sc, const TrajectoryTable& tb,
                                           const std::vector<double>& times);

}  // namespace mht
