#include "mht/simulate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>

#include "mht/coupled.hpp"
#include "mht/errors.hpp"
#include "mht/operators.hpp"

namespace mht {

namespace {

RunReport summarize(const Scenario& sc, const Trajectory& tr, int status,
                    const std::string& failure, double wall_s) {
  RunReport r;
  r.name = sc.name;
  r.digest = sc.digest();
  r.grid_cells = sc.n_cells;
  r.time_steps = sc.steps;
  r.status = status;
  switch (status) {
    case kStatusClean: r.status_word = "clean"; break;
    case kStatusBlowup: r.status_word = "blowup"; break;
    case kStatusCloggedHalt: r.status_word = "clogged_halt"; break;
    default: r.status_word = "solver_failure"; break;
  }
  r.max_S = tr.max_S.empty() ? 0.0 : *std::max_element(tr.max_S.begin(), tr.max_S.end());
  r.blowup_knot_time = tr.blowup_knot_time;
  r.blowup_interp_time = tr.blowup_interp_time;
  r.mass_defect = tr.mass_defect;
  r.quadrature_defect = tr.quadrature_defect;
  r.clogged = tr.clogged;
  r.halted = tr.halted;
  for (int it : tr.step_iterations) {
    r.total_iterations += it;
    r.max_step_iterations = std::max(r.max_step_iterations, it);
  }
  if (!tr.times.empty()) {
    r.final_time = tr.times.back();
    r.final_mass = tr.mass.back();
  }
  r.wall_time_s = wall_s;
  r.failure = failure;
  return r;
}

}  // namespace

RunOutcome run_scenario(const Scenario& sc) {
  sc.validate();
  const auto t0 = std::chrono::steady_clock::now();

  Trajectory tr;
  int status = kStatusClean;
  std::string failure;
  try {
    if (sc.velocity_mode == "pressure_driven") {
      tr = run_coupled(sc, sc.solver);
    } else {
      const Grid g = sc.grid();
      const DiscreteOperator op = assemble_operator(g, sc.coefficients(sc.velocity));
      tr = evolve(op, sc.law, sc.initial_field(), sc.source_fn(), sc.time_grid(), sc.solver);
    }
  } catch (const EvolutionFailure& e) {
    tr = e.partial;
    failure = e.what();
    status = kStatusSolverFailure;
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (status == kStatusClean) {
    if (tr.halted) {
      status = kStatusCloggedHalt;
    } else if (tr.blowup_knot_time) {
      status = kStatusBlowup;
    }
  }
  RunReport rep = summarize(sc, tr, status, failure, wall);
  return RunOutcome{std::move(tr), std::move(rep)};
}

RunOutcome run_scenario_to(const Scenario& sc, const std::string& out_dir) {
  RunOutcome out = run_scenario(sc);
  std::filesystem::create_directories(out_dir);
  const auto dir = std::filesystem::path(out_dir);
  if (!out.trajectory.times.empty()) {
    write_trajectory_csv((dir / "trajectory.csv").string(), out.trajectory, sc.output_stride);
  }
  write_report((dir / "report.txt").string(), report_entries(out.report));
  return out;
}

std::vector<std::pair<std::string, std::string>> report_entries(const RunReport& r) {
  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("name", r.name);
  kv.emplace_back("digest", r.digest);
  kv.emplace_back("grid_cells", std::to_string(r.grid_cells));
  kv.emplace_back("time_steps", std::to_string(r.time_steps));
  kv.emplace_back("status", std::to_string(r.status));
  kv.emplace_back("status_word", r.status_word);
  kv.emplace_back("max_S", format_double(r.max_S));
  kv.emplace_back("blowup_knot_time",
                  r.blowup_knot_time ? format_double(*r.blowup_knot_time) : "none");
  kv.emplace_back("blowup_interp_time",
                  r.blowup_interp_time ? format_double(*r.blowup_interp_time) : "none");
  kv.emplace_back("mass_defect", format_double(r.mass_defect));
  kv.emplace_back("quadrature_defect", format_double(r.quadrature_defect));
  kv.emplace_back("clogged", r.clogged ? "true" : "false");
  kv.emplace_back("halted", r.halted ? "true" : "false");
  kv.emplace_back("total_iterations", std::to_string(r.total_iterations));
  kv.emplace_back("max_step_iterations", std::to_string(r.max_step_iterations));
  kv.emplace_back("final_time", format_double(r.final_time));
  kv.emplace_back("final_mass", format_double(r.final_mass));
  kv.emplace_back("wall_time_s", format_double(r.wall_time_s));
  if (!r.failure.empty()) kv.emplace_back("failure", r.failure);
  return kv;
}

AdvectionScenario advection_setup(const Scenario& sc) {
  if (sc.velocity_mode != "fixed" || sc.diffusion != 0.0) {
    throw HypothesisError("the closed form covers fixed-velocity runs without diffusion");
  }
  if (!(sc.velocity > 0.0)) {
    throw HypothesisError("the closed form covers rightward advection (q > 0)");
  }
  if (sc.initial.type != "pulse") {
    throw HypothesisError("the closed form needs a pulse initial profile");
  }
  if (!sc.chi_left || *sc.chi_left != 0.0) {
    throw HypothesisError("the closed form needs a zero inflow trace behind the pulse");
  }
  if (sc.x_left > -sc.initial.L) {
    throw HypothesisError("the domain truncates the pulse: x_left must be <= -L");
  }
  AdvectionScenario a;
  a.chi_L = sc.initial.chi_L;
  a.L = sc.initial.L;
  a.q = sc.velocity;
  a.law = sc.law;
  a.D_max = sc.x_right;
  a.validate();
  return a;
}

std::vector<CompareRow> compare_with_exact(const Scenario& sc, const TrajectoryTable& tb,
                                           const std::vector<double>& times) {
  const AdvectionScenario a = advection_setup(sc);

  // The table fixes the resolution (it may come from an --nx override); the
  // domain must still match the scenario.
  const size_t n = tb.xs.size();
  if (n < 2) throw ValidationError({"trajectory has fewer than 2 cells"});
  const double h = tb.xs[1] - tb.xs[0];
  for (size_t i = 1; i < n; ++i) {
    if (std::abs(tb.xs[i] - tb.xs[i - 1] - h) > 1e-9 * std::max(1.0, std::abs(h))) {
      throw ValidationError({"trajectory cells are not uniformly spaced"});
    }
  }
  if (std::abs(tb.xs.front() - (sc.x_left + 0.5 * h)) > 1e-9 ||
      std::abs(tb.xs.back() - (sc.x_right - 0.5 * h)) > 1e-9) {
    throw ValidationError({"trajectory grid does not span the scenario domain"});
  }

  std::vector<CompareRow> rows;
  for (double t : times) {
    size_t k = tb.times.size();
    for (size_t j = 0; j < tb.times.size(); ++j) {
      if (std::abs(tb.times[j] - t) <= 1e-9 * std::max(1.0, std::abs(t))) {
        k = j;
        break;
      }
    }
    if (k == tb.times.size()) {
      throw ValidationError({"time " + format_double(t) + " is not a knot of the trajectory"});
    }

    CompareRow row;
    row.t = tb.times[k];
    for (size_t i = 0; i < n; ++i) {
      const double x = tb.xs[i];
      if (x <= 0.0 || x >= a.D_max) continue;
      if (!(row.t < validity_end(a, x))) continue;  // pulse tail has passed
      const double eu = std::abs(tb.u[k][i] - exact_content(a, x, row.t));
      const double ec = std::abs(tb.chi[k][i] - exact_chi(a, x, row.t));
      const double es = std::abs(tb.S[k][i] - exact_saturation(a, x, row.t));
      row.cells += 1;
      row.l1_u += h * eu;
      row.linf_u = std::max(row.linf_u, eu);
      row.l1_chi += h * ec;
      row.linf_chi = std::max(row.linf_chi, ec);
      row.l1_S += h * es;
      row.linf_S = std::max(row.linf_S, es);
    }
    if (row.cells == 0) {
      throw OutsideValidity("no cell of (0, D_max) is inside the validity window at t = " +
                            format_double(row.t));
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace mht
