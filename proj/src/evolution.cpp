#include "mht/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "mht/errors.hpp"

namespace mht {

TimeGrid TimeGrid::uniform(double t0, double t_end, int steps) {
  if (steps < 1) throw ValidationError({"time grid needs at least one step"});
  if (!(t_end > t0)) throw ValidationError({"time grid needs t_end > t0"});
  TimeGrid tg;
  tg.knots.resize(static_cast<size_t>(steps) + 1);
  const double dt = (t_end - t0) / steps;
  for (int j = 0; j <= steps; ++j) tg.knots[static_cast<size_t>(j)] = t0 + j * dt;
  tg.knots.back() = t_end;  // exact endpoint regardless of rounding
  tg.eps_bound = dt * (1.0 + 1e-12);
  tg.validate();
  return tg;
}

TimeGrid TimeGrid::from_knots(std::vector<double> knots, double eps_bound) {
  TimeGrid tg;
  tg.knots = std::move(knots);
  tg.eps_bound = eps_bound;
  tg.validate();
  return tg;
}

void TimeGrid::validate() const {
  std::vector<std::string> issues;
  if (knots.size() < 2) issues.push_back("time grid needs at least two knots");
  for (size_t j = 0; j + 1 < knots.size(); ++j) {
    if (!(knots[j + 1] > knots[j])) {
      issues.push_back("time knots must be strictly increasing");
      break;
    }
  }
  if (!(eps_bound > 0)) issues.push_back("step-size bound must be positive");
  for (size_t j = 0; j + 1 < knots.size(); ++j) {
    if (knots[j + 1] - knots[j] > eps_bound) {
      issues.push_back("a step exceeds the declared step-size bound");
      break;
    }
  }
  if (!issues.empty()) throw ValidationError(issues);
}

StationaryResult backward_step(const DiscreteOperator& op,
                               const std::vector<ScalarGraph>& graphs, const Field& u_prev,
                               double dt, const Field& source, const StationaryParams& params) {
  return solve_stationary(op, graphs, dt, axpy(u_prev, dt, source), params);
}

namespace {

// Per-step ledger: (mass_j - mass_{j-1}) + dt*(outflux - influx + reaction - source).
double step_ledger_defect(const DiscreteOperator& op, const Field& u_now, const Field& u_prev,
                          const Field& chi_now, const Field& source, double dt) {
  const double h = op.grid.spacing();
  double reaction = 0.0, src = 0.0;
  for (int i = 0; i < op.grid.n_cells; ++i) {
    reaction += op.reaction[static_cast<size_t>(i)] * chi_now[i];
    src += source[i];
  }
  const double dmass = total_mass(u_now) - total_mass(u_prev);
  return dmass + dt * (op.flux_right(chi_now) - op.flux_left(chi_now) + h * (reaction - src));
}

// max |S*(chi_star - chi)| over cells that have not left the physical range;
// zero identically when the pair sits on the graph.
double complementarity_residual(const PhaseLaw& law, const Grid& grid, const Field& u,
                                const Field& chi, const Field& S) {
  double worst = 0.0;
  for (int i = 0; i < grid.n_cells; ++i) {
    const double x = grid.center(i);
    const double cap = law.phi(x) * law.ceiling;
    if (u[i] > cap) continue;
    const double gap = law.chi_star(x) - chi[i];
    worst = std::max(worst, std::abs(S[i] * gap));
  }
  return worst;
}

Field saturation_field(const PhaseLaw& law, const Grid& grid, const Field& u) {
  Field S(grid);
  for (int i = 0; i < grid.n_cells; ++i) S[i] = law.saturation_from_u(grid.center(i), u[i]);
  return S;
}

void record_knot(Trajectory& tr, const PhaseLaw& law, double t, const Field& u,
                 const Field& chi) {
  Field S = saturation_field(law, tr.grid, u);
  tr.times.push_back(t);
  tr.mass.push_back(total_mass(u));
  tr.max_S.push_back(max_value(S));
  tr.compl_residual.push_back(complementarity_residual(law, tr.grid, u, chi, S));
  tr.u.push_back(u);
  tr.chi.push_back(chi);
  tr.S.push_back(std::move(S));
}

void detect_blowup(Trajectory& tr) {
  if (tr.blowup_knot_time) return;
  const size_t j = tr.max_S.size() - 1;
  if (tr.max_S[j] < 1.0) return;
  tr.blowup_knot_time = tr.times[j];
  if (j == 0 || tr.max_S[j - 1] >= 1.0) {
    tr.blowup_interp_time = tr.times[j];
    return;
  }
  // Linear crossing of the knot sequence max_S through 1.
  const double s0 = tr.max_S[j - 1], s1 = tr.max_S[j];
  const double theta = (1.0 - s0) / (s1 - s0);
  tr.blowup_interp_time = tr.times[j - 1] + theta * (tr.times[j] - tr.times[j - 1]);
}

}  // namespace

Trajectory evolve(const OperatorProvider& ops, const PhaseLaw& law, const Field& u0,
                  const SourceFn& source, const TimeGrid& tg, const StationaryParams& params) {
  tg.validate();
  for (double v : u0.values)
    if (!std::isfinite(v)) throw ValidationError({"initial data contains a non-finite value"});
  Trajectory tr;
  tr.grid = u0.grid;

  // Initial knot; chi at t0 is the graph inverse of u0.
  Field chi0(tr.grid);
  for (int i = 0; i < tr.grid.n_cells; ++i)
    chi0[i] = law.graph_inverse(tr.grid.center(i), u0[i]);
  record_knot(tr, law, tg.knots.front(), u0, chi0);
  detect_blowup(tr);

  Field u_prev = u0;
  const std::vector<ScalarGraph> graphs = cell_graphs(law, tr.grid);
  const int N = tg.steps();
  for (int j = 1; j <= N; ++j) {
    StepOperator step = ops(j, u_prev);
    if (step.q) tr.q.push_back(*step.q);
    if (step.p_star) tr.p_star.push_back(*step.p_star);
    if (step.clogged) tr.clogged = true;
    if (step.halt) {
      tr.halted = true;
      break;
    }

    const double t_j = tg.knots[static_cast<size_t>(j)];
    const double dt = tg.dt(j);
    Field F_j = source(t_j);
    if (F_j.grid != tr.grid)
      throw ValidationError({"source field does not match the spatial grid"});

    StationaryResult res;
    try {
      res = backward_step(step.op, graphs, u_prev, dt, F_j, params);
    } catch (const NonConvergence& e) {
      throw EvolutionFailure(
          "step " + std::to_string(j) + " did not converge: " + e.what(), std::move(tr),
          e.residual);
    }

    tr.step_iterations.push_back(std::max(res.report.newton_iterations, res.report.sweeps));
    const double defect = step_ledger_defect(step.op, res.u, u_prev, res.chi, F_j, dt);
    tr.step_mass_defect.push_back(defect);
    tr.mass_defect += std::abs(defect);

    // Right-endpoint quadrature misfit of the source over this step,
    // estimated from the midpoint sample.
    tr.quadrature_defect += 0.5 * dt * l1_distance(source(t_j - 0.5 * dt), F_j);

    record_knot(tr, law, t_j, res.u, res.chi);
    detect_blowup(tr);
    u_prev = res.u;
  }
  return tr;
}

Trajectory evolve(const DiscreteOperator& op, const PhaseLaw& law, const Field& u0,
                  const SourceFn& source, const TimeGrid& tg, const StationaryParams& params) {
  OperatorProvider fixed = [&op](int, const Field&) {
    StepOperator s;
    s.op = op;
    return s;
  };
  return evolve(fixed, law, u0, source, tg, params);
}

Field BoundaryTranslation::shift_state(const Field& u) const { return sub(u, lifting_u); }

Field BoundaryTranslation::shift_data(const Field& f, double step_lambda) const {
  // f - u0 - step_lambda * A(v0): the data of the homogeneous problem.
  return axpy(sub(f, lifting_u), -step_lambda, a_lifting);
}

Field BoundaryTranslation::shift_source(const Field& F) const { return sub(F, a_lifting); }

Field BoundaryTranslation::unshift_state(const Field& u_shifted) const {
  return add(u_shifted, lifting_u);
}

Field BoundaryTranslation::unshift_chi(const Field& chi_shifted) const {
  return add(chi_shifted, lifting_chi);
}

BoundaryTranslation translate_boundary(const DiscreteOperator& op, const PhaseLaw& law) {
  const Grid& grid = op.grid;
  const bool has_left = op.dirichlet_left.has_value();
  const bool has_right = op.dirichlet_right.has_value();
  if (!has_left && !has_right)
    throw ValidationError({"operator carries no boundary data to translate"});

  BoundaryTranslation out;

  // Affine lifting through the prescribed trace values; constant when only
  // one side carries data (pure advection: the inflow trace).
  const double gl = has_left ? *op.dirichlet_left : *op.dirichlet_right;
  const double gr = has_right ? *op.dirichlet_right : *op.dirichlet_left;
  out.lifting_chi = Field(grid);
  for (int i = 0; i < grid.n_cells; ++i) {
    const double s = (grid.center(i) - grid.x_left) / grid.length();
    out.lifting_chi[i] = gl + (gr - gl) * s;
  }

  // Graph selection at the lifting: lower end of the vertical segment, so
  // the shifted graph still carries (0, 0).
  out.lifting_u = Field(grid);
  out.shifted_graphs.reserve(static_cast<size_t>(grid.n_cells));
  for (int i = 0; i < grid.n_cells; ++i) {
    ScalarGraph g = law.graph_at(grid.center(i));
    const double v0 = out.lifting_chi[i];
    const double u0 = g.eval(v0).lo;
    out.lifting_u[i] = u0;
    out.shifted_graphs.push_back(
        ScalarGraph{g.kink - v0, g.u_lo - u0, g.u_hi - u0, g.slope_lo, g.slope_hi});
  }

  out.a_lifting = op.apply(out.lifting_chi);

  // Same stencil with zero traces; the offset is linear in the traces, so it
  // vanishes with them.
  out.homogeneous_op = op;
  out.homogeneous_op.offset.assign(static_cast<size_t>(grid.n_cells), 0.0);
  if (has_left) out.homogeneous_op.dirichlet_left = 0.0;
  if (has_right) out.homogeneous_op.dirichlet_right = 0.0;
  return out;
}

}  // namespace mht
