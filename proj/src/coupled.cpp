#include "mht/coupled.hpp"

#include "mht/errors.hpp"

namespace mht {

FlowState coupled_flow(const Scenario& sc, const Grid& g, const Field& u) {
  Field S(g);
  for (int i = 0; i < g.n_cells; ++i) {
    S[i] = sc.law.saturation_from_u(g.center(i), u[i]);
  }
  PressureSolution ps = solve_pressure_from_saturation(g, sc.pressure->fluid, S,
                                                       sc.pressure->p_left, sc.pressure->p_right);
  return FlowState{ps.q, std::move(ps.p_star), ps.clogged};
}

Trajectory run_coupled(const Scenario& sc, const StationaryParams& params) {
  if (sc.velocity_mode != "pressure_driven" || !sc.pressure) {
    throw ValidationError({"coupled runs need a pressure_driven velocity mode"});
  }
  const Grid g = sc.grid();
  const Field u0 = sc.initial_field();
  const TimeGrid tg = sc.time_grid();
  const SourceFn F = sc.source_fn();

  OperatorProvider provider = [&sc, &g](int, const Field& u_prev) {
    FlowState fs = coupled_flow(sc, g, u_prev);
    StepOperator step;
    step.q = fs.q;
    step.p_star = std::move(fs.p_star);
    step.clogged = fs.clogged;
    step.halt = fs.clogged && sc.diffusion == 0.0;
    if (!step.halt) {
      step.op = assemble_operator(g, sc.coefficients(fs.q));
    }
    return step;
  };

  Trajectory tr = evolve(provider, sc.law, u0, F, tg, params);

  // The provider saw the left knot of each step; close the flow columns with
  // the final state (absent only when the run halted, which already closed).
  if (tr.q.size() + 1 == tr.times.size()) {
    FlowState fs = coupled_flow(sc, g, tr.u.back());
    tr.q.push_back(fs.q);
    tr.p_star.push_back(std::move(fs.p_star));
    tr.clogged = tr.clogged || fs.clogged;
  }
  return tr;
}

}  // namespace mht
