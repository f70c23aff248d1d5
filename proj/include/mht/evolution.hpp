#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "mht/field.hpp"
#include "mht/operators.hpp"
#include "mht/phase_law.hpp"
#include "mht/stationary.hpp"

namespace mht {

// Partition t_0 < ... < t_N with a declared bound on the step size.
struct TimeGrid {
  std::vector<double> knots;
  double eps_bound = 0.0;

  static TimeGrid uniform(double t0, double t_end, int steps);
  static TimeGrid from_knots(std::vector<double> knots, double eps_bound);

  int steps() const { return static_cast<int>(knots.size()) - 1; }
  double dt(int j) const { return knots[static_cast<size_t>(j)] - knots[static_cast<size_t>(j) - 1]; }
  void validate() const;
};

// Discrete solution path, one record per knot, plus run diagnostics. The
// q/p_star columns are filled only by the coupled driver.
struct Trajectory {
  Grid grid;
  std::vector<double> times;
  std::vector<Field> u, chi, S;

  std::vector<double> mass;            // h * sum u at each knot
  std::vector<double> max_S;           // max saturation at each knot
  std::vector<double> compl_residual;  // max |S*(chi_star - chi)| where u <= phi*R

  std::vector<int> step_iterations;        // per step
  std::vector<double> step_mass_defect;    // per step ledger closure

  std::vector<double> q;       // per knot (coupled runs)
  std::vector<Field> p_star;   // per knot (pressure-driven runs)
  bool clogged = false;
  bool halted = false;  // stopped before t_end (clogged, no diffusive path)

  std::optional<double> blowup_knot_time;    // first knot with max S >= 1
  std::optional<double> blowup_interp_time;  // linear interpolation of the crossing

  double mass_defect = 0.0;        // sum over steps of |ledger defect|
  double quadrature_defect = 0.0;  // estimate of sum_j int |F(t)-F(t_j)| dt

  int knots() const { return static_cast<int>(times.size()); }
};

// Operator for one backward step, plus optional flow diagnostics computed
// from the state at the step's left knot. halt stops the run before the step.
struct StepOperator {
  DiscreteOperator op;
  std::optional<double> q;
  std::optional<Field> p_star;
  bool clogged = false;
  bool halt = false;
};

using OperatorProvider = std::function<StepOperator(int step, const Field& u_prev)>;
using SourceFn = std::function<Field(double t)>;

// A step failed to converge; carries the part of the path already computed.
class EvolutionFailure : public std::runtime_error {
public:
  EvolutionFailure(const std::string& msg, Trajectory partial, double residual)
      : std::runtime_error(msg), partial(std::move(partial)), residual(residual) {}
  Trajectory partial;
  double residual;
};

// One backward difference step: solve u + dt*A(chi) = u_prev + dt*F_j.
StationaryResult backward_step(const DiscreteOperator& op,
                               const std::vector<ScalarGraph>& graphs, const Field& u_prev,
                               double dt, const Field& source, const StationaryParams& params);

// Backward-difference evolution over the time grid, sampling the source at
// the right endpoint of each step. Records every knot; flags the first knot
// with max S >= 1 as blow-up (the run continues through it on the graph
// extension).
Trajectory evolve(const OperatorProvider& ops, const PhaseLaw& law, const Field& u0,
                  const SourceFn& source, const TimeGrid& tg, const StationaryParams& params);
Trajectory evolve(const DiscreteOperator& op, const PhaseLaw& law, const Field& u0,
                  const SourceFn& source, const TimeGrid& tg, const StationaryParams& params);

// Reduction of an inhomogeneous-boundary problem to a homogeneous one: an
// affine lifting v0 of the Dirichlet data (constant from the inflow trace in
// the pure-advection case), the graph selection u0 in graph(v0), the shifted
// per-cell graphs xi -> graph(v0 + xi) - u0, and the data/state maps. The
// composition solve-then-unshift equals the direct inhomogeneous solve.
struct BoundaryTranslation {
  DiscreteOperator homogeneous_op;
  std::vector<ScalarGraph> shifted_graphs;
  Field lifting_chi;  // v0 at cell centers
  Field lifting_u;    // u0, graph selection at v0
  Field a_lifting;    // A(v0), boundary offset included

  Field shift_state(const Field& u) const;
  Field shift_data(const Field& f, double step_lambda) const;
  Field shift_source(const Field& F) const;
  Field unshift_state(const Field& u_shifted) const;
  Field unshift_chi(const Field& chi_shifted) const;
};

BoundaryTranslation translate_boundary(const DiscreteOperator& op, const PhaseLaw& law);

}  // namespace mht
