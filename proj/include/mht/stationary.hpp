#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "mht/field.hpp"
#include "mht/operators.hpp"
#include "mht/phase_law.hpp"

namespace mht {

enum class SolveMethod { newton, fixed_point, both };

// One level of the regularization continuation: eps damps the operator,
// yosida_lambda smooths the graph.
struct ContinuationPair {
  double eps = 0.0;
  double yosida_lambda = 0.0;

  bool operator==(const ContinuationPair&) const = default;
};

// Default schedule (1e-2 * 4^-j, 1e-2 * 4^-j), j = 0..6. The solver extends
// it geometrically when the tolerance needs tighter levels.
std::vector<ContinuationPair> default_continuation();

struct StationaryParams {
  double tol = 1e-10;  // discrete L1 tolerance on the residual / graph defect
  int max_iters = 100;
  SolveMethod method = SolveMethod::newton;
  std::vector<ContinuationPair> continuation;  // empty => default_continuation()
  int max_continuation_levels = 44;

  bool operator==(const StationaryParams&) const = default;
};

struct SolveReport {
  int newton_iterations = 0;
  int sweeps = 0;
  int continuation_levels = 0;
  double final_eps = 0.0;
  double final_yosida_lambda = 0.0;
  double residual_l1 = 0.0;
  double graph_defect_max = 0.0;
  double cross_check_l1 = -1.0;  // set by SolveMethod::both
};

struct StationaryResult {
  Field u;
  Field chi;
  SolveReport report;
};

// Solver gave up; carries the best iterate so callers can report partial
// state.
class NonConvergence : public std::runtime_error {
public:
  NonConvergence(const std::string& msg, Field u, Field chi, double residual)
      : std::runtime_error(msg), best_u(std::move(u)), best_chi(std::move(chi)),
        residual(residual) {}
  Field best_u;
  Field best_chi;
  double residual;
};

// Solves the cell-wise inclusion
//   u + step_lambda * A(chi) = f,   u_i in graphs[i](chi_i),
// returning the unique pair (u, chi). Postconditions: the L1 residual of the
// equation is <= tol and every u_i lies in the graph interval at chi_i
// inflated by tol.
//
// method = newton: semismooth Newton on the single-valued u-form
//   u + step_lambda * A(inverse(u)) = f, left-branch generalized slopes at
//   the kinks, damped by an L1 line search.
// method = fixed_point: continuation over (eps, yosida_lambda) levels of the
//   regularized equation eps*v + step_lambda*A(v) + yosida(v) = f; each level
//   warm-starts with contraction sweeps and finishes with an exact
//   piecewise-linear Newton solve of the same regularized system.
// method = both: newton, then fixed_point as a cross-check; their L1
//   distance is stored in the report and must stay within 2*tol.
StationaryResult solve_stationary(const DiscreteOperator& op,
                                  const std::vector<ScalarGraph>& graphs,
                                  double step_lambda, const Field& f,
                                  const StationaryParams& params);
StationaryResult solve_stationary(const DiscreteOperator& op, const PhaseLaw& law,
                                  double step_lambda, const Field& f,
                                  const StationaryParams& params);

// One application of the contraction map behind the fixed_point path:
//   v+ = (I + k*M)^-1 [ (yl*(f - step_lambda*offset) + resolvent_yl(v)) / (1+yl*eps) ],
//   k = yl*step_lambda/(1 + yl*eps),
// where resolvent_yl is the per-cell graph resolvent at yosida_lambda. A
// strict L1 contraction with factor (1 + yl*eps)^-1.
Field fixed_point_sweep(const Field& v, const DiscreteOperator& op,
                        const std::vector<ScalarGraph>& graphs, double step_lambda,
                        double eps, double yosida_lambda, const Field& f);

}  // namespace mht
