#include "mht/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mht/tridiag.hpp"

namespace mht {

namespace {

void check_inputs(const DiscreteOperator& op, const std::vector<ScalarGraph>& graphs,
                  double step_lambda, const Field& f) {
  if (!(f.grid == op.grid)) throw std::runtime_error("grid mismatch in stationary solve");
  if (graphs.size() != static_cast<size_t>(op.grid.n_cells)) {
    throw std::runtime_error("graph row size does not match grid");
  }
  if (step_lambda < 0.0) throw std::runtime_error("stationary solve needs step >= 0");
}

Field inverse_row(const std::vector<ScalarGraph>& graphs, const Field& u) {
  Field chi(u.grid);
  for (int i = 0; i < u.size(); ++i) chi[i] = graphs[static_cast<size_t>(i)].inverse(u[i]);
  return chi;
}

// Residual of the u-form: u + lambda*A(inverse(u)) - f.
Field u_form_residual(const DiscreteOperator& op, const std::vector<ScalarGraph>& graphs,
                      double lambda, const Field& f, const Field& u) {
  Field chi = inverse_row(graphs, u);
  Field r = op.apply(chi);
  for (int i = 0; i < u.size(); ++i) r[i] = u[i] + lambda * r[i] - f[i];
  return r;
}

struct NewtonOutcome {
  Field u;
  Field chi;
  int iterations = 0;
  double residual = 0.0;
};

// Slope of the inverse on the branch a step moving in direction `dir` enters.
// Away from the two breakpoints both sides agree and the choice is the plain
// piecewise slope; at a breakpoint (up to rounding noise) the one-sided slope
// keeps the linear model consistent with the piece the iterate moves into.
double inverse_slope_toward(const ScalarGraph& g, double u, double dir) {
  const double snap_lo = 1e-12 * std::max(1.0, std::abs(g.u_lo));
  const double snap_hi = 1e-12 * std::max(1.0, std::abs(g.u_hi));
  if (std::abs(u - g.u_lo) <= snap_lo) return dir < 0.0 ? 1.0 / g.slope_lo : 0.0;
  if (std::abs(u - g.u_hi) <= snap_hi) return dir > 0.0 ? 1.0 / g.slope_hi : 0.0;
  return g.inverse_slope_left(u);
}

NewtonOutcome newton_solve(const DiscreteOperator& op, const std::vector<ScalarGraph>& graphs,
                           double lambda, const Field& f, double tol, int max_iters) {
  const int n = op.grid.n_cells;
  Field u = f;  // exact for lambda = 0; a reasonable global start otherwise
  Field phi = u_form_residual(op, graphs, lambda, f, u);
  double res = l1_norm(phi);
  int iter = 0;
  while (res > tol && iter < max_iters) {
    // J = I + lambda*M*diag(g'), g' a generalized slope of the inverse. Start
    // from the left branch, then re-pick the slope of every cell parked at a
    // breakpoint on the side its step component actually moves toward and
    // re-solve; an inconsistent branch there makes the model miss the chi
    // response entirely and strands the line search.
    std::vector<double> gp(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      gp[static_cast<size_t>(i)] = graphs[static_cast<size_t>(i)].inverse_slope_left(u[i]);
    }
    std::vector<double> d;
    for (int pass = 0;; ++pass) {
      std::vector<double> lo(static_cast<size_t>(n - 1)), di(static_cast<size_t>(n)),
          up(static_cast<size_t>(n - 1)), rhs(static_cast<size_t>(n));
      for (int i = 0; i < n; ++i) {
        di[static_cast<size_t>(i)] =
            1.0 + lambda * op.diag[static_cast<size_t>(i)] * gp[static_cast<size_t>(i)];
        rhs[static_cast<size_t>(i)] = -phi[i];
      }
      for (int i = 0; i < n - 1; ++i) {
        lo[static_cast<size_t>(i)] =
            lambda * op.lower[static_cast<size_t>(i)] * gp[static_cast<size_t>(i)];
        up[static_cast<size_t>(i)] =
            lambda * op.upper[static_cast<size_t>(i)] * gp[static_cast<size_t>(i) + 1];
      }
      d = solve_tridiagonal(lo, di, up, std::move(rhs));
      if (pass >= 2) break;
      bool stable = true;
      for (int i = 0; i < n; ++i) {
        const double s = inverse_slope_toward(graphs[static_cast<size_t>(i)], u[i],
                                              d[static_cast<size_t>(i)]);
        if (s != gp[static_cast<size_t>(i)]) {
          gp[static_cast<size_t>(i)] = s;
          stable = false;
        }
      }
      if (stable) break;
    }

    double t = 1.0;
    Field u_try(u.grid);
    Field phi_try(u.grid);
    double res_try = res;
    bool accepted = false;
    for (int cut = 0; cut < 45; ++cut) {
      for (int i = 0; i < n; ++i) u_try[i] = u[i] + t * d[static_cast<size_t>(i)];
      phi_try = u_form_residual(op, graphs, lambda, f, u_try);
      res_try = l1_norm(phi_try);
      if (res_try <= (1.0 - 1e-4 * t) * res) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;  // rounding floor reached
    u = u_try;
    phi = phi_try;
    res = res_try;
    ++iter;
  }
  if (res > tol) {
    throw NonConvergence("stationary Newton did not reach tolerance", u,
                         inverse_row(graphs, u), res);
  }
  return NewtonOutcome{u, inverse_row(graphs, u), iter, res};
}

struct FixedPointOutcome {
  Field u;
  Field chi;
  int sweeps = 0;
  int newton_iterations = 0;
  int levels = 0;
  double final_eps = 0.0;
  double final_yosida_lambda = 0.0;
  double residual = 0.0;
  double defect_max = 0.0;
};

// Exact solve of the regularized system
//   eps*v + lambda*(M v + offset) + yosida_yl(v) = f
// by piecewise-linear Newton (the smooth companion of the sweep map; both
// have the same unique solution).
int regularized_newton(const DiscreteOperator& op, const std::vector<ScalarGraph>& graphs,
                       double lambda, double eps, double yl, const Field& f, Field& v,
                       double target) {
  const int n = op.grid.n_cells;
  auto residual = [&](const Field& w) {
    Field r = op.apply(w);
    for (int i = 0; i < n; ++i) {
      r[i] = eps * w[i] + lambda * r[i] + graphs[static_cast<size_t>(i)].yosida(yl, w[i]) - f[i];
    }
    return r;
  };
  Field rr = residual(v);
  double res = l1_norm(rr);
  int iter = 0;
  while (res > target && iter < 60) {
    std::vector<double> lo(static_cast<size_t>(n - 1)), di(static_cast<size_t>(n)),
        up(static_cast<size_t>(n - 1)), rhs(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      di[static_cast<size_t>(i)] = eps + lambda * op.diag[static_cast<size_t>(i)] +
                                   graphs[static_cast<size_t>(i)].yosida_slope_left(yl, v[i]);
      rhs[static_cast<size_t>(i)] = -rr[i];
    }
    for (int i = 0; i < n - 1; ++i) {
      lo[static_cast<size_t>(i)] = lambda * op.lower[static_cast<size_t>(i)];
      up[static_cast<size_t>(i)] = lambda * op.upper[static_cast<size_t>(i)];
    }
    std::vector<double> d = solve_tridiagonal(lo, di, up, std::move(rhs));
    double t = 1.0;
    bool accepted = false;
    Field v_try(v.grid);
    Field rr_try(v.grid);
    double res_try = res;
    for (int cut = 0; cut < 45; ++cut) {
      for (int i = 0; i < n; ++i) v_try[i] = v[i] + t * d[static_cast<size_t>(i)];
      rr_try = residual(v_try);
      res_try = l1_norm(rr_try);
      if (res_try <= (1.0 - 1e-4 * t) * res) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
    v = v_try;
    rr = rr_try;
    res = res_try;
    ++iter;
  }
  return iter;
}

FixedPointOutcome fixed_point_solve(const DiscreteOperator& op,
                                    const std::vector<ScalarGraph>& graphs, double lambda,
                                    const Field& f, const StationaryParams& params) {
  const int n = op.grid.n_cells;
  std::vector<ContinuationPair> schedule =
      params.continuation.empty() ? default_continuation() : params.continuation;

  FixedPointOutcome out{Field(f.grid), Field(f.grid), 0, 0, 0, 0.0, 0.0, 0.0, 0.0};
  Field v = inverse_row(graphs, f);
  double best_defect = std::numeric_limits<double>::max();

  for (int level = 0; level < params.max_continuation_levels; ++level) {
    ContinuationPair pair = level < static_cast<int>(schedule.size())
                                ? schedule[static_cast<size_t>(level)]
                                : ContinuationPair{schedule.back().eps / std::pow(4.0, level + 1 - static_cast<int>(schedule.size())),
                                                   schedule.back().yosida_lambda / std::pow(4.0, level + 1 - static_cast<int>(schedule.size()))};
    const double eps = pair.eps;
    const double yl = pair.yosida_lambda;
    ++out.levels;

    // Warm start with a few contraction sweeps, then solve the level exactly.
    for (int s = 0; s < 20; ++s) {
      Field v_next = fixed_point_sweep(v, op, graphs, lambda, eps, yl, f);
      double delta = l1_distance(v_next, v);
      v = v_next;
      ++out.sweeps;
      if (delta <= 0.05 * params.tol) break;
    }
    out.newton_iterations +=
        regularized_newton(op, graphs, lambda, eps, yl, f, v, 1e-3 * params.tol);

    // Extract the pair: chi = v and u from the unregularized equation, so the
    // equation residual vanishes identically and only the graph membership
    // defect (driven to 0 by the continuation) remains.
    Field chi = v;
    Field au = op.apply(chi);
    Field u(f.grid);
    double defect_max = 0.0;
    double defect_l1 = 0.0;
    for (int i = 0; i < n; ++i) {
      u[i] = f[i] - lambda * au[i];
      double d = graphs[static_cast<size_t>(i)].defect(chi[i], u[i]);
      defect_max = std::max(defect_max, d);
      defect_l1 += d;
    }
    defect_l1 *= f.grid.spacing();

    out.final_eps = eps;
    out.final_yosida_lambda = yl;
    if (defect_max < best_defect) {
      best_defect = defect_max;
      out.u = u;
      out.chi = chi;
      out.defect_max = defect_max;
    }
    if (defect_max <= params.tol && defect_l1 <= params.tol) {
      // Residual of the returned pair (chi is the continuation iterate, not
      // inverse(u)); zero up to rounding by the choice of u above.
      Field r = op.apply(out.chi);
      double res = 0.0;
      for (int i = 0; i < n; ++i) res += std::abs(out.u[i] + lambda * r[i] - f[i]);
      out.residual = res * f.grid.spacing();
      return out;
    }
  }
  throw NonConvergence("fixed-point continuation exhausted its levels", out.u, out.chi,
                       best_defect);
}

}  // namespace

std::vector<ContinuationPair> default_continuation() {
  std::vector<ContinuationPair> s;
  for (int j = 0; j <= 6; ++j) {
    double v = 1e-2 / std::pow(4.0, j);
    s.push_back({v, v});
  }
  return s;
}

Field fixed_point_sweep(const Field& v, const DiscreteOperator& op,
                        const std::vector<ScalarGraph>& graphs, double step_lambda,
                        double eps, double yosida_lambda, const Field& f) {
  check_inputs(op, graphs, step_lambda, f);
  if (!(yosida_lambda > 0.0)) throw std::runtime_error("sweep needs yosida_lambda > 0");
  const int n = op.grid.n_cells;
  const double yl = yosida_lambda;
  const double damp = 1.0 + yl * eps;
  const double k = yl * step_lambda / damp;
  std::vector<double> lo(static_cast<size_t>(n - 1)), di(static_cast<size_t>(n)),
      up(static_cast<size_t>(n - 1)), rhs(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    di[static_cast<size_t>(i)] = 1.0 + k * op.diag[static_cast<size_t>(i)];
    const double fi = yl * (f[i] - step_lambda * op.offset[static_cast<size_t>(i)]);
    const double ri = graphs[static_cast<size_t>(i)].resolvent(yl, v[i]);
    rhs[static_cast<size_t>(i)] = (fi + ri) / damp;
  }
  for (int i = 0; i < n - 1; ++i) {
    lo[static_cast<size_t>(i)] = k * op.lower[static_cast<size_t>(i)];
    up[static_cast<size_t>(i)] = k * op.upper[static_cast<size_t>(i)];
  }
  return Field(f.grid, solve_tridiagonal(lo, di, up, std::move(rhs)));
}

StationaryResult solve_stationary(const DiscreteOperator& op,
                                  const std::vector<ScalarGraph>& graphs, double step_lambda,
                                  const Field& f, const StationaryParams& params) {
  check_inputs(op, graphs, step_lambda, f);
  StationaryResult result;
  if (params.method == SolveMethod::newton || params.method == SolveMethod::both) {
    NewtonOutcome n = newton_solve(op, graphs, step_lambda, f, params.tol, params.max_iters);
    result.u = n.u;
    result.chi = n.chi;
    result.report.newton_iterations = n.iterations;
    result.report.residual_l1 = n.residual;
    double dmax = 0.0;
    for (int i = 0; i < f.size(); ++i) {
      dmax = std::max(dmax, graphs[static_cast<size_t>(i)].defect(result.chi[i], result.u[i]));
    }
    result.report.graph_defect_max = dmax;  // zero by construction of inverse()
  }
  if (params.method == SolveMethod::fixed_point || params.method == SolveMethod::both) {
    FixedPointOutcome fp = fixed_point_solve(op, graphs, step_lambda, f, params);
    if (params.method == SolveMethod::both) {
      double cross = l1_distance(result.u, fp.u);
      result.report.cross_check_l1 = cross;
      result.report.sweeps = fp.sweeps;
      result.report.continuation_levels = fp.levels;
      result.report.final_eps = fp.final_eps;
      result.report.final_yosida_lambda = fp.final_yosida_lambda;
      if (cross > 2.0 * params.tol) {
        throw NonConvergence("solver paths disagree beyond 2*tol", result.u, result.chi,
                             cross);
      }
    } else {
      result.u = fp.u;
      result.chi = fp.chi;
      result.report.sweeps = fp.sweeps;
      result.report.newton_iterations = fp.newton_iterations;
      result.report.continuation_levels = fp.levels;
      result.report.final_eps = fp.final_eps;
      result.report.final_yosida_lambda = fp.final_yosida_lambda;
      result.report.residual_l1 = fp.residual;
      result.report.graph_defect_max = fp.defect_max;
    }
  }
  return result;
}

StationaryResult solve_stationary(const DiscreteOperator& op, const PhaseLaw& law,
                                  double step_lambda, const Field& f,
                                  const StationaryParams& params) {
  return solve_stationary(op, cell_graphs(law, op.grid), step_lambda, f, params);
}

}  // namespace mht
