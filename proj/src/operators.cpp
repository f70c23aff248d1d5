#include "mht/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mht/tridiag.hpp"

namespace mht {

namespace {

std::vector<double> face_velocities(const Grid& g, const OperatorCoefficients& c) {
  const size_t nf = static_cast<size_t>(g.n_cells) + 1;
  if (c.velocity.empty()) return std::vector<double>(nf, 0.0);
  if (c.velocity.size() == 1) return std::vector<double>(nf, c.velocity[0]);
  if (c.velocity.size() != nf) {
    throw std::runtime_error("velocity must be constant or one value per face");
  }
  return c.velocity;
}

std::vector<double> cell_reactions(const Grid& g, const OperatorCoefficients& c) {
  const size_t n = static_cast<size_t>(g.n_cells);
  if (c.reaction.empty()) return std::vector<double>(n, 0.0);
  if (c.reaction.size() == 1) return std::vector<double>(n, c.reaction[0]);
  if (c.reaction.size() != n) {
    throw std::runtime_error("reaction must be constant or one value per cell");
  }
  return c.reaction;
}

}  // namespace

DiscreteOperator assemble_operator(const Grid& g, const OperatorCoefficients& c) {
  Grid::uniform(g.x_left, g.x_right, g.n_cells);  // revalidate
  const int n = g.n_cells;
  const double h = g.spacing();
  const double D = c.diffusion;
  if (D < 0.0) throw std::runtime_error("diffusion must be >= 0");

  const std::vector<double> q = face_velocities(g, c);
  const std::vector<double> a = cell_reactions(g, c);

  const double scale = (std::abs(q[0]) + D / h + 1.0) / h;
  for (int i = 0; i < n; ++i) {
    if (a[static_cast<size_t>(i)] < 0.0) {
      throw std::runtime_error("reaction must be >= 0");
    }
    const double divq = (q[static_cast<size_t>(i) + 1] - q[static_cast<size_t>(i)]) / h;
    if (2.0 * a[static_cast<size_t>(i)] + divq < -1e-12 * scale) {
      throw std::runtime_error("coefficients violate 2a + div q >= 0");
    }
  }

  // Boundary data is needed wherever the stencil reaches the boundary: on
  // both sides if D > 0, and on an inflow face for the upwind flux. A value
  // supplied on a pure-advection outflow side is ignored here (the scenario
  // validator rejects it at the user level).
  const bool need_left = D > 0.0 || q.front() > 0.0;
  const bool need_right = D > 0.0 || q.back() < 0.0;
  if (need_left && !c.dirichlet_left) {
    throw std::runtime_error("missing Dirichlet value at x_left");
  }
  if (need_right && !c.dirichlet_right) {
    throw std::runtime_error("missing Dirichlet value at x_right");
  }

  DiscreteOperator op;
  op.grid = g;
  op.lower.assign(static_cast<size_t>(n - 1), 0.0);
  op.diag.assign(static_cast<size_t>(n), 0.0);
  op.upper.assign(static_cast<size_t>(n - 1), 0.0);
  op.offset.assign(static_cast<size_t>(n), 0.0);
  op.face_velocity = q;
  op.reaction = a;
  op.diffusion = D;
  op.dirichlet_left = need_left ? c.dirichlet_left : std::nullopt;
  op.dirichlet_right = need_right ? c.dirichlet_right : std::nullopt;

  // Interior faces j = 1..n-1 between cells j-1 and j. Flux through a face is
  // F = q+ * v_up - q- * v_down - D (v_j - v_{j-1})/h; row j-1 gains +F/h,
  // row j gains -F/h.
  for (int j = 1; j < n; ++j) {
    const double qf = q[static_cast<size_t>(j)];
    const double qp = std::max(qf, 0.0);
    const double qm = std::max(-qf, 0.0);
    op.diag[static_cast<size_t>(j - 1)] += (qp + D / h) / h;
    op.upper[static_cast<size_t>(j - 1)] += (-qm - D / h) / h;
    op.lower[static_cast<size_t>(j - 1)] += (-qp - D / h) / h;
    op.diag[static_cast<size_t>(j)] += (qm + D / h) / h;
  }

  // Boundary faces: diffusion sees the Dirichlet trace over a half cell;
  // advection takes the trace only on inflow.
  const double q0 = q.front();
  if (q0 > 0.0) {
    op.offset[0] -= q0 * (*op.dirichlet_left) / h;
  } else {
    op.diag[0] += -q0 / h;
  }
  const double qn = q.back();
  if (qn > 0.0) {
    op.diag[static_cast<size_t>(n - 1)] += qn / h;
  } else {
    op.offset[static_cast<size_t>(n - 1)] += qn * (*op.dirichlet_right) / h;
  }
  if (D > 0.0) {
    op.diag[0] += 2.0 * D / (h * h);
    op.offset[0] -= 2.0 * D * (*op.dirichlet_left) / (h * h);
    op.diag[static_cast<size_t>(n - 1)] += 2.0 * D / (h * h);
    op.offset[static_cast<size_t>(n - 1)] -= 2.0 * D * (*op.dirichlet_right) / (h * h);
  }

  for (int i = 0; i < n; ++i) {
    op.diag[static_cast<size_t>(i)] += a[static_cast<size_t>(i)];
  }

  for (int i = 0; i < n; ++i) {
    if (!(op.diag[static_cast<size_t>(i)] > 0.0)) {
      throw std::runtime_error("degenerate transport operator (zero diagonal row)");
    }
    if (op.row_sum(i) < -1e-12 * scale) {
      throw std::runtime_error("operator row sum negative (maximum principle lost)");
    }
  }
  return op;
}

Field DiscreteOperator::apply(const Field& v) const {
  if (!(v.grid == grid)) throw std::runtime_error("grid mismatch in operator apply");
  const int n = grid.n_cells;
  Field r(grid);
  for (int i = 0; i < n; ++i) {
    double s = diag[static_cast<size_t>(i)] * v[i] + offset[static_cast<size_t>(i)];
    if (i > 0) s += lower[static_cast<size_t>(i - 1)] * v[i - 1];
    if (i < n - 1) s += upper[static_cast<size_t>(i)] * v[i + 1];
    r[i] = s;
  }
  return r;
}

double DiscreteOperator::flux_left(const Field& v) const {
  const double h = grid.spacing();
  const double q0 = face_velocity.front();
  double f = q0 > 0.0 ? q0 * (*dirichlet_left) : q0 * v[0];
  if (diffusion > 0.0) {
    f -= 2.0 * diffusion * (v[0] - *dirichlet_left) / h;
  }
  return f;
}

double DiscreteOperator::flux_right(const Field& v) const {
  const int n = grid.n_cells;
  const double h = grid.spacing();
  const double qn = face_velocity.back();
  double f = qn > 0.0 ? qn * v[n - 1] : qn * (*dirichlet_right);
  if (diffusion > 0.0) {
    f -= 2.0 * diffusion * (*dirichlet_right - v[n - 1]) / h;
  }
  return f;
}

double DiscreteOperator::row_sum(int i) const {
  double s = diag[static_cast<size_t>(i)];
  if (i > 0) s += lower[static_cast<size_t>(i - 1)];
  if (i < grid.n_cells - 1) s += upper[static_cast<size_t>(i)];
  return s;
}

double DiscreteOperator::column_sum(int j) const {
  double s = diag[static_cast<size_t>(j)];
  if (j > 0) s += upper[static_cast<size_t>(j - 1)];
  if (j < grid.n_cells - 1) s += lower[static_cast<size_t>(j)];
  return s;
}

Field resolvent_apply(const DiscreteOperator& op, double lambda, const Field& f) {
  if (!(f.grid == op.grid)) throw std::runtime_error("grid mismatch in resolvent");
  if (lambda < 0.0) throw std::runtime_error("resolvent needs lambda >= 0");
  const int n = op.grid.n_cells;
  std::vector<double> lo(static_cast<size_t>(n - 1)), di(static_cast<size_t>(n)),
      up(static_cast<size_t>(n - 1)), rhs(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    di[static_cast<size_t>(i)] = 1.0 + lambda * op.diag[static_cast<size_t>(i)];
    rhs[static_cast<size_t>(i)] = f[i] - lambda * op.offset[static_cast<size_t>(i)];
  }
  for (int i = 0; i < n - 1; ++i) {
    lo[static_cast<size_t>(i)] = lambda * op.lower[static_cast<size_t>(i)];
    up[static_cast<size_t>(i)] = lambda * op.upper[static_cast<size_t>(i)];
  }
  return Field(op.grid, solve_tridiagonal(lo, di, up, std::move(rhs)));
}

}  // namespace mht
