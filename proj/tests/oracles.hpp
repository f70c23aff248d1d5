#pragma once

// Reference implementations used only by the tests: deliberately slow,
// structurally different from the library code they check (bisection instead
// of closed forms, dense elimination instead of banded, relaxation instead
// of Newton).

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "mht/field.hpp"
#include "mht/operators.hpp"
#include "mht/phase_law.hpp"

namespace oracles {

// Resolvent of a monotone graph by interval bisection: the unique v with
// r - v in lambda * graph(v), found from the monotone bracketing
//   v + lambda*eval(v).lo - r <= 0 <= v + lambda*eval(v).hi - r.
inline double resolvent_bisect(const mht::ScalarGraph& g, double lambda, double r) {
  const double span = 10.0 * (1.0 + lambda) * (1.0 + std::abs(r) + std::abs(g.kink)) +
                      std::abs(g.u_lo) + std::abs(g.u_hi);
  double a = std::min(r, g.kink) - span;
  double b = std::max(r, g.kink) + span;
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    const mht::GraphValue gv = g.eval(m);
    if (m + lambda * gv.hi - r < 0.0) {
      a = m;
    } else if (m + lambda * gv.lo - r > 0.0) {
      b = m;
    } else {
      return m;  // containment: m is the unique solution (vertical segment)
    }
  }
  return 0.5 * (a + b);
}

// Dense LU with partial pivoting; solves in place. Throws on a numerically
// singular matrix.
inline std::vector<double> dense_solve(std::vector<std::vector<double>> A,
                                       std::vector<double> b) {
  const size_t n = A.size();
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    for (size_t row = col + 1; row < n; ++row) {
      if (std::abs(A[row][col]) > std::abs(A[piv][col])) piv = row;
    }
    if (std::abs(A[piv][col]) < 1e-300) throw std::runtime_error("singular matrix");
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    for (size_t row = col + 1; row < n; ++row) {
      const double f = A[row][col] / A[col][col];
      if (f == 0.0) continue;
      for (size_t k = col; k < n; ++k) A[row][k] -= f * A[col][k];
      b[row] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (size_t row = n; row-- > 0;) {
    double s = b[row];
    for (size_t k = row + 1; k < n; ++k) s -= A[row][k] * x[k];
    x[row] = s / A[row][row];
  }
  return x;
}

inline std::vector<std::vector<double>> dense_from_operator(const mht::DiscreteOperator& op) {
  const size_t n = op.diag.size();
  std::vector<std::vector<double>> A(n, std::vector<double>(n, 0.0));
  for (size_t i = 0; i < n; ++i) {
    A[i][i] = op.diag[i];
    if (i + 1 < n) {
      A[i + 1][i] = op.lower[i];
      A[i][i + 1] = op.upper[i];
    }
  }
  return A;
}

// Stationary inclusion u + lambda*(M chi + offset) = f, u in graphs(chi), by
// Gauss-Seidel relaxation with the bisection resolvent on each cell. Slow
// and simple; small grids only.
struct RelaxationResult {
  mht::Field u, chi;
  int sweeps = 0;
};

inline RelaxationResult stationary_relaxation(const mht::DiscreteOperator& op,
                                              const std::vector<mht::ScalarGraph>& graphs,
                                              double lambda, const mht::Field& f,
                                              double tol = 1e-14, int max_sweeps = 2000000) {
  const int n = op.grid.n_cells;
  mht::Field chi(op.grid), u(op.grid);
  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    double change = 0.0;
    for (int i = 0; i < n; ++i) {
      // Freeze the off-diagonal neighbours, solve the scalar inclusion
      //   u_i + lambda*Mii*chi_i = r_i exactly.
      double r = f[i] - lambda * op.offset[static_cast<size_t>(i)];
      if (i > 0) r -= lambda * op.lower[static_cast<size_t>(i) - 1] * chi[i - 1];
      if (i + 1 < n) r -= lambda * op.upper[static_cast<size_t>(i)] * chi[i + 1];
      const double d = lambda * op.diag[static_cast<size_t>(i)];
      const double next = resolvent_bisect(graphs[static_cast<size_t>(i)], 1.0 / d, r / d);
      change += std::abs(next - chi[i]);
      chi[i] = next;
      u[i] = r - d * next;
    }
    if (change * op.grid.spacing() < tol) {
      return RelaxationResult{std::move(u), std::move(chi), sweep};
    }
  }
  throw std::runtime_error("relaxation oracle did not converge");
}

}  // namespace oracles
