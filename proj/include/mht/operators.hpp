#pragma once

#include <optional>
#include <vector>

#include "mht/field.hpp"

namespace mht {

// Coefficients of the 1-D transport operator A(v) = -(D v')' + (q v)' + a v
// with Dirichlet data for v on the sides that need it.
struct OperatorCoefficients {
  double diffusion = 0.0;        // D >= 0
  std::vector<double> velocity;  // size 1 (constant q) or n_cells+1 (per face)
  std::vector<double> reaction;  // size 0 (zero), 1 (constant) or n_cells
  std::optional<double> dirichlet_left;
  std::optional<double> dirichlet_right;
};

// Assembled finite-volume operator: tridiagonal matrix part M plus the affine
// offset carrying the Dirichlet data, so that A(v) = M v + offset. Fluxes are
// two-point for diffusion and first-order upwind for advection; the resulting
// M is an M-matrix (diag > 0, off-diagonals <= 0, row and column sums >= 0).
struct DiscreteOperator {
  Grid grid;
  std::vector<double> lower, diag, upper;  // bands of M (sizes n-1, n, n-1)
  std::vector<double> offset;              // boundary contribution
  std::vector<double> face_velocity;       // n+1 face values of q
  std::vector<double> reaction;            // n cell values of a
  double diffusion = 0.0;
  std::optional<double> dirichlet_left, dirichlet_right;

  Field apply(const Field& v) const;  // M v + offset
  // Total (advective + diffusive) flux through the boundary faces, using the
  // same upwind/two-point formulas as the assembly; positive means rightward.
  double flux_left(const Field& v) const;
  double flux_right(const Field& v) const;
  double row_sum(int i) const;
  double column_sum(int j) const;
};

// Throws on invariant violations: D < 0, a < 0, 2a + div q < 0 cellwise,
// missing Dirichlet data on a side the stencil needs, or a degenerate row.
DiscreteOperator assemble_operator(const Grid& g, const OperatorCoefficients& c);

// v solving v + lambda * A(v) = f, lambda >= 0 (Thomas on I + lambda*M).
Field resolvent_apply(const DiscreteOperator& op, double lambda, const Field& f);

}  // namespace mht
