#pragma once

#include <vector>

#include "mht/field.hpp"

namespace mht {

// Scalar function of position: constant, affine, or a piecewise-linear table
// (linear interpolation between strictly increasing breakpoints, clamped to
// the end values outside the table; validation keeps in-domain use covered).
struct SpatialFn {
  double intercept = 0.0;
  double slope = 0.0;
  std::vector<double> xs;  // empty => affine form above
  std::vector<double> ys;

  static SpatialFn constant(double c) { return SpatialFn{c, 0.0, {}, {}}; }
  static SpatialFn affine(double intercept, double slope) {
    return SpatialFn{intercept, slope, {}, {}};
  }
  static SpatialFn table(std::vector<double> xs, std::vector<double> ys);

  bool is_table() const { return !xs.empty(); }
  bool is_constant() const { return !is_table() && slope == 0.0; }
  double operator()(double x) const;
  // Table spans [a, b]; affine always covers.
  bool covers(double a, double b) const;
  bool non_increasing() const;
  // Exact extrema over [a, b] (piecewise-linear => attained at breakpoints).
  double min_on(double a, double b) const;
  double max_on(double a, double b) const;

  bool operator==(const SpatialFn&) const = default;
};

// Value of a monotone graph at a point: an interval, a singleton except on
// the vertical segment.
struct GraphValue {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double u, double tol = 0.0) const { return u >= lo - tol && u <= hi + tol; }
};

// One-dimensional maximal monotone graph u(chi): affine branch of slope
// slope_lo below the kink, vertical segment [u_lo, u_hi] at the kink, affine
// extension of slope slope_hi above. Both slopes strictly positive.
struct ScalarGraph {
  double kink = 0.0;
  double u_lo = 0.0;
  double u_hi = 0.0;
  double slope_lo = 1.0;
  double slope_hi = 1.0;

  GraphValue eval(double chi) const;
  // Single-valued nondecreasing inverse: chi as a function of u.
  double inverse(double u) const;
  // Generalized derivative of inverse(), taking the left branch at kinks.
  double inverse_slope_left(double u) const;
  // Unique v with v + lambda*b = r, b in graph(v). Nonexpansive in r.
  double resolvent(double lambda, double r) const;
  // Regularized selection (r - resolvent(lambda, r)) / lambda, evaluated in a
  // cancellation-free branch form; Lipschitz with constant 1/lambda.
  double yosida(double lambda, double r) const;
  // Derivative of yosida(lambda, .) at r, left branch at kinks.
  double yosida_slope_left(double lambda, double r) const;
  // Euclidean distance of the point (chi, u) to the graph; 0 iff u in eval(chi).
  double defect(double chi, double u) const;
};

// Position-dependent phase graph: for each x, the dissolved fraction chi maps
// to the admissible total content u. Below the solubility threshold
// chi_star(x) the content is phi(x)*chi (all dissolved); at chi = chi_star(x)
// the hydrate fraction sweeps the vertical segment up to phi(x)*ceiling; past
// the ceiling an affine extension keeps the graph onto (used only to continue
// through over-saturation events).
struct PhaseLaw {
  SpatialFn chi_star;
  double ceiling = 0.1;  // R: total content at full hydrate saturation
  SpatialFn phi = SpatialFn::constant(1.0);
  double extension_slope = 1.0;

  ScalarGraph graph_at(double x) const;
  GraphValue graph_eval(double x, double chi) const;
  double graph_inverse(double x, double u) const;
  // S = (u/phi - chi_star)^+ / (ceiling - chi_star); 0 iff u <= phi*chi_star.
  double saturation_from_u(double x, double u) const;
  double graph_resolvent(double x, double lambda, double r) const;
  double yosida_apply(double x, double lambda, double r) const;
  // sup{|u| : u in graph_eval(x, chi), |chi| <= c}; finite for every c.
  double level_bound(double x, double c) const;
  // Throws ValidationError: needs 0 < chi_star < ceiling and phi > 0 on the
  // grid (checked at centers, faces and table breakpoints), slopes > 0.
  void validate_on(const Grid& g) const;

  bool operator==(const PhaseLaw&) const = default;
};

// Per-cell graphs at the cell centers; the solvers work on this row so that
// shifted problems (boundary translation) reuse the same code path.
std::vector<ScalarGraph> cell_graphs(const PhaseLaw& law, const Grid& g);

// Derivative of the regularized one-sided constraint r >= 0: min(r, 0)/lambda.
double positive_indicator_yosida(double lambda, double r);

}  // namespace mht
