#pragma once

#include <vector>

#include "mht/field.hpp"

namespace mht {

// Fluid and permeability parameters of the column.
struct FluidParams {
  double mu = 1.0;           // viscosity
  double rho_l = 0.0;        // liquid density
  double g = 0.0;            // gravity magnitude
  double kappa0 = 1.0;       // reference permeability
  double perm_exponent = 3.0;  // m >= 0; m = 0 freezes kappa at kappa0

  // mu > 0, kappa0 > 0, rho_l >= 0, g >= 0, perm_exponent >= 0.
  void validate() const;

  bool operator==(const FluidParams&) const = default;
};

// kappa0 * max(0, 1 - S)^m: permeability loss as hydrate fills the pores.
double permeability(const FluidParams& fp, double S);

// Hydrostatic profile with datum at the top of the column (x_right):
// p0(x) = p_datum + rho_l * g * (x_right - x), flux-free by construction.
Field hydrostatic(const Grid& grid, const FluidParams& fp, double p_datum);

// Solution of the quasi-static column: total pressure is p0 + p_star, and
// the flux is constant in x (discrete div q = 0 exactly).
struct PressureSolution {
  double q = 0.0;
  Field p_star;          // excess pressure at cell centers
  Field p0;              // hydrostatic part at cell centers
  bool clogged = false;  // some face permeability vanished -> q = 0
};

// Face permeabilities from cell values: harmonic mean across interior faces;
// boundary faces take the adjacent cell value (the half-cell leg).
std::vector<double> face_permeability(const Grid& grid, const std::vector<double>& kappa_cell);

// Solves div q = 0, mu * q = -kappa * d(p_star)/dx with excess-pressure
// Dirichlet data: q is the end-to-end drop over the summed face resistances,
// and p_star is integrated face by face from the left boundary (exact for
// the two-point flux, so q is reproduced across every face). A vanished face
// permeability clogs the column: q = 0 and p_star is constant on each
// component, boundary components inheriting their trace.
PressureSolution solve_pressure_1d(const Grid& grid, const std::vector<double>& kappa_cell,
                                   const FluidParams& fp, double p_star_left,
                                   double p_star_right, double p_datum = 0.0);

// Same column driven by total-pressure data: subtracts the hydrostatic
// endpoint values and solves for the excess. Same q as the excess solve with
// the matching traces.
PressureSolution solve_pressure_total(const Grid& grid, const std::vector<double>& kappa_cell,
                                      const FluidParams& fp, double p_left, double p_right,
                                      double p_datum = 0.0);

// Pressure solve from the saturation profile: kappa_i = permeability(S_i).
PressureSolution solve_pressure_from_saturation(const Grid& grid, const FluidParams& fp,
                                                const Field& S, double p_star_left,
                                                double p_star_right, double p_datum = 0.0);

}  // namespace mht
