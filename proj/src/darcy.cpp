#include "mht/darcy.hpp"

#include <algorithm>
#include <cmath>

#include "mht/errors.hpp"

namespace mht {

void FluidParams::validate() const {
  std::vector<std::string> issues;
  if (!(mu > 0.0)) issues.push_back("viscosity must be > 0");
  if (!(kappa0 > 0.0)) issues.push_back("reference permeability must be > 0");
  if (rho_l < 0.0) issues.push_back("liquid density must be >= 0");
  if (g < 0.0) issues.push_back("gravity magnitude must be >= 0");
  if (perm_exponent < 0.0) issues.push_back("permeability exponent must be >= 0");
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

double permeability(const FluidParams& fp, double S) {
  return fp.kappa0 * std::pow(std::max(0.0, 1.0 - S), fp.perm_exponent);
}

Field hydrostatic(const Grid& grid, const FluidParams& fp, double p_datum) {
  Field p0(grid);
  for (int i = 0; i < grid.n_cells; ++i) {
    p0[i] = p_datum + fp.rho_l * fp.g * (grid.x_right - grid.center(i));
  }
  return p0;
}

std::vector<double> face_permeability(const Grid& grid, const std::vector<double>& kappa_cell) {
  const size_t n = static_cast<size_t>(grid.n_cells);
  if (kappa_cell.size() != n) {
    throw ValidationError({"permeability field does not match the grid"});
  }
  for (double k : kappa_cell) {
    if (!(k >= 0.0)) throw ValidationError({"cell permeability must be >= 0"});
  }
  std::vector<double> face(n + 1);
  face.front() = kappa_cell.front();
  face.back() = kappa_cell.back();
  for (size_t i = 1; i < n; ++i) {
    const double a = kappa_cell[i - 1], b = kappa_cell[i];
    face[i] = (a > 0.0 && b > 0.0) ? 2.0 * a * b / (a + b) : 0.0;
  }
  return face;
}

PressureSolution solve_pressure_1d(const Grid& grid, const std::vector<double>& kappa_cell,
                                   const FluidParams& fp, double p_star_left,
                                   double p_star_right, double p_datum) {
  fp.validate();
  const std::vector<double> face = face_permeability(grid, kappa_cell);
  const size_t n = static_cast<size_t>(grid.n_cells);
  const double h = grid.spacing();

  PressureSolution sol;
  sol.p0 = hydrostatic(grid, fp, p_datum);
  sol.p_star = Field(grid);
  sol.clogged = std::any_of(face.begin(), face.end(), [](double k) { return k == 0.0; });

  // Per-face flow resistances along the path left boundary -> centers ->
  // right boundary: half cells at the ends, full spacing between centers.
  std::vector<double> resist(n + 1, 0.0);
  if (!sol.clogged) {
    resist.front() = fp.mu * 0.5 * h / face.front();
    resist.back() = fp.mu * 0.5 * h / face.back();
    for (size_t i = 1; i < n; ++i) resist[i] = fp.mu * h / face[i];
    double total = 0.0;
    for (double r : resist) total += r;
    sol.q = (p_star_left - p_star_right) / total;
    double p = p_star_left;
    for (size_t i = 0; i < n; ++i) {
      p -= sol.q * resist[i];
      sol.p_star[static_cast<int>(i)] = p;
    }
    return sol;
  }

  // No flow: constant pressure per connected component; components touching
  // a boundary take its trace, isolated ones sit at the average.
  sol.q = 0.0;
  size_t first = 0;
  while (first <= n && face[first] != 0.0) ++first;
  size_t last = n;
  while (last > 0 && face[last] != 0.0) --last;
  for (size_t i = 0; i < n; ++i) {
    if (i < first) {
      sol.p_star[static_cast<int>(i)] = p_star_left;
    } else if (i >= last) {
      sol.p_star[static_cast<int>(i)] = p_star_right;
    } else {
      sol.p_star[static_cast<int>(i)] = 0.5 * (p_star_left + p_star_right);
    }
  }
  return sol;
}

PressureSolution solve_pressure_total(const Grid& grid, const std::vector<double>& kappa_cell,
                                      const FluidParams& fp, double p_left, double p_right,
                                      double p_datum) {
  const double p0_left = p_datum + fp.rho_l * fp.g * grid.length();
  const double p0_right = p_datum;
  return solve_pressure_1d(grid, kappa_cell, fp, p_left - p0_left, p_right - p0_right, p_datum);
}

PressureSolution solve_pressure_from_saturation(const Grid& grid, const FluidParams& fp,
                                                const Field& S, double p_star_left,
                                                double p_star_right, double p_datum) {
  if (S.grid != grid) throw ValidationError({"saturation field does not match the grid"});
  std::vector<double> kappa(static_cast<size_t>(grid.n_cells));
  for (int i = 0; i < grid.n_cells; ++i) kappa[static_cast<size_t>(i)] = permeability(fp, S[i]);
  return solve_pressure_1d(grid, kappa, fp, p_star_left, p_star_right, p_datum);
}

}  // namespace mht
