#pragma once

#include <optional>
#include <string>

#include "mht/darcy.hpp"
#include "mht/evolution.hpp"
#include "mht/field.hpp"
#include "mht/operators.hpp"
#include "mht/phase_law.hpp"
#include "mht/stationary.hpp"

namespace mht {

// Spatial data block of a scenario: initial content or source density.
// type: "zero" | "constant" | "pulse" | "table". A pulse is chi_L on the
// interval (-L, 0) and zero elsewhere, averaged exactly over each cell;
// tables are sampled at cell centers.
struct DataSpec {
  std::string type = "zero";
  double value = 0.0;               // constant
  double chi_L = 0.0, L = 0.0;      // pulse
  std::vector<double> xs, ys;       // table

  Field realize(const Grid& g) const;
  bool operator==(const DataSpec&) const = default;
};

// Endpoint pressures of a pressure-driven run (excess pressure traces) plus
// the fluid/permeability parameters.
struct PressureBlock {
  double p_left = 0.0;
  double p_right = 0.0;
  FluidParams fluid;

  bool operator==(const PressureBlock&) const = default;
};

// One simulation definition, loaded from a JSON file. See the README for the
// full schema and a byte-exact example.
struct Scenario {
  std::string name;

  double x_left = 0.0, x_right = 1.0;
  int n_cells = 100;

  double t_end = 1.0;
  int steps = 100;

  PhaseLaw law;

  double diffusion = 0.0;
  std::string velocity_mode = "fixed";  // "fixed" | "pressure_driven"
  double velocity = 0.0;                // fixed mode only
  std::optional<PressureBlock> pressure;

  DataSpec initial;
  DataSpec source;

  std::optional<double> chi_left, chi_right;

  StationaryParams solver;
  int output_stride = 1;

  Grid grid() const { return Grid::uniform(x_left, x_right, n_cells); }
  TimeGrid time_grid() const { return TimeGrid::uniform(0.0, t_end, steps); }
  Field initial_field() const { return initial.realize(grid()); }
  Field source_field() const { return source.realize(grid()); }
  SourceFn source_fn() const;

  // Coefficients of the transport operator for flux value q (the fixed value
  // or a pressure solve's output), with the boundary data the stencil needs.
  OperatorCoefficients coefficients(double q) const;

  // Initial flux: the fixed value, or the pressure solve on the initial
  // saturation profile.
  double initial_flux() const;

  // Aggregated cross-field validation; throws ValidationError listing every
  // violated rule.
  void validate() const;

  // FNV-1a hash of the canonical serialization, hex string.
  std::string digest() const;

  bool operator==(const Scenario&) const = default;
};

// Parses and validates. ParseError on I/O or syntax, ValidationError on
// semantic violations (aggregated).
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& json_text);
std::string dump_scenario(const Scenario& sc);  // canonical form, round-trips

// CLI overrides: grid size, step size (steps = ceil(t_end/dt)), horizon.
void apply_overrides(Scenario& sc, std::optional<int> nx, std::optional<double> dt,
                     std::optional<double> t_end);

}  // namespace mht
