#pragma once

#include "mht/phase_law.hpp"

namespace mht {

// Columns fed by a finite pulse at constant flux: chi = chi_L on the inflow
// side for a duration L/q, transported rightward through a solubility
// profile that decreases in x. Closed-form reference solution used to verify
// the discrete transport solver.
struct AdvectionScenario {
  double chi_L = 0.02;  // inflow mass fraction
  double L = 0.5;       // pulse length
  double q = 1.0;       // constant flux, > 0
  PhaseLaw law;         // affine, strictly decreasing chi_star; phi == 1
  double D_max = 1.0;   // domain top; the column is (0, D_max)

  // Closed-form hypotheses: q > 0, L >= 0, D_max > 0, phi identically 1,
  // chi_star affine strictly decreasing with chi_star(D_max) <= chi_L <
  // chi_star(0), chi_L >= 0, chi_star < ceiling on the column. Throws
  // HypothesisError (shape violations) / ValidationError (parameter signs).
  void validate() const;
};

// Zones at time t: water carries chi_L with no hydrate below the solubility
// threshold, hydrate precipitates past the free boundary, and nothing has
// arrived ahead of the front.
enum class Zone { water, hydrate, ahead };

// Unique x_L with chi_star(x_L) = chi_L (the last point where the inflow
// fraction is still soluble); in [0, D_max] under the scenario hypotheses.
double free_boundary(const AdvectionScenario& sc);

// Zone of (x, t); the free boundary itself counts as hydrate, the front
// x = q*t as arrived.
Zone classify(const AdvectionScenario& sc, double x, double t);

// End of the validity window at x: the formulas below hold for t < (x+L)/q,
// while the pulse still supplies the front. Queries at or past the tail
// throw OutsideValidity.
double validity_end(const AdvectionScenario& sc, double x);

// Dissolved fraction min(chi_L, chi_star(x)) behind the front, 0 ahead.
double exact_chi(const AdvectionScenario& sc, double x, double t);

// Hydrate saturation: 0 outside the hydrate zone, linear growth
//   (t - x/q)^+ * q * (-chi_star') / (ceiling - chi_star(x))
// after breakthrough; exceeds 1 once the pore space overfills.
double exact_saturation(const AdvectionScenario& sc, double x, double t);

// Total content (1 - S) * chi + ceiling * S; equals chi where no hydrate.
double exact_content(const AdvectionScenario& sc, double x, double t);

// Time at which exact_saturation reaches 1 at x (x >= free boundary):
//   x/q + (ceiling - chi_star(x)) / (q * (-chi_star')).
double blowup_time(const AdvectionScenario& sc, double x);

// Largest saturation the pulse can build: max over the hydrate zone of
//   L * (-chi_star') / (ceiling - chi_star(x)),
// attained at the free boundary. safe means the column never clogs.
struct SafePulse {
  double margin = 0.0;
  bool safe = true;
};
SafePulse safe_pulse(const AdvectionScenario& sc);

}  // namespace mht
