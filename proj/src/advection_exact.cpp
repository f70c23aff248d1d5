#include "mht/advection_exact.hpp"

#include <algorithm>
#include <cmath>

#include "mht/errors.hpp"

namespace mht {

void AdvectionScenario::validate() const {
  std::vector<std::string> issues;
  if (!(q > 0.0)) issues.push_back("flux must be > 0");
  if (!(L >= 0.0)) issues.push_back("pulse length must be >= 0");
  if (!(D_max > 0.0)) issues.push_back("domain top must be > 0");
  if (chi_L < 0.0) issues.push_back("inflow fraction must be >= 0");
  if (!issues.empty()) throw ValidationError(std::move(issues));

  if (!(law.phi.is_constant() && law.phi.intercept == 1.0)) {
    throw HypothesisError("closed-form solution needs porosity identically 1");
  }
  if (law.chi_star.is_table() || !(law.chi_star.slope < 0.0)) {
    throw HypothesisError("closed-form solution needs affine strictly decreasing chi_star");
  }
  const double top = law.chi_star(0.0);
  const double bottom = law.chi_star(D_max);
  if (!(chi_L < top && chi_L >= bottom)) {
    throw HypothesisError(
        "inflow fraction must lie in [chi_star(D_max), chi_star(0)) for the free boundary "
        "to sit inside the column");
  }
  if (!(top < law.ceiling)) {
    throw HypothesisError("chi_star must stay below the ceiling on the column");
  }
}

double free_boundary(const AdvectionScenario& sc) {
  sc.validate();
  return (sc.chi_L - sc.law.chi_star.intercept) / sc.law.chi_star.slope;
}

Zone classify(const AdvectionScenario& sc, double x, double t) {
  if (x > sc.q * t) return Zone::ahead;
  return x >= free_boundary(sc) ? Zone::hydrate : Zone::water;
}

double validity_end(const AdvectionScenario& sc, double x) { return (x + sc.L) / sc.q; }

namespace {

void check_window(const AdvectionScenario& sc, double x, double t) {
  if (!(t < validity_end(sc, x))) {
    throw OutsideValidity("the pulse tail has passed x: t >= (x + L)/q");
  }
}

}  // namespace

double exact_chi(const AdvectionScenario& sc, double x, double t) {
  sc.validate();
  check_window(sc, x, t);
  if (x > sc.q * t) return 0.0;
  return std::min(sc.chi_L, sc.law.chi_star(x));
}

double exact_saturation(const AdvectionScenario& sc, double x, double t) {
  sc.validate();
  check_window(sc, x, t);
  if (x < free_boundary(sc)) return 0.0;
  const double since_breakthrough = std::max(t - x / sc.q, 0.0);
  return since_breakthrough * sc.q * (-sc.law.chi_star.slope) /
         (sc.law.ceiling - sc.law.chi_star(x));
}

double exact_content(const AdvectionScenario& sc, double x, double t) {
  const double S = exact_saturation(sc, x, t);
  return (1.0 - S) * exact_chi(sc, x, t) + sc.law.ceiling * S;
}

double blowup_time(const AdvectionScenario& sc, double x) {
  sc.validate();
  if (x < free_boundary(sc)) {
    throw HypothesisError("saturation never reaches 1 below the free boundary");
  }
  return x / sc.q + (sc.law.ceiling - sc.law.chi_star(x)) / (sc.q * (-sc.law.chi_star.slope));
}

SafePulse safe_pulse(const AdvectionScenario& sc) {
  sc.validate();
  // The expression decreases in x (the denominator grows), so the maximum
  // over the hydrate zone sits at the free boundary; evaluating both ends
  // keeps this robust anyway.
  const double x_L = free_boundary(sc);
  auto at = [&sc](double x) {
    return sc.L * (-sc.law.chi_star.slope) / (sc.law.ceiling - sc.law.chi_star(x));
  };
  SafePulse out;
  out.margin = std::max(at(x_L), at(sc.D_max));
  out.safe = out.margin < 1.0;
  return out;
}

}  // namespace mht
