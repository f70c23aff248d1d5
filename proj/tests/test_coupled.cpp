#include <doctest.h>

#include <cmath>
#include <string>

#include "mht/coupled.hpp"
#include "mht/errors.hpp"
#include "mht/scenario.hpp"

using namespace mht;

namespace {

Scenario bundled(const std::string& name) {
  return load_scenario(std::string(MHT_SCENARIO_DIR) + "/" + name + ".json");
}

// Trimmed copy of the coupled column so unit runs stay fast.
Scenario small_coupled() {
  Scenario sc = bundled("scenario_C");
  sc.n_cells = 50;
  sc.t_end = 1.0;
  sc.steps = 100;
  sc.validate();
  return sc;
}

}  // namespace

TEST_SUITE("coupled") {

TEST_CASE("clean column starts at the analytic flux") {
  const Scenario sc = bundled("scenario_C");
  // kappa = kappa0 = 1 at zero saturation, so the total resistance is the
  // column length and q = (p_left - p_right) / 1.
  CHECK(sc.initial_flux() == doctest::Approx(1.5).epsilon(1e-13));

  const Grid g = sc.grid();
  const FlowState fs = coupled_flow(sc, g, Field(g));
  CHECK(fs.q == doctest::Approx(1.5).epsilon(1e-13));
  CHECK_FALSE(fs.clogged);
}

TEST_CASE("coupled run carries consistent flow columns") {
  const Scenario sc = small_coupled();
  const Trajectory tr = run_coupled(sc, sc.solver);

  REQUIRE(tr.times.size() == 101);
  REQUIRE(tr.q.size() == tr.times.size());
  REQUIRE(tr.p_star.size() == tr.times.size());
  CHECK_FALSE(tr.halted);
  CHECK_FALSE(tr.clogged);

  const Grid g = sc.grid();
  for (size_t k = 0; k < tr.times.size(); ++k) {
    // Knot consistency: the recorded flow is the pressure solve of the
    // recorded content, bit for bit.
    const FlowState fs = coupled_flow(sc, g, tr.u[k]);
    CHECK(tr.q[k] == fs.q);
    CHECK(linf_distance(tr.p_star[k], fs.p_star) == 0.0);
  }

  // Hydrate accumulates and throttles the flow.
  CHECK(tr.max_S.back() > 0.0);
  for (size_t k = 1; k < tr.times.size(); ++k) {
    if (tr.max_S[k] > tr.max_S[k - 1] + 1e-12) {
      CHECK(std::abs(tr.q[k]) <= std::abs(tr.q[k - 1]) + 1e-12);
    }
  }
}

TEST_CASE("frozen permeability reduces to the fixed-velocity run") {
  Scenario sc = small_coupled();
  sc.pressure->fluid.perm_exponent = 0.0;  // kappa stays at kappa0 regardless of S
  sc.validate();

  const Trajectory coupled = run_coupled(sc, sc.solver);

  const Grid g = sc.grid();
  const double q0 = sc.initial_flux();
  const DiscreteOperator op = assemble_operator(g, sc.coefficients(q0));
  const Trajectory fixed =
      evolve(op, sc.law, sc.initial_field(), sc.source_fn(), sc.time_grid(), sc.solver);

  REQUIRE(coupled.times.size() == fixed.times.size());
  for (size_t k = 0; k < coupled.times.size(); ++k) {
    CHECK(linf_distance(coupled.u[k], fixed.u[k]) == 0.0);
    CHECK(coupled.q[k] == q0);
  }
}

TEST_CASE("full saturation with no diffusion halts the run") {
  const char* text = R"({
    "name": "clog",
    "domain": {"x_left": 0.0, "x_right": 1.0, "n_cells": 10},
    "time": {"t_end": 1.0, "steps": 10},
    "phase_law": {
      "chi_star": {"type": "affine", "intercept": 0.04, "slope": -0.03},
      "ceiling": 0.1
    },
    "operator": {"diffusion": 0.0, "velocity": {"mode": "pressure_driven"}},
    "pressure": {"p_left": 1.0, "p_right": 0.0, "mu": 1.0, "kappa0": 1.0, "m": 3.0},
    "initial": {"type": "constant", "value": 0.1},
    "source": {"type": "zero"},
    "boundary": {"chi_left": 0.02},
    "solver": {"tol": 1e-10, "max_iters": 100, "method": "newton"},
    "output": {"stride": 1}
  })";
  const Scenario sc = parse_scenario(text);
  const Trajectory tr = run_coupled(sc, sc.solver);

  CHECK(tr.clogged);
  CHECK(tr.halted);
  CHECK(tr.times.size() == 1);  // only the initial record exists
  REQUIRE(tr.q.size() == 1);
  CHECK(tr.q[0] == 0.0);
  CHECK(tr.p_star.size() == 1);
}

TEST_CASE("a clogged column with diffusion keeps going") {
  const char* text = R"({
    "name": "clog_diffusive",
    "domain": {"x_left": 0.0, "x_right": 0.25, "n_cells": 10},
    "time": {"t_end": 1.0, "steps": 25},
    "phase_law": {
      "chi_star": {"type": "affine", "intercept": 0.04, "slope": -0.03},
      "ceiling": 0.1
    },
    "operator": {"diffusion": 0.2, "velocity": {"mode": "pressure_driven"}},
    "pressure": {"p_left": 1.0, "p_right": 0.0, "mu": 1.0, "kappa0": 1.0, "m": 3.0},
    "initial": {"type": "constant", "value": 0.1},
    "source": {"type": "zero"},
    "boundary": {"chi_left": 0.0, "chi_right": 0.0},
    "solver": {"tol": 1e-10, "max_iters": 100, "method": "newton"},
    "output": {"stride": 1}
  })";
  const Scenario sc = parse_scenario(text);
  const Trajectory tr = run_coupled(sc, sc.solver);

  CHECK(tr.clogged);        // it was fully saturated at the start
  CHECK_FALSE(tr.halted);   // but diffusion kept the run alive
  CHECK(tr.times.size() == 26);
  REQUIRE(tr.q.size() == 26);
  CHECK(tr.q[0] == 0.0);
  // Draining through the boundaries reopens the pores eventually.
  CHECK(tr.max_S.back() < 1.0);
  CHECK(tr.q.back() > 0.0);
}

TEST_CASE("coupled driver rejects fixed-velocity scenarios") {
  const Scenario sc = bundled("scenario_A");
  CHECK_THROWS_AS(run_coupled(sc, sc.solver), ValidationError);
}

}  // TEST_SUITE
