#include <doctest.h>

#include <cmath>
#include <random>

#include "mht/errors.hpp"
#include "mht/evolution.hpp"
#include "mht/field.hpp"
#include "mht/operators.hpp"
#include "mht/phase_law.hpp"

using namespace mht;

namespace {

PhaseLaw flat_law() {
  PhaseLaw law;
  law.chi_star = SpatialFn::constant(0.04);
  law.ceiling = 0.1;
  return law;
}

PhaseLaw sloped_law() {
  PhaseLaw law;
  law.chi_star = SpatialFn::affine(0.04, -0.03);
  law.ceiling = 0.1;
  return law;
}

SourceFn no_source(const Grid& g) {
  return [g](double) { return Field(g); };
}

DiscreteOperator mixed_operator(const Grid& g, double trace) {
  OperatorCoefficients c;
  c.diffusion = 0.02;
  c.velocity = {0.4};
  c.dirichlet_left = trace;
  c.dirichlet_right = trace;
  return assemble_operator(g, c);
}

}  // namespace

TEST_SUITE("evolution") {

TEST_CASE("time grid hits the endpoint exactly") {
  const TimeGrid tg = TimeGrid::uniform(0.0, 1.2, 240);
  CHECK(tg.steps() == 240);
  CHECK(tg.knots.front() == 0.0);
  CHECK(tg.knots.back() == 1.2);
  CHECK(tg.dt(1) == doctest::Approx(0.005).epsilon(1e-12));
  CHECK(tg.eps_bound >= tg.dt(240));
  CHECK_NOTHROW(tg.validate());

  CHECK_THROWS_AS(TimeGrid::uniform(0.0, 1.0, 0), ValidationError);
  CHECK_THROWS_AS(TimeGrid::uniform(1.0, 1.0, 4), ValidationError);
  CHECK_THROWS_AS(TimeGrid::from_knots({0.0, 0.5, 0.5}, 0.5).validate(), ValidationError);
}

TEST_CASE("zero data and zero source stay identically zero") {
  const Grid g = Grid::uniform(0.0, 1.0, 10);
  const DiscreteOperator op = mixed_operator(g, 0.0);
  const Trajectory tr = evolve(op, flat_law(), Field(g), no_source(g),
                               TimeGrid::uniform(0.0, 1.0, 20), StationaryParams{});
  REQUIRE(tr.knots() == 21);
  for (int k = 0; k < tr.knots(); ++k) {
    CHECK(l1_norm(tr.u[static_cast<size_t>(k)]) <= 1e-12);
    CHECK(tr.max_S[static_cast<size_t>(k)] == 0.0);
  }
  CHECK_FALSE(tr.blowup_knot_time.has_value());
  CHECK(tr.mass_defect <= 21 * 1e-10);
}

TEST_CASE("backward step satisfies its defining equation") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> d(0.0, 0.08);
  const Grid g = Grid::uniform(0.0, 1.0, 12);
  const PhaseLaw law = sloped_law();
  const DiscreteOperator op = mixed_operator(g, 0.01);
  const std::vector<ScalarGraph> graphs = cell_graphs(law, g);
  StationaryParams params;

  Field u_prev(g), F(g);
  for (int i = 0; i < g.n_cells; ++i) {
    u_prev[i] = d(rng);
    F[i] = 0.1 * d(rng);
  }
  const double dt = 0.02;
  const StationaryResult r = backward_step(op, graphs, u_prev, dt, F, params);

  // u_new - u_prev + dt*(A(chi_new) - F) = 0 in discrete L1.
  const Field lhs = axpy(sub(r.u, u_prev), dt, sub(op.apply(r.chi), F));
  CHECK(l1_norm(lhs) <= params.tol * 1.01);
}

TEST_CASE("maximum estimates hold knot by knot") {
  const Grid g = Grid::uniform(0.0, 1.0, 20);
  const PhaseLaw law = flat_law();
  StationaryParams params;

  SUBCASE("data below the solubility threshold stays below it") {
    const DiscreteOperator op = mixed_operator(g, 0.03);
    Field u0(g);
    for (int i = 0; i < g.n_cells; ++i) u0[i] = 0.03 * g.center(i);
    const Trajectory tr =
        evolve(op, law, u0, no_source(g), TimeGrid::uniform(0.0, 1.0, 40), params);
    for (int k = 0; k < tr.knots(); ++k) {
      CHECK(min_value(tr.u[static_cast<size_t>(k)]) >= -1e-9);
      CHECK(max_value(tr.u[static_cast<size_t>(k)]) <= 0.03 + 1e-9);
      CHECK(tr.max_S[static_cast<size_t>(k)] <= 1e-9);
    }
  }

  SUBCASE("vertical-segment selection caps the content") {
    // Boundary fraction at the threshold; any content level within the
    // segment is invariant from below.
    const DiscreteOperator op = mixed_operator(g, 0.04);
    Field u0(g, 0.07);
    const Trajectory tr =
        evolve(op, law, u0, no_source(g), TimeGrid::uniform(0.0, 1.0, 40), params);
    for (int k = 0; k < tr.knots(); ++k) {
      CHECK(max_value(tr.u[static_cast<size_t>(k)]) <= 0.07 + 1e-9);
      CHECK(min_value(tr.u[static_cast<size_t>(k)]) >= -1e-9);
      CHECK(max_value(tr.chi[static_cast<size_t>(k)]) <= 0.04 + 1e-9);
    }
  }
}

TEST_CASE("ordered data evolve in order") {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> d(0.0, 0.06);
  const Grid g = Grid::uniform(0.0, 1.0, 15);
  const PhaseLaw law = sloped_law();
  const DiscreteOperator op = mixed_operator(g, 0.01);
  StationaryParams params;
  const TimeGrid tg = TimeGrid::uniform(0.0, 0.5, 25);

  Field u_lo(g), gap(g);
  for (int i = 0; i < g.n_cells; ++i) {
    u_lo[i] = d(rng);
    gap[i] = 0.3 * d(rng);
  }
  const Field u_hi = add(u_lo, gap);

  const Trajectory lo = evolve(op, law, u_lo, no_source(g), tg, params);
  const Trajectory hi = evolve(op, law, u_hi, no_source(g), tg, params);
  for (int k = 0; k < lo.knots(); ++k) {
    CHECK(l1_positive_distance(lo.u[static_cast<size_t>(k)], hi.u[static_cast<size_t>(k)]) <=
          k * params.tol + 1e-12);
  }
}

TEST_CASE("mass ledger closes step by step") {
  const Grid g = Grid::uniform(-0.5, 1.0, 30);
  const PhaseLaw law = sloped_law();
  OperatorCoefficients c;
  c.velocity = {1.0};
  c.reaction = {0.1};
  c.dirichlet_left = 0.015;
  const DiscreteOperator op = assemble_operator(g, c);
  StationaryParams params;
  const int N = 40;
  const TimeGrid tg = TimeGrid::uniform(0.0, 0.8, N);

  Field u0(g);
  for (int i = 0; i < g.n_cells; ++i) u0[i] = g.center(i) < 0.0 ? 0.02 : 0.0;

  Field c_src(g);
  for (int i = 0; i < g.n_cells; ++i) c_src[i] = 0.001 * (1.0 + g.center(i));
  const SourceFn src = [c_src](double t) { return scaled(c_src, t); };

  const Trajectory tr = evolve(op, law, u0, src, tg, params);
  REQUIRE(static_cast<int>(tr.step_mass_defect.size()) == N);
  for (double dft : tr.step_mass_defect) CHECK(std::abs(dft) <= params.tol);
  CHECK(tr.mass_defect <= N * params.tol);

  // Recompute one ledger line from the recorded fields.
  const int j = 17;
  const double dt = tg.dt(j);
  const double h = g.spacing();
  const Field& uj = tr.u[static_cast<size_t>(j)];
  const Field& cj = tr.chi[static_cast<size_t>(j)];
  double reac = 0.0, sourced = 0.0;
  const Field Fj = src(tg.knots[static_cast<size_t>(j)]);
  for (int i = 0; i < g.n_cells; ++i) {
    reac += h * op.reaction[static_cast<size_t>(i)] * cj[i];
    sourced += h * Fj[i];
  }
  const double dmass =
      total_mass(uj) - total_mass(tr.u[static_cast<size_t>(j) - 1]);
  const double defect =
      dmass + dt * (op.flux_right(cj) - op.flux_left(cj) + reac - sourced);
  CHECK(std::abs(defect - tr.step_mass_defect[static_cast<size_t>(j) - 1]) <= 1e-15);

  // Right-endpoint quadrature of a linear-in-time source has a closed-form
  // defect estimate: T*dt*|c|_1/4.
  const double expect = 0.25 * 0.8 * (0.8 / N) * l1_norm(c_src);
  CHECK(tr.quadrature_defect == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("saturation crossing is flagged and the run continues") {
  // Constant inflow at the solubility value of the left end keeps feeding
  // hydrate past the free boundary; the column eventually overfills.
  const Grid g = Grid::uniform(0.0, 1.0, 50);
  const PhaseLaw law = sloped_law();
  OperatorCoefficients c;
  c.velocity = {1.0};
  c.dirichlet_left = 0.02;
  const DiscreteOperator op = assemble_operator(g, c);
  StationaryParams params;
  const Trajectory tr =
      evolve(op, law, Field(g), no_source(g), TimeGrid::uniform(0.0, 4.0, 200), params);

  REQUIRE(tr.blowup_knot_time.has_value());
  REQUIRE(tr.blowup_interp_time.has_value());
  CHECK(*tr.blowup_interp_time <= *tr.blowup_knot_time);
  CHECK(*tr.blowup_interp_time >= 2.9);
  CHECK(*tr.blowup_knot_time <= 3.8);
  // No clamping: saturation keeps growing on the extension branch.
  CHECK(tr.max_S.back() > 1.0);
  // Complementarity of the recorded states: hydrate only at the threshold.
  for (double r : tr.compl_residual) CHECK(r <= 1e-8);
}

TEST_CASE("a failed step raises EvolutionFailure with the partial path") {
  const Grid g = Grid::uniform(0.0, 1.0, 6);
  const DiscreteOperator op = mixed_operator(g, 0.01);
  StationaryParams params;
  params.tol = 1e-300;
  params.max_iters = 1;
  params.max_continuation_levels = 1;
  try {
    evolve(op, flat_law(), Field(g, 0.05), no_source(g), TimeGrid::uniform(0.0, 1.0, 10),
           params);
    FAIL("expected EvolutionFailure");
  } catch (const EvolutionFailure& e) {
    CHECK(e.partial.knots() == 1);  // only the initial record
    CHECK(e.residual > 0.0);
  }
}

TEST_CASE("rejects non-finite initial data") {
  const Grid g = Grid::uniform(0.0, 1.0, 4);
  const DiscreteOperator op = mixed_operator(g, 0.0);
  Field u0(g);
  u0[2] = std::nan("");
  CHECK_THROWS_AS(evolve(op, flat_law(), u0, no_source(g), TimeGrid::uniform(0.0, 1.0, 2),
                         StationaryParams{}),
                  ValidationError);
}

TEST_CASE("first order in the step size on a smooth run") {
  // Reaction-only decay below the threshold: u' = -u cellwise, so the
  // backward scheme gives u0*(1+dt)^-N against the exact u0*e^-T.
  const Grid g = Grid::uniform(0.0, 1.0, 2);
  OperatorCoefficients c;
  c.velocity = {0.0};
  c.reaction = {1.0};
  const DiscreteOperator op = assemble_operator(g, c);
  const PhaseLaw law = flat_law();
  StationaryParams params;
  params.tol = 1e-13;

  const double u_init = 0.02, T = 1.0;
  const double exact = u_init * std::exp(-T);
  std::vector<double> errs;
  for (int N : {10, 20, 40}) {
    const Trajectory tr =
        evolve(op, law, Field(g, u_init), no_source(g), TimeGrid::uniform(0.0, T, N), params);
    errs.push_back(std::abs(tr.u.back()[0] - exact));
  }
  CHECK(errs[0] / errs[1] >= 1.5);
  CHECK(errs[1] / errs[2] >= 1.5);
}

TEST_CASE("boundary translation reproduces the inhomogeneous problem") {
  std::mt19937 rng(33);
  std::uniform_real_distribution<double> d(0.0, 0.06);
  const PhaseLaw law = sloped_law();
  StationaryParams params;

  for (int k = 0; k < 10; ++k) {
    const Grid g = Grid::uniform(0.0, 1.0, 9 + k);
    OperatorCoefficients c;
    c.diffusion = (k % 2 == 0) ? 0.05 : 0.0;
    c.velocity = {0.5 + 0.1 * k};
    c.dirichlet_left = d(rng);
    c.dirichlet_right = d(rng);
    const DiscreteOperator op = assemble_operator(g, c);
    const BoundaryTranslation bt = translate_boundary(op, law);

    // Shifted graphs pass through the origin.
    for (const ScalarGraph& sg : bt.shifted_graphs) {
      CHECK(sg.eval(0.0).contains(0.0, 1e-14));
    }

    // Operator identity A(v) = A0(v - v0) + A(v0) cellwise.
    Field v(g);
    for (int i = 0; i < g.n_cells; ++i) v[i] = d(rng);
    const Field direct = op.apply(v);
    const Field shifted =
        add(bt.homogeneous_op.apply(sub(v, bt.lifting_chi)), bt.a_lifting);
    CHECK(linf_distance(direct, shifted) <= 1e-12);

    // Solve-then-unshift equals the direct solve.
    Field f(g);
    for (int i = 0; i < g.n_cells; ++i) f[i] = 2.0 * d(rng);
    const double lambda = 0.1;
    const StationaryResult want = solve_stationary(op, cell_graphs(law, g), lambda, f, params);
    const StationaryResult got = solve_stationary(
        bt.homogeneous_op, bt.shifted_graphs, lambda, bt.shift_data(f, lambda), params);
    CHECK(l1_distance(want.u, bt.unshift_state(got.u)) <= 2.0 * params.tol);
    CHECK(l1_distance(want.chi, bt.unshift_chi(got.chi)) <= 2.0 * params.tol);
  }
}

}  // TEST_SUITE
