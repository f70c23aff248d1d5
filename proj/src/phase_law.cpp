#include "mht/phase_law.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mht/errors.hpp"

namespace mht {

SpatialFn SpatialFn::table(std::vector<double> xs, std::vector<double> ys) {
  if (xs.size() < 2 || xs.size() != ys.size()) {
    throw std::runtime_error("table needs >= 2 breakpoints with matching values");
  }
  for (size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) {
      throw std::runtime_error("table breakpoints must be strictly increasing");
    }
  }
  SpatialFn f;
  f.xs = std::move(xs);
  f.ys = std::move(ys);
  return f;
}

double SpatialFn::operator()(double x) const {
  if (!is_table()) return intercept + slope * x;
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  size_t i = static_cast<size_t>(it - xs.begin());  // xs[i-1] <= x < xs[i]
  double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return ys[i - 1] + w * (ys[i] - ys[i - 1]);
}

bool SpatialFn::covers(double a, double b) const {
  if (!is_table()) return true;
  return xs.front() <= a && xs.back() >= b;
}

bool SpatialFn::non_increasing() const {
  if (!is_table()) return slope <= 0.0;
  for (size_t i = 1; i < ys.size(); ++i) {
    if (ys[i] > ys[i - 1]) return false;
  }
  return true;
}

double SpatialFn::min_on(double a, double b) const {
  double m = std::min((*this)(a), (*this)(b));
  for (size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] > a && xs[i] < b) m = std::min(m, ys[i]);
  }
  return m;
}

double SpatialFn::max_on(double a, double b) const {
  double m = std::max((*this)(a), (*this)(b));
  for (size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] > a && xs[i] < b) m = std::max(m, ys[i]);
  }
  return m;
}

GraphValue ScalarGraph::eval(double chi) const {
  if (chi < kink) {
    double u = u_lo + slope_lo * (chi - kink);
    return {u, u};
  }
  if (chi > kink) {
    double u = u_hi + slope_hi * (chi - kink);
    return {u, u};
  }
  return {u_lo, u_hi};
}

double ScalarGraph::inverse(double u) const {
  if (u < u_lo) return kink + (u - u_lo) / slope_lo;
  if (u > u_hi) return kink + (u - u_hi) / slope_hi;
  return kink;
}

double ScalarGraph::inverse_slope_left(double u) const {
  if (u <= u_lo) return 1.0 / slope_lo;
  if (u <= u_hi) return 0.0;
  return 1.0 / slope_hi;
}

double ScalarGraph::resolvent(double lambda, double r) const {
  // Branch windows in r: the vertical segment maps to [kink + lambda*u_lo,
  // kink + lambda*u_hi]; outside it the affine branches invert in closed form.
  const double w_lo = kink + lambda * u_lo;
  const double w_hi = kink + lambda * u_hi;
  if (r < w_lo) {
    return (r - lambda * (u_lo - slope_lo * kink)) / (1.0 + lambda * slope_lo);
  }
  if (r > w_hi) {
    return (r - lambda * (u_hi - slope_hi * kink)) / (1.0 + lambda * slope_hi);
  }
  return kink;
}

double ScalarGraph::yosida(double lambda, double r) const {
  // Branch-direct forms; the subtraction (r - resolvent)/lambda would cancel
  // catastrophically for small lambda.
  const double w_lo = kink + lambda * u_lo;
  const double w_hi = kink + lambda * u_hi;
  if (r < w_lo) return (u_lo + slope_lo * (r - kink)) / (1.0 + lambda * slope_lo);
  if (r > w_hi) return (u_hi + slope_hi * (r - kink)) / (1.0 + lambda * slope_hi);
  return (r - kink) / lambda;
}

double ScalarGraph::yosida_slope_left(double lambda, double r) const {
  const double w_lo = kink + lambda * u_lo;
  const double w_hi = kink + lambda * u_hi;
  if (r <= w_lo) return slope_lo / (1.0 + lambda * slope_lo);
  if (r <= w_hi) return 1.0 / lambda;
  return slope_hi / (1.0 + lambda * slope_hi);
}

double ScalarGraph::defect(double chi, double u) const {
  // Euclidean distance from (chi, u) to the graph as a subset of the plane.
  // A purely vertical gap would jump by the segment height for points a hair
  // to the side of the kink, which mis-scores near-converged iterates.
  const double dx = chi - kink;
  double best = std::hypot(dx, u - std::clamp(u, u_lo, u_hi));
  {  // lower branch: (kink + t, u_lo + slope_lo*t), t <= 0
    const double t =
        std::min(0.0, (dx + slope_lo * (u - u_lo)) / (1.0 + slope_lo * slope_lo));
    best = std::min(best, std::hypot(dx - t, u - (u_lo + slope_lo * t)));
  }
  {  // upper branch: (kink + t, u_hi + slope_hi*t), t >= 0
    const double t =
        std::max(0.0, (dx + slope_hi * (u - u_hi)) / (1.0 + slope_hi * slope_hi));
    best = std::min(best, std::hypot(dx - t, u - (u_hi + slope_hi * t)));
  }
  return best;
}

ScalarGraph PhaseLaw::graph_at(double x) const {
  const double k = chi_star(x);
  const double p = phi(x);
  return ScalarGraph{k, p * k, p * ceiling, p, p * extension_slope};
}

GraphValue PhaseLaw::graph_eval(double x, double chi) const {
  return graph_at(x).eval(chi);
}

double PhaseLaw::graph_inverse(double x, double u) const {
  return graph_at(x).inverse(u);
}

double PhaseLaw::saturation_from_u(double x, double u) const {
  const double k = chi_star(x);
  const double denom = ceiling - k;
  if (!(denom > 0.0)) {
    throw HypothesisError("saturation needs chi_star(x) < ceiling");
  }
  return std::max(u / phi(x) - k, 0.0) / denom;
}

double PhaseLaw::graph_resolvent(double x, double lambda, double r) const {
  return graph_at(x).resolvent(lambda, r);
}

double PhaseLaw::yosida_apply(double x, double lambda, double r) const {
  return graph_at(x).yosida(lambda, r);
}

double PhaseLaw::level_bound(double x, double c) const {
  ScalarGraph g = graph_at(x);
  GraphValue lo = g.eval(-c);
  GraphValue hi = g.eval(c);
  return std::max(std::abs(lo.lo), std::abs(hi.hi));
}

void PhaseLaw::validate_on(const Grid& g) const {
  std::vector<std::string> issues;
  if (!chi_star.covers(g.x_left, g.x_right)) {
    issues.push_back("chi_star table does not cover the domain");
  }
  if (!phi.covers(g.x_left, g.x_right)) {
    issues.push_back("phi table does not cover the domain");
  }
  if (!(extension_slope > 0.0)) {
    issues.push_back("extension_slope must be > 0");
  }
  if (chi_star.covers(g.x_left, g.x_right)) {
    if (!(chi_star.min_on(g.x_left, g.x_right) > 0.0)) {
      issues.push_back("chi_star must be > 0 on the domain");
    }
    if (!(chi_star.max_on(g.x_left, g.x_right) < ceiling)) {
      issues.push_back("requires chi_star(x) < R on the whole domain");
    }
  }
  if (phi.covers(g.x_left, g.x_right) && !(phi.min_on(g.x_left, g.x_right) > 0.0)) {
    issues.push_back("phi must be > 0 on the domain");
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

std::vector<ScalarGraph> cell_graphs(const PhaseLaw& law, const Grid& g) {
  std::vector<ScalarGraph> row;
  row.reserve(static_cast<size_t>(g.n_cells));
  for (int i = 0; i < g.n_cells; ++i) {
    row.push_back(law.graph_at(g.center(i)));
  }
  return row;
}

double positive_indicator_yosida(double lambda, double r) {
  if (!(lambda > 0.0)) throw HypothesisError("regularization parameter must be > 0");
  return std::min(r, 0.0) / lambda;
}

}  // namespace mht
