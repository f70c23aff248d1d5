#include "mht/scenario.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mht/errors.hpp"

namespace mht {

using nlohmann::json;

Field DataSpec::realize(const Grid& g) const {
  Field f(g);
  if (type == "zero") return f;
  if (type == "constant") {
    for (int i = 0; i < g.n_cells; ++i) f[i] = value;
    return f;
  }
  if (type == "pulse") {
    // chi_L on (-L, 0), zero elsewhere; exact cell averages so refinement
    // studies are not polluted by initial-data projection error.
    const double h = g.spacing();
    for (int i = 0; i < g.n_cells; ++i) {
      const double overlap =
          std::max(0.0, std::min(0.0, g.face(i + 1)) - std::max(-L, g.face(i)));
      f[i] = chi_L * overlap / h;
    }
    return f;
  }
  if (type == "table") {
    SpatialFn fn = SpatialFn::table(xs, ys);
    for (int i = 0; i < g.n_cells; ++i) f[i] = fn(g.center(i));
    return f;
  }
  throw ValidationError({"unknown data block type '" + type + "'"});
}

SourceFn Scenario::source_fn() const {
  Field F = source_field();
  return [F](double) { return F; };
}

OperatorCoefficients Scenario::coefficients(double q) const {
  OperatorCoefficients c;
  c.diffusion = diffusion;
  c.velocity = {q};
  c.dirichlet_left = chi_left;
  c.dirichlet_right = chi_right;
  return c;
}

double Scenario::initial_flux() const {
  if (velocity_mode == "fixed") return velocity;
  const Grid g = grid();
  const Field u0 = initial_field();
  Field S(g);
  for (int i = 0; i < g.n_cells; ++i) S[i] = law.saturation_from_u(g.center(i), u0[i]);
  PressureSolution ps =
      solve_pressure_from_saturation(g, pressure->fluid, S, pressure->p_left, pressure->p_right);
  return ps.q;
}

namespace {

// ---- JSON helpers: structural issues are collected, not thrown one by one.

class Reader {
public:
  explicit Reader(std::vector<std::string>& issues) : issues_(issues) {}

  void complain(const std::string& what) { issues_.push_back(what); }

  bool require_object(const json& j, const std::string& path) {
    if (j.is_object()) return true;
    complain(path + " must be an object");
    return false;
  }

  double number(const json& j, const std::string& path, const char* key, double fallback,
                bool required = true) {
    if (!j.contains(key)) {
      if (required) complain(path + " is missing '" + key + "'");
      return fallback;
    }
    if (!j.at(key).is_number()) {
      complain(path + "." + key + " must be a number");
      return fallback;
    }
    return j.at(key).get<double>();
  }

  int integer(const json& j, const std::string& path, const char* key, int fallback,
              bool required = true) {
    if (!j.contains(key)) {
      if (required) complain(path + " is missing '" + key + "'");
      return fallback;
    }
    if (!j.at(key).is_number_integer()) {
      complain(path + "." + key + " must be an integer");
      return fallback;
    }
    return j.at(key).get<int>();
  }

  std::string text(const json& j, const std::string& path, const char* key,
                   const std::string& fallback, bool required = true) {
    if (!j.contains(key)) {
      if (required) complain(path + " is missing '" + key + "'");
      return fallback;
    }
    if (!j.at(key).is_string()) {
      complain(path + "." + key + " must be a string");
      return fallback;
    }
    return j.at(key).get<std::string>();
  }

  std::vector<double> numbers(const json& j, const std::string& path, const char* key) {
    if (!j.contains(key) || !j.at(key).is_array()) {
      complain(path + " needs a numeric array '" + key + "'");
      return {};
    }
    std::vector<double> out;
    for (const auto& v : j.at(key)) {
      if (!v.is_number()) {
        complain(path + "." + key + " must contain only numbers");
        return {};
      }
      out.push_back(v.get<double>());
    }
    return out;
  }

  void reject_unknown(const json& j, const std::string& path,
                      std::initializer_list<const char*> allowed) {
    if (!j.is_object()) return;
    for (const auto& item : j.items()) {
      bool known = false;
      for (const char* k : allowed) known = known || item.key() == k;
      if (!known) complain(path + " has unknown key '" + item.key() + "'");
    }
  }

private:
  std::vector<std::string>& issues_;
};

SpatialFn read_spatial(Reader& r, const json& j, const std::string& path) {
  if (!r.require_object(j, path)) return SpatialFn::constant(0.0);
  const std::string type = r.text(j, path, "type", "constant");
  if (type == "constant") {
    r.reject_unknown(j, path, {"type", "value"});
    return SpatialFn::constant(r.number(j, path, "value", 0.0));
  }
  if (type == "affine") {
    r.reject_unknown(j, path, {"type", "intercept", "slope"});
    return SpatialFn::affine(r.number(j, path, "intercept", 0.0),
                             r.number(j, path, "slope", 0.0));
  }
  if (type == "table") {
    r.reject_unknown(j, path, {"type", "x", "y"});
    std::vector<double> xs = r.numbers(j, path, "x");
    std::vector<double> ys = r.numbers(j, path, "y");
    if (xs.size() < 2 || xs.size() != ys.size()) {
      r.complain(path + " table needs matching x/y arrays with >= 2 entries");
      return SpatialFn::constant(0.0);
    }
    for (size_t i = 1; i < xs.size(); ++i) {
      if (!(xs[i] > xs[i - 1])) {
        r.complain(path + " table breakpoints must be strictly increasing");
        return SpatialFn::constant(0.0);
      }
    }
    return SpatialFn::table(std::move(xs), std::move(ys));
  }
  r.complain(path + ".type must be constant, affine or table");
  return SpatialFn::constant(0.0);
}

json spatial_to_json(const SpatialFn& f) {
  if (f.is_table()) return json{{"type", "table"}, {"x", f.xs}, {"y", f.ys}};
  if (f.is_constant()) return json{{"type", "constant"}, {"value", f.intercept}};
  return json{{"type", "affine"}, {"intercept", f.intercept}, {"slope", f.slope}};
}

DataSpec read_data(Reader& r, const json& j, const std::string& path, bool pulse_allowed) {
  DataSpec d;
  if (!r.require_object(j, path)) return d;
  d.type = r.text(j, path, "type", "zero");
  if (d.type == "zero") {
    r.reject_unknown(j, path, {"type"});
  } else if (d.type == "constant") {
    r.reject_unknown(j, path, {"type", "value"});
    d.value = r.number(j, path, "value", 0.0);
  } else if (d.type == "pulse" && pulse_allowed) {
    r.reject_unknown(j, path, {"type", "chi_L", "L"});
    d.chi_L = r.number(j, path, "chi_L", 0.0);
    d.L = r.number(j, path, "L", 0.0);
  } else if (d.type == "table") {
    r.reject_unknown(j, path, {"type", "x", "y"});
    d.xs = r.numbers(j, path, "x");
    d.ys = r.numbers(j, path, "y");
  } else {
    r.complain(path + ".type must be zero, constant, " +
               (pulse_allowed ? "pulse or table" : "or table"));
    d.type = "zero";
  }
  return d;
}

json data_to_json(const DataSpec& d) {
  if (d.type == "constant") return json{{"type", "constant"}, {"value", d.value}};
  if (d.type == "pulse") return json{{"type", "pulse"}, {"chi_L", d.chi_L}, {"L", d.L}};
  if (d.type == "table") return json{{"type", "table"}, {"x", d.xs}, {"y", d.ys}};
  return json{{"type", "zero"}};
}

SolveMethod read_method(Reader& r, const std::string& s) {
  if (s == "newton") return SolveMethod::newton;
  if (s == "fixed_point") return SolveMethod::fixed_point;
  if (s == "both") return SolveMethod::both;
  r.complain("solver.method must be newton, fixed_point or both");
  return SolveMethod::newton;
}

const char* method_name(SolveMethod m) {
  switch (m) {
    case SolveMethod::newton: return "newton";
    case SolveMethod::fixed_point: return "fixed_point";
    case SolveMethod::both: return "both";
  }
  return "newton";
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("scenario is not valid JSON: ") + e.what());
  }

  std::vector<std::string> issues;
  Reader r(issues);
  Scenario sc;

  if (!r.require_object(j, "scenario")) throw ValidationError(std::move(issues));
  r.reject_unknown(j, "scenario",
                   {"name", "domain", "time", "phase_law", "operator", "pressure", "initial",
                    "source", "boundary", "solver", "output"});

  sc.name = r.text(j, "scenario", "name", "");

  if (j.contains("domain")) {
    const json& d = j.at("domain");
    r.reject_unknown(d, "domain", {"x_left", "x_right", "n_cells"});
    sc.x_left = r.number(d, "domain", "x_left", 0.0);
    sc.x_right = r.number(d, "domain", "x_right", 1.0);
    sc.n_cells = r.integer(d, "domain", "n_cells", 100);
  } else {
    r.complain("scenario is missing 'domain'");
  }

  if (j.contains("time")) {
    const json& t = j.at("time");
    r.reject_unknown(t, "time", {"t_end", "steps"});
    sc.t_end = r.number(t, "time", "t_end", 1.0);
    sc.steps = r.integer(t, "time", "steps", 100);
  } else {
    r.complain("scenario is missing 'time'");
  }

  if (j.contains("phase_law")) {
    const json& p = j.at("phase_law");
    r.reject_unknown(p, "phase_law", {"chi_star", "ceiling", "porosity", "extension_slope"});
    if (p.contains("chi_star")) {
      sc.law.chi_star = read_spatial(r, p.at("chi_star"), "phase_law.chi_star");
    } else {
      r.complain("phase_law is missing 'chi_star'");
    }
    sc.law.ceiling = r.number(p, "phase_law", "ceiling", 0.1);
    if (p.contains("porosity")) {
      sc.law.phi = read_spatial(r, p.at("porosity"), "phase_law.porosity");
    }
    sc.law.extension_slope = r.number(p, "phase_law", "extension_slope", 1.0, false);
  } else {
    r.complain("scenario is missing 'phase_law'");
  }

  if (j.contains("operator")) {
    const json& o = j.at("operator");
    r.reject_unknown(o, "operator", {"diffusion", "velocity"});
    sc.diffusion = r.number(o, "operator", "diffusion", 0.0);
    if (o.contains("velocity") && r.require_object(o.at("velocity"), "operator.velocity")) {
      const json& v = o.at("velocity");
      sc.velocity_mode = r.text(v, "operator.velocity", "mode", "fixed");
      if (sc.velocity_mode == "fixed") {
        r.reject_unknown(v, "operator.velocity", {"mode", "value"});
        sc.velocity = r.number(v, "operator.velocity", "value", 0.0);
      } else {
        r.reject_unknown(v, "operator.velocity", {"mode"});
      }
    } else if (!o.contains("velocity")) {
      r.complain("operator is missing 'velocity'");
    }
  } else {
    r.complain("scenario is missing 'operator'");
  }

  if (j.contains("pressure")) {
    const json& p = j.at("pressure");
    r.reject_unknown(p, "pressure",
                     {"p_left", "p_right", "mu", "rho_l", "g", "kappa0", "m"});
    PressureBlock pb;
    pb.p_left = r.number(p, "pressure", "p_left", 0.0);
    pb.p_right = r.number(p, "pressure", "p_right", 0.0);
    pb.fluid.mu = r.number(p, "pressure", "mu", 1.0);
    pb.fluid.rho_l = r.number(p, "pressure", "rho_l", 0.0, false);
    pb.fluid.g = r.number(p, "pressure", "g", 0.0, false);
    pb.fluid.kappa0 = r.number(p, "pressure", "kappa0", 1.0);
    pb.fluid.perm_exponent = r.number(p, "pressure", "m", 3.0);
    sc.pressure = pb;
  }

  if (j.contains("initial")) {
    sc.initial = read_data(r, j.at("initial"), "initial", true);
  } else {
    r.complain("scenario is missing 'initial'");
  }
  if (j.contains("source")) {
    sc.source = read_data(r, j.at("source"), "source", false);
  }

  if (j.contains("boundary")) {
    const json& b = j.at("boundary");
    r.reject_unknown(b, "boundary", {"chi_left", "chi_right"});
    if (b.contains("chi_left")) sc.chi_left = r.number(b, "boundary", "chi_left", 0.0);
    if (b.contains("chi_right")) sc.chi_right = r.number(b, "boundary", "chi_right", 0.0);
  }

  if (j.contains("solver")) {
    const json& s = j.at("solver");
    r.reject_unknown(s, "solver", {"tol", "max_iters", "method"});
    sc.solver.tol = r.number(s, "solver", "tol", 1e-10, false);
    sc.solver.max_iters = r.integer(s, "solver", "max_iters", 100, false);
    sc.solver.method = read_method(r, r.text(s, "solver", "method", "newton", false));
  }

  if (j.contains("output")) {
    const json& o = j.at("output");
    r.reject_unknown(o, "output", {"stride"});
    sc.output_stride = r.integer(o, "output", "stride", 1, false);
  }

  if (!issues.empty()) throw ValidationError(std::move(issues));
  sc.validate();
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string dump_scenario(const Scenario& sc) {
  json j;
  j["name"] = sc.name;
  j["domain"] = {{"x_left", sc.x_left}, {"x_right", sc.x_right}, {"n_cells", sc.n_cells}};
  j["time"] = {{"t_end", sc.t_end}, {"steps", sc.steps}};
  j["phase_law"] = {{"chi_star", spatial_to_json(sc.law.chi_star)},
                    {"ceiling", sc.law.ceiling},
                    {"porosity", spatial_to_json(sc.law.phi)},
                    {"extension_slope", sc.law.extension_slope}};
  json vel;
  if (sc.velocity_mode == "fixed") {
    vel = {{"mode", "fixed"}, {"value", sc.velocity}};
  } else {
    vel = {{"mode", sc.velocity_mode}};
  }
  j["operator"] = {{"diffusion", sc.diffusion}, {"velocity", vel}};
  if (sc.pressure) {
    j["pressure"] = {{"p_left", sc.pressure->p_left},   {"p_right", sc.pressure->p_right},
                     {"mu", sc.pressure->fluid.mu},     {"rho_l", sc.pressure->fluid.rho_l},
                     {"g", sc.pressure->fluid.g},       {"kappa0", sc.pressure->fluid.kappa0},
                     {"m", sc.pressure->fluid.perm_exponent}};
  }
  j["initial"] = data_to_json(sc.initial);
  j["source"] = data_to_json(sc.source);
  if (sc.chi_left || sc.chi_right) {
    json b = json::object();
    if (sc.chi_left) b["chi_left"] = *sc.chi_left;
    if (sc.chi_right) b["chi_right"] = *sc.chi_right;
    j["boundary"] = b;
  }
  j["solver"] = {{"tol", sc.solver.tol},
                 {"max_iters", sc.solver.max_iters},
                 {"method", method_name(sc.solver.method)}};
  j["output"] = {{"stride", sc.output_stride}};
  return j.dump(2) + "\n";
}

void Scenario::validate() const {
  std::vector<std::string> issues;

  const bool domain_ok = x_right > x_left && n_cells >= 2;
  if (!(x_right > x_left)) issues.push_back("domain needs x_right > x_left");
  if (n_cells < 2) issues.push_back("grid needs at least 2 cells");
  if (!(t_end > 0.0)) issues.push_back("time horizon must be > 0");
  if (steps < 1) issues.push_back("time grid needs at least one step");
  if (!(diffusion >= 0.0)) issues.push_back("diffusion must be >= 0");

  if (velocity_mode != "fixed" && velocity_mode != "pressure_driven") {
    issues.push_back("velocity mode must be fixed or pressure_driven");
  }
  if (velocity_mode == "pressure_driven" && !pressure) {
    issues.push_back("missing pressure block in pressure_driven mode");
  }
  if (pressure) {
    const FluidParams& fp = pressure->fluid;
    if (!(fp.mu > 0.0)) issues.push_back("pressure.mu must be > 0");
    if (!(fp.kappa0 > 0.0)) issues.push_back("pressure.kappa0 must be > 0");
    if (fp.rho_l < 0.0) issues.push_back("pressure.rho_l must be >= 0");
    if (fp.g < 0.0) issues.push_back("pressure.g must be >= 0");
    if (fp.perm_exponent < 0.0) issues.push_back("pressure.m must be >= 0");
  }

  if (domain_ok) {
    try {
      law.validate_on(grid());
    } catch (const ValidationError& e) {
      for (const auto& s : e.issues()) issues.push_back("phase_law: " + s);
    }
  }

  // Boundary data must match what the stencil will ask for.
  double q_sign = 0.0;
  if (velocity_mode == "fixed") {
    q_sign = velocity;
  } else if (pressure) {
    q_sign = pressure->p_left - pressure->p_right;
  }
  if (diffusion > 0.0) {
    if (!chi_left || !chi_right) {
      issues.push_back("diffusive runs need chi boundary data on both ends");
    }
  } else {
    if (q_sign > 0.0) {
      if (!chi_left) issues.push_back("advection to the right needs boundary.chi_left");
      if (chi_right) {
        issues.push_back("no boundary condition may be prescribed at the outflow end");
      }
    } else if (q_sign < 0.0) {
      if (!chi_right) issues.push_back("advection to the left needs boundary.chi_right");
      if (chi_left) {
        issues.push_back("no boundary condition may be prescribed at the outflow end");
      }
    } else {
      issues.push_back("operator has neither diffusion nor flux; nothing to evolve");
    }
  }
  if (chi_left && *chi_left < 0.0) issues.push_back("boundary.chi_left must be >= 0");
  if (chi_right && *chi_right < 0.0) issues.push_back("boundary.chi_right must be >= 0");

  if (initial.type == "pulse") {
    if (initial.chi_L < 0.0) issues.push_back("initial.chi_L must be >= 0");
    if (initial.L < 0.0) issues.push_back("initial.L must be >= 0");
  }
  for (const DataSpec* d : {&initial, &source}) {
    if (d->type != "table") continue;
    const char* which = d == &initial ? "initial" : "source";
    if (d->xs.size() < 2 || d->xs.size() != d->ys.size()) {
      issues.push_back(std::string(which) + " table needs matching x/y with >= 2 entries");
      continue;
    }
    bool increasing = true;
    for (size_t i = 1; i < d->xs.size(); ++i) increasing = increasing && d->xs[i] > d->xs[i - 1];
    if (!increasing) {
      issues.push_back(std::string(which) + " table breakpoints must be strictly increasing");
      continue;
    }
    if (domain_ok && (d->xs.front() > x_left || d->xs.back() < x_right)) {
      issues.push_back(std::string(which) + " table does not cover the domain");
    }
  }

  // Physical range of the initial content: 0 <= u0 <= phi*ceiling cellwise.
  if (domain_ok && issues.empty()) {
    const Grid g = grid();
    Field u0 = initial.realize(g);
    for (int i = 0; i < g.n_cells; ++i) {
      const double cap = law.phi(g.center(i)) * law.ceiling;
      if (u0[i] < 0.0 || u0[i] > cap) {
        issues.push_back("initial content leaves [0, phi*ceiling] at cell " + std::to_string(i));
        break;
      }
    }
  }

  if (!(solver.tol > 0.0)) issues.push_back("solver.tol must be > 0");
  if (solver.max_iters < 1) issues.push_back("solver.max_iters must be >= 1");
  if (output_stride < 1) issues.push_back("output.stride must be >= 1");

  if (!issues.empty()) throw ValidationError(std::move(issues));
}

std::string Scenario::digest() const {
  const std::string canon = dump_scenario(*this);
  uint64_t h = 1469598103934665603ULL;  // FNV-1a 64-bit
  for (unsigned char c : canon) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return std::string(buf);
}

void apply_overrides(Scenario& sc, std::optional<int> nx, std::optional<double> dt,
                     std::optional<double> t_end) {
  if (t_end) sc.t_end = *t_end;
  if (nx) sc.n_cells = *nx;
  if (dt) {
    if (!(*dt > 0.0)) throw ValidationError({"--dt must be > 0"});
    sc.steps = std::max(1, static_cast<int>(std::ceil(sc.t_end / *dt - 1e-9)));
  }
  sc.validate();
}

}  // namespace mht
