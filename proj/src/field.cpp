#include "mht/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mht {

Grid Grid::uniform(double x_left, double x_right, int n_cells) {
  if (n_cells < 2) {
    throw std::runtime_error("grid needs at least 2 cells");
  }
  if (!(x_right > x_left)) {
    throw std::runtime_error("grid needs x_right > x_left");
  }
  return Grid{x_left, x_right, n_cells};
}

Field::Field(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (static_cast<int>(values.size()) != g.n_cells) {
    throw std::runtime_error("field size does not match grid");
  }
}

double l1_norm(const Field& v) {
  double s = 0.0;
  for (double x : v.values) s += std::abs(x);
  return v.grid.spacing() * s;
}

double l1_distance(const Field& a, const Field& b) {
  if (!(a.grid == b.grid)) throw std::runtime_error("grid mismatch in l1_distance");
  double s = 0.0;
  for (int i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return a.grid.spacing() * s;
}

double l1_positive_distance(const Field& a, const Field& b) {
  if (!(a.grid == b.grid)) throw std::runtime_error("grid mismatch in l1_positive_distance");
  double s = 0.0;
  for (int i = 0; i < a.size(); ++i) s += std::max(a[i] - b[i], 0.0);
  return a.grid.spacing() * s;
}

double linf_norm(const Field& v) {
  double m = 0.0;
  for (double x : v.values) m = std::max(m, std::abs(x));
  return m;
}

double linf_distance(const Field& a, const Field& b) {
  if (!(a.grid == b.grid)) throw std::runtime_error("grid mismatch in linf_distance");
  double m = 0.0;
  for (int i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_value(const Field& v) {
  return *std::max_element(v.values.begin(), v.values.end());
}

double min_value(const Field& v) {
  return *std::min_element(v.values.begin(), v.values.end());
}

double total_mass(const Field& v) {
  double s = 0.0;
  for (double x : v.values) s += x;
  return v.grid.spacing() * s;
}

Field add(const Field& a, const Field& b) { return axpy(a, 1.0, b); }

Field sub(const Field& a, const Field& b) { return axpy(a, -1.0, b); }

Field scaled(const Field& a, double s) {
  Field r = a;
  for (double& x : r.values) x *= s;
  return r;
}

Field axpy(const Field& a, double s, const Field& b) {
  if (!(a.grid == b.grid)) throw std::runtime_error("grid mismatch in field arithmetic");
  Field r = a;
  for (int i = 0; i < r.size(); ++i) r[i] += s * b[i];
  return r;
}

}  // namespace mht
