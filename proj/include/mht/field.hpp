#pragma once

#include <vector>

namespace mht {

// Uniform cell-centered 1-D grid on (x_left, x_right).
struct Grid {
  double x_left = 0.0;
  double x_right = 1.0;
  int n_cells = 0;

  // Validates n_cells >= 2 and x_right > x_left.
  static Grid uniform(double x_left, double x_right, int n_cells);

  double length() const { return x_right - x_left; }
  double spacing() const { return length() / n_cells; }
  double center(int i) const { return x_left + (i + 0.5) * spacing(); }
  double face(int i) const { return x_left + i * spacing(); }

  bool operator==(const Grid&) const = default;
};

// Cell-centered scalar field on a Grid.
struct Field {
  Grid grid;
  std::vector<double> values;

  Field() = default;
  explicit Field(const Grid& g, double fill = 0.0)
      : grid(g), values(static_cast<size_t>(g.n_cells), fill) {}
  Field(const Grid& g, std::vector<double> v);

  int size() const { return static_cast<int>(values.size()); }
  double& operator[](int i) { return values[static_cast<size_t>(i)]; }
  double operator[](int i) const { return values[static_cast<size_t>(i)]; }
};

// Discrete L1 norm h * sum |v_i|: the norm all solver tolerances refer to.
double l1_norm(const Field& v);
double l1_distance(const Field& a, const Field& b);
// h * sum max(a_i - b_i, 0); the one-sided distance in the order estimates.
double l1_positive_distance(const Field& a, const Field& b);
double linf_norm(const Field& v);
double linf_distance(const Field& a, const Field& b);
double max_value(const Field& v);
double min_value(const Field& v);
// h * sum v_i (signed cell mass).
double total_mass(const Field& v);

Field add(const Field& a, const Field& b);
Field sub(const Field& a, const Field& b);
Field scaled(const Field& a, double s);
// a + s * b
Field axpy(const Field& a, double s, const Field& b);

}  // namespace mht
