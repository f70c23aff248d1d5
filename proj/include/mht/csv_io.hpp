#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mht/evolution.hpp"

namespace mht {

// Shortest exact decimal representation (%.17g): reading the text back
// recovers the bit-identical double, and identical runs produce identical
// bytes.
std::string format_double(double v);

// Trajectory CSV: header t,x,u,chi,S (plus q,p_star when the run carried
// flow data), one row per (knot, cell), knots thinned by stride but always
// including the first and last. See the README for a byte-exact example.
void write_trajectory_csv(const std::string& path, const Trajectory& tr, int stride = 1);

// CSV contents in memory, u[k][i] indexed by knot then cell.
struct TrajectoryTable {
  std::vector<double> times;
  std::vector<double> xs;
  std::vector<std::vector<double>> u, chi, S;
  bool has_flow = false;
  std::vector<double> q;                    // per knot, when present
  std::vector<std::vector<double>> p_star;  // per knot/cell, when present
};

TrajectoryTable read_trajectory_csv(const std::string& path);

// Report file: "key: value" lines in fixed order.
void write_report(const std::string& path,
                  const std::vector<std::pair<std::string, std::string>>& entries);
std::map<std::string, std::string> read_report(const std::string& path);

}  // namespace mht
