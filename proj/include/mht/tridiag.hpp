#pragma once

#include <vector>

namespace mht {

// Thomas algorithm for T x = rhs with bands (lower, diag, upper) of sizes
// n-1, n, n-1. No pivoting: callers must pass diagonally dominant systems
// (all uses here are M-matrices dominant by columns). Throws on a vanishing
// pivot.
std::vector<double> solve_tridiagonal(const std::vector<double>& lower,
                                      const std::vector<double>& diag,
                                      const std::vector<double>& upper,
                                      std::vector<double> rhs);

}  // namespace mht
