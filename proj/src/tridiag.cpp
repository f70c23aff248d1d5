#include "mht/tridiag.hpp"

#include <cmath>
#include <stdexcept>

namespace mht {

std::vector<double> solve_tridiagonal(const std::vector<double>& lower,
                                      const std::vector<double>& diag,
                                      const std::vector<double>& upper,
                                      std::vector<double> rhs) {
  const size_t n = diag.size();
  if (n == 0 || rhs.size() != n || lower.size() + 1 != n || upper.size() + 1 != n) {
    throw std::runtime_error("tridiagonal solve: inconsistent band sizes");
  }
  std::vector<double> c(n - 1, 0.0);
  double pivot = diag[0];
  if (pivot == 0.0 || !std::isfinite(pivot)) {
    throw std::runtime_error("tridiagonal solve: zero pivot");
  }
  if (n > 1) c[0] = upper[0] / pivot;
  rhs[0] /= pivot;
  for (size_t i = 1; i < n; ++i) {
    pivot = diag[i] - lower[i - 1] * c[i - 1];
    if (pivot == 0.0 || !std::isfinite(pivot)) {
      throw std::runtime_error("tridiagonal solve: zero pivot");
    }
    if (i < n - 1) c[i] = upper[i] / pivot;
    rhs[i] = (rhs[i] - lower[i - 1] * rhs[i - 1]) / pivot;
  }
  for (size_t i = n - 1; i-- > 0;) {
    rhs[i] -= c[i] * rhs[i + 1];
  }
  return rhs;
}

}  // namespace mht
