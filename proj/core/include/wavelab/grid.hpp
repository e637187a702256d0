#pragma once

#include <cmath>
#include <numbers>

#include "wavelab/errors.hpp"

namespace wavelab {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Uniform n x n grid on the 2-torus [0,2pi)^2, n even.
// Physical points x_j = (2pi j1/n, 2pi j2/n); spectral modes
// k = (k1,k2) with k1,k2 in {-n/2,...,n/2-1}.
struct TorusGrid {
  int n = 0;

  TorusGrid() = default;
  explicit TorusGrid(int n_) : n(n_) {
    if (n < 8 || n % 2 != 0)
      throw parameter_error("TorusGrid: n must be even and >= 8");
  }

  double spacing() const { return two_pi / n; }
  int size() const { return n * n; }

  double x(int j) const { return two_pi * j / n; }

  // Lattice frequency of FFT bin i (row-major storage index = i1*n + i2).
  int freq(int i) const { return i < n / 2 ? i : i - n; }
  // FFT bin of lattice frequency k in [-n/2, n/2).
  int bin(int k) const { return (k + n) % n; }

  bool operator==(const TorusGrid&) const = default;
};

// <k> = (1 + |k|^2)^{1/2}
inline double japanese_bracket(int k1, int k2) {
  return std::sqrt(1.0 + double(k1) * k1 + double(k2) * k2);
}

// Sobolev exponent s for the scale H^s.
struct SobolevSpec {
  double s = 0.0;
};

}  // namespace wavelab
