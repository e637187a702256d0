#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "wavelab/field.hpp"

namespace wavelab {

// One term of a real trigonometric potential:
// a * cos(<freq, x>) + b * sin(<freq, x>).
struct PotentialTerm {
  std::array<int, 2> freq{0, 0};
  double cos_coeff = 0.0;
  double sin_coeff = 0.0;
};

// P = m(D) + V(x) with the 0th-order multiplier m(k) = k2/<k> and a
// finite real Fourier-series potential. Immutable and shareable.
struct SymbolModel {
  std::string name;
  std::vector<PotentialTerm> potential;

  double potential_at(double x1, double x2) const;
  // d/dx1 V, d/dx2 V and second derivatives, exact from the series.
  double potential_dx1(double x1, double x2) const;
  double potential_dx2(double x1, double x2) const;
  double potential_dx1x1(double x1, double x2) const;
  double potential_dx1x2(double x1, double x2) const;
  double potential_dx2x2(double x1, double x2) const;

  // 1 + sum_j (|a_j| + |b_j|), an upper bound for ||P|| on l^2.
  double norm_bound() const;

  static SymbolModel p1();      // V = -2 cos x1
  static SymbolModel p2();      // V = -(1/2) cos x1
  static SymbolModel free();    // V = 0
  static SymbolModel by_name(const std::string& name);
  static SymbolModel from_json_file(const std::string& path);
  static SymbolModel from_json_text(const std::string& text);
};

// Multiplier m(k) = k2 / (1 + k1^2 + k2^2)^{1/2}.
double multiplier(int k1, int k2);

// Homogeneous principal symbol q(x, theta) = sin(theta) + V(x),
// i.e. p(x, xi) = xi2/|xi| + V(x) at xi = (cos theta, sin theta).
double principal_symbol_at(const SymbolModel& model, double x1, double x2,
                           double theta);

// Prepared application of P on a fixed grid: caches the multiplier array
// and the potential samples. apply() maps spectral coefficients to
// spectral coefficients of P u (pointwise V multiply in physical space).
class OperatorApplier {
 public:
  OperatorApplier(const SymbolModel& model, const TorusGrid& grid);

  const TorusGrid& grid() const { return grid_; }
  const SymbolModel& model() const { return model_; }
  const std::vector<double>& multiplier_table() const { return mult_; }

  void apply(const std::vector<cplx>& spec_in, std::vector<cplx>& spec_out) const;

 private:
  SymbolModel model_;
  TorusGrid grid_;
  std::vector<double> mult_;    // m(k) per FFT bin
  std::vector<double> v_phys_;  // V(x_j)
  mutable std::vector<cplx> work_phys_;
};

// Convenience one-shot form; output has both representations populated.
GridField apply_operator(const SymbolModel& model, const GridField& u);

// Dense Hermitian matrix of P in the spectral basis (lattice order,
// index = (k1 + n/2)*n + (k2 + n/2)). Guarded at n <= 64.
Eigen::MatrixXcd assemble_dense(const SymbolModel& model, const TorusGrid& grid);

// Map between lattice-ordered dense vectors and GridField spec layout.
Eigen::VectorXcd spec_to_dense(const GridField& field);
void dense_to_spec(const Eigen::VectorXcd& v, GridField& field);

struct SpectrumScan {
  std::vector<double> in_window;  // ascending
  int total = 0;
  double min_eig = 0.0;
  double max_eig = 0.0;
};

// Eigenvalues of the dense matrix in (lo, hi). Guarded at n <= 32.
// A discretization diagnostic only; the continuous operator has
// continuous spectrum that the finite section represents by point masses.
SpectrumScan spectrum_scan(const SymbolModel& model, const TorusGrid& grid,
                           double lo, double hi);

}  // namespace wavelab
