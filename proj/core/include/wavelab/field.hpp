#pragma once

#include <complex>
#include <vector>

#include "wavelab/grid.hpp"

namespace wavelab {

using cplx = std::complex<double>;

// Complex function on the torus grid with paired representations:
// phys[j1*n+j2] = u(x_j) and spec holding coefficients c_k of
// u = sum_k c_k e^{i<k,x>}, stored in FFT bin order (use grid.bin()).
// Normalization: c_k = (1/n^2) sum_j u(x_j) e^{-i<k,x_j>}.
struct GridField {
  TorusGrid grid;
  std::vector<cplx> phys;
  std::vector<cplx> spec;

  GridField() = default;
  explicit GridField(TorusGrid g)
      : grid(g), phys(g.size(), cplx{}), spec(g.size(), cplx{}) {}

  cplx& coeff(int k1, int k2) { return spec[grid.bin(k1) * grid.n + grid.bin(k2)]; }
  const cplx& coeff(int k1, int k2) const {
    return spec[grid.bin(k1) * grid.n + grid.bin(k2)];
  }
  cplx& at(int j1, int j2) { return phys[j1 * grid.n + j2]; }
  const cplx& at(int j1, int j2) const { return phys[j1 * grid.n + j2]; }
};

// Forward transform: populates spec from phys. Throws numerical_error on
// non-finite input. Counterpart to_physical fills phys from spec.
void to_spectral(GridField& field);
void to_physical(GridField& field);

// In-place transforms working directly on coefficient vectors; the
// matrix-free operator and solver paths use these without copying fields.
void spec_to_phys(const TorusGrid& grid, const std::vector<cplx>& spec,
                  std::vector<cplx>& phys);
void phys_to_spec(const TorusGrid& grid, const std::vector<cplx>& phys,
                  std::vector<cplx>& spec);

// ( sum_k <k>^{2s} |c_k|^2 )^{1/2} over the mode lattice.
double sobolev_norm(const GridField& field, SobolevSpec s);
double sobolev_norm(const TorusGrid& grid, const std::vector<cplx>& spec,
                    SobolevSpec s);

// Spectral l^2 norm and inner product <u,v> = sum_k conj(u_k) v_k.
double l2_norm(const std::vector<cplx>& spec);
cplx inner(const std::vector<cplx>& a, const std::vector<cplx>& b);

// Periodized Gaussian bump centered at `center`, width sigma in (0, pi/2].
// Real, positive, smooth, 2pi-periodic to machine precision.
GridField make_bump(const TorusGrid& grid, double cx, double cy, double sigma);

}  // namespace wavelab
