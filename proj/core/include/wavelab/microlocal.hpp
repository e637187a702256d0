#pragma once

#include <string>
#include <vector>

#include "wavelab/field.hpp"

namespace wavelab {

// Conic sector in frequency paired with a smooth spatial window: a radial
// bump of radius `x_radius` about (x1, x2), and the set of modes whose
// direction lies within `theta_halfwidth` of `theta_center`, |k| >= k_min.
struct SectorSpec {
  double x1 = 0.0, x2 = 0.0;     // window center
  double x_radius = 0.5;         // spatial cutoff radius; >= pi means no window
  double theta_center = 0.0;     // sector direction (angle of xi)
  double theta_halfwidth = 0.4;  // in (0, pi/2]
  int k_min = 4;

  void validate() const;
};

// ( sum over sector modes of <k>^{2s} |(chi u)^_k|^2 )^{1/2}.
double sector_energy(const GridField& u, const SectorSpec& spec, SobolevSpec s);

// Same mass divided by the full high-frequency mass of the windowed field
// (all angles, same weight and k_min). In [0, 1].
double sector_energy_relative(const GridField& u, const SectorSpec& spec,
                              SobolevSpec s);

struct WavefrontCell {
  double x1 = 0.0, x2 = 0.0, theta = 0.0;
  double energy = 0.0;    // windowed sector norm
  double relative = 0.0;  // against the window's total mass
};

struct WavefrontMap {
  int nx = 0, ntheta = 0;
  std::vector<WavefrontCell> cells;  // row-major over (ix1, ix2, itheta)
};

// Tiles the torus with nx x nx smooth windows chi_i normalized so that
// sum_i chi_i^2 == 1 pointwise, and splits frequencies into ntheta hard
// angular bins. With s = 0, k_min = 0 the cell masses sum to ||u||^2.
WavefrontMap wavefront_map(const GridField& u, SobolevSpec s, int nx,
                           int ntheta, int k_min);

void write_wavefront_csv(const WavefrontMap& map, const std::string& path);

// Amplitude of u along the conormal fiber of the line {x1 = x1_c}: window
// u in x1 by a smooth bump of radius `window_radius` about x1_c, then read
// the spectral coefficients at fixed x2-mode n_mode as a function of xi1.
struct AmplitudeProfile {
  int n_mode = 0;
  std::vector<int> xi1;        // grid frequencies, ascending
  std::vector<cplx> amplitude;

  // Dyadic-block verdict over K in `blocks`: on the xi1 sign carrying the
  // energy the per-block sup modulus varies by at most factor `flat_band`;
  // on the opposite sign it decays by at least factor 10 per block.
  struct Verdict {
    int carrying_sign = 0;
    std::vector<int> blocks;
    std::vector<double> carrying_sup;
    std::vector<double> opposite_sup;
    bool flat = false;       // carrying sups within the band
    bool one_sided = false;  // opposite side decays 10x per block
    bool pass = false;       // flat && one_sided
  };
  Verdict verdict(std::vector<int> blocks = {}, double flat_band = 3.0) const;
};

// window_radius <= 0 selects the default pi/2. Requires that twice the
// largest block fits under n/2; default blocks are {8, 16, 32, 64}.
AmplitudeProfile conormal_amplitude(const GridField& u, double x1_c,
                                    int n_mode, double window_radius = 0.0);

void write_amplitude_csv(const AmplitudeProfile& profile,
                         const std::string& path);

// Periodization of (x1 - a - i eta)^{-1}, eta = 2pi/n (one grid spacing):
// coefficients i e^{k1 eta} e^{-i k1 a} on k1 < 0, constant in x2. The flat
// one-sided model conormal distribution.
GridField conormal_reference(const TorusGrid& grid, double a);

struct TransportReport {
  double max_modulus_dev = 0.0;  // |a| should stay exactly 1
  double max_arg_dev = 0.0;      // against -n log(xi/xi0)
};

// Integrates the model transport equation (n/xi + D_xi) a = 0, a(xi0) = 1,
// over [xi0, xi1] and compares with the closed form a = (xi/xi0)^{-i n}.
// The modulus never decays: the conormal order is preserved while the
// phase winds logarithmically.
TransportReport transport_model_check(int n_mode, double xi0, double xi1,
                                      int steps = 4096);

}  // namespace wavelab
