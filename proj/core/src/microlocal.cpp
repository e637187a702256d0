#include "wavelab/microlocal.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "wavelab/errors.hpp"
#include "wavelab/smooth.hpp"

namespace wavelab {

namespace {

double torus_dist(double a, double b) {
  double d = std::fmod(std::abs(a - b), two_pi);
  return std::min(d, two_pi - d);
}

double angle_dist(double a, double b) {
  double d = std::fmod(a - b, two_pi);
  if (d < -std::numbers::pi) d += two_pi;
  if (d > std::numbers::pi) d -= two_pi;
  return std::abs(d);
}

// Radial smooth bump about (x1, x2); radius >= pi covers the torus.
double radial_window(const TorusGrid& g, int j1, int j2, double x1, double x2,
                     double radius) {
  if (radius >= std::numbers::pi) return 1.0;
  const double d1 = torus_dist(g.x(j1), x1);
  const double d2 = torus_dist(g.x(j2), x2);
  const double d = std::hypot(d1, d2);
  return d < radius ? mollifier(d / radius) : 0.0;
}

std::vector<cplx> windowed_spec(const GridField& u, const SectorSpec& spec) {
  const TorusGrid& g = u.grid;
  if (spec.x_radius >= std::numbers::pi) return u.spec;
  std::vector<cplx> phys(g.size());
  for (int j1 = 0; j1 < g.n; ++j1)
    for (int j2 = 0; j2 < g.n; ++j2)
      phys[j1 * g.n + j2] =
          u.phys[j1 * g.n + j2] *
          radial_window(g, j1, j2, spec.x1, spec.x2, spec.x_radius);
  std::vector<cplx> out;
  phys_to_spec(g, phys, out);
  return out;
}

struct SectorMass {
  double in_sector = 0.0;
  double total = 0.0;
};

SectorMass sector_mass(const TorusGrid& g, const std::vector<cplx>& spec,
                       double theta, double halfwidth, int k_min,
                       SobolevSpec s) {
  SectorMass m;
  for (int i1 = 0; i1 < g.n; ++i1) {
    const int k1 = g.freq(i1);
    for (int i2 = 0; i2 < g.n; ++i2) {
      const int k2 = g.freq(i2);
      if (double(k1) * k1 + double(k2) * k2 < double(k_min) * k_min) continue;
      const double e = std::pow(japanese_bracket(k1, k2), 2.0 * s.s) *
                       std::norm(spec[i1 * g.n + i2]);
      m.total += e;
      if (angle_dist(std::atan2(double(k2), double(k1)), theta) <= halfwidth)
        m.in_sector += e;
    }
  }
  return m;
}

}  // namespace

void SectorSpec::validate() const {
  if (!(theta_halfwidth > 0.0) || theta_halfwidth > std::numbers::pi / 2)
    throw parameter_error("SectorSpec: theta_halfwidth must be in (0, pi/2]");
  if (k_min < 4) throw parameter_error("SectorSpec: k_min must be >= 4");
  if (!(x_radius > 0.0)) throw parameter_error("SectorSpec: x_radius <= 0");
}

double sector_energy(const GridField& u, const SectorSpec& spec, SobolevSpec s) {
  spec.validate();
  auto w = windowed_spec(u, spec);
  return std::sqrt(sector_mass(u.grid, w, spec.theta_center,
                               spec.theta_halfwidth, spec.k_min, s)
                       .in_sector);
}

double sector_energy_relative(const GridField& u, const SectorSpec& spec,
                              SobolevSpec s) {
  spec.validate();
  auto w = windowed_spec(u, spec);
  SectorMass m = sector_mass(u.grid, w, spec.theta_center, spec.theta_halfwidth,
                             spec.k_min, s);
  if (m.total <= 0.0) return 0.0;
  return std::min(1.0, m.in_sector / m.total);
}

WavefrontMap wavefront_map(const GridField& u, SobolevSpec s, int nx,
                           int ntheta, int k_min) {
  if (nx < 2 || ntheta < 2)
    throw parameter_error("wavefront_map: need nx, ntheta >= 2");
  const TorusGrid& g = u.grid;

  // Raw windows: periodic bumps over the nx x nx cells, then a pointwise
  // normalization so the squares sum to one exactly.
  const double radius = two_pi / nx;  // overlap factor 2
  std::vector<std::vector<double>> win(size_t(nx) * nx,
                                       std::vector<double>(g.size()));
  std::vector<double> sumsq(g.size(), 0.0);
  for (int c1 = 0; c1 < nx; ++c1)
    for (int c2 = 0; c2 < nx; ++c2) {
      auto& w = win[c1 * nx + c2];
      for (int j1 = 0; j1 < g.n; ++j1)
        for (int j2 = 0; j2 < g.n; ++j2) {
          const double v = radial_window(g, j1, j2, two_pi * c1 / nx,
                                         two_pi * c2 / nx, radius);
          w[j1 * g.n + j2] = v;
          sumsq[j1 * g.n + j2] += v * v;
        }
    }
  for (auto& w : win)
    for (size_t i = 0; i < w.size(); ++i) {
      if (sumsq[i] <= 0.0)
        throw numerical_error("wavefront_map: window cover has a gap");
      w[i] /= std::sqrt(sumsq[i]);
    }

  WavefrontMap map;
  map.nx = nx;
  map.ntheta = ntheta;
  map.cells.reserve(size_t(nx) * nx * ntheta);
  std::vector<cplx> phys(g.size()), spec;
  const double bin_half = std::numbers::pi / ntheta;
  for (int c1 = 0; c1 < nx; ++c1)
    for (int c2 = 0; c2 < nx; ++c2) {
      const auto& w = win[c1 * nx + c2];
      for (int i = 0; i < g.size(); ++i) phys[i] = u.phys[i] * w[i];
      phys_to_spec(g, phys, spec);

      // Hard angular bins [theta_b - pi/ntheta, theta_b + pi/ntheta):
      // a partition, so the cell masses of one window sum to its norm.
      std::vector<double> mass(ntheta, 0.0);
      double total = 0.0;
      for (int i1 = 0; i1 < g.n; ++i1) {
        const int k1 = g.freq(i1);
        for (int i2 = 0; i2 < g.n; ++i2) {
          const int k2 = g.freq(i2);
          if (double(k1) * k1 + double(k2) * k2 < double(k_min) * k_min)
            continue;
          const double e = std::pow(japanese_bracket(k1, k2), 2.0 * s.s) *
                           std::norm(spec[i1 * g.n + i2]);
          double ang = std::atan2(double(k2), double(k1));
          if (ang < -bin_half) ang += two_pi;
          const int b =
              std::min(ntheta - 1, int((ang + bin_half) / (2.0 * bin_half)));
          mass[b] += e;
          total += e;
        }
      }
      for (int b = 0; b < ntheta; ++b) {
        WavefrontCell cell;
        cell.x1 = two_pi * c1 / nx;
        cell.x2 = two_pi * c2 / nx;
        cell.theta = two_pi * b / ntheta;
        cell.energy = std::sqrt(mass[b]);
        cell.relative = total > 0.0 ? mass[b] / total : 0.0;
        map.cells.push_back(cell);
      }
    }
  return map;
}

void write_wavefront_csv(const WavefrontMap& map, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw format_error("write_wavefront_csv: cannot open " + path);
  out << "x1,x2,theta,energy,relative\n";
  out.precision(17);
  for (const auto& c : map.cells)
    out << c.x1 << "," << c.x2 << "," << c.theta << "," << c.energy << ","
        << c.relative << "\n";
}

AmplitudeProfile conormal_amplitude(const GridField& u, double x1_c,
                                    int n_mode, double window_radius) {
  const TorusGrid& g = u.grid;
  if (window_radius <= 0.0) window_radius = std::numbers::pi / 2;
  if (std::abs(n_mode) > g.n / 2 - 1)
    throw parameter_error("conormal_amplitude: n_mode beyond the grid");

  // Periodized Gaussian window in x1: its transform decays like
  // e^{-sigma^2 k^2/2}, so the window contributes no slowly decaying
  // spectral floor that would mask the field's own dyadic profile.
  const double sigma = window_radius / 2.0;
  std::vector<cplx> phys(g.size()), spec;
  for (int j1 = 0; j1 < g.n; ++j1) {
    double w = 0.0;
    for (int mshift = -2; mshift <= 2; ++mshift) {
      const double d = g.x(j1) - x1_c + two_pi * mshift;
      w += std::exp(-d * d / (2.0 * sigma * sigma));
    }
    for (int j2 = 0; j2 < g.n; ++j2)
      phys[j1 * g.n + j2] = u.phys[j1 * g.n + j2] * w;
  }
  phys_to_spec(g, phys, spec);

  AmplitudeProfile p;
  p.n_mode = n_mode;
  for (int k1 = -g.n / 2; k1 < g.n / 2; ++k1) {
    p.xi1.push_back(k1);
    p.amplitude.push_back(
        spec[g.bin(k1) * g.n + g.bin(n_mode)]);
  }
  return p;
}

AmplitudeProfile::Verdict AmplitudeProfile::verdict(std::vector<int> blocks,
                                                    double flat_band) const {
  if (blocks.empty()) blocks = {8, 16, 32, 64};
  // The block [K, 2K) only reaches mode 2K - 1.
  const int needed = 2 * *std::max_element(blocks.begin(), blocks.end()) - 1;
  const int kmax = xi1.empty() ? 0 : xi1.back();
  if (needed > kmax)
    throw capacity_error("AmplitudeProfile: grid too small for block " +
                         std::to_string(needed / 2));

  auto block_sup = [&](int K, int sign) {
    double m = 0.0;
    for (size_t i = 0; i < xi1.size(); ++i) {
      const int k = xi1[i] * sign;
      if (k >= K && k < 2 * K) m = std::max(m, std::abs(amplitude[i]));
    }
    return m;
  };

  Verdict v;
  v.blocks = blocks;
  double pos_total = 0.0, neg_total = 0.0;
  for (int K : blocks) {
    pos_total += block_sup(K, +1);
    neg_total += block_sup(K, -1);
  }
  v.carrying_sign = pos_total >= neg_total ? 1 : -1;
  for (int K : blocks) {
    v.carrying_sup.push_back(block_sup(K, v.carrying_sign));
    v.opposite_sup.push_back(block_sup(K, -v.carrying_sign));
  }
  const auto [mn, mx] =
      std::minmax_element(v.carrying_sup.begin(), v.carrying_sup.end());
  v.flat = *mn > 0.0 && *mx / *mn <= flat_band;
  // Supremum values this far below the profile's peak are rounding
  // residue; decay and separation checks treat them as zero.
  double peak = 0.0;
  for (const auto& a : amplitude) peak = std::max(peak, std::abs(a));
  const double floor = 1e-13 * peak;
  // One-sidedness: the opposite side must decay by 10x per dyadic block
  // on average (measured across the whole block list, so one uneven
  // octave does not mask a clean overall rate), never increase from one
  // block to the next, and sit well below the carrying side throughout.
  v.one_sided = true;
  for (size_t i = 0; i + 1 < blocks.size(); ++i)
    if (v.opposite_sup[i + 1] > floor &&
        v.opposite_sup[i + 1] > v.opposite_sup[i])
      v.one_sided = false;
  const double required =
      std::pow(10.0, -double(blocks.size() - 1)) * v.opposite_sup.front();
  if (v.opposite_sup.back() > std::max(floor, required)) v.one_sided = false;
  for (size_t i = 0; i < blocks.size(); ++i)
    if (v.opposite_sup[i] > floor &&
        !(v.carrying_sup[i] >= 10.0 * v.opposite_sup[i]))
      v.one_sided = false;
  v.pass = v.flat && v.one_sided;
  return v;
}

void write_amplitude_csv(const AmplitudeProfile& profile,
                         const std::string& path) {
  std::ofstream out(path);
  if (!out) throw format_error("write_amplitude_csv: cannot open " + path);
  out << "xi1,re,im,abs\n";
  out.precision(17);
  for (size_t i = 0; i < profile.xi1.size(); ++i)
    out << profile.xi1[i] << "," << profile.amplitude[i].real() << ","
        << profile.amplitude[i].imag() << "," << std::abs(profile.amplitude[i])
        << "\n";
}

GridField conormal_reference(const TorusGrid& grid, double a) {
  GridField u(grid);
  const double eta = two_pi / grid.n;
  // sum_{k<0} i e^{ik(x-a)} telescopes to i/(e^{ix-ia} - 1) ~ (x-a)^{-1}
  // near the line; the e^{k eta} factor realizes the -i eta regularization.
  for (int k1 = -grid.n / 2; k1 < 0; ++k1)
    u.coeff(k1, 0) =
        cplx(0.0, 1.0) * std::exp(k1 * eta) * std::exp(cplx(0.0, -k1 * a));
  to_physical(u);
  return u;
}

TransportReport transport_model_check(int n_mode, double xi0, double xi1,
                                      int steps) {
  if (!(xi0 >= 1.0) || !(xi1 > xi0))
    throw parameter_error("transport_model_check: need 1 <= xi0 < xi1");
  if (steps < 16) throw parameter_error("transport_model_check: steps < 16");
  const double h = (xi1 - xi0) / steps;
  cplx a(1.0, 0.0);
  TransportReport rep;
  auto rhs = [&](double xi, cplx v) { return cplx(0.0, -double(n_mode)) * v / xi; };
  for (int i = 0; i < steps; ++i) {
    const double xi = xi0 + i * h;
    const cplx k1 = rhs(xi, a);
    const cplx k2 = rhs(xi + h / 2, a + h / 2 * k1);
    const cplx k3 = rhs(xi + h / 2, a + h / 2 * k2);
    const cplx k4 = rhs(xi + h, a + h * k3);
    a += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double s = xi + h;
    rep.max_modulus_dev = std::max(rep.max_modulus_dev, std::abs(std::abs(a) - 1.0));
    double darg = std::arg(a) + n_mode * std::log(s / xi0);
    darg = std::remainder(darg, two_pi);
    rep.max_arg_dev = std::max(rep.max_arg_dev, std::abs(darg));
  }
  return rep;
}

}  // namespace wavelab
