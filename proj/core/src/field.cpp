#include "wavelab/field.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "wavelab/errors.hpp"

namespace wavelab {

namespace {

// FFTW planner is not thread-safe; plans are cached per grid size and
// executed via the new-array interface (execute_dft is thread-safe).
struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

std::mutex planner_mutex;

PlanPair& plans_for(int n) {
  static std::map<int, PlanPair> cache;
  std::lock_guard<std::mutex> lock(planner_mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<cplx> a(size_t(n) * n), b(size_t(n) * n);
  auto* pa = reinterpret_cast<fftw_complex*>(a.data());
  auto* pb = reinterpret_cast<fftw_complex*>(b.data());
  PlanPair p;
  p.fwd = fftw_plan_dft_2d(n, n, pa, pb, FFTW_FORWARD, FFTW_ESTIMATE);
  p.bwd = fftw_plan_dft_2d(n, n, pa, pb, FFTW_BACKWARD, FFTW_ESTIMATE);
  return cache.emplace(n, p).first->second;
}

bool all_finite(const std::vector<cplx>& v) {
  return std::all_of(v.begin(), v.end(), [](const cplx& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

}  // namespace

void phys_to_spec(const TorusGrid& grid, const std::vector<cplx>& phys,
                  std::vector<cplx>& spec) {
  if (!all_finite(phys))
    throw numerical_error("to_spectral: non-finite values in physical data");
  spec.resize(phys.size());
  PlanPair& p = plans_for(grid.n);
  fftw_execute_dft(p.fwd,
                   reinterpret_cast<fftw_complex*>(const_cast<cplx*>(phys.data())),
                   reinterpret_cast<fftw_complex*>(spec.data()));
  const double scale = 1.0 / grid.size();
  for (auto& z : spec) z *= scale;
}

void spec_to_phys(const TorusGrid& grid, const std::vector<cplx>& spec,
                  std::vector<cplx>& phys) {
  if (!all_finite(spec))
    throw numerical_error("to_physical: non-finite values in spectral data");
  phys.resize(spec.size());
  PlanPair& p = plans_for(grid.n);
  fftw_execute_dft(p.bwd,
                   reinterpret_cast<fftw_complex*>(const_cast<cplx*>(spec.data())),
                   reinterpret_cast<fftw_complex*>(phys.data()));
}

void to_spectral(GridField& field) { phys_to_spec(field.grid, field.phys, field.spec); }

void to_physical(GridField& field) { spec_to_phys(field.grid, field.spec, field.phys); }

double sobolev_norm(const TorusGrid& grid, const std::vector<cplx>& spec,
                    SobolevSpec s) {
  const int n = grid.n;
  double acc = 0.0;
  for (int i1 = 0; i1 < n; ++i1) {
    const int k1 = grid.freq(i1);
    for (int i2 = 0; i2 < n; ++i2) {
      const int k2 = grid.freq(i2);
      const double w = std::pow(japanese_bracket(k1, k2), 2.0 * s.s);
      acc += w * std::norm(spec[size_t(i1) * n + i2]);
    }
  }
  return std::sqrt(acc);
}

double sobolev_norm(const GridField& field, SobolevSpec s) {
  return sobolev_norm(field.grid, field.spec, s);
}

double l2_norm(const std::vector<cplx>& spec) {
  double acc = 0.0;
  for (const auto& z : spec) acc += std::norm(z);
  return std::sqrt(acc);
}

cplx inner(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  cplx acc{};
  for (size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

GridField make_bump(const TorusGrid& grid, double cx, double cy, double sigma) {
  if (!(sigma > 0.0 && sigma <= std::numbers::pi / 2))
    throw parameter_error("make_bump: sigma must lie in (0, pi/2]");
  GridField f(grid);
  const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
  for (int j1 = 0; j1 < grid.n; ++j1) {
    const double x1 = grid.x(j1);
    for (int j2 = 0; j2 < grid.n; ++j2) {
      const double x2 = grid.x(j2);
      double v = 0.0;
      for (int m1 = -3; m1 <= 3; ++m1)
        for (int m2 = -3; m2 <= 3; ++m2) {
          const double d1 = x1 - cx - two_pi * m1;
          const double d2 = x2 - cy - two_pi * m2;
          v += std::exp(-(d1 * d1 + d2 * d2) * inv2s2);
        }
      f.at(j1, j2) = v;
    }
  }
  to_spectral(f);
  return f;
}

}  // namespace wavelab
