// Acceptance harness: one verdict line per numbered criterion. Usage:
//   acceptance [criterion ...]
// With no arguments all criteria run. Exit status is the number of
// failures among the selected criteria.
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "wavelab/dynamics.hpp"
#include "wavelab/evolution.hpp"
#include "wavelab/lagrangian.hpp"
#include "wavelab/microlocal.hpp"
#include "wavelab/oscillatory.hpp"
#include "wavelab/resolvent.hpp"
#include "wavelab/smooth.hpp"

using namespace wavelab;

namespace {

constexpr double pi = std::numbers::pi;

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) ok = false;
    if (!detail.empty()) detail += "; ";
    detail += what + (cond ? " ok" : " FAILED");
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

double rel_l2(const GridField& a, const GridField& b) {
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < a.spec.size(); ++i) {
    num += std::norm(a.spec[i] - b.spec[i]);
    den += std::norm(b.spec[i]);
  }
  return std::sqrt(num / den);
}

double line_max(const GridField& u, int j1) {
  double m = 0.0;
  for (int j2 = 0; j2 < u.grid.n; ++j2)
    m = std::max(m, std::abs(u.at(j1, j2)));
  return m;
}

EvolutionTrace big_evolution(const SymbolModel& model) {
  TorusGrid g(256);
  GridField f = make_bump(g, -pi / 2, 0.0, 0.5);
  EvolutionConfig cfg;
  cfg.t_final = 50.0;
  cfg.dt = 0.01;
  cfg.snapshot_times = {10.0, 50.0};
  cfg.norm_exponents = {{-0.75}, {0.25}};
  cfg.norm_every = 1.0;
  return evolve_rk4(model, f, cfg);
}

// 1: RK4 vs dense spectral oracle.
Check criterion_1() {
  Check c;
  for (const auto& model : {SymbolModel::p1(), SymbolModel::p2()}) {
    for (int n : {16, 24}) {
      TorusGrid g(n);
      GridField f = make_bump(g, -pi / 2, 0.0, 0.5);
      EvolutionConfig cfg;
      cfg.t_final = 50.0;
      cfg.dt = 0.002;
      cfg.snapshot_times = {1.0, 10.0, 50.0};
      EvolutionTrace tr = evolve_rk4(model, f, cfg);
      for (const auto& snap : tr.snapshots) {
        const double err =
            rel_l2(*snap.field, evolve_spectral_oracle(model, f, snap.time));
        c.require(err <= 1e-6, model.name + " n=" + std::to_string(n) + " t=" +
                                   fmt(snap.time) + " err=" + fmt(err));
      }
    }
  }
  return c;
}

// 2: singularity-formation dichotomy for the double-speed model.
Check criterion_2() {
  Check c;
  EvolutionTrace tr = big_evolution(SymbolModel::p1());
  double max_low = 0.0, low_at_10 = 0.0, high_at_10 = 0.0, high_at_50 = 0.0;
  for (size_t i = 0; i < tr.times.size(); ++i) {
    max_low = std::max(max_low, tr.norms[i][0]);
    if (std::abs(tr.times[i] - 10.0) < 1e-9) {
      low_at_10 = tr.norms[i][0];
      high_at_10 = tr.norms[i][1];
    }
    if (std::abs(tr.times[i] - 50.0) < 1e-9) high_at_50 = tr.norms[i][1];
  }
  c.require(max_low / low_at_10 <= 1.5,
            "H^-0.75 max/at-10=" + fmt(max_low / low_at_10));
  c.require(high_at_50 >= 3.0 * high_at_10,
            "H^0.25 growth=" + fmt(high_at_50 / high_at_10));
  const GridField& u50 = *tr.snapshots[1].field;
  const int n = u50.grid.n;
  const double on_line = line_max(u50, 3 * n / 4);  // x1 = -pi/2
  const double off_line = line_max(u50, 0);         // x1 = 0
  c.require(on_line >= 5.0 * off_line,
            "line contrast=" + fmt(on_line / off_line));
  return c;
}

// 3: two-attractor asymmetry for the half-speed model.
Check criterion_3() {
  Check c;
  EvolutionTrace tr = big_evolution(SymbolModel::p2());
  const GridField& u10 = *tr.snapshots[0].field;
  const GridField& u50 = *tr.snapshots[1].field;
  const int n = u50.grid.n;
  const double near_50 = line_max(u50, 3 * n / 4);  // x1 = -pi/2
  const double far_50 = line_max(u50, n / 4);       // x1 = +pi/2
  const double far_10 = line_max(u10, n / 4);
  c.require(near_50 > far_50, "near/far=" + fmt(near_50 / far_50));
  c.require(far_50 >= 1.5 * far_10, "far growth=" + fmt(far_50 / far_10));
  return c;
}

// 4: limit cycles and Floquet multipliers.
Check criterion_4() {
  Check c;
  auto cycles = find_limit_cycles(SymbolModel::p1(), 0.0);
  c.require(cycles.size() == 4, "cycle count=" + std::to_string(cycles.size()));
  const std::vector<std::pair<double, double>> expected = {
      {-pi / 2, 0.0}, {pi / 2, pi}, {-pi / 2, pi}, {pi / 2, 0.0}};
  for (const auto& [x1, th] : expected) {
    double best = 1e9;
    for (const auto& cy : cycles)
      best = std::min(best, std::abs(std::remainder(cy.x1_star - x1, 2 * pi)) +
                                std::abs(std::remainder(cy.theta_star - th, 2 * pi)));
    c.require(best <= 1e-8, "cycle at (" + fmt(x1) + "," + fmt(th) + ") dev=" + fmt(best));
  }
  const double c_expect = std::exp(-4.0 * pi);
  for (const auto& cy : cycles) {
    c.require(std::abs(cy.period - 2.0 * pi) <= 1e-6,
              "period dev=" + fmt(std::abs(cy.period - 2.0 * pi)));
    if (cy.kind == CycleKind::SINK) {
      c.require(std::abs(cy.c1 - c_expect) / c_expect <= 1e-4,
                "c1 rel=" + fmt(std::abs(cy.c1 - c_expect) / c_expect));
      c.require(std::abs(cy.c2 - c_expect) / c_expect <= 1e-4,
                "c2 rel=" + fmt(std::abs(cy.c2 - c_expect) / c_expect));
      c.require(std::abs(cy.c1 - cy.c2) / c_expect <= 1e-3, "c1 vs c2");
    }
  }
  const double p2_expect = std::exp(-pi);
  for (const auto& cy : find_limit_cycles(SymbolModel::p2(), 0.0))
    if (cy.kind == CycleKind::SINK)
      c.require(std::abs(cy.c1 - p2_expect) / p2_expect <= 1e-4,
                "p2 c1 rel=" + fmt(std::abs(cy.c1 - p2_expect) / p2_expect));
  return c;
}

// 5: transport solution and the phase-derivative identity.
Check criterion_5() {
  Check c;
  const SymbolModel p1 = SymbolModel::p1(), p2 = SymbolModel::p2();
  for (const auto& cy : find_limit_cycles(p1, 0.0))
    if (cy.kind == CycleKind::SINK)
      for (double v : solve_phi(p1, cy))
        c.ok = c.ok && std::abs(v - 0.5) <= 1e-8;
  c.require(c.ok, "p1 phi = 1/2");
  bool p2ok = true;
  for (const auto& cy : find_limit_cycles(p2, 0.0))
    if (cy.kind == CycleKind::SINK)
      for (double v : solve_phi(p2, cy)) p2ok = p2ok && std::abs(v - 2.0) <= 1e-8;
  c.require(p2ok, "p2 phi = 2");
  for (const auto& model : {p1, p2}) {
    double worst = 0.0;
    bool positive = true;
    for (double w : {-0.2, -0.1, 0.0, 0.1, 0.2}) {
      LagrangianSlice slice = build_slice(model, w, SliceSign::PLUS);
      for (const auto& comp : slice.components) {
        for (double v : comp.phi) positive = positive && v > 0.0;
        worst = std::max(worst, phase_derivative_check(model, w, comp).rel_err);
      }
    }
    c.require(positive, model.name + " phi > 0");
    c.require(worst <= 1e-3, model.name + " phase-derivative rel=" + fmt(worst));
  }
  return c;
}

// 6: limiting absorption at n = 128 plus the sector concentration of the
// limiting profile.
Check criterion_6() {
  Check c;
  TorusGrid g(128);
  SymbolModel m = SymbolModel::p1();
  ResolventQuery q;
  q.omega = 0.0;
  q.eps_list = {0.2, 0.1, 0.05, 0.025};
  q.f = make_bump(g, -pi / 2, 0.0, 0.5);
  ResolventResult res = lap_study(m, q);
  double lo = res.norm_table[0][1], hi = lo;
  for (const auto& row : res.norm_table) {
    lo = std::min(lo, row[1]);
    hi = std::max(hi, row[1]);
  }
  c.require(hi / lo <= 2.0, "H^-3/4 band=" + fmt(hi / lo));
  bool dec = true;
  for (size_t i = 0; i + 1 < res.cauchy.size(); ++i)
    dec = dec && res.cauchy[i + 1] < res.cauchy[i];
  c.require(dec, "Cauchy decreasing");
  const double l2_ratio = res.norm_table.back()[3] / res.norm_table.front()[3];
  c.require(l2_ratio >= 2.0, "L2 growth=" + fmt(l2_ratio));

  // Sector concentration of u_infinity: windows (in x1 only) around the
  // two singular lines, sectors of half-width pi/8 around theta = 0 and
  // theta = pi, H^{-3/4} weight, |k| >= 4.
  GridField ui = res.limit;
  for (auto& z : ui.spec) z = -z;
  to_physical(ui);
  auto windowed_mass = [&](double center, double theta, bool sector_only) {
    std::vector<cplx> phys(g.size()), spec;
    for (int j1 = 0; j1 < g.n; ++j1) {
      const double w = circle_window(g.x(j1), center, pi / 2);
      for (int j2 = 0; j2 < g.n; ++j2)
        phys[j1 * g.n + j2] = ui.phys[j1 * g.n + j2] * w;
    }
    phys_to_spec(g, phys, spec);
    double mass = 0.0;
    for (int i1 = 0; i1 < g.n; ++i1) {
      const int k1 = g.freq(i1);
      for (int i2 = 0; i2 < g.n; ++i2) {
        const int k2 = g.freq(i2);
        if (k1 * k1 + k2 * k2 < 16) continue;
        if (sector_only) {
          double d = std::remainder(std::atan2(double(k2), double(k1)) - theta,
                                    2 * pi);
          if (std::abs(d) > pi / 8) continue;
        }
        mass += std::pow(japanese_bracket(k1, k2), -1.5) *
                std::norm(spec[i1 * g.n + i2]);
      }
    }
    return mass;
  };
  const double in_sectors =
      windowed_mass(-pi / 2, 0.0, true) + windowed_mass(pi / 2, pi, true);
  const double total =
      windowed_mass(-pi / 2, 0.0, false) + windowed_mass(pi / 2, pi, false);
  c.require(in_sectors >= 0.9 * total,
            "sector fraction=" + fmt(in_sectors / total));
  return c;
}

// 7: conormal amplitude flatness for the reference distribution and for
// the evolved field.
Check criterion_7() {
  Check c;
  {
    TorusGrid g(512);
    GridField ref = conormal_reference(g, pi / 2);
    GridField bump = make_bump(g, pi / 2, pi, 1.2);
    for (int i = 0; i < g.size(); ++i) ref.phys[i] *= bump.phys[i];
    to_spectral(ref);
    auto v = conormal_amplitude(ref, pi / 2, 0).verdict();
    c.require(v.pass && v.carrying_sign == -1,
              "reference distribution verdict");
  }
  {
    EvolutionTrace tr = big_evolution(SymbolModel::p1());
    const GridField& u50 = *tr.snapshots[1].field;
    auto v = conormal_amplitude(u50, -pi / 2, 0).verdict();
    c.require(v.pass, "evolved field verdict (flat=" +
                          std::string(v.flat ? "yes" : "no") + ", one-sided=" +
                          (v.one_sided ? "yes" : "no") + ")");
    c.require(v.carrying_sign == +1, "carrying sign +1");
  }
  return c;
}

// 8: stationary-phase dichotomy and leading-term constant.
Check criterion_8() {
  Check c;
  const std::vector<double> xi = {8.0, 16.0, 32.0, 64.0, 128.0, 256.0};
  auto att = stationary_phase_compare(OscillatoryModel::attracting(), xi);
  c.require(att.slope <= -1.2, "attracting slope=" + fmt(att.slope));
  auto rep = stationary_phase_compare(OscillatoryModel::repelling(), xi);
  c.require(rep.pass, "repelling |J| xi^2 bounded");
  OscillatoryModel m = OscillatoryModel::attracting();
  const cplx J = eval_J(m, m.saturation_time(64.0), 64.0);
  const cplx lead = leading_term(m, 64.0);
  c.require(std::abs(J - lead) / std::abs(lead) <= 0.15,
            "leading-term match=" + fmt(std::abs(J - lead) / std::abs(lead)));
  return c;
}

// 9: h log(1/h) sharpness dichotomy.
Check criterion_9() {
  Check c;
  std::vector<double> h_list;
  for (int k = 4; k <= 14; ++k) h_list.push_back(std::pow(2.0, -k));
  auto psi = [](double s) { return plateau(s, 0.0, 2.0); };
  auto odd = log_scaling_L(
      [](double) { return 0.0; },
      [&](double s, double w) { return psi(s) * w * std::exp(-w * w); },
      h_list, 2.0, 6.0);
  double mn = odd.back().ratio, mx = mn;
  for (size_t i = odd.size() - 4; i < odd.size(); ++i) {
    mn = std::min(mn, odd[i].ratio);
    mx = std::max(mx, odd[i].ratio);
  }
  c.require(mx / mn <= 1.2,
            "odd-A ratio stability over last 4 h=" + fmt(mx / mn));
  auto even = log_scaling_L(
      [](double) { return 0.0; },
      [&](double s, double w) { return psi(s) * std::exp(-w * w); }, h_list,
      2.0, 6.0);
  const double drop =
      even[even.size() - 4].ratio / even.back().ratio;
  c.require(drop >= 2.0, "even-A ratio drop over last 4 h=" + fmt(drop));
  return c;
}

// 10: conormal transport model against the closed form.
Check criterion_10() {
  Check c;
  for (int n : {0, 3, 5, 11}) {
    auto r = transport_model_check(n, 1.0, 8.0);
    c.require(r.max_modulus_dev <= 1e-8 && r.max_arg_dev <= 1e-8,
              "n=" + std::to_string(n) + " dev=" +
                  fmt(std::max(r.max_modulus_dev, r.max_arg_dev)));
  }
  return c;
}

// 11: self-adjointness and boundedness.
Check criterion_11() {
  Check c;
  TorusGrid g(16);
  SymbolModel m = SymbolModel::p1();
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> nd;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    GridField u(g), v(g);
    for (auto& z : u.spec) z = cplx(nd(rng), nd(rng));
    for (auto& z : v.spec) z = cplx(nd(rng), nd(rng));
    to_physical(u);
    to_physical(v);
    GridField pu = apply_operator(m, u), pv = apply_operator(m, v);
    worst = std::max(worst,
                     std::abs(inner(pu.spec, v.spec) - inner(u.spec, pv.spec)));
  }
  c.require(worst <= 1e-12, "symmetry defect=" + fmt(worst));
  SpectrumScan scan = spectrum_scan(m, TorusGrid(24), -10.0, 10.0);
  c.require(scan.min_eig >= -3.0 - 1e-12 && scan.max_eig <= 3.0 + 1e-12,
            "spectrum in [" + fmt(scan.min_eig) + "," + fmt(scan.max_eig) + "]");
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  std::map<int, std::function<Check()>> checks = {
      {1, criterion_1}, {2, criterion_2},   {3, criterion_3},
      {4, criterion_4}, {5, criterion_5},   {6, criterion_6},
      {7, criterion_7}, {8, criterion_8},   {9, criterion_9},
      {10, criterion_10}, {11, criterion_11}};
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty())
    for (const auto& [k, f] : checks) selected.push_back(k);

  int failures = 0;
  for (int k : selected) {
    auto it = checks.find(k);
    if (it == checks.end()) {
      std::printf("criterion %d: UNKNOWN\n", k);
      ++failures;
      continue;
    }
    Check c;
    try {
      c = it->second();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = std::string("exception: ") + e.what();
    }
    std::printf("criterion %d: %s (%s)\n", k, c.ok ? "PASS" : "FAIL",
                c.detail.c_str());
    std::fflush(stdout);
    if (!c.ok) ++failures;
  }
  return failures;
}
