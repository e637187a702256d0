#include "wavelab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wavelab/errors.hpp"

namespace wavelab {

namespace {

double wrap_2pi(double a) {
  a = std::fmod(a, two_pi);
  if (a < 0) a += two_pi;
  return a;
}

double angle_dist(double a, double b) {
  double d = std::abs(wrap_2pi(a) - wrap_2pi(b));
  return std::min(d, two_pi - d);
}

// 3D reduced field on (x1, x2, theta); r is carried separately since the
// (x, theta) components do not depend on it.
struct Field3 {
  const SymbolModel& model;
  double sign;  // +1 forward, -1 time-reversed

  std::array<double, 3> operator()(const std::array<double, 3>& s) const {
    const double st = std::sin(s[2]), ct = std::cos(s[2]);
    const double vx1 = model.potential_dx1(s[0], s[1]);
    const double vx2 = model.potential_dx2(s[0], s[1]);
    return {sign * (-st * ct), sign * (ct * ct), sign * (st * vx1 - ct * vx2)};
  }

  double rdot(const std::array<double, 3>& s) const {
    const double st = std::sin(s[2]), ct = std::cos(s[2]);
    return sign * -(ct * model.potential_dx1(s[0], s[1]) +
                    st * model.potential_dx2(s[0], s[1]));
  }

  // Jacobian of the 3D field.
  std::array<std::array<double, 3>, 3> jacobian(const std::array<double, 3>& s) const {
    const double st = std::sin(s[2]), ct = std::cos(s[2]);
    const double vx1 = model.potential_dx1(s[0], s[1]);
    const double vx2 = model.potential_dx2(s[0], s[1]);
    const double v11 = model.potential_dx1x1(s[0], s[1]);
    const double v12 = model.potential_dx1x2(s[0], s[1]);
    const double v22 = model.potential_dx2x2(s[0], s[1]);
    std::array<std::array<double, 3>, 3> j{};
    j[0] = {0.0, 0.0, sign * -std::cos(2.0 * s[2])};
    j[1] = {0.0, 0.0, sign * -std::sin(2.0 * s[2])};
    j[2] = {sign * (st * v11 - ct * v12), sign * (st * v12 - ct * v22),
            sign * (ct * vx1 + st * vx2)};
    return j;
  }
};

// One RK4 step of the 3D state plus r plus an optional tangent vector.
struct StepState {
  std::array<double, 3> s;
  double r = 0.0;
  std::array<double, 3> v{0.0, 0.0, 0.0};
  bool with_tangent = false;
};

void rk4_step(const Field3& f, StepState& st, double dt) {
  auto deriv = [&](const StepState& a) {
    StepState d;
    d.s = f(a.s);
    d.r = f.rdot(a.s);
    if (a.with_tangent) {
      const auto j = f.jacobian(a.s);
      for (int i = 0; i < 3; ++i)
        d.v[i] = j[i][0] * a.v[0] + j[i][1] * a.v[1] + j[i][2] * a.v[2];
    }
    d.with_tangent = a.with_tangent;
    return d;
  };
  auto add = [](const StepState& a, const StepState& d, double h) {
    StepState b = a;
    for (int i = 0; i < 3; ++i) b.s[i] = a.s[i] + h * d.s[i];
    b.r = a.r + h * d.r;
    if (a.with_tangent)
      for (int i = 0; i < 3; ++i) b.v[i] = a.v[i] + h * d.v[i];
    return b;
  };
  const StepState k1 = deriv(st);
  const StepState k2 = deriv(add(st, k1, dt / 2));
  const StepState k3 = deriv(add(st, k2, dt / 2));
  const StepState k4 = deriv(add(st, k3, dt));
  for (int i = 0; i < 3; ++i)
    st.s[i] += (dt / 6) * (k1.s[i] + 2 * k2.s[i] + 2 * k3.s[i] + k4.s[i]);
  st.r += (dt / 6) * (k1.r + 2 * k2.r + 2 * k3.r + k4.r);
  if (st.with_tangent)
    for (int i = 0; i < 3; ++i)
      st.v[i] += (dt / 6) * (k1.v[i] + 2 * k2.v[i] + 2 * k3.v[i] + k4.v[i]);
  if (!std::isfinite(st.s[0]) || !std::isfinite(st.s[2]))
    throw numerical_error("flow integration produced NaN");
}

constexpr double kFlowDt = 5e-4;

// Result of one section-map traversal from {x2 = 0} back to itself
// (x2 advancing by +-2pi depending on orientation).
struct SectionReturn {
  double x1 = 0.0;
  double theta = 0.0;
  double time = 0.0;
  double delta_r = 0.0;                  // r gain in integration time
  std::array<double, 3> tangent{0, 0, 0};
  std::array<double, 3> state{0, 0, 0};  // at return, x2 = +-2pi unwrapped
};

SectionReturn section_traverse(const Field3& f, double x1, double theta,
                               bool with_tangent, double tangent_dtheta_dx1) {
  StepState st;
  st.s = {x1, 0.0, theta};
  st.r = 0.0;
  st.with_tangent = with_tangent;
  if (with_tangent) st.v = {1.0, 0.0, tangent_dtheta_dx1};

  const double x2dot0 = f(st.s)[1];
  if (std::abs(x2dot0) < 1e-6)
    throw solver_error("Poincare section not transversal at start x1=" +
                       std::to_string(x1));
  const double target = x2dot0 > 0 ? two_pi : -two_pi;

  double t = 0.0;
  const double t_max = 200.0;
  while (t < t_max) {
    StepState prev = st;
    rk4_step(f, st, kFlowDt);
    t += kFlowDt;
    const bool crossed = target > 0 ? st.s[1] >= target : st.s[1] <= target;
    if (!crossed) continue;
    // Newton refinement of the crossing time from the pre-step state.
    st = prev;
    t -= kFlowDt;
    double dt_frac = kFlowDt;
    for (int it = 0; it < 8; ++it) {
      const double x2dot = f(st.s)[1];
      if (std::abs(x2dot) < 1e-6)
        throw solver_error("Poincare section not transversal near return");
      dt_frac = (target - st.s[1]) / x2dot;
      if (std::abs(dt_frac) < 1e-15) break;
      rk4_step(f, st, dt_frac);
      t += dt_frac;
    }
    SectionReturn ret;
    ret.x1 = st.s[0];
    ret.theta = st.s[2];
    ret.time = t;
    ret.delta_r = st.r;
    ret.state = st.s;
    if (with_tangent) {
      // Project the transported tangent back onto the section: remove the
      // flow-direction component so that delta x2 = 0.
      const auto fl = f(st.s);
      const double a = st.v[1] / fl[1];
      ret.tangent = {st.v[0] - a * fl[0], 0.0, st.v[2] - a * fl[2]};
    }
    return ret;
  }
  throw solver_error("section return not found within t=200");
}

}  // namespace

PhasePoint PhasePoint::reduced() const {
  return {wrap_2pi(x1), wrap_2pi(x2), wrap_2pi(theta), r};
}

std::array<double, 4> vector_field(const SymbolModel& model, const PhasePoint& p) {
  Field3 f{model, +1.0};
  const std::array<double, 3> s{p.x1, p.x2, p.theta};
  const auto d = f(s);
  return {d[0], d[1], d[2], f.rdot(s)};
}

std::vector<PhasePoint> integrate_flow(const SymbolModel& model, PhasePoint p0,
                                       double t_span, double dt, bool reverse) {
  if (!(dt > 0.0 && dt <= 0.01))
    throw parameter_error("integrate_flow: dt must lie in (0, 0.01]");
  Field3 f{model, reverse ? -1.0 : +1.0};
  StepState st;
  st.s = {p0.x1, p0.x2, p0.theta};
  st.r = p0.r;
  const long n = std::lround(t_span / dt);
  std::vector<PhasePoint> traj;
  traj.reserve(n + 1);
  traj.push_back(p0);
  for (long i = 0; i < n; ++i) {
    rk4_step(f, st, dt);
    traj.push_back({st.s[0], st.s[1], st.s[2], st.r});
  }
  return traj;
}

double solve_theta(const SymbolModel& model, double x1, double x2, double omega,
                   double theta_guess) {
  const double rhs = omega - model.potential_at(x1, x2);
  if (std::abs(rhs) > 1.0)
    throw solver_error("solve_theta: no theta branch, |omega - V| > 1");
  const double t0 = std::asin(std::clamp(rhs, -1.0, 1.0));
  const double a = wrap_2pi(t0);
  const double b = wrap_2pi(std::numbers::pi - t0);
  return angle_dist(a, theta_guess) <= angle_dist(b, theta_guess) ? a : b;
}

LimitCycle floquet_analysis(const SymbolModel& model, const LimitCycle& cycle) {
  LimitCycle out = cycle;
  const bool is_sink = cycle.kind == CycleKind::SINK;
  // Integrate in the contracting orientation so the section-map fixed
  // point is numerically stable; multipliers are inverted back afterwards.
  Field3 f{model, is_sink ? +1.0 : -1.0};

  const double qx1 = model.potential_dx1(cycle.x1_star, 0.0);
  const double qth = std::cos(cycle.theta_star);
  const double dtheta_dx1 = -qx1 / qth;

  const auto ret = section_traverse(f, cycle.x1_star, cycle.theta_star, true,
                                    dtheta_dx1);
  if (cycle.period > 0.0 && std::abs(ret.time - cycle.period) > 1e-6)
    throw solver_error("floquet_analysis: period mismatch beyond 1e-6");
  out.period = ret.time;

  const double c1_stable = ret.tangent[0];

  // Finite-difference cross-check of the section-map derivative
  // (Richardson from h and h/2).
  {
    const double h = 1e-2;
    auto smap = [&](double x1) {
      const double th = solve_theta(model, x1, 0.0, cycle.omega, cycle.theta_star);
      return section_traverse(f, x1, th, false, 0.0).x1;
    };
    const double d1 = (smap(cycle.x1_star + h) - smap(cycle.x1_star - h)) / (2 * h);
    const double d2 =
        (smap(cycle.x1_star + h / 2) - smap(cycle.x1_star - h / 2)) / h;
    const double fd = (4.0 * d2 - d1) / 3.0;
    const double rel = std::abs(fd - c1_stable) / std::max(std::abs(c1_stable), 1e-300);
    if (rel > 1e-3)
      throw solver_error(
          "floquet_analysis: variational and finite-difference multipliers "
          "disagree (rel " + std::to_string(rel) + ")");
  }

  const double int_beta_stable = ret.delta_r;
  out.c1 = is_sink ? c1_stable : 1.0 / c1_stable;
  out.int_beta = is_sink ? int_beta_stable : -int_beta_stable;
  out.c2 = std::exp(-out.int_beta);

  // Sample one period and the radial rate in forward orientation.
  const int m = 512;
  const double dt = out.period / m;
  Field3 ff{model, +1.0};
  StepState st;
  st.s = {cycle.x1_star, 0.0, cycle.theta_star};
  out.points.clear();
  out.beta.clear();
  for (int i = 0; i < m; ++i) {
    out.points.push_back({st.s[0], st.s[1], st.s[2], st.r});
    out.beta.push_back(ff.rdot(st.s));
    // dt here is ~1e-2; substep for accuracy.
    const int sub = 32;
    for (int k = 0; k < sub; ++k) rk4_step(ff, st, dt / sub);
  }
  return out;
}

std::vector<LimitCycle> find_limit_cycles(const SymbolModel& model, double omega) {
  if (std::abs(omega) > 0.3)
    throw parameter_error("find_limit_cycles: |omega| > 0.3");

  std::vector<LimitCycle> cycles;
  for (const bool forward : {true, false}) {
    Field3 f{model, forward ? +1.0 : -1.0};

    // Seed Sigma(omega) on the x2 = 0 circle, both theta branches, settle
    // toward the attracting cycles of this orientation.
    struct Candidate {
      double x1, theta;
    };
    std::vector<Candidate> candidates;
    const int n_seed = 23;
    for (int i = 0; i < n_seed; ++i) {
      const double x1 = 0.05 + two_pi * i / n_seed;
      const double rhs = omega - model.potential_at(x1, 0.0);
      if (std::abs(rhs) > 1.0) continue;
      const double t0 = std::asin(rhs);
      for (const double theta : {wrap_2pi(t0), wrap_2pi(std::numbers::pi - t0)}) {
        StepState st;
        st.s = {x1, 0.0, theta};
        try {
          const long n_steps = std::lround(80.0 / 2e-3);
          for (long k = 0; k < n_steps; ++k) rk4_step(f, st, 2e-3);
          // Land on the section to normalize the candidate.
          const auto ret =
              section_traverse(f, wrap_2pi(st.s[0]),
                               solve_theta(model, wrap_2pi(st.s[0]), 0.0, omega,
                                           st.s[2]),
                               false, 0.0);
          candidates.push_back({wrap_2pi(ret.x1), wrap_2pi(ret.theta)});
        } catch (const solver_error&) {
          continue;  // seed failed to recur; not a diagnostic failure
        }
      }
    }

    // Cluster, then refine each cluster via 1D secant on the section map.
    std::vector<Candidate> clusters;
    for (const auto& c : candidates) {
      bool merged = false;
      for (auto& cl : clusters)
        if (angle_dist(c.x1, cl.x1) < 1e-3 && angle_dist(c.theta, cl.theta) < 1e-3) {
          merged = true;
          break;
        }
      if (!merged) clusters.push_back(c);
    }

    for (const auto& cl : clusters) {
      auto gfun = [&](double x1) {
        const double th = solve_theta(model, x1, 0.0, omega, cl.theta);
        return section_traverse(f, x1, th, false, 0.0).x1 - x1;
      };
      double x_prev = cl.x1, x_cur = cl.x1 + 1e-5;
      double g_prev = gfun(x_prev), g_cur = gfun(x_cur);
      bool ok = false;
      for (int it = 0; it < 40; ++it) {
        if (std::abs(g_cur) < 1e-12) {
          ok = true;
          break;
        }
        const double denom = g_cur - g_prev;
        if (denom == 0.0) break;
        const double x_next = x_cur - g_cur * (x_cur - x_prev) / denom;
        x_prev = x_cur;
        g_prev = g_cur;
        x_cur = x_next;
        g_cur = gfun(x_cur);
      }
      if (!ok && std::abs(g_cur) > 1e-10) continue;

      LimitCycle cyc;
      cyc.omega = omega;
      cyc.kind = forward ? CycleKind::SINK : CycleKind::SOURCE;
      cyc.x1_star = wrap_2pi(x_cur);
      cyc.theta_star = solve_theta(model, cyc.x1_star, 0.0, omega, cl.theta);
      const auto ret = section_traverse(f, cyc.x1_star, cyc.theta_star, false, 0.0);
      cyc.period = ret.time;

      bool dup = false;
      for (const auto& existing : cycles)
        if (existing.kind == cyc.kind &&
            angle_dist(existing.x1_star, cyc.x1_star) < 1e-4 &&
            angle_dist(existing.theta_star, cyc.theta_star) < 1e-4)
          dup = true;
      if (dup) continue;

      cycles.push_back(floquet_analysis(model, cyc));
    }
  }

  std::sort(cycles.begin(), cycles.end(), [](const LimitCycle& a, const LimitCycle& b) {
    if (a.kind != b.kind) return a.kind == CycleKind::SINK;
    return a.x1_star < b.x1_star;
  });
  return cycles;
}

std::string cycles_to_json(const SymbolModel& model, double omega,
                           const std::vector<LimitCycle>& cycles) {
  nlohmann::json j;
  j["model"] = model.name;
  j["omega"] = omega;
  j["cycles"] = nlohmann::json::array();
  for (const auto& c : cycles) {
    j["cycles"].push_back({{"kind", c.kind == CycleKind::SINK ? "sink" : "source"},
                           {"x1", c.x1_star},
                           {"theta", c.theta_star},
                           {"period", c.period},
                           {"c1", c.c1},
                           {"c2", c.c2},
                           {"int_beta", c.int_beta}});
  }
  return j.dump(2);
}

}  // namespace wavelab
