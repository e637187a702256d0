#pragma once

#include <array>
#include <string>
#include <vector>

#include "wavelab/operator.hpp"

namespace wavelab {

// Point in the compactified phase space coordinates: position x mod 2pi,
// direction angle theta of xi, and r = log|xi|.
struct PhasePoint {
  double x1 = 0.0;
  double x2 = 0.0;
  double theta = 0.0;
  double r = 0.0;

  PhasePoint reduced() const;  // angles wrapped to [0, 2pi)
};

// Rescaled Hamiltonian field at fiber infinity, written in (x, theta, r):
//   x1'    = -sin(theta) dq/dtheta
//   x2'    =  cos(theta) dq/dtheta
//   theta' =  sin(theta) dq/dx1 - cos(theta) dq/dx2
//   r'     = -(cos(theta) dq/dx1 + sin(theta) dq/dx2)
// with q(x, theta) = sin(theta) + V(x). The (x, theta) part is independent
// of r and conserves q.
std::array<double, 4> vector_field(const SymbolModel& model, const PhasePoint& p);

// Fixed-step RK4 integration; dt <= 0.01. Returns sampled trajectory
// including both endpoints. reverse=true integrates the time-reversed field.
std::vector<PhasePoint> integrate_flow(const SymbolModel& model, PhasePoint p0,
                                       double t_span, double dt,
                                       bool reverse = false);

enum class CycleKind { SINK, SOURCE };

// Hyperbolic limit cycle of the flow on Sigma(omega) with its Poincare-map
// data. For the built-in models cycles are {x1 = x1_star, theta = theta_star,
// x2 free}; `points` stores one sampled period in any case.
struct LimitCycle {
  double omega = 0.0;
  CycleKind kind = CycleKind::SINK;
  double x1_star = 0.0;
  double theta_star = 0.0;
  double period = 0.0;
  std::vector<PhasePoint> points;   // sampled over one period
  std::vector<double> beta;         // radial rate r'(tau) at the samples
  double int_beta = 0.0;            // integral of beta over one period
  double c1 = 0.0;                  // transverse Floquet multiplier in Sigma
  double c2 = 0.0;                  // radial (rho-direction) multiplier e^{-int_beta}
};

// Solve q(x1, x2, theta) = omega for theta near theta_guess (1D Newton).
double solve_theta(const SymbolModel& model, double x1, double x2, double omega,
                   double theta_guess);

// Seeds Sigma(omega), integrates forward/backward, clusters recurrent
// orbits, refines each on the Poincare section {x2 = 0}, classifies
// SINK/SOURCE and fills Floquet data. |omega| <= 0.3 for built-ins.
std::vector<LimitCycle> find_limit_cycles(const SymbolModel& model, double omega);

// Variational (tangent) Floquet analysis around one period; fills c1, c2,
// beta and cross-checks c1 against a finite-difference Jacobian of the
// section map (the two must agree to 1e-3 relative).
LimitCycle floquet_analysis(const SymbolModel& model, const LimitCycle& cycle);

// Cycle report JSON per the documented schema.
std::string cycles_to_json(const SymbolModel& model, double omega,
                           const std::vector<LimitCycle>& cycles);

}  // namespace wavelab
