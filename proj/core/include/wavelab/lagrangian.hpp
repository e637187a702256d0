#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wavelab/dynamics.hpp"

namespace wavelab {

enum class SliceSign { PLUS, MINUS };

// Conormal descriptor for cycles of the form {x1 = const, theta in {0, pi}}:
// the cone over the cycle is the conormal bundle of {x1 = x1_c} with the
// xi1 sign given by theta (theta = 0 -> +1, theta = pi -> -1), and the
// local generating function is F(omega, xi) = c(omega) xi1.
struct ConormalDescriptor {
  double x1_c = 0.0;
  int xi1_sign = +1;
};

// One component of Lambda^pm_omega: a cycle together with the solution of
// the periodic transport equation phi' + beta phi = 1 (Phi = |xi| phi on
// the cone) and the invariant density weight mu(tau), normalized to
// integral 1 over the period.
struct SliceComponent {
  LimitCycle cycle;
  std::optional<ConormalDescriptor> conormal;
  std::vector<double> phi;  // phi(tau) at the cycle samples
  std::vector<double> mu;   // invariant density weight at the samples
};

struct LagrangianSlice {
  double omega = 0.0;
  SliceSign sign = SliceSign::PLUS;
  std::vector<SliceComponent> components;
};

// Builds the slice from the cycles at `omega`: one component per SINK
// (PLUS) or SOURCE (MINUS) cycle, with phi and mu filled.
LagrangianSlice build_slice(const SymbolModel& model, double omega, SliceSign sign);

// Unique periodic solution of phi' + beta(tau) phi = 1 along the cycle,
// via the closed-form integrating factor. Throws on degenerate cycles
// (|1 - e^{-int beta}| < 1e-10).
std::vector<double> solve_phi(const SymbolModel& model, const LimitCycle& cycle);

// Invariant density mu(tau) = const / |cycle speed|, normalized so the
// trapezoid integral over one period equals 1.
std::vector<double> invariant_density(const LimitCycle& cycle);

struct PhaseDerivativeReport {
  double c_prime = 0.0;          // d x1_c / d omega by centered differences
  double minus_phi_scaled = 0.0; // -xi1_sign * phi on the component
  double rel_err = 0.0;
};

// Checks d/domega F = -Phi on a conormal component: compares the
// finite-difference drift of the cycle position with -xi1_sign * phi.
// h = 1e-4 for the omega differences.
PhaseDerivativeReport phase_derivative_check(const SymbolModel& model, double omega,
                                             const SliceComponent& component);

// Slice report JSON per the documented schema. Components without a
// conormal descriptor are reported with "unsupported geometry" and no
// phase-derivative figures.
std::string slice_to_json(const SymbolModel& model, const LagrangianSlice& slice);

}  // namespace wavelab
