#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace wavelab {

using cplx = std::complex<double>;

// One-phase-variable oscillatory model on the ray xi > 0:
//   J(t, xi) = int phi(w) a(w, xi) e^{-i F(w, xi)} g_t(w) dw,
//   g_t(w) = (1 - e^{-i t w}) / (i w),  g_t(0) = t,
// with F(w, xi) = c(w) xi homogeneous of order 1 and a a symbol of order
// `symbol_order` cut off below xi = 1. The sign of c'(0) decides the
// dichotomy: attracting (c' < 0) produces the nonzero leading term,
// repelling (c' > 0) produces rapid decay.
struct OscillatoryModel {
  // c(w) = sum_j c_coeffs[j] w^j unless `builtin_c` is set, in which case
  // c(w) = -acos(-w/2): the sink position of the standard double-well
  // multiplier model, with c(0) = -pi/2 and c'(0) = -1/2.
  std::vector<double> c_coeffs;
  bool builtin_c = false;
  double symbol_order = -0.5;
  double phi_delta = 0.3;

  double c(double w) const;
  double c_prime(double w) const;
  double F(double w, double xi) const { return c(w) * xi; }
  double a(double w, double xi) const;  // real-valued symbol
  double phi(double w) const;           // smooth cutoff, phi(0) = 1
  double phi0() const { return 1.0; }

  double max_c_prime() const;  // max |c'| over the phi support
  int dF_sign() const;         // sign of d/dw F(0, xi) for xi > 0
  double saturation_time(double xi) const { return 8.0 * xi * max_c_prime(); }

  void validate() const;

  static OscillatoryModel attracting();  // builtin c, c'(0) = -1/2
  static OscillatoryModel repelling();   // c(w) = -pi/2 + w/2, c'(0) = +1/2
  static OscillatoryModel from_json_text(const std::string& text);
  static OscillatoryModel from_json_file(const std::string& path);
};

// Adaptive quadrature of the J integral; absolute tolerance 1e-10 (1 + t).
cplx eval_J(const OscillatoryModel& model, double t, double xi);

// 2 pi a(0, xi) phi(0) e^{-i F(0, xi)} when c'(0) < 0, else 0.
cplx leading_term(const OscillatoryModel& model, double xi);

struct StationaryPhaseRow {
  double xi = 0.0;
  cplx J;
  double err = 0.0;       // |J - leading|
  double weighted = 0.0;  // err * <xi>^{3/2 - 0.1} (attracting)
                          // or |J| * xi^2 (repelling)
};

struct StationaryPhaseReport {
  bool attracting = false;
  std::vector<StationaryPhaseRow> rows;
  double slope = 0.0;  // log-log fit of err vs xi, xi = 8 excluded
  bool pass = false;   // attracting: slope <= -1.2; repelling: weighted
                       // column maximized at xi = 8
};

// Evaluates J at t = saturation_time(xi) over a dyadic xi list in [8, 256].
StationaryPhaseReport stationary_phase_compare(const OscillatoryModel& model,
                                               const std::vector<double>& xi_list);

void write_stationary_csv(const StationaryPhaseReport& report,
                          const std::string& path);

struct LogScalingRow {
  double h = 0.0;
  cplx L;
  double ratio = 0.0;  // |L| / (h log(1/h))
};

// L(h) = int_0^inf int e^{(i/h)(G(w) + s w)} A(s, w) dw ds. The half-line
// s-integral is evaluated analytically per panel (polynomial interpolation
// against exact oscillatory moments); the w-integral is adaptive. A must
// vanish for s >= s_max and |w| >= omega_max.
std::vector<LogScalingRow> log_scaling_L(
    const std::function<double(double)>& G,
    const std::function<double(double, double)>& A,  // A(s, w)
    const std::vector<double>& h_list, double s_max, double omega_max);

void write_log_scaling_csv(const std::vector<LogScalingRow>& rows,
                           const std::string& path);

}  // namespace wavelab
