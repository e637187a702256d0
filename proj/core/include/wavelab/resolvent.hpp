#pragma once

#include <string>
#include <vector>

#include "wavelab/operator.hpp"

namespace wavelab {

struct ResolventOptions {
  int restart = 300;
  int max_restarts = 60;
  double tol = 1e-10;  // relative residual contract
  bool force_iterative = false;  // dense path is used when n <= 64 otherwise
};

// Solves (P - omega - i eps) u = f for eps > 0. Dense LU for n <= 64,
// otherwise restarted GMRES on the matrix-free operator with the diagonal
// free-multiplier preconditioner (m(k) - omega - i eps)^{-1}.
// Residual is verified against the contract; solver_error on failure.
GridField resolve(const SymbolModel& model, double omega, double eps,
                  const GridField& f, const ResolventOptions& opts = {});

struct ResolventQuery {
  double omega = 0.0;  // |omega| <= delta, default delta = 0.3
  std::vector<double> eps_list;  // strictly decreasing, min >= 1e-4
  GridField f;
  std::vector<SobolevSpec> norm_exponents{{-0.6}, {-0.75}, {-1.0}, {0.0}};
  ResolventOptions solver;

  void validate() const;
};

struct ResolventResult {
  std::vector<double> eps_list;
  std::vector<GridField> fields;              // per eps
  std::vector<std::vector<double>> norm_table;  // [eps][exponent]
  std::vector<SobolevSpec> norm_exponents;
  std::vector<double> cauchy;  // H^{-3/4} differences of consecutive iterates
  GridField limit;             // smallest-eps solve (numerical LAP limit)
  bool pass = false;  // H^{-3/4} band ratio <= 2 and Cauchy decreasing
  // The discrete operator has point spectrum where the continuum has a.c.
  // spectrum; eps is only meaningful well above the local level spacing.
  double level_spacing_near_omega = 0.0;  // from the n<=32 dense surrogate
};

// Runs resolve over the eps ladder and assembles the limiting-absorption
// diagnostics.
ResolventResult lap_study(const SymbolModel& model, const ResolventQuery& query);

// u_infinity = -(numerical LAP limit at omega = 0): the negated
// smallest-eps solve; Cauchy diagnostics live in the returned study.
GridField u_infinity(const SymbolModel& model, const GridField& f,
                     const std::vector<double>& eps_list,
                     const ResolventOptions& opts = {});

// Norm table CSV "eps,s=-0.6,s=-0.75,s=-1,s=0".
void write_norm_table_csv(const ResolventResult& result, const std::string& path);

}  // namespace wavelab
