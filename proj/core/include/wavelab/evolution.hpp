#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wavelab/operator.hpp"

namespace wavelab {

// Configuration for the forced evolution i du/dt = P u + f, u(0) = 0.
struct EvolutionConfig {
  double t_final = 50.0;
  double dt = 0.01;                    // stability guard: dt <= 0.05
  std::vector<double> snapshot_times;  // sorted, within [0, t_final]
  std::vector<SobolevSpec> norm_exponents;
  double norm_every = 0.5;
  // When set, snapshots are written as ZFLD files under this directory
  // and only referenced by path (large-grid runs); otherwise kept in memory.
  std::string snapshot_dir;

  void validate() const;
};

struct Snapshot {
  double time = 0.0;
  std::optional<GridField> field;  // in-memory variant
  std::string path;                // file variant
};

struct EvolutionTrace {
  std::vector<double> times;
  // norms[i][j] = H^{s_j} norm at times[i]; rectangular.
  std::vector<std::vector<double>> norms;
  std::vector<SobolevSpec> norm_exponents;
  std::vector<Snapshot> snapshots;
};

// Classical 4th-order one-step integration of du/dt = -i(Pu + f) from
// u(0) = 0. Throws numerical_error (with the step index) if NaN appears.
EvolutionTrace evolve_rk4(const SymbolModel& model, const GridField& f,
                          const EvolutionConfig& cfg);

// Exact solution via the dense spectral decomposition P = U L U^*:
// u(t) = U phi_t(L) U^* f with phi_t(l) = (e^{-ilt} - 1)/l, phi_t(0) = -it.
// Guarded at n <= 32.
GridField evolve_spectral_oracle(const SymbolModel& model, const GridField& f,
                                 double t);

// Evolution with spectrally filtered forcing phi(P) f, where phi is the
// plateau bump equal to 1 on [w0 - d/2, w0 + d/2], supported in
// [w0 - d, w0 + d]. phi(P) f is formed once by dense functional calculus
// (n <= 32).
EvolutionTrace evolve_filtered(const SymbolModel& model, const GridField& f,
                               const EvolutionConfig& cfg, double omega0,
                               double delta);

// Norm trace CSV: header "t,s=<s1>,...", one row per sample, 17 significant
// digits.
void write_trace_csv(const EvolutionTrace& trace, const std::string& path);

}  // namespace wavelab
