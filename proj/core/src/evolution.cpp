#include "wavelab/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "wavelab/errors.hpp"
#include "wavelab/field_io.hpp"
#include "wavelab/smooth.hpp"

namespace wavelab {

void EvolutionConfig::validate() const {
  if (t_final < 0.0) throw parameter_error("EvolutionConfig: t_final < 0");
  if (!(dt > 0.0 && dt <= 0.05))
    throw parameter_error("EvolutionConfig: dt must lie in (0, 0.05]");
  if (norm_every <= 0.0) throw parameter_error("EvolutionConfig: norm_every <= 0");
  if (!std::is_sorted(snapshot_times.begin(), snapshot_times.end()))
    throw parameter_error("EvolutionConfig: snapshot_times not sorted");
  for (double t : snapshot_times)
    if (t < 0.0 || t > t_final)
      throw parameter_error("EvolutionConfig: snapshot time outside [0, t_final]");
}

namespace {

void axpy(std::vector<cplx>& y, cplx a, const std::vector<cplx>& x) {
  for (size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

// du/dt = -i (P u + f) in spectral coefficients.
struct Rhs {
  const OperatorApplier& op;
  const std::vector<cplx>& f;
  mutable std::vector<cplx> work;

  void operator()(const std::vector<cplx>& u, std::vector<cplx>& du) const {
    op.apply(u, work);
    du.resize(u.size());
    for (size_t i = 0; i < u.size(); ++i) du[i] = cplx(0, -1) * (work[i] + f[i]);
  }
};

EvolutionTrace run_rk4(const OperatorApplier& op, const std::vector<cplx>& f_spec,
                       const EvolutionConfig& cfg) {
  cfg.validate();
  const TorusGrid grid = op.grid();
  const long n_steps = std::lround(cfg.t_final / cfg.dt);
  const double dt = cfg.dt;

  // Map snapshot and norm times to nearest step indices.
  std::vector<long> snap_steps;
  for (double t : cfg.snapshot_times) snap_steps.push_back(std::lround(t / dt));
  const long norm_stride = std::max(1l, std::lround(cfg.norm_every / dt));

  EvolutionTrace trace;
  trace.norm_exponents = cfg.norm_exponents;
  if (!cfg.snapshot_dir.empty())
    std::filesystem::create_directories(cfg.snapshot_dir);

  Rhs rhs{op, f_spec, {}};
  std::vector<cplx> u(grid.size(), cplx{});
  std::vector<cplx> k1, k2, k3, k4, stage(grid.size());

  auto record = [&](long step) {
    const double t = step * dt;
    if (step % norm_stride == 0 || step == n_steps) {
      trace.times.push_back(t);
      std::vector<double> row;
      row.reserve(cfg.norm_exponents.size());
      for (auto s : cfg.norm_exponents) row.push_back(sobolev_norm(grid, u, s));
      trace.norms.push_back(std::move(row));
    }
    for (size_t si = 0; si < snap_steps.size(); ++si) {
      if (snap_steps[si] != step) continue;
      Snapshot snap;
      snap.time = t;
      GridField field(grid);
      field.spec = u;
      to_physical(field);
      if (cfg.snapshot_dir.empty()) {
        snap.field = std::move(field);
      } else {
        snap.path = cfg.snapshot_dir + "/snapshot_" + std::to_string(si) + ".zfld";
        write_field(field, snap.path);
      }
      trace.snapshots.push_back(std::move(snap));
    }
  };

  record(0);
  for (long step = 0; step < n_steps; ++step) {
    rhs(u, k1);
    stage = u;
    axpy(stage, dt / 2, k1);
    rhs(stage, k2);
    stage = u;
    axpy(stage, dt / 2, k2);
    rhs(stage, k3);
    stage = u;
    axpy(stage, dt, k3);
    rhs(stage, k4);
    for (size_t i = 0; i < u.size(); ++i)
      u[i] += (dt / 6) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    if (!std::isfinite(u[0].real()))
      throw numerical_error("evolve_rk4: NaN at step " + std::to_string(step + 1));
    record(step + 1);
  }
  return trace;
}

}  // namespace

EvolutionTrace evolve_rk4(const SymbolModel& model, const GridField& f,
                          const EvolutionConfig& cfg) {
  OperatorApplier op(model, f.grid);
  return run_rk4(op, f.spec, cfg);
}

GridField evolve_spectral_oracle(const SymbolModel& model, const GridField& f,
                                 double t) {
  const int n = f.grid.n;
  if (n > 32) throw capacity_error("evolve_spectral_oracle: n > 32");
  Eigen::MatrixXcd P = assemble_dense(model, f.grid);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(P);
  const Eigen::VectorXd& lam = es.eigenvalues();
  const Eigen::MatrixXcd& U = es.eigenvectors();

  Eigen::VectorXcd fh = U.adjoint() * spec_to_dense(f);
  for (int i = 0; i < fh.size(); ++i) {
    const double l = lam[i];
    // phi_t(l) = (e^{-ilt} - 1)/l with the removable singularity at l = 0
    // evaluated analytically; no inversion of P anywhere.
    cplx phi;
    if (std::abs(l * t) < 1e-8) {
      phi = cplx(0, -t) * (1.0 - cplx(0, 1) * (l * t) / 2.0);
    } else {
      phi = (std::exp(cplx(0, -l * t)) - 1.0) / l;
    }
    fh[i] *= phi;
  }
  GridField out(f.grid);
  dense_to_spec(U * fh, out);
  return out;
}

EvolutionTrace evolve_filtered(const SymbolModel& model, const GridField& f,
                               const EvolutionConfig& cfg, double omega0,
                               double delta) {
  const int n = f.grid.n;
  if (n > 32) throw capacity_error("evolve_filtered: n > 32");
  Eigen::MatrixXcd P = assemble_dense(model, f.grid);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(P);
  Eigen::VectorXcd fh = es.eigenvectors().adjoint() * spec_to_dense(f);
  for (int i = 0; i < fh.size(); ++i)
    fh[i] *= plateau(es.eigenvalues()[i], omega0, delta);
  GridField ff(f.grid);
  dense_to_spec(es.eigenvectors() * fh, ff);
  OperatorApplier op(model, f.grid);
  return run_rk4(op, ff.spec, cfg);
}

void write_trace_csv(const EvolutionTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw format_error("write_trace_csv: cannot open " + path);
  out << "t";
  for (auto s : trace.norm_exponents) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), ",s=%g", s.s);
    out << buf;
  }
  out << "\n";
  out.precision(17);
  for (size_t i = 0; i < trace.times.size(); ++i) {
    out << trace.times[i];
    for (double v : trace.norms[i]) out << "," << v;
    out << "\n";
  }
}

}  // namespace wavelab
