#include "wavelab/operator.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wavelab/errors.hpp"

namespace wavelab {

double SymbolModel::potential_at(double x1, double x2) const {
  double v = 0.0;
  for (const auto& t : potential) {
    const double ph = t.freq[0] * x1 + t.freq[1] * x2;
    v += t.cos_coeff * std::cos(ph) + t.sin_coeff * std::sin(ph);
  }
  return v;
}

double SymbolModel::potential_dx1(double x1, double x2) const {
  double v = 0.0;
  for (const auto& t : potential) {
    const double ph = t.freq[0] * x1 + t.freq[1] * x2;
    v += t.freq[0] * (-t.cos_coeff * std::sin(ph) + t.sin_coeff * std::cos(ph));
  }
  return v;
}

double SymbolModel::potential_dx2(double x1, double x2) const {
  double v = 0.0;
  for (const auto& t : potential) {
    const double ph = t.freq[0] * x1 + t.freq[1] * x2;
    v += t.freq[1] * (-t.cos_coeff * std::sin(ph) + t.sin_coeff * std::cos(ph));
  }
  return v;
}

double SymbolModel::potential_dx1x1(double x1, double x2) const {
  double v = 0.0;
  for (const auto& t : potential) {
    const double ph = t.freq[0] * x1 + t.freq[1] * x2;
    v -= double(t.freq[0]) * t.freq[0] *
         (t.cos_coeff * std::cos(ph) + t.sin_coeff * std::sin(ph));
  }
  return v;
}

double SymbolModel::potential_dx1x2(double x1, double x2) const {
  double v = 0.0;
  for (const auto& t : potential) {
    const double ph = t.freq[0] * x1 + t.freq[1] * x2;
    v -= double(t.freq[0]) * t.freq[1] *
         (t.cos_coeff * std::cos(ph) + t.sin_coeff * std::sin(ph));
  }
  return v;
}

double SymbolModel::potential_dx2x2(double x1, double x2) const {
  double v = 0.0;
  for (const auto& t : potential) {
    const double ph = t.freq[0] * x1 + t.freq[1] * x2;
    v -= double(t.freq[1]) * t.freq[1] *
         (t.cos_coeff * std::cos(ph) + t.sin_coeff * std::sin(ph));
  }
  return v;
}

double SymbolModel::norm_bound() const {
  double b = 1.0;
  for (const auto& t : potential) b += std::abs(t.cos_coeff) + std::abs(t.sin_coeff);
  return b;
}

SymbolModel SymbolModel::p1() {
  return SymbolModel{"p1", {PotentialTerm{{1, 0}, -2.0, 0.0}}};
}

SymbolModel SymbolModel::p2() {
  return SymbolModel{"p2", {PotentialTerm{{1, 0}, -0.5, 0.0}}};
}

SymbolModel SymbolModel::free() { return SymbolModel{"free", {}}; }

SymbolModel SymbolModel::by_name(const std::string& name) {
  if (name == "p1") return p1();
  if (name == "p2") return p2();
  if (name == "free") return free();
  throw parameter_error("unknown model name: " + name);
}

SymbolModel SymbolModel::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw format_error(std::string("model JSON parse error: ") + e.what());
  }
  SymbolModel m;
  try {
    m.name = j.at("name").get<std::string>();
    for (const auto& term : j.at("potential")) {
      PotentialTerm t;
      t.freq[0] = term.at("freq").at(0).get<int>();
      t.freq[1] = term.at("freq").at(1).get<int>();
      t.cos_coeff = term.value("cos", 0.0);
      t.sin_coeff = term.value("sin", 0.0);
      m.potential.push_back(t);
    }
  } catch (const nlohmann::json::exception& e) {
    throw format_error(std::string("model JSON structure error: ") + e.what());
  }
  return m;
}

SymbolModel SymbolModel::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw format_error("cannot open model file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

double multiplier(int k1, int k2) { return k2 / japanese_bracket(k1, k2); }

double principal_symbol_at(const SymbolModel& model, double x1, double x2,
                           double theta) {
  return std::sin(theta) + model.potential_at(x1, x2);
}

OperatorApplier::OperatorApplier(const SymbolModel& model, const TorusGrid& grid)
    : model_(model), grid_(grid) {
  const int n = grid.n;
  mult_.resize(size_t(n) * n);
  v_phys_.resize(size_t(n) * n);
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2)
      mult_[size_t(i1) * n + i2] = multiplier(grid.freq(i1), grid.freq(i2));
  for (int j1 = 0; j1 < n; ++j1)
    for (int j2 = 0; j2 < n; ++j2)
      v_phys_[size_t(j1) * n + j2] = model.potential_at(grid.x(j1), grid.x(j2));
}

void OperatorApplier::apply(const std::vector<cplx>& spec_in,
                            std::vector<cplx>& spec_out) const {
  if (spec_in.size() != size_t(grid_.size()))
    throw dimension_error("OperatorApplier: field size does not match grid");
  // V u in physical space, aliasing onto the grid (band-limited potentials
  // touch only the Nyquist modes).
  spec_to_phys(grid_, spec_in, work_phys_);
  for (size_t i = 0; i < work_phys_.size(); ++i) work_phys_[i] *= v_phys_[i];
  phys_to_spec(grid_, work_phys_, spec_out);
  for (size_t i = 0; i < spec_out.size(); ++i) spec_out[i] += mult_[i] * spec_in[i];
}

GridField apply_operator(const SymbolModel& model, const GridField& u) {
  OperatorApplier op(model, u.grid);
  GridField out(u.grid);
  op.apply(u.spec, out.spec);
  to_physical(out);
  return out;
}

Eigen::VectorXcd spec_to_dense(const GridField& field) {
  const int n = field.grid.n;
  Eigen::VectorXcd v(n * n);
  for (int k1 = -n / 2; k1 < n / 2; ++k1)
    for (int k2 = -n / 2; k2 < n / 2; ++k2)
      v[(k1 + n / 2) * n + (k2 + n / 2)] = field.coeff(k1, k2);
  return v;
}

void dense_to_spec(const Eigen::VectorXcd& v, GridField& field) {
  const int n = field.grid.n;
  for (int k1 = -n / 2; k1 < n / 2; ++k1)
    for (int k2 = -n / 2; k2 < n / 2; ++k2)
      field.coeff(k1, k2) = v[(k1 + n / 2) * n + (k2 + n / 2)];
  to_physical(field);
}

Eigen::MatrixXcd assemble_dense(const SymbolModel& model, const TorusGrid& grid) {
  const int n = grid.n;
  if (n > 64) throw capacity_error("assemble_dense: n > 64");
  // Discrete Fourier coefficients of V: exact match with the pointwise
  // product (cyclic convolution), so the matrix is a faithful oracle for
  // OperatorApplier::apply.
  GridField v(grid);
  for (int j1 = 0; j1 < n; ++j1)
    for (int j2 = 0; j2 < n; ++j2)
      v.at(j1, j2) = model.potential_at(grid.x(j1), grid.x(j2));
  to_spectral(v);

  const int N = n * n;
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(N, N);
  for (int k1 = -n / 2; k1 < n / 2; ++k1)
    for (int k2 = -n / 2; k2 < n / 2; ++k2) {
      const int row = (k1 + n / 2) * n + (k2 + n / 2);
      M(row, row) = multiplier(k1, k2);
      for (int l1 = -n / 2; l1 < n / 2; ++l1)
        for (int l2 = -n / 2; l2 < n / 2; ++l2) {
          const cplx vc = v.coeff(k1 - l1, k2 - l2);  // wraps mod n via bin()
          if (std::norm(vc) == 0.0) continue;
          M((k1 + n / 2) * n + (k2 + n / 2), (l1 + n / 2) * n + (l2 + n / 2)) += vc;
        }
    }
  return M;
}

SpectrumScan spectrum_scan(const SymbolModel& model, const TorusGrid& grid,
                           double lo, double hi) {
  if (grid.n > 32) throw capacity_error("spectrum_scan: n > 32");
  Eigen::MatrixXcd M = assemble_dense(model, grid);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  SpectrumScan out;
  out.total = int(ev.size());
  out.min_eig = ev[0];
  out.max_eig = ev[ev.size() - 1];
  for (int i = 0; i < ev.size(); ++i)
    if (ev[i] > lo && ev[i] < hi) out.in_window.push_back(ev[i]);
  return out;
}

}  // namespace wavelab
