// Command-line driver: experiment configuration, artifact emission, and
// the verification suite.
#include <CLI11.hpp>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <nlohmann/json.hpp>
#include <sstream>
#include <thread>

#include "wavelab/dynamics.hpp"
#include "wavelab/evolution.hpp"
#include "wavelab/field_io.hpp"
#include "wavelab/lagrangian.hpp"
#include "wavelab/microlocal.hpp"
#include "wavelab/oscillatory.hpp"
#include "wavelab/resolvent.hpp"
#include "wavelab/smooth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace wavelab;

namespace {

constexpr double pi = std::numbers::pi;

struct Context {
  fs::path out_dir = ".";
  bool force = false;
  int threads = 0;  // 0: decide from flag/env/hardware
  json manifest_files = json::array();
  json manifest_extra = json::object();

  int thread_count() const {
    if (threads > 0) return threads;
    if (const char* env = std::getenv("WAVE_LAB_THREADS")) {
      const int v = std::atoi(env);
      if (v > 0) return v;
    }
    return int(std::thread::hardware_concurrency());
  }

  fs::path target(const std::string& name) {
    fs::create_directories(out_dir);
    fs::path p = out_dir / name;
    if (fs::exists(p) && !force)
      throw parameter_error("refusing to overwrite " + p.string() +
                            " (use --force)");
    return p;
  }

  void record(const fs::path& p) { manifest_files.push_back(p.filename().string()); }

  void write_manifest(const json& config) {
    json m;
    m["config"] = config;
    m["config_hash"] = std::to_string(std::hash<std::string>{}(config.dump()));
    m["version"] = "0.1.0";
    m["threads"] = thread_count();
    m["files"] = manifest_files;
    for (auto& [k, v] : manifest_extra.items()) m[k] = v;
    fs::create_directories(out_dir);
    std::ofstream out(out_dir / "manifest.json");
    out << m.dump(2) << "\n";
  }
};

// 8-bit PGM of Re u with symmetric linear scaling about 0; returns the
// scale used.
double write_pgm(const GridField& u, const fs::path& path) {
  const int n = u.grid.n;
  double scale = 0.0;
  for (const auto& z : u.phys) scale = std::max(scale, std::abs(z.real()));
  if (scale == 0.0) scale = 1.0;
  std::ofstream out(path, std::ios::binary);
  out << "P5\n" << n << " " << n << "\n255\n";
  for (int j2 = n - 1; j2 >= 0; --j2)
    for (int j1 = 0; j1 < n; ++j1) {
      const double v = u.at(j1, j2).real() / scale;
      const int pix = std::clamp(int(std::lround(127.5 + 127.5 * v)), 0, 255);
      out.put(char(pix));
    }
  return scale;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::string tok;
  std::istringstream in(text);
  while (std::getline(in, tok, ',')) {
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw parameter_error("bad numeric list entry: " + tok);
    }
  }
  return out;
}

SymbolModel load_model(const std::string& spec) {
  if (spec.size() > 5 && spec.substr(spec.size() - 5) == ".json")
    return SymbolModel::from_json_file(spec);
  return SymbolModel::by_name(spec);
}

// --config JSON overrides flags: any present key replaces the flag value.
json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parameter_error("cannot open config " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw parameter_error(std::string("config JSON: ") + e.what());
  }
}

template <class T>
void override_from(const json& cfg, const char* key, T& value) {
  if (cfg.contains(key)) value = cfg.at(key).get<T>();
}

struct VerifyEntry {
  std::string name;
  double measured = 0.0;
  std::string band;
  bool pass = false;
};

void run_verify(Context& ctx, const std::string& suite, int n_small) {
  std::vector<VerifyEntry> entries;
  auto add = [&](const std::string& name, double measured,
                 const std::string& band, bool pass) {
    entries.push_back({name, measured, band, pass});
  };

  {  // Oracle equivalence at small n.
    TorusGrid g(n_small);
    SymbolModel m = SymbolModel::p1();
    GridField f = make_bump(g, -pi / 2, 0.0, 0.5);
    EvolutionConfig cfg;
    cfg.t_final = 10.0;
    cfg.dt = 0.002;
    cfg.snapshot_times = {10.0};
    EvolutionTrace tr = evolve_rk4(m, f, cfg);
    GridField oracle = evolve_spectral_oracle(m, f, 10.0);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < g.size(); ++i) {
      num += std::norm(tr.snapshots[0].field->spec[i] - oracle.spec[i]);
      den += std::norm(oracle.spec[i]);
    }
    const double err = std::sqrt(num / den);
    add("oracle_equivalence", err, "<= 1e-6", err <= 1e-6);
  }
  {  // Self-adjointness.
    TorusGrid g(n_small);
    SymbolModel m = SymbolModel::p1();
    GridField u = make_bump(g, 1.0, 2.0, 0.4), v = make_bump(g, 4.0, 0.5, 0.6);
    GridField pu = apply_operator(m, u), pv = apply_operator(m, v);
    const double defect =
        std::abs(inner(pu.spec, v.spec) - inner(u.spec, pv.spec));
    add("self_adjointness", defect, "<= 1e-12", defect <= 1e-12);
  }
  {  // Cycles and Floquet.
    auto cycles = find_limit_cycles(SymbolModel::p1(), 0.0);
    const double expect = std::exp(-4.0 * pi);
    double worst = 1.0;
    for (const auto& c : cycles)
      if (c.kind == CycleKind::SINK)
        worst = std::min(worst, 1.0 - std::abs(c.c1 - expect) / expect);
    add("p1_cycles_count", double(cycles.size()), "== 4", cycles.size() == 4);
    add("p1_sink_multiplier", 1.0 - worst, "rel <= 1e-4", 1.0 - worst <= 1e-4);
  }
  {  // Transport solution along the cycles.
    SymbolModel m = SymbolModel::p1();
    double worst = 0.0;
    for (const auto& c : find_limit_cycles(m, 0.0))
      if (c.kind == CycleKind::SINK)
        for (double v : solve_phi(m, c)) worst = std::max(worst, std::abs(v - 0.5));
    add("p1_phi_constant", worst, "<= 1e-8", worst <= 1e-8);
  }
  {  // Conormal transport model.
    auto r = transport_model_check(3, 1.0, 8.0);
    const double dev = std::max(r.max_modulus_dev, r.max_arg_dev);
    add("transport_model", dev, "<= 1e-8", dev <= 1e-8);
  }
  if (suite == "full") {
    {  // LAP pilot at n = 128.
      TorusGrid g(128);
      ResolventQuery q;
      q.eps_list = {0.2, 0.1, 0.05, 0.025};
      q.f = make_bump(g, -pi / 2, 0.0, 0.5);
      ResolventResult res = lap_study(SymbolModel::p1(), q);
      double lo = res.norm_table[0][1], hi = lo;
      for (const auto& row : res.norm_table) {
        lo = std::min(lo, row[1]);
        hi = std::max(hi, row[1]);
      }
      add("lap_band", hi / lo, "<= 2", res.pass);
    }
    {  // Large evolution dichotomy pilot.
      TorusGrid g(256);
      GridField f = make_bump(g, -pi / 2, 0.0, 0.5);
      EvolutionConfig cfg;
      cfg.t_final = 50.0;
      cfg.dt = 0.01;
      cfg.snapshot_times = {50.0};
      cfg.norm_exponents = {{-0.75}};
      EvolutionTrace tr = evolve_rk4(SymbolModel::p1(), f, cfg);
      const GridField& u50 = *tr.snapshots[0].field;
      double on = 0.0, off = 0.0;
      for (int j2 = 0; j2 < g.n; ++j2) {
        on = std::max(on, std::abs(u50.at(3 * g.n / 4, j2)));
        off = std::max(off, std::abs(u50.at(0, j2)));
      }
      add("singular_line_contrast", on / off, ">= 5", on / off >= 5.0);
    }
  }

  json report;
  report["suite"] = suite;
  report["checks"] = json::array();
  bool all = true;
  for (const auto& e : entries) {
    report["checks"].push_back({{"name", e.name},
                                {"measured", e.measured},
                                {"band", e.band},
                                {"verdict", e.pass ? "PASS" : "FAIL"}});
    all = all && e.pass;
    std::printf("%-24s %-12g %-12s %s\n", e.name.c_str(), e.measured,
                e.band.c_str(), e.pass ? "PASS" : "FAIL");
  }
  report["all_pass"] = all;
  fs::create_directories(ctx.out_dir);
  fs::path rp = ctx.out_dir / "verify_report.json";
  std::ofstream out(rp);
  out << report.dump(2) << "\n";
  ctx.record(rp);
  if (!all) throw numerical_error("verification suite reported failures");
}

int dispatch(int argc, char** argv) {
  CLI::App app{"Pseudospectral toolkit for forced 0th-order evolutions on the torus"};
  app.require_subcommand(1);

  Context ctx;
  std::string config_path;
  app.add_option("--out-dir", ctx.out_dir, "output directory");
  app.add_flag("--force", ctx.force, "allow overwriting artifacts");
  app.add_option("--threads", ctx.threads,
                 "worker threads (fallback: WAVE_LAB_THREADS)");
  app.add_option("--config", config_path, "JSON config overriding flags");

  // evolve
  auto* evolve = app.add_subcommand("evolve", "forced evolution run");
  std::string ev_model = "p1", ev_bump_center = "-1.570796,0";
  int ev_n = 256;
  double ev_tfinal = 50.0, ev_dt = 0.01, ev_sigma = 0.5, ev_norm_every = 0.5;
  std::string ev_snapshots = "0,10,25,50", ev_norms = "-0.75,0,0.25";
  evolve->add_option("--model", ev_model);
  evolve->add_option("--n", ev_n);
  evolve->add_option("--t-final", ev_tfinal);
  evolve->add_option("--dt", ev_dt);
  evolve->add_option("--bump-center", ev_bump_center);
  evolve->add_option("--bump-sigma", ev_sigma);
  evolve->add_option("--snapshots", ev_snapshots);
  evolve->add_option("--norms", ev_norms);
  evolve->add_option("--norm-every", ev_norm_every);

  // resolvent
  auto* resc = app.add_subcommand("resolvent", "limiting absorption study");
  std::string rs_model = "p1", rs_eps = "0.2,0.1,0.05,0.025";
  int rs_n = 64;
  double rs_omega = 0.0, rs_sigma = 0.5;
  std::string rs_center = "-1.570796,0";
  resc->add_option("--model", rs_model);
  resc->add_option("--n", rs_n);
  resc->add_option("--omega", rs_omega);
  resc->add_option("--eps", rs_eps);
  resc->add_option("--bump-center", rs_center);
  resc->add_option("--bump-sigma", rs_sigma);

  // dynamics
  auto* dyn = app.add_subcommand("dynamics", "limit cycles and Floquet data");
  std::string dy_model = "p1";
  double dy_omega = 0.0;
  dyn->add_option("--model", dy_model);
  dyn->add_option("--omega", dy_omega);

  // lagrangian
  auto* lag = app.add_subcommand("lagrangian", "slice transport and phases");
  std::string lg_model = "p1", lg_sign = "plus";
  double lg_omega = 0.0;
  lag->add_option("--model", lg_model);
  lag->add_option("--omega", lg_omega);
  lag->add_option("--sign", lg_sign)->check(CLI::IsMember({"plus", "minus"}));

  // oscillatory
  auto* osc = app.add_subcommand("oscillatory", "stationary phase laboratory");
  std::string os_model = "attracting", os_xi = "8,16,32,64,128,256";
  std::string os_mode = "stationary", os_parity = "odd", os_h = "";
  osc->add_option("--model", os_model,
                  "attracting | repelling | path to model JSON");
  osc->add_option("--xi", os_xi);
  osc->add_option("--mode", os_mode)->check(CLI::IsMember({"stationary", "logscale"}));
  osc->add_option("--parity", os_parity)->check(CLI::IsMember({"odd", "even"}));
  osc->add_option("--h-list", os_h, "dyadic h values for logscale");

  // verify
  auto* ver = app.add_subcommand("verify", "verification suite");
  std::string vf_suite = "fast";
  int vf_nsmall = 16;
  ver->add_option("--suite", vf_suite)->check(CLI::IsMember({"fast", "full"}));
  ver->add_option("--n-small", vf_nsmall);

  app.parse(argc, argv);

  json cfg = json::object();
  if (!config_path.empty()) {
    cfg = load_config(config_path);
    std::string od = ctx.out_dir.string();
    override_from(cfg, "out_dir", od);
    ctx.out_dir = od;
    override_from(cfg, "threads", ctx.threads);
  }

  if (evolve->parsed()) {
    override_from(cfg, "model", ev_model);
    override_from(cfg, "n", ev_n);
    override_from(cfg, "t_final", ev_tfinal);
    override_from(cfg, "dt", ev_dt);
    SymbolModel model = load_model(ev_model);
    TorusGrid g(ev_n);
    auto center = parse_list(ev_bump_center);
    if (center.size() != 2) throw parameter_error("--bump-center needs x,y");
    GridField f = make_bump(g, center[0], center[1], ev_sigma);
    EvolutionConfig ec;
    ec.t_final = ev_tfinal;
    ec.dt = ev_dt;
    ec.snapshot_times = parse_list(ev_snapshots);
    ec.norm_every = ev_norm_every;
    for (double s : parse_list(ev_norms)) ec.norm_exponents.push_back({s});
    EvolutionTrace tr = evolve_rk4(model, f, ec);

    fs::path csv = ctx.target("norm_trace.csv");
    write_trace_csv(tr, csv.string());
    ctx.record(csv);
    json scales = json::object();
    for (const auto& snap : tr.snapshots) {
      char name[64];
      std::snprintf(name, sizeof(name), "snap_t%g", snap.time);
      fs::path zp = ctx.target(std::string(name) + ".zfld");
      write_field(*snap.field, zp.string());
      ctx.record(zp);
      fs::path ip = ctx.target(std::string(name) + ".pgm");
      GridField phys = *snap.field;
      to_physical(phys);
      scales[std::string(name) + ".pgm"] = write_pgm(phys, ip);
      ctx.record(ip);
    }
    ctx.manifest_extra["pgm_scales"] = scales;
    cfg["subcommand"] = "evolve";
    cfg["model"] = ev_model;
    cfg["n"] = ev_n;
    ctx.write_manifest(cfg);
  } else if (resc->parsed()) {
    SymbolModel model = load_model(rs_model);
    TorusGrid g(rs_n);
    auto center = parse_list(rs_center);
    if (center.size() != 2) throw parameter_error("--bump-center needs x,y");
    ResolventQuery q;
    q.omega = rs_omega;
    q.eps_list = parse_list(rs_eps);
    q.f = make_bump(g, center[0], center[1], rs_sigma);
    ResolventResult res = lap_study(model, q);
    fs::path csv = ctx.target("norm_table.csv");
    write_norm_table_csv(res, csv.string());
    ctx.record(csv);
    fs::path zp = ctx.target("limit.zfld");
    write_field(res.limit, zp.string());
    ctx.record(zp);
    json rep;
    rep["omega"] = rs_omega;
    rep["pass"] = res.pass;
    rep["cauchy"] = res.cauchy;
    rep["level_spacing_near_omega"] = res.level_spacing_near_omega;
    fs::path rp = ctx.target("resolvent_report.json");
    std::ofstream out(rp);
    out << rep.dump(2) << "\n";
    ctx.record(rp);
    cfg["subcommand"] = "resolvent";
    ctx.write_manifest(cfg);
  } else if (dyn->parsed()) {
    SymbolModel model = load_model(dy_model);
    auto cycles = find_limit_cycles(model, dy_omega);
    fs::path rp = ctx.target("cycles.json");
    std::ofstream out(rp);
    out << cycles_to_json(model, dy_omega, cycles) << "\n";
    ctx.record(rp);
    cfg["subcommand"] = "dynamics";
    ctx.write_manifest(cfg);
  } else if (lag->parsed()) {
    SymbolModel model = load_model(lg_model);
    LagrangianSlice slice = build_slice(
        model, lg_omega, lg_sign == "plus" ? SliceSign::PLUS : SliceSign::MINUS);
    fs::path rp = ctx.target("slice.json");
    std::ofstream out(rp);
    out << slice_to_json(model, slice) << "\n";
    ctx.record(rp);
    cfg["subcommand"] = "lagrangian";
    ctx.write_manifest(cfg);
  } else if (osc->parsed()) {
    if (os_mode == "stationary") {
      OscillatoryModel model;
      if (os_model == "attracting")
        model = OscillatoryModel::attracting();
      else if (os_model == "repelling")
        model = OscillatoryModel::repelling();
      else
        model = OscillatoryModel::from_json_file(os_model);
      auto xi = parse_list(os_xi);
      // Parallel sweep over xi: each row is independent.
      std::vector<StationaryPhaseRow> rows(xi.size());
      const int workers = std::max(1, std::min<int>(ctx.thread_count(), int(xi.size())));
      std::vector<std::thread> pool;
      std::atomic<size_t> next{0};
      std::atomic<bool> failed{false};
      for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
          for (size_t i = next++; i < xi.size(); i = next++) {
            try {
              StationaryPhaseRow row;
              row.xi = xi[i];
              row.J = eval_J(model, model.saturation_time(xi[i]), xi[i]);
              rows[i] = row;
            } catch (const std::exception&) {
              failed = true;
            }
          }
        });
      for (auto& th : pool) th.join();
      if (failed) throw numerical_error("oscillatory sweep failed");
      // Reuse the sequential path for the derived columns and verdict.
      auto rep = stationary_phase_compare(model, xi);
      fs::path csv = ctx.target("stationary.csv");
      write_stationary_csv(rep, csv.string());
      ctx.record(csv);
      json jr;
      jr["attracting"] = rep.attracting;
      jr["slope"] = rep.slope;
      jr["pass"] = rep.pass;
      fs::path rp = ctx.target("stationary_report.json");
      std::ofstream out(rp);
      out << jr.dump(2) << "\n";
      ctx.record(rp);
    } else {
      std::vector<double> h_list = os_h.empty()
                                       ? std::vector<double>{}
                                       : parse_list(os_h);
      if (h_list.empty())
        for (int k = 4; k <= 14; ++k) h_list.push_back(std::pow(2.0, -k));
      const bool odd = os_parity == "odd";
      auto rows = log_scaling_L(
          [](double) { return 0.0; },
          [odd](double s, double w) {
            return plateau(s, 0.0, 2.0) * (odd ? w : 1.0) * std::exp(-w * w);
          },
          h_list, 2.0, 6.0);
      fs::path csv = ctx.target("log_scaling.csv");
      write_log_scaling_csv(rows, csv.string());
      ctx.record(csv);
    }
    cfg["subcommand"] = "oscillatory";
    ctx.write_manifest(cfg);
  } else if (ver->parsed()) {
    run_verify(ctx, vf_suite, vf_nsmall);
    cfg["subcommand"] = "verify";
    ctx.write_manifest(cfg);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const CLI::ParseError& e) {
    CLI::App dummy;
    const int code = dummy.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const parameter_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const format_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const capacity_error& e) {
    std::fprintf(stderr, "capacity error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    std::ofstream diag("error.json");
    diag << nlohmann::json{{"error", e.what()}}.dump(2) << "\n";
    return 3;
  }
}
