// wavemaps: batch experiment runner.
//
// Subcommands: solve, conserve, norms, estimate, oracle, scatter,
// counterexample, reproduce. Each reads a JSON config (strictly validated:
// unknown keys are errors), writes a manifest echoing the config, CSV/JSON
// outputs, and a summary with pass/fail per declared invariant.
//
// Exit codes: 0 ok, 1 declared check failed, 2 invalid config,
// 3 numerical guard trip, 4 I/O failure.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "wavemaps/conservation.hpp"
#include "wavemaps/estimates.hpp"
#include "wavemaps/geometry.hpp"
#include "wavemaps/grid.hpp"
#include "wavemaps/io.hpp"
#include "wavemaps/norms.hpp"
#include "wavemaps/oracles.hpp"
#include "wavemaps/scattering.hpp"
#include "wavemaps/solver.hpp"
#include "wavemaps/spectral.hpp"

using nlohmann::json;
namespace fs = std::filesystem;
using namespace wavemaps;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<double> h, T;
};

void require_keys(const json& cfg, const std::set<std::string>& allowed,
                  const std::string& where) {
  if (!cfg.is_object()) throw ConfigError(where + ": config must be a JSON object");
  for (auto it = cfg.begin(); it != cfg.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError(where + ": unknown key '" + it.key() + "'");
}

template <typename T>
T get_or(const json& cfg, const std::string& key, T def) {
  return cfg.contains(key) ? cfg.at(key).get<T>() : def;
}

ScalarProfile make_profile(const json& p) {
  require_keys(p, {"name", "amp", "center", "width"}, "profile");
  std::string name = p.at("name").get<std::string>();
  double amp = get_or(p, "amp", 1.0);
  double center = get_or(p, "center", 0.0);
  double width = get_or(p, "width", 1.0);
  if (name == "gaussian") return ScalarProfile::gaussian();
  if (name == "gaussian_primitive") return ScalarProfile::gaussian_primitive();
  if (name == "log_oscillation") return ScalarProfile::log_oscillation();
  if (name == "bump") return ScalarProfile::bump(amp, center, width);
  throw ConfigError("profile: unknown name '" + name + "'");
}

TargetManifold make_target(const json& t) {
  require_keys(t, {"name", "m"}, "target");
  std::string name = t.at("name").get<std::string>();
  int m = get_or(t, "m", 2);
  if (name == "sphere") return sphere_extrinsic(m);
  if (name == "circle") return circle_intrinsic();
  if (name == "sphere_stereographic") return sphere_stereographic();
  throw ConfigError("target: unknown name '" + name + "'");
}

// Cauchy data families; dim must match the target chart.
CauchyData make_data(const json& d, const TargetManifold& M) {
  require_keys(d, {"family", "profile", "x0", "dx", "n", "amp", "gamp", "width", "gwidth"},
               "data");
  std::string family = d.at("family").get<std::string>();
  double x0 = get_or(d, "x0", -4.0);
  double dx = get_or(d, "dx", 0.005);
  int n = get_or(d, "n", 1601);
  if (family == "s1") {
    ScalarProfile prof =
        d.contains("profile") ? make_profile(d.at("profile")) : ScalarProfile::gaussian();
    return s1_exact(prof).data(x0, dx, n);
  }
  if (family == "sphere2_bump") {
    // f walks along the equator by theta(x), g points along the z tangent
    double amp = get_or(d, "amp", 1.0), gamp = get_or(d, "gamp", 0.5);
    double w = get_or(d, "width", 1.0), gw = get_or(d, "gwidth", 1.0);
    return CauchyData::sample(
        3, x0, dx, n,
        [&](double x, double* f) {
          double th = amp * bump(x / w);
          f[0] = std::cos(th);
          f[1] = std::sin(th);
          f[2] = 0.0;
        },
        [&](double x, double* g) {
          g[0] = 0.0;
          g[1] = 0.0;
          g[2] = gamp * bump(x / gw);
        });
  }
  if (family == "chart_bump") {
    int dim = M.dim;
    double amp = get_or(d, "amp", 0.1), gamp = get_or(d, "gamp", 0.1);
    double w = get_or(d, "width", 1.0), gw = get_or(d, "gwidth", 1.0);
    return CauchyData::sample(
        dim, x0, dx, n,
        [&](double x, double* f) {
          for (int c = 0; c < dim; ++c) f[c] = 0.0;
          f[0] = amp * bump(x / w);
        },
        [&](double x, double* g) {
          for (int c = 0; c < dim; ++c) g[c] = 0.0;
          g[dim - 1] = gamp * bump(x / gw);
        });
  }
  throw ConfigError("data: unknown family '" + family + "'");
}

void write_json(const json& j, const fs::path& p) {
  std::ofstream out(p);
  if (!out) throw IoError("cannot open " + p.string());
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed for " + p.string());
}

void write_csv(const fs::path& p, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(p);
  if (!out) throw IoError("cannot open " + p.string());
  out.precision(17);
  out << header << '\n';
  for (const auto& r : rows) {
    for (size_t k = 0; k < r.size(); ++k) out << (k ? "," : "") << r[k];
    out << '\n';
  }
  if (!out) throw IoError("write failed for " + p.string());
}

// ---------------------------------------------------------------- solve ----

int run_solve(const json& cfg, const fs::path& out, const Overrides& ov) {
  require_keys(cfg, {"target", "data", "h", "T", "retract", "ceiling"}, "solve");
  TargetManifold M = make_target(cfg.at("target"));
  CauchyData data = make_data(cfg.at("data"), M);
  double h = ov.h.value_or(get_or(cfg, "h", 0.01));
  double T = ov.T.value_or(get_or(cfg, "T", 1.0));
  SolveOptions opts;
  opts.retract = get_or(cfg, "retract", true);
  opts.blowup_ceiling = get_or(cfg, "ceiling", 1e6);

  SolveResult res = solve(data, M, T, h, opts);
  save_grid_field(res.phi, (out / "field.bin").string(), M.name, "characteristic-order2");
  export_time_slices_csv(res.phi, {0, res.band / 2, res.band - 1},
                         (out / "slices.csv").string());

  EnergyMomentum em = energy_momentum(res.phi, M, res.band);
  PohlmeyerReport poh = pohlmeyer_check(res.phi, M, res.band);
  double drift = 0;
  for (double e : em.energy) drift = std::max(drift, std::abs(e - em.energy.front()));
  double rel = em.energy.front() > 0 ? drift / em.energy.front() : drift;
  json sum = {{"kind", "solve"},
              {"band", res.band},
              {"energy_t0", em.energy.empty() ? 0.0 : em.energy.front()},
              {"energy_rel_drift", rel},
              {"pohlmeyer_u_variation", poh.max_u_variation},
              {"pohlmeyer_v_variation", poh.max_v_variation},
              {"traceless_residual", em.traceless_residual}};
  bool pass = std::isfinite(rel);
  if (M.name.rfind("sphere_extrinsic", 0) == 0) {
    HardwireReport hw = hardwire_check(res.phi, res.band);
    sum["hardwire_antisymmetry"] = hw.max_antisymmetry;
    sum["hardwire_residual"] = hw.max_residual;
    pass = pass && hw.max_antisymmetry == 0.0;
  }
  sum["pass"] = pass;
  write_json(sum, out / "summary.json");
  return pass ? 0 : 1;
}

// -------------------------------------------------------------- conserve ----

int run_conserve(const json& cfg, const fs::path& out, const Overrides& ov) {
  require_keys(cfg, {"target", "data", "h", "T", "tol_energy"}, "conserve");
  TargetManifold M = make_target(cfg.at("target"));
  CauchyData data = make_data(cfg.at("data"), M);
  double h = ov.h.value_or(get_or(cfg, "h", 0.01));
  double T = ov.T.value_or(get_or(cfg, "T", 1.0));
  double tol = get_or(cfg, "tol_energy", 1e-3);

  SolveResult res = solve(data, M, T, h);
  EnergyMomentum em = energy_momentum(res.phi, M, res.band);
  std::vector<std::vector<double>> rows;
  for (size_t k = 0; k < em.times.size(); ++k)
    rows.push_back({em.times[k], em.energy[k], em.momentum[k]});
  write_csv(out / "energy.csv", "t,energy,momentum", rows);

  PohlmeyerReport poh = pohlmeyer_check(res.phi, M, res.band);
  HardwireReport hw = hardwire_check(res.phi, res.band);
  double drift = 0;
  for (double e : em.energy) drift = std::max(drift, std::abs(e - em.energy.front()));
  double rel = em.energy.front() > 0 ? drift / em.energy.front() : drift;
  bool pass = rel <= tol;
  write_json(json{{"kind", "conserve"},
                  {"energy_rel_drift", rel},
                  {"tol_energy", tol},
                  {"pohlmeyer_u_variation", poh.max_u_variation},
                  {"pohlmeyer_v_variation", poh.max_v_variation},
                  {"hardwire_antisymmetry", hw.max_antisymmetry},
                  {"hardwire_residual", hw.max_residual},
                  {"pass", pass}},
             out / "summary.json");
  return pass ? 0 : 1;
}

// ----------------------------------------------------------------- norms ----

int run_norms(const json& cfg, const fs::path& out, const Overrides&) {
  require_keys(cfg, {"target", "data", "rellich"}, "norms");
  TargetManifold M = make_target(cfg.at("target"));
  CauchyData data = make_data(cfg.at("data"), M);
  json sum = {{"kind", "norms"}, {"l11_norm", l11_norm(data, &M)}};
  bool pass = true;
  if (cfg.contains("rellich")) {
    const json& rc = cfg.at("rellich");
    require_keys(rc, {"delta", "lambdas", "profile"}, "norms.rellich");
    double delta = get_or(rc, "delta", 0.6);
    std::vector<double> lambdas =
        get_or<std::vector<double>>(rc, "lambdas", {2, 4, 8, 16, 32, 64, 128, 256});
    ScalarProfile prof =
        rc.contains("profile") ? make_profile(rc.at("profile")) : ScalarProfile::gaussian();
    RellichReport rr = verify_rellich(prof.G, prof.g, delta, lambdas);
    std::vector<std::vector<double>> rows;
    for (size_t k = 0; k < rr.lambdas.size(); ++k)
      rows.push_back({rr.lambdas[k], rr.norms[k], rr.g_norms[k]});
    write_csv(out / "rellich.csv", "lambda,norm,g_norm", rows);
    sum["rellich_exponent"] = rr.exponent;
    sum["rellich_residual"] = rr.lsq_residual;
    pass = rr.exponent <= -0.05;
  }
  sum["pass"] = pass;
  write_json(sum, out / "summary.json");
  return pass ? 0 : 1;
}

// -------------------------------------------------------------- estimate ----

int run_estimate(const json& cfg, const fs::path& out, const Overrides& ov) {
  require_keys(cfg,
               {"estimate_id", "s", "s_prime", "s1", "s2", "s1_prime", "s2_prime",
                "cutoffs", "samples_per_cutoff", "seed", "workers"},
               "estimate");
  EstimateParams P;
  P.s = get_or(cfg, "s", 0.8);
  P.s_prime = get_or(cfg, "s_prime", 0.3);
  P.s1 = get_or(cfg, "s1", 0.8);
  P.s2 = get_or(cfg, "s2", 0.8);
  P.s1_prime = get_or(cfg, "s1_prime", 0.3);
  P.s2_prime = get_or(cfg, "s2_prime", 0.3);
  EnsembleSpec spec;
  spec.cutoffs = get_or<std::vector<int>>(cfg, "cutoffs", spec.cutoffs);
  spec.samples_per_cutoff = get_or(cfg, "samples_per_cutoff", spec.samples_per_cutoff);
  spec.seed = ov.seed.value_or(get_or<std::uint64_t>(cfg, "seed", spec.seed));
  spec.workers = ov.workers.value_or(get_or(cfg, "workers", 0));

  EstimateReport rep;
  try {
    rep = verify_estimate(cfg.at("estimate_id").get<std::string>(), P, spec);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  save_estimate_report(rep, (out / "estimate_report.json").string());
  std::vector<std::vector<double>> rows;
  for (size_t k = 0; k < rep.cutoffs.size(); ++k)
    rows.push_back({(double)rep.cutoffs[k], rep.max_ratio[k], rep.median_ratio[k],
                    rep.p90_ratio[k]});
  write_csv(out / "ratios.csv", "N,max_ratio,median_ratio,p90_ratio", rows);
  write_json(json{{"kind", "estimate"},
                  {"estimate_id", rep.estimate_id},
                  {"cutoff_scaling_slope", rep.cutoff_scaling_slope},
                  {"pass", rep.verified}},
             out / "summary.json");
  return rep.verified ? 0 : 1;
}

// ---------------------------------------------------------------- oracle ----

int run_oracle(const json& cfg, const fs::path& out, const Overrides& ov) {
  require_keys(cfg, {"which", "profile", "hs", "T", "dt", "ceiling", "times", "u_max"},
               "oracle");
  std::string which = cfg.at("which").get<std::string>();
  json sum = {{"kind", "oracle"}, {"which", which}};
  bool pass = true;

  if (which == "s1") {
    ScalarProfile prof =
        cfg.contains("profile") ? make_profile(cfg.at("profile")) : ScalarProfile::gaussian();
    std::vector<double> hs = get_or<std::vector<double>>(cfg, "hs", {0.02, 0.01, 0.005});
    double T = ov.T.value_or(get_or(cfg, "T", 1.0));
    S1Exact ex = s1_exact(prof);
    TargetManifold M = sphere_extrinsic(2);
    std::vector<std::vector<double>> rows;
    std::vector<double> errs;
    for (double h : hs) {
      CauchyData data = ex.data(-4.0 - T, h / 2, (int)std::lround(2 * (4.0 + T) / (h / 2)) + 1);
      SolveResult res = solve(data, M, T, h);
      double err = 0;
      std::vector<double> exact(2);
      for (int i = 0; i < res.phi.grid.nu; ++i)
        for (int j = std::max(0, i - res.band); j <= std::min(res.phi.grid.nv - 1, i + res.band);
             ++j) {
          ex.value(res.phi.grid.u(i), res.phi.grid.v(j), exact.data());
          const double* p = res.phi.at(i, j);
          err = std::max(err, std::hypot(p[0] - exact[0], p[1] - exact[1]));
        }
      errs.push_back(err);
      rows.push_back({h, err});
    }
    write_csv(out / "convergence.csv", "h,sup_error", rows);
    for (size_t k = 0; k + 1 < errs.size(); ++k) {
      double ratio = errs[k] / errs[k + 1];
      sum["ratios"].push_back(ratio);
      if (ratio < 3.0 || ratio > 5.0) pass = false;
    }
  } else if (which == "riccati") {
    double dt = get_or(cfg, "dt", 5e-4);
    double ceiling = get_or(cfg, "ceiling", 1e6);
    RiccatiOracle rc = riccati_blowup([](double) { return 1.0; });
    double trip = rc.integrate_until_ceiling(0.0, dt, ceiling);
    sum["trip_time"] = trip;
    sum["closed_form_T"] = rc.blowup_time(1.0);
    pass = trip >= 0.98 && trip <= 1.02;
  } else if (which == "nonscatter") {
    ScalarProfile prof = cfg.contains("profile") ? make_profile(cfg.at("profile"))
                                                 : ScalarProfile::log_oscillation();
    std::vector<double> times =
        get_or<std::vector<double>>(cfg, "times", {10, 30, 100, 300, 1000});
    double u_max = get_or(cfg, "u_max", 2e4);
    ScatterDefectSweep sw = nonscattering_defect(prof, times, u_max);
    std::vector<std::vector<double>> rows;
    double floor = 1e300;
    for (size_t k = 0; k < sw.times.size(); ++k) {
      rows.push_back({sw.times[k], sw.defect[k]});
      floor = std::min(floor, sw.defect[k]);
    }
    write_csv(out / "defect.csv", "T,h1_defect", rows);
    sum["defect_floor"] = floor;
    pass = true;
  } else {
    throw ConfigError("oracle: unknown 'which' value '" + which + "'");
  }
  sum["pass"] = pass;
  write_json(sum, out / "summary.json");
  return pass ? 0 : 1;
}

// --------------------------------------------------------------- scatter ----

int run_scatter(const json& cfg, const fs::path& out, const Overrides& ov) {
  require_keys(cfg, {"target", "data", "h", "T", "support", "times", "tol"}, "scatter");
  TargetManifold M = make_target(cfg.at("target"));
  CauchyData data = make_data(cfg.at("data"), M);
  double h = ov.h.value_or(get_or(cfg, "h", 0.005));
  double T = ov.T.value_or(get_or(cfg, "T", 2.0));
  double support = get_or(cfg, "support", 1.0);
  double tol = get_or(cfg, "tol", 1e-2);
  std::vector<double> times = get_or<std::vector<double>>(cfg, "times", {1.2, 1.5, 1.8});

  SolveResult res = solve(data, M, T, h);
  FreeResolutionReport fr = free_resolution_check(res.phi, res.band, support);
  ScatteringState st = scattering_state(res.phi, res.band, support, true);
  DefectTable tab = scattering_defect(res.phi, res.band, st, times, &M);
  std::vector<std::vector<double>> rows;
  for (size_t k = 0; k < tab.times.size(); ++k)
    rows.push_back({tab.times[k], tab.l11[k], tab.h1[k]});
  write_csv(out / "defect.csv", "T,l11_defect,h1_defect", rows);

  double worst = 0;
  for (double d : tab.l11) worst = std::max(worst, d);
  bool pass = worst <= tol;
  write_json(json{{"kind", "scatter"},
                  {"strip_u_residual", fr.strip_u_residual},
                  {"strip_v_residual", fr.strip_v_residual},
                  {"interaction_integral", interaction_integral(res.phi, res.band, &M)},
                  {"worst_l11_defect", worst},
                  {"tol", tol},
                  {"pass", pass}},
             out / "summary.json");
  return pass ? 0 : 1;
}

// -------------------------------------------------------- counterexample ----

int run_counterexample(const json& cfg, const fs::path& out, const Overrides&) {
  require_keys(cfg, {"eps", "cutoffs", "controlled"}, "counterexample");
  double eps = get_or(cfg, "eps", 0.01);
  if (eps <= 0 || eps > 0.1) throw ConfigError("counterexample: eps must lie in (0, 0.1]");
  std::vector<int> cutoffs = get_or<std::vector<int>>(
      cfg, "cutoffs", {64, 256, 1024, 4096, 16384, 65536, 262144, 1048576});
  bool controlled = get_or(cfg, "controlled", false);
  CounterexampleSweep sw = critical_counterexample(eps, cutoffs, controlled);
  std::vector<std::vector<double>> rows;
  for (size_t k = 0; k < sw.cutoffs.size(); ++k)
    rows.push_back({(double)sw.cutoffs[k], sw.q_h_half[k],
                    sw.q_h_half[k] * sw.q_h_half[k], sw.g_h_neghalf[k]});
  write_csv(out / "growth.csv", "N,q_h_half,q_h_half_sq,g_h_neghalf", rows);
  bool monotone = true;
  for (size_t k = 1; k < sw.q_h_half.size(); ++k)
    if (sw.cutoffs[k - 1] >= 256 && sw.q_h_half[k] <= sw.q_h_half[k - 1]) monotone = false;
  bool pass = controlled ? true : monotone;
  write_json(json{{"kind", "counterexample"},
                  {"eps", eps},
                  {"controlled", controlled},
                  {"monotone_growth", monotone},
                  {"pass", pass}},
             out / "summary.json");
  return pass ? 0 : 1;
}

// ------------------------------------------------------------- reproduce ----

int run_one(const std::string& kind, const json& cfg, const fs::path& out,
            const Overrides& ov);

int run_reproduce(const json& cfg, const fs::path& out, const Overrides& ov) {
  require_keys(cfg, {"runs"}, "reproduce");
  json report = json::array();
  int worst = 0;
  for (const auto& r : cfg.at("runs")) {
    require_keys(r, {"name", "kind", "config"}, "reproduce.run");
    std::string name = r.at("name").get<std::string>();
    std::string kind = r.at("kind").get<std::string>();
    fs::path sub = out / name;
    fs::create_directories(sub);
    int rc = run_one(kind, r.at("config"), sub, ov);
    report.push_back({{"name", name}, {"kind", kind}, {"status", rc}, {"pass", rc == 0}});
    worst = std::max(worst, rc);
  }
  write_json(json{{"kind", "reproduce"}, {"runs", report}, {"pass", worst == 0}},
             out / "report.json");
  return worst;
}

int run_one(const std::string& kind, const json& cfg, const fs::path& out,
            const Overrides& ov) {
  write_json(json{{"kind", kind}, {"config", cfg}}, out / "config.json");
  if (kind == "solve") return run_solve(cfg, out, ov);
  if (kind == "conserve") return run_conserve(cfg, out, ov);
  if (kind == "norms") return run_norms(cfg, out, ov);
  if (kind == "estimate") return run_estimate(cfg, out, ov);
  if (kind == "oracle") return run_oracle(cfg, out, ov);
  if (kind == "scatter") return run_scatter(cfg, out, ov);
  if (kind == "counterexample") return run_counterexample(cfg, out, ov);
  if (kind == "reproduce") return run_reproduce(cfg, out, ov);
  throw ConfigError("unknown experiment kind '" + kind + "'");
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"wavemaps: numerical laboratory for 1+1 dimensional wave maps"};
  // long-only help so the short -h does not collide with the --h flag
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  Overrides ov;
  std::uint64_t seed_flag = 0;
  int workers_flag = 0;
  double h_flag = 0, T_flag = 0;

  std::vector<std::string> kinds = {"solve",  "conserve", "norms",          "estimate",
                                    "oracle", "scatter",  "counterexample", "reproduce"};
  std::vector<CLI::App*> subs;
  for (const auto& k : kinds) {
    CLI::App* s = app.add_subcommand(k, "run a '" + k + "' experiment");
    s->set_help_flag("--help", "print help");
    s->add_option("--config", config_path, "JSON config file")->required();
    s->add_option("--out", out_dir, "output directory");
    s->add_option("--seed", seed_flag, "override RNG seed");
    s->add_option("--workers", workers_flag, "override worker count");
    s->add_option("--h", h_flag, "override lattice spacing");
    s->add_option("--T", T_flag, "override time horizon");
    subs.push_back(s);
  }

  CLI11_PARSE(app, argc, argv);

  std::string kind;
  for (size_t k = 0; k < kinds.size(); ++k)
    if (subs[k]->parsed()) kind = kinds[k];
  for (size_t k = 0; k < kinds.size(); ++k)
    if (subs[k]->parsed()) {
      if (subs[k]->count("--seed")) ov.seed = seed_flag;
      if (subs[k]->count("--workers")) ov.workers = workers_flag;
      if (subs[k]->count("--h")) ov.h = h_flag;
      if (subs[k]->count("--T")) ov.T = T_flag;
    }

  try {
    std::ifstream in(config_path);
    if (!in) throw IoError("cannot open config " + config_path);
    json cfg = json::parse(in, nullptr, false);
    if (cfg.is_discarded()) throw ConfigError("config is not valid JSON: " + config_path);
    fs::create_directories(out_dir);
    return run_one(kind, cfg, out_dir, ov);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const BlowupError& e) {
    std::cerr << "numerical guard: blowup at u=" << e.u << " v=" << e.v << " t=" << e.t
              << '\n';
    return 3;
  } catch (const std::domain_error& e) {
    std::cerr << "numerical guard: " << e.what() << '\n';
    return 3;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
  return 0;
}
