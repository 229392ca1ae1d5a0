// hfcov command-line driver.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hfcov/hfcov.hpp"

namespace fs = std::filesystem;
using namespace hfcov;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "1.0.0";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string output_dir;
  std::uint64_t seed = 42;
  std::string format = "csv";
  std::string config_path;
  std::vector<std::string> overrides;
  std::size_t workers = 1;
};

std::ofstream open_out(const Common& c, const std::string& name) {
  std::ofstream f(fs::path(c.output_dir) / name);
  if (!f) throw std::runtime_error("cannot write " + (fs::path(c.output_dir) / name).string());
  return f;
}

ScenarioConfig load_config(const Common& c, const std::string& scenario,
                           const std::string& sampling) {
  ScenarioConfig cfg;
  if (!c.config_path.empty()) {
    std::ifstream in(c.config_path);
    if (!in) throw UsageError("cannot read config file " + c.config_path);
    cfg = parse_config(in);
  } else {
    cfg = preset(parse_scenario(scenario.empty() ? "s1" : scenario),
                 parse_sampling(sampling.empty() ? "equidistant" : sampling));
  }
  if (!scenario.empty() && !c.config_path.empty()) apply_config(cfg, "scenario", scenario);
  if (!sampling.empty() && !c.config_path.empty()) apply_config(cfg, "sampling", sampling);
  for (const auto& kv : c.overrides) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw UsageError("override '" + kv + "' is not key=value");
    apply_config(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  cfg.workers = std::max(cfg.workers, c.workers);
  return cfg;
}

ObservationSeries read_observations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read observations " + path);
  std::string line;
  std::getline(in, line);
  ObservationSeries o;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string idx, t, v, l;
    std::getline(ss, idx, ',');
    std::getline(ss, t, ',');
    std::getline(ss, v, ',');
    std::getline(ss, l, ',');
    o.times.push_back(std::stod(t));
    o.values.push_back(std::stod(v));
    o.latent.push_back(l.empty() ? 0.0 : std::stod(l));
  }
  return o;
}

ReplicationData simulate_scenario(const ScenarioConfig& cfg, std::uint64_t seed) {
  auto d = simulate_replication(cfg, RngSeed{seed, 0});
  for (const auto& w : d.warnings) std::cerr << "warning: " << w << '\n';
  return d;
}

json snapshot_json(const ScenarioConfig& cfg) {
  json j;
  for (const auto& [k, v] : config_snapshot(cfg)) j[k] = v;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Integrated covariance estimation under endogenous sampling and noise"};
  app.require_subcommand(0, 1);
  Common c;
  const char* env_dir = std::getenv("HFCOV_OUTPUT_DIR");
  c.output_dir = env_dir ? env_dir : ".";
  app.add_option("-o,--output-dir", c.output_dir, "Output directory (default $HFCOV_OUTPUT_DIR or .)");
  app.add_option("--seed", c.seed, "Master seed");
  app.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv"}));
  app.add_option("-c,--config", c.config_path, "key = value config file");
  app.add_option("--set", c.overrides, "Config override key=value (repeatable)");
  app.add_option("--workers", c.workers, "Replication worker threads");
  app.fallthrough();

  std::string scenario, sampling;
  auto add_preset = [&](CLI::App* sub) {
    sub->add_option("--scenario", scenario, "Preset s1|s2|s3|custom");
    sub->add_option("--sampling", sampling, "Preset equidistant|hitting");
  };

  auto* simulate = app.add_subcommand("simulate", "Simulate a latent path");
  add_preset(simulate);

  auto* sample = app.add_subcommand("sample", "Generate sampling times");
  std::string scheme = "equidistant";
  double u = 0.01, v = 0.04, bn = 1.0 / 3600.0, mu = 1.0, cc = 1.0, p1 = 0.5, p2 = 0.5;
  double horizon = 1.0;
  sample->add_option("--scheme", scheme, "equidistant|hitting|mixed|poisson|lo_mackinlay")
      ->check(CLI::IsMember({"equidistant", "hitting", "mixed", "poisson", "lo_mackinlay"}));
  auto scheme_options = [&](CLI::App* s) {
    s->add_option("--u", u, "Lower barrier, in units of sqrt(b_n)");
    s->add_option("--v", v, "Upper barrier, in units of sqrt(b_n)");
    s->add_option("--bn", bn, "Nominal mean duration b_n");
    s->add_option("--mu", mu, "Mixed hitting: drift");
    s->add_option("--c", cc, "Mixed hitting: level");
    s->add_option("--p1", p1, "First asset: Poisson intensity factor or thinning probability");
    s->add_option("--p2", p2, "Second asset: Poisson intensity factor or thinning probability");
    s->add_option("--horizon", horizon, "Time horizon");
  };
  scheme_options(sample);

  auto* observe_cmd = app.add_subcommand("observe", "Simulate noisy observations of a scenario");
  add_preset(observe_cmd);

  auto* estimate = app.add_subcommand("estimate", "Point estimators");
  std::string estimator = "phy", xfile, yfile;
  estimate->add_option("--estimator", estimator, "phy|rv|rq|msrv|mrc|gamma1|xi_f")
      ->check(CLI::IsMember({"phy", "rv", "rq", "msrv", "mrc", "gamma1", "xi_f"}));
  estimate->add_option("--x", xfile, "Observation CSV of the first asset (default: simulate)");
  estimate->add_option("--y", yfile, "Observation CSV of the second asset (default: x)");
  add_preset(estimate);

  auto* avar = app.add_subcommand("avar", "Asymptotic variance estimate and spot records");
  avar->add_option("--x", xfile, "Observation CSV of the first asset (default: simulate)");
  avar->add_option("--y", yfile, "Observation CSV of the second asset (default: x)");
  add_preset(avar);

  auto* mc = app.add_subcommand("mc", "Monte Carlo replications of a scenario");
  std::size_t reps = 0;
  mc->add_option("--reps", reps, "Replications");
  add_preset(mc);

  auto* constants = app.add_subcommand("constants", "Kernel constants");
  std::string weight = "min_xx";
  double tol = 1e-10;
  constants->add_option("--weight", weight, "min_xx|quartic_f");
  constants->add_option("--tol", tol, "Quadrature tolerance");

  auto* diag = app.add_subcommand("diag", "Duration diagnostics of a sampling scheme");
  diag->add_option("--scheme", scheme, "equidistant|hitting|mixed|poisson|lo_mackinlay")
      ->check(CLI::IsMember({"equidistant", "hitting", "mixed", "poisson", "lo_mackinlay"}));
  scheme_options(diag);

  app.footer(
      "Presets: --scenario s1|s2|s3 (no noise, iid noise, endogenous noise) x "
      "--sampling equidistant|hitting.\nExit codes: 0 success, 1 usage error, 2 runtime error.");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return 1;
  }

  CLI::App* cmd = app.get_subcommands().front();
  json meta;
  meta["command"] = cmd->get_name();
  meta["version"] = kVersion;
  meta["seed"] = c.seed;
  meta["format"] = c.format;
  meta["argv"] = std::vector<std::string>(argv, argv + argc);
  int code = 0;
  auto t0 = std::chrono::steady_clock::now();

  auto write_meta = [&] {
    std::error_code ec;
    fs::create_directories(c.output_dir, ec);
    meta["elapsed_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    meta["exit_code"] = code;
    std::ofstream f(fs::path(c.output_dir) / "run_meta.json");
    if (f) f << meta.dump(2) << '\n';
  };

  try {
    fs::create_directories(c.output_dir);
    const std::string name = cmd->get_name();
    auto sample_pair = [&](std::uint64_t seed) {
      RngSeed s{seed, 0};
      std::pair<SamplingTimes, std::optional<SamplingTimes>> out;
      if (scheme == "equidistant") {
        out.first = gen_equidistant(horizon, bn);
      } else if (scheme == "hitting") {
        TimeGrid g;
        g.t1 = horizon;
        g.n_fine = static_cast<std::size_t>(std::llround(10.0 * horizon / bn));
        ModelConfig m;
        m.drift_kind = DriftKind::none;
        auto path = simulate_model(g, m, s.child(stream::path));
        BarrierConfig b;
        b.u = u;
        b.v = v;
        b.b_n = bn;
        auto h = gen_barrier_hitting(path, b, s.child(stream::sampling));
        for (const auto& w : h.warnings) std::cerr << "warning: " << w << '\n';
        out.first = h.times;
      } else if (scheme == "mixed") {
        out.first = gen_mixed_hitting(mu, cc, unit_zeta(), bn, horizon, s);
      } else if (scheme == "poisson") {
        PoissonConfig pc;
        pc.n = 1.0 / bn;
        pc.p_under1 = pc.p_over1 = p1;
        pc.p_under2 = pc.p_over2 = p2;
        auto pr = gen_poisson_changepoint(pc, horizon, s);
        out.first = pr.first;
        out.second = pr.second;
      } else {
        LoMacKinlayConfig lc;
        lc.p1 = p1;
        lc.p2 = p2;
        lc.b_n = bn;
        auto pr = gen_lo_mackinlay(lc, horizon, s);
        out.first = pr.first;
        out.second = pr.second;
      }
      return out;
    };
    json params = {{"scheme", scheme}, {"u", u},   {"v", v},   {"bn", bn},
                   {"mu", mu},         {"c", cc},  {"p1", p1}, {"p2", p2},
                   {"horizon", horizon}};

    if (name == "simulate") {
      auto cfg = load_config(c, scenario, sampling);
      meta["config"] = snapshot_json(cfg);
      TimeGrid grid;
      grid.t1 = cfg.preavg.horizon;
      grid.n_fine = static_cast<std::size_t>(
          std::llround(cfg.n * grid.t1 * static_cast<double>(cfg.fine_per_duration)));
      auto p = simulate_model(grid, scenario_model(cfg), RngSeed{c.seed, 0}.child(stream::path));
      auto f = open_out(c, "path.csv");
      write_path_csv(f, p);
    } else if (name == "sample") {
      meta["params"] = params;
      auto pr = sample_pair(c.seed);
      auto f = open_out(c, "times.csv");
      write_times_csv(f, pr.first);
      if (pr.second) {
        auto g = open_out(c, "times_y.csv");
        write_times_csv(g, *pr.second);
        auto h = open_out(c, "refresh.csv");
        write_refresh_csv(h, refresh(pr.first, *pr.second, horizon));
      }
    } else if (name == "observe") {
      auto cfg = load_config(c, scenario, sampling);
      meta["config"] = snapshot_json(cfg);
      auto sim = simulate_scenario(cfg, c.seed);
      auto f = open_out(c, "observations.csv");
      write_observations_csv(f, sim.xs);
    } else if (name == "estimate" || name == "avar") {
      auto cfg = load_config(c, scenario, sampling);
      meta["config"] = snapshot_json(cfg);
      ObservationSeries xs, ys;
      if (xfile.empty()) {
        auto sim = simulate_scenario(cfg, c.seed);
        xs = std::move(sim.xs);
        meta["integrated_variance"] = sim.path.qv_x.back();
      } else {
        xs = read_observations(xfile);
      }
      ys = yfile.empty() ? xs : read_observations(yfile);
      PreAvgConfig pc = cfg.preavg;
      pc.b_n = cfg.b_n();
      auto rd = refresh(xs.times, ys.times, pc.horizon, pc.b_n);
      if (name == "avar") {
        auto a = avar_hat(xs, ys, rd, pc, cfg.spot);
        auto f = open_out(c, "spot_records.csv");
        write_spot_csv(f, a.records);
        auto g = open_out(c, "avar.csv");
        g.precision(17);
        g << "avar,avar_floored,negative_terms,skipped_terms,h_n,k_n\n"
          << a.avar << ',' << a.avar_floored << ',' << a.negative_terms << ',' << a.skipped_terms
          << ',' << a.h_n << ',' << a.k_n << '\n';
        meta["avar"] = a.avar;
      } else {
        EstimatorResult r;
        const std::size_t k = resolve_kn(pc, refresh_returns(rd, pc.horizon));
        if (estimator == "phy") r = phy_refresh(xs, ys, rd, pc);
        else if (estimator == "rv") r = rv(xs, pc.horizon);
        else if (estimator == "rq") r = rq(xs, pc.horizon);
        else if (estimator == "mrc") r = mrc(xs, ys, rd, pc);
        else if (estimator == "xi_f") r = xi_f(xs, ys, rd, k, quartic_f(), pc.horizon);
        else if (estimator == "msrv") {
          MsrvOptions mo = cfg.msrv;
          mo.horizon = pc.horizon;
          auto t = msrv_tuning(xs, mo);
          r = msrv(xs, t.m, pc.horizon);
          meta["c_multi"] = t.c_multi;
          meta["avar_multi"] = t.avar_multi;
        } else {
          auto g = gamma1(xs, ys, rd, k, pc.horizon);
          r.tag = "gamma1";
          r.value = g.v12;
          r.path = g.p12;
          meta["gamma11"] = g.v11;
          meta["gamma22"] = g.v22;
        }
        {
          auto f = open_out(c, "estimate.csv");
          f.precision(17);
          f << "estimator,value,k_n,n_returns,psi\n"
            << estimator << ',' << r.value << ',' << r.k_n << ',' << r.n_returns << ',' << r.psi
            << '\n';
        }
        if (!r.path.empty()) {
          auto f = open_out(c, "estimate_path.csv");
          write_result_csv(f, r);
        }
        meta["estimator"] = estimator;
        meta["value"] = r.value;
      }
    } else if (name == "mc") {
      auto cfg = load_config(c, scenario, sampling);
      if (reps > 0) cfg.reps = reps;
      meta["config"] = snapshot_json(cfg);
      auto rep = run_scenario(cfg, c.seed);
      meta["failures"] = rep.failures;
      { auto f = open_out(c, "per_rep.csv"); write_per_rep_csv(f, rep); }
      { auto f = open_out(c, "bias_rmse.csv"); write_bias_rmse_csv(f, bias_rmse_table(rep)); }
      {
        auto f = open_out(c, "quantiles.csv");
        write_quantiles_csv(f, quantile_coverage_table(rep));
      }
      const auto grid = linear_grid(-5.0, 5.0, 201);
      for (const auto& [tag, vals] : statistics(rep)) {
        std::size_t finite = 0;
        for (double x : vals) finite += std::isfinite(x) ? 1 : 0;
        if (finite < 2) continue;
        { auto f = open_out(c, "density_" + tag + ".csv"); write_density_csv(f, density_export(vals, grid)); }
        { auto f = open_out(c, "qq_" + tag + ".csv"); write_qq_csv(f, qq_export(vals)); }
      }
    } else if (name == "constants") {
      auto k = kernel_constants(weight_by_name(weight), quartic_f(), tol);
      meta["weight"] = weight;
      auto f = open_out(c, "constants.csv");
      write_constants_csv(f, k);
    } else if (name == "diag") {
      meta["params"] = params;
      auto pr = sample_pair(c.seed);
      const SamplingTimes& s1 = pr.first;
      const SamplingTimes& s2 = pr.second ? *pr.second : pr.first;
      auto rd = refresh(s1, s2, horizon);
      auto d = duration_diagnostics(rd, {1.0, 2.0}, bn);
      auto f = open_out(c, "diagnostics.csv");
      f.precision(12);
      f << "r,g1,g2,f1,f2,f12,chi\n";
      for (std::size_t i = 0; i < d.r.size(); ++i)
        f << d.r[i] << ',' << d.g[0][i] << ',' << d.g[1][i] << ',' << d.f1[i] << ',' << d.f2[i]
          << ',' << d.f12[i] << ',' << d.chi[i] << '\n';
      auto sm = duration_summary(rd, bn);
      auto g = open_out(c, "diag_summary.csv");
      g.precision(12);
      g << "quantity,mean,se,count\n";
      const std::pair<const char*, MeanSe> rows[] = {{"G1", sm.g1}, {"G2", sm.g2}, {"F1", sm.f1},
                                                    {"F2", sm.f2}, {"F12", sm.f12}, {"chi", sm.chi}};
      for (const auto& [n, m] : rows) g << n << ',' << m.mean << ',' << m.se << ',' << m.count << '\n';
      meta["G1"] = sm.g1.mean;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    code = 1;
    meta["error"] = e.what();
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    code = 1;
    meta["error"] = e.what();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    code = 2;
    meta["error"] = e.what();
  }
  write_meta();
  return code;
}
