#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "error.hpp"
#include "estimators.hpp"
#include "inference.hpp"
#include "noise.hpp"
#include "paths.hpp"
#include "rng.hpp"
#include "sampling.hpp"

namespace hfcov {

enum class Scenario { s1_no_noise, s2_iid, s3_endogenous, custom };
enum class SamplingKind { equidistant, hitting };

struct ScenarioConfig {
  Scenario scenario = Scenario::s1_no_noise;
  SamplingKind sampling = SamplingKind::equidistant;
  std::size_t reps = 1000;
  double n = 3600.0;
  /// Fine steps per b_n.
  std::size_t fine_per_duration = 10;
  ModelConfig model{};
  PreAvgConfig preavg{};
  SpotConfig spot{};
  NoiseConfig noise{};
  double gamma = 0.001;
  double delta = -std::sqrt(0.001);
  double u = 0.01;
  double v = 0.04;
  MsrvOptions msrv{};
  std::vector<std::string> estimators{"phy", "rv", "msrv"};
  std::size_t workers = 1;

  [[nodiscard]] double b_n() const { return 1.0 / n; }

  void validate() const {
    require(reps >= 1, "ScenarioConfig: reps must be at least 1");
    require(n > 0.0, "ScenarioConfig: n must be positive");
    require(fine_per_duration >= 1, "ScenarioConfig: fine_per_duration must be at least 1");
    require(u > 0.0 && v > 0.0, "ScenarioConfig: barriers must be positive");
    for (const auto& e : estimators)
      require(e == "phy" || e == "rv" || e == "msrv" || e == "mrc",
              "ScenarioConfig: unknown estimator '" + e + "' (valid: phy, rv, msrv, mrc)");
    model.validate();
  }
};

inline const char* to_string(Scenario s) {
  switch (s) {
    case Scenario::s1_no_noise: return "s1";
    case Scenario::s2_iid: return "s2";
    case Scenario::s3_endogenous: return "s3";
    case Scenario::custom: return "custom";
  }
  return "?";
}

inline const char* to_string(SamplingKind s) {
  return s == SamplingKind::equidistant ? "equidistant" : "hitting";
}

/// Preset for one of the three noise scenarios and two samplings.
inline ScenarioConfig preset(Scenario sc, SamplingKind sk) {
  ScenarioConfig c;
  c.scenario = sc;
  c.sampling = sk;
  c.model.sigma = 0.02;
  c.model.x1 = c.model.sigma / 2.0;
  c.model.drift_kind = DriftKind::bridge;
  c.preavg.theta = 0.15;
  c.preavg.rule = KnRule::data_driven;
  return c;
}

/// Noise model implied by the scenario tag; `custom` keeps cfg.noise.
inline NoiseConfig scenario_noise(const ScenarioConfig& c) {
  NoiseConfig nc;
  switch (c.scenario) {
    case Scenario::s1_no_noise: break;
    case Scenario::s2_iid: {
      const double var = c.gamma * c.model.sigma * c.model.sigma;
      nc.psi = {var, 0.0, var};
      break;
    }
    case Scenario::s3_endogenous: nc.endo_scale_x = nc.endo_scale_y = 1.0; break;
    case Scenario::custom: nc = c.noise; break;
  }
  return nc;
}

inline ModelConfig scenario_model(const ScenarioConfig& c) {
  ModelConfig m = c.model;
  if (c.scenario == Scenario::s3_endogenous) m.endo_factor_x = m.endo_factor_y = c.delta;
  return m;
}

struct McRecord {
  std::size_t rep = 0;
  std::string estimator;
  double value = std::numeric_limits<double>::quiet_NaN();
  double truth = std::numeric_limits<double>::quiet_NaN();
  double avar = std::numeric_limits<double>::quiet_NaN();
  double stat = std::numeric_limits<double>::quiet_NaN();
  double stat_log = std::numeric_limits<double>::quiet_NaN();
  double stat_inv = std::numeric_limits<double>::quiet_NaN();
  std::string reason;
};

struct RepInfo {
  std::size_t rep = 0;
  bool ok = true;
  std::string failure;
  double truth = 0.0;
  double x_increment = 0.0;
  std::size_t n_returns = 0;
  std::size_t k_n = 0;
  double c_multi = 0.0;
  std::size_t negative_avar_terms = 0;
};

struct McReport {
  ScenarioConfig cfg;
  std::uint64_t master_seed = 0;
  std::vector<RepInfo> reps;
  std::vector<McRecord> per_rep;
  std::size_t failures = 0;
};

struct RepOutput {
  RepInfo info;
  std::vector<McRecord> records;
};

/// Latent path, sampling times and observations of one replication.
struct ReplicationData {
  /// Path with every sampling epoch as a node.
  LatentPath path;
  SamplingTimes times;
  ObservationSeries xs;
  std::vector<std::string> warnings;
};

inline ReplicationData simulate_replication(const ScenarioConfig& cfg, RngSeed seed) {
  ReplicationData d;
  TimeGrid grid;
  grid.t1 = cfg.preavg.horizon;
  grid.n_fine = static_cast<std::size_t>(
      std::llround(cfg.n * grid.t1 * static_cast<double>(cfg.fine_per_duration)));
  d.path = simulate_model(grid, scenario_model(cfg), seed.child(stream::path));
  if (cfg.sampling == SamplingKind::equidistant) {
    d.times = gen_equidistant(grid.t1, cfg.b_n());
  } else {
    BarrierConfig bc;
    bc.u = cfg.u;
    bc.v = cfg.v;
    bc.b_n = cfg.b_n();
    auto hit = gen_barrier_hitting(d.path, bc, seed.child(stream::sampling));
    d.times = std::move(hit.times);
    d.path = std::move(hit.path);
    d.warnings = std::move(hit.warnings);
  }
  d.xs = observe(d.path, d.times, scenario_noise(cfg), seed.child(stream::noise), Asset::x);
  return d;
}

namespace detail {
inline McRecord record(std::size_t rep, const char* estimator, double value, double truth,
                       double avar = std::numeric_limits<double>::quiet_NaN()) {
  McRecord r;
  r.rep = rep;
  r.estimator = estimator;
  r.value = value;
  r.truth = truth;
  r.avar = avar;
  return r;
}
}  // namespace detail

/// One replication with its own seed stream (master_seed, rep).
inline RepOutput run_replication(const ScenarioConfig& cfg, std::uint64_t master_seed,
                                 std::size_t rep) {
  const RngSeed seed{master_seed, rep};
  RepOutput out;
  out.info.rep = rep;
  const double b_n = cfg.b_n();
  auto data = simulate_replication(cfg, seed);
  const auto& xs = data.xs;
  const auto& times = data.times;
  out.info.truth = data.path.qv_x.back();
  out.info.x_increment = data.path.x.back() - data.path.x.front();
  const double truth = out.info.truth;
  const double horizon = cfg.preavg.horizon;
  out.info.n_returns = times.returns_until(horizon);

  auto want = [&](const char* e) {
    return std::find(cfg.estimators.begin(), cfg.estimators.end(), e) != cfg.estimators.end();
  };
  if (want("phy") || want("mrc")) {
    PreAvgConfig pc = cfg.preavg;
    pc.b_n = b_n;
    auto rd = refresh(xs.times, xs.times, horizon, b_n);
    if (want("phy")) {
      auto est = phy_refresh(xs, xs, rd, pc, false);
      auto av = avar_hat(xs, xs, rd, pc, cfg.spot);
      out.info.k_n = est.k_n;
      out.info.negative_avar_terms = av.negative_terms;
      McRecord r = detail::record(rep, "phy", est.value, truth, av.avar);
      auto s = studentize(est.value, truth, av.avar);
      auto sl = log_stat(est.value, truth, av.avar);
      auto si = inv_stat(est.value, truth, av.avar);
      r.stat = s.value;
      r.stat_log = sl.value;
      r.stat_inv = si.value;
      r.reason = !s.reason.empty() ? s.reason : (!sl.reason.empty() ? sl.reason : si.reason);
      out.records.push_back(r);
    }
    if (want("mrc")) {
      auto est = mrc(xs, xs, rd, pc);
      McRecord r = detail::record(rep, "mrc", est.value, truth);
      r.reason = "no feasible variance estimator";
      out.records.push_back(r);
    }
  }
  if (want("rv")) {
    auto a = rv(xs, horizon);
    auto q = rq(xs, horizon);
    McRecord r = detail::record(rep, "rv", a.value, truth, 2.0 / 3.0 * q.value);
    auto s = studentize_rv(a.value, q.value, truth);
    r.stat = s.value;
    r.reason = s.reason;
    out.records.push_back(r);
  }
  if (want("msrv")) {
    MsrvOptions mo = cfg.msrv;
    mo.horizon = horizon;
    auto tune = msrv_tuning(xs, mo);
    out.info.c_multi = tune.c_multi;
    auto est = msrv(xs, tune.m, horizon);
    McRecord r = detail::record(rep, "msrv", est.value, truth, tune.avar_multi);
    auto s = studentize_msrv(est.value, truth, est.n_returns, tune.avar_multi);
    r.stat = s.value;
    r.reason = s.reason;
    out.records.push_back(r);
  }
  return out;
}

/// All replications, distributed over cfg.workers threads. Results are stored by
/// replication index, so the report does not depend on scheduling.
inline McReport run_scenario(const ScenarioConfig& cfg, std::uint64_t master_seed) {
  cfg.validate();
  McReport rep;
  rep.cfg = cfg;
  rep.master_seed = master_seed;
  std::vector<RepOutput> outs(cfg.reps);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < cfg.reps; i = next++) {
      try {
        outs[i] = run_replication(cfg, master_seed, i);
      } catch (const std::exception& e) {
        outs[i] = RepOutput{};
        outs[i].info.rep = i;
        outs[i].info.ok = false;
        outs[i].info.failure = e.what();
      }
    }
  };
  const std::size_t nw = std::max<std::size_t>(1, std::min(cfg.workers, cfg.reps));
  if (nw == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < nw; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (auto& o : outs) {
    if (!o.info.ok) ++rep.failures;
    rep.reps.push_back(o.info);
    for (auto& r : o.records) rep.per_rep.push_back(std::move(r));
  }
  if (static_cast<double>(rep.failures) > 0.01 * static_cast<double>(cfg.reps)) {
    std::ostringstream msg;
    msg << "run_scenario: " << rep.failures << " of " << cfg.reps << " replications failed";
    for (const auto& r : rep.reps)
      if (!r.ok) {
        msg << "; first failure (rep " << r.rep << "): " << r.failure;
        break;
      }
    throw std::runtime_error(msg.str());
  }
  return rep;
}

struct BiasRmse {
  std::string estimator;
  std::size_t count = 0;
  double bias = 0.0;
  double rmse = 0.0;
  /// Standard error of the bias.
  double se = 0.0;
};

/// Relative bias mean((est − [X]₁)/[X]₁) and rmse on the same scale.
inline std::vector<BiasRmse> bias_rmse_table(const McReport& rep) {
  std::map<std::string, std::vector<double>> rel;
  std::vector<std::string> order;
  for (const auto& r : rep.per_rep) {
    if (!std::isfinite(r.value) || !(r.truth > 0.0)) continue;
    if (!rel.count(r.estimator)) order.push_back(r.estimator);
    rel[r.estimator].push_back((r.value - r.truth) / r.truth);
  }
  std::vector<BiasRmse> out;
  for (const auto& e : order) {
    const auto& v = rel[e];
    BiasRmse b;
    b.estimator = e;
    b.count = v.size();
    double s = 0.0, q = 0.0;
    for (double x : v) {
      s += x;
      q += x * x;
    }
    const double n = static_cast<double>(v.size());
    b.bias = s / n;
    b.rmse = std::sqrt(q / n);
    double var = 0.0;
    for (double x : v) var += (x - b.bias) * (x - b.bias);
    b.se = n > 1 ? std::sqrt(var / (n - 1) / n) : 0.0;
    out.push_back(b);
  }
  return out;
}

inline const std::vector<double>& default_levels() {
  static const std::vector<double> l{0.005, 0.025, 0.05, 0.95, 0.975, 0.995};
  return l;
}

struct QuantileRow {
  std::string statistic;
  std::size_t count = 0;
  std::size_t excluded = 0;
  double mean = 0.0;
  double sd = 0.0;
  /// Fraction of statistics at or below the standard-normal quantile of each level.
  std::vector<double> cdf;
  double coverage = 0.0;
};

/// Summary of one sample of statistics (NaNs counted as excluded).
inline QuantileRow quantile_row(const std::string& name, const std::vector<double>& raw,
                                const std::vector<double>& levels = default_levels()) {
  QuantileRow q;
  q.statistic = name;
  std::vector<double> v;
  for (double x : raw)
    if (std::isfinite(x))
      v.push_back(x);
    else
      ++q.excluded;
  q.count = v.size();
  if (v.empty()) return q;
  const double n = static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v) s += x;
  q.mean = s / n;
  double ss = 0.0;
  for (double x : v) ss += (x - q.mean) * (x - q.mean);
  q.sd = v.size() > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
  boost::math::normal_distribution<double> nd;
  for (double l : levels) {
    const double z = boost::math::quantile(nd, l);
    q.cdf.push_back(static_cast<double>(std::count_if(v.begin(), v.end(),
                                                      [z](double x) { return x <= z; })) /
                    n);
  }
  const double zc = boost::math::quantile(nd, 0.975);
  q.coverage = static_cast<double>(std::count_if(v.begin(), v.end(),
                                                 [zc](double x) { return std::abs(x) <= zc; })) /
               n;
  return q;
}

/// Statistic samples keyed by tag: S_PHY, S_log, S_inv, S_RV, S_MSRV.
inline std::map<std::string, std::vector<double>> statistics(const McReport& rep) {
  std::map<std::string, std::vector<double>> m;
  for (const auto& r : rep.per_rep) {
    if (r.estimator == "phy") {
      m["S_PHY"].push_back(r.stat);
      m["S_log"].push_back(r.stat_log);
      m["S_inv"].push_back(r.stat_inv);
    } else if (r.estimator == "rv") {
      m["S_RV"].push_back(r.stat);
    } else if (r.estimator == "msrv") {
      m["S_MSRV"].push_back(r.stat);
    }
  }
  return m;
}

inline std::vector<QuantileRow> quantile_coverage_table(
    const McReport& rep, const std::vector<double>& levels = default_levels()) {
  std::vector<QuantileRow> out;
  for (const auto& [k, v] : statistics(rep)) out.push_back(quantile_row(k, v, levels));
  return out;
}

struct DensityPoint {
  double x = 0.0;
  double density = 0.0;
};

inline double silverman_bandwidth(std::vector<double> v) {
  require(v.size() >= 2, "silverman_bandwidth: needs 2 values");
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  double m = 0.0;
  for (double x : v) m += x;
  m /= n;
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  const double sd = std::sqrt(ss / (n - 1));
  auto q = [&](double p) {
    const double pos = p * (n - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  const double iqr = q(0.75) - q(0.25);
  double s = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
  return 0.9 * s * std::pow(n, -0.2);
}

/// Gaussian kernel density with Silverman's bandwidth on `grid`.
inline std::vector<DensityPoint> density_export(const std::vector<double>& raw,
                                                const std::vector<double>& grid) {
  std::vector<double> v;
  for (double x : raw)
    if (std::isfinite(x)) v.push_back(x);
  if (v.size() < 2) throw InsufficientDataError("density_export: too few statistics");
  const double h = silverman_bandwidth(v);
  const double c = 1.0 / (static_cast<double>(v.size()) * h * std::sqrt(2.0 * M_PI));
  std::vector<DensityPoint> out;
  for (double x : grid) {
    double s = 0.0;
    for (double y : v) {
      const double z = (x - y) / h;
      s += std::exp(-0.5 * z * z);
    }
    out.push_back({x, s * c});
  }
  return out;
}

inline std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return g;
}

/// (normal quantile at k/(n+1), k-th order statistic).
inline std::vector<std::pair<double, double>> qq_export(const std::vector<double>& raw) {
  std::vector<double> v;
  for (double x : raw)
    if (std::isfinite(x)) v.push_back(x);
  std::sort(v.begin(), v.end());
  boost::math::normal_distribution<double> nd;
  std::vector<std::pair<double, double>> out;
  const double n = static_cast<double>(v.size());
  for (std::size_t k = 0; k < v.size(); ++k)
    out.emplace_back(boost::math::quantile(nd, static_cast<double>(k + 1) / (n + 1.0)), v[k]);
  return out;
}

inline void write_per_rep_csv(std::ostream& os, const McReport& rep) {
  os.precision(17);
  os << "rep,estimator,value,truth,avar,stat,stat_log,stat_inv,reason\n";
  for (const auto& r : rep.per_rep)
    os << r.rep << ',' << r.estimator << ',' << r.value << ',' << r.truth << ',' << r.avar << ','
       << r.stat << ',' << r.stat_log << ',' << r.stat_inv << ',' << r.reason << '\n';
}

inline void write_bias_rmse_csv(std::ostream& os, const std::vector<BiasRmse>& t) {
  os.precision(10);
  os << "estimator,count,bias,rmse,bias_se\n";
  for (const auto& b : t)
    os << b.estimator << ',' << b.count << ',' << b.bias << ',' << b.rmse << ',' << b.se << '\n';
}

inline void write_quantiles_csv(std::ostream& os, const std::vector<QuantileRow>& t,
                                const std::vector<double>& levels = default_levels()) {
  os.precision(10);
  os << "statistic,count,excluded,mean,sd";
  for (double l : levels) os << ",p" << l;
  os << ",coverage95\n";
  for (const auto& q : t) {
    os << q.statistic << ',' << q.count << ',' << q.excluded << ',' << q.mean << ',' << q.sd;
    for (double c : q.cdf) os << ',' << c;
    os << ',' << q.coverage << '\n';
  }
}

inline void write_density_csv(std::ostream& os, const std::vector<DensityPoint>& d) {
  os.precision(10);
  os << "x,density\n";
  for (const auto& p : d) os << p.x << ',' << p.density << '\n';
}

inline void write_qq_csv(std::ostream& os, const std::vector<std::pair<double, double>>& q) {
  os.precision(10);
  os << "normal_quantile,empirical_quantile\n";
  for (const auto& [a, b] : q) os << a << ',' << b << '\n';
}

// Config keys ---------------------------------------------------------------

inline const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> k{
      "scenario", "sampling", "reps",     "n",       "fine_per_duration", "sigma",
      "x1",       "corr",     "drift",    "theta",   "k_n",               "k_rule",
      "norm",     "horizon",  "h_n",      "spot_edge", "gamma",           "delta",
      "u",        "v",        "c_multi",  "estimators", "workers"};
  return k;
}

namespace detail {

inline double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ParameterError("config key '" + key + "': not a number: '" + v + "'");
  }
}

inline std::size_t to_count(const std::string& key, const std::string& v) {
  double d = to_double(key, v);
  if (d < 0 || d != std::floor(d)) throw ParameterError("config key '" + key + "': not a count");
  return static_cast<std::size_t>(d);
}

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace detail

inline Scenario parse_scenario(const std::string& v) {
  if (v == "s1") return Scenario::s1_no_noise;
  if (v == "s2") return Scenario::s2_iid;
  if (v == "s3") return Scenario::s3_endogenous;
  if (v == "custom") return Scenario::custom;
  throw ParameterError("unknown scenario '" + v + "' (valid: s1, s2, s3, custom)");
}

inline SamplingKind parse_sampling(const std::string& v) {
  if (v == "equidistant") return SamplingKind::equidistant;
  if (v == "hitting") return SamplingKind::hitting;
  throw ParameterError("unknown sampling '" + v + "' (valid: equidistant, hitting)");
}

/// Set one key. Unknown keys raise ParameterError listing the valid ones.
inline void apply_config(ScenarioConfig& c, const std::string& key, const std::string& value) {
  using detail::to_count;
  using detail::to_double;
  if (key == "scenario") c.scenario = parse_scenario(value);
  else if (key == "sampling") c.sampling = parse_sampling(value);
  else if (key == "reps") c.reps = to_count(key, value);
  else if (key == "n") c.n = to_double(key, value);
  else if (key == "fine_per_duration") c.fine_per_duration = to_count(key, value);
  else if (key == "sigma") c.model.sigma = to_double(key, value);
  else if (key == "x1") c.model.x1 = to_double(key, value);
  else if (key == "corr") c.model.corr = to_double(key, value);
  else if (key == "drift") {
    if (value == "bridge") c.model.drift_kind = DriftKind::bridge;
    else if (value == "none") c.model.drift_kind = DriftKind::none;
    else throw ParameterError("unknown drift '" + value + "' (valid: bridge, none)");
  } else if (key == "theta") c.preavg.theta = to_double(key, value);
  else if (key == "k_n") c.preavg.k_n = to_count(key, value);
  else if (key == "k_rule") {
    if (value == "data") c.preavg.rule = KnRule::data_driven;
    else if (value == "bn") c.preavg.rule = KnRule::spec_driven;
    else throw ParameterError("unknown k_rule '" + value + "' (valid: data, bn)");
  } else if (key == "norm") {
    if (value == "discrete") c.preavg.norm = Normalization::discrete;
    else if (value == "continuous") c.preavg.norm = Normalization::continuous;
    else throw ParameterError("unknown norm '" + value + "' (valid: discrete, continuous)");
  } else if (key == "horizon") c.preavg.horizon = to_double(key, value);
  else if (key == "h_n") c.spot.h_n = to_double(key, value);
  else if (key == "spot_edge") {
    if (value == "literal") c.spot.edge = SpotEdge::literal;
    else if (value == "window") c.spot.edge = SpotEdge::window;
    else throw ParameterError("unknown spot_edge '" + value + "' (valid: literal, window)");
  } else if (key == "gamma") c.gamma = to_double(key, value);
  else if (key == "delta") c.delta = to_double(key, value);
  else if (key == "u") c.u = to_double(key, value);
  else if (key == "v") c.v = to_double(key, value);
  else if (key == "c_multi") c.msrv.c_override = to_double(key, value);
  else if (key == "estimators") {
    c.estimators.clear();
    std::stringstream ss(value);
    std::string tok;
    while (std::getline(ss, tok, ',')) c.estimators.push_back(detail::trim(tok));
  } else if (key == "workers") c.workers = to_count(key, value);
  else {
    std::string valid;
    for (const auto& k : config_keys()) valid += (valid.empty() ? "" : ", ") + k;
    throw ParameterError("unknown config key '" + key + "' (valid: " + valid + ")");
  }
}

/// key = value lines; '#' starts a comment. The scenario and sampling keys, if
/// present, select a preset before the other keys are applied.
inline ScenarioConfig parse_config(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = detail::trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParameterError("config line " + std::to_string(lineno) + ": expected key = value");
    kv.emplace_back(detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
  }
  Scenario sc = Scenario::s1_no_noise;
  SamplingKind sk = SamplingKind::equidistant;
  for (auto& [k, v] : kv) {
    if (k == "scenario") sc = parse_scenario(v);
    if (k == "sampling") sk = parse_sampling(v);
  }
  ScenarioConfig c = preset(sc, sk);
  for (auto& [k, v] : kv) apply_config(c, k, v);
  return c;
}

/// Flat key/value snapshot of a config.
inline std::vector<std::pair<std::string, std::string>> config_snapshot(const ScenarioConfig& c) {
  auto num = [](double d) {
    std::ostringstream o;
    o.precision(17);
    o << d;
    return o.str();
  };
  std::string est;
  for (const auto& e : c.estimators) est += (est.empty() ? "" : ",") + e;
  return {{"scenario", to_string(c.scenario)},
          {"sampling", to_string(c.sampling)},
          {"reps", std::to_string(c.reps)},
          {"n", num(c.n)},
          {"fine_per_duration", std::to_string(c.fine_per_duration)},
          {"sigma", num(c.model.sigma)},
          {"x1", num(c.model.x1)},
          {"corr", num(c.model.corr)},
          {"drift", c.model.drift_kind == DriftKind::bridge ? "bridge" : "none"},
          {"theta", num(c.preavg.theta)},
          {"k_n", std::to_string(c.preavg.k_n)},
          {"k_rule", c.preavg.rule == KnRule::data_driven ? "data" : "bn"},
          {"norm", c.preavg.norm == Normalization::discrete ? "discrete" : "continuous"},
          {"horizon", num(c.preavg.horizon)},
          {"h_n", num(c.spot.h_n)},
          {"spot_edge", c.spot.edge == SpotEdge::literal ? "literal" : "window"},
          {"gamma", num(c.gamma)},
          {"delta", num(c.delta)},
          {"u", num(c.u)},
          {"v", num(c.v)},
          {"c_multi", num(c.msrv.c_override)},
          {"estimators", est},
          {"workers", std::to_string(c.workers)}};
}

}  // namespace hfcov
