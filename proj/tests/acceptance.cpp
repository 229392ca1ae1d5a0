// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <string>

#include "hfcov/hfcov.hpp"
#include "oracle.hpp"

using namespace hfcov;

namespace {

int g_failures = 0;

void report(const char* id, bool pass, const std::string& what) {
  std::printf("%s %-4s %s\n", pass ? "PASS" : "FAIL", id, what.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

void info(const char* id, const std::string& what) {
  std::printf("INFO %-4s %s\n", id, what.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... a) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

bool within(double x, double target, double tol) { return std::abs(x - target) <= tol; }

struct Moments {
  double mean = 0.0, sd = 0.0, se = 0.0;
  std::size_t n = 0;
};

Moments moments(const std::vector<double>& v) {
  Moments m;
  m.n = v.size();
  if (v.size() < 2) return m;
  double s = 0.0, q = 0.0;
  for (double x : v) s += x;
  const double n = static_cast<double>(v.size());
  m.mean = s / n;
  for (double x : v) q += (x - m.mean) * (x - m.mean);
  m.sd = std::sqrt(q / (n - 1));
  m.se = m.sd / std::sqrt(n);
  return m;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

BiasRmse row(const McReport& rep, const std::string& est) {
  for (const auto& b : bias_rmse_table(rep))
    if (b.estimator == est) return b;
  return {};
}

constexpr std::uint64_t kSeed = 42;
constexpr std::size_t kReps = 1000;

McReport scenario1(SamplingKind sk, double n = 3600.0, std::vector<std::string> est = {}) {
  auto c = preset(Scenario::s1_no_noise, sk);
  c.reps = kReps;
  c.n = n;
  if (!est.empty()) c.estimators = std::move(est);
  return run_scenario(c, kSeed);
}

// Criteria 1 and 2.
void bias_rmse(const McReport& eq, const McReport& hit, double eq_seconds) {
  const auto pe = row(eq, "phy"), re = row(eq, "rv");
  report("1", within(pe.bias, -0.008, 0.010) && within(pe.rmse, 0.089, 0.2 * 0.089) &&
                  within(re.bias, 0.000, 0.003) && eq_seconds < 300.0,
         fmt("S1 equidistant: PHY bias %.4f [-0.008+-0.010] rmse %.4f [0.089+-20%%], RV bias %.4f "
             "[0+-0.003], runtime %.0f s [<300]",
             pe.bias, pe.rmse, re.bias, eq_seconds));
  info("1", fmt("S1 equidistant: MSRV bias %.4f rmse %.4f, RV rmse %.4f", row(eq, "msrv").bias,
                row(eq, "msrv").rmse, re.rmse));
  const auto ph = row(hit, "phy"), rh = row(hit, "rv");
  report("2", within(ph.bias, 0.006, 0.010) && within(rh.bias, 0.013, 0.003),
         fmt("S1 hitting: PHY bias %.4f [0.006+-0.010], RV bias %.4f [0.013+-0.003]", ph.bias,
             rh.bias));
  info("2", fmt("S1 hitting: PHY rmse %.4f, RV rmse %.4f, MSRV bias %.4f rmse %.4f", ph.rmse,
                rh.rmse, row(hit, "msrv").bias, row(hit, "msrv").rmse));
}

// Criteria 3 and 4.
void studentized(const McReport& eq, const McReport& hit) {
  const auto sh = statistics(hit), se = statistics(eq);
  const auto phy = quantile_row("S_PHY", sh.at("S_PHY"));
  const auto srv = quantile_row("S_RV", sh.at("S_RV"));
  const auto sms = quantile_row("S_MSRV", sh.at("S_MSRV"));
  report("3",
         within(phy.mean, -0.03, 0.10) && within(phy.sd, 1.01, 0.10) &&
             within(phy.coverage, 0.9498, 0.02) && within(srv.mean, 0.50, 0.12) &&
             within(sms.mean, 0.20, 0.10),
         fmt("S1 hitting: S_PHY mean %.3f sd %.3f cov %.4f, S_RV mean %.3f, S_MSRV mean %.3f", phy.mean,
             phy.sd, phy.coverage, srv.mean, sms.mean));
  info("3", fmt("excluded statistics: S_PHY %zu, S_RV %zu, S_MSRV %zu", phy.excluded, srv.excluded,
                sms.excluded));

  struct Target {
    const char* stat;
    const char* sampling;
    double coverage;
  };
  const Target targets[] = {{"S_log", "equidistant", 0.9490},
                            {"S_inv", "equidistant", 0.9516},
                            {"S_log", "hitting", 0.9472},
                            {"S_inv", "hitting", 0.9450}};
  bool ok = true;
  std::string detail;
  for (const auto& t : targets) {
    const auto& src = std::string(t.sampling) == "hitting" ? sh : se;
    const auto q = quantile_row(t.stat, src.at(t.stat));
    ok = ok && within(q.coverage, t.coverage, 0.02);
    detail += fmt("%s %s %.4f [%.4f+-0.02]; ", t.stat, t.sampling, q.coverage, t.coverage);
  }
  report("4", ok, detail);
  for (const char* s : {"S_PHY", "S_log", "S_inv", "S_RV", "S_MSRV"}) {
    const auto q = quantile_row(s, se.at(s));
    info("4", fmt("equidistant %-6s mean %.3f sd %.3f cov %.4f", s, q.mean, q.sd, q.coverage));
  }
}

struct Shape {
  double mode = 0.0, peak = 0.0, sd = 0.0;
};

Shape shape(const std::vector<double>& v) {
  Shape s;
  auto climb = [&](const std::vector<double>& grid) {
    for (const auto& p : density_export(v, grid))
      if (p.density > s.peak) {
        s.peak = p.density;
        s.mode = p.x;
      }
  };
  climb(linear_grid(-5.0, 5.0, 401));
  climb(linear_grid(s.mode - 0.025, s.mode + 0.025, 201));
  s.sd = quantile_row("", v).sd;
  return s;
}

// Criterion 5. Reference shape is the standard normal (mode 0, sd 1, peak 1/sqrt(2 pi)).
void densities(const McReport& eq, const McReport& hit) {
  const auto sh = statistics(hit), se = statistics(eq);
  const double normal_peak = 1.0 / std::sqrt(2.0 * M_PI);
  bool ok = true;
  std::string detail;
  for (const char* s : {"S_RV", "S_MSRV"}) {
    const auto a = shape(se.at(s)), b = shape(sh.at(s));
    const double mean = quantile_row(s, sh.at(s)).mean;
    ok = ok && b.mode > 0.0 && mean > 0.0 && b.sd < 1.0 && b.sd < a.sd && b.peak > normal_peak &&
         b.peak > a.peak;
    detail += fmt("hitting %s mode %.3f mean %.3f sd %.3f peak %.3f (equidistant sd %.3f peak %.3f); ",
                  s, b.mode, mean, b.sd, b.peak, a.sd, a.peak);
    info("5", fmt("equidistant %s mode %.3f", s, a.mode));
  }
  const auto p = shape(sh.at("S_PHY"));
  ok = ok && within(p.mode, 0.0, 0.15);
  detail += fmt("hitting S_PHY mode %.3f [0+-0.15]", p.mode);
  report("5", ok, detail);
  info("5", fmt("equidistant S_PHY mode %.3f", shape(se.at("S_PHY")).mode));
}

// Criterion 6.
void avar_consistency(const McReport& eq) {
  const auto& c = eq.cfg;
  const double s2 = c.model.sigma * c.model.sigma;
  SpotModel m;
  m.qx = m.qy = m.qxy = constant_fn(s2);
  W2Options o;
  o.theta = c.preavg.theta;
  const double w2 = theoretical_w2(m, SchemeLimits{}, default_constants(), W2Flavor::phy_exogenous, o);
  const double closed = 2.0 / std::pow(0.25, 4) * c.preavg.theta * 0.006531945822310406 * s2 * s2;
  std::vector<double> scaled;
  for (const auto& r : eq.per_rep)
    if (r.estimator == "phy" && r.rep < 200 && std::isfinite(r.avar))
      scaled.push_back(r.avar / std::sqrt(c.b_n()));
  const auto mm = moments(scaled);
  report("6", scaled.size() == 200 && within(mm.mean / w2, 1.0, 0.15) && within(w2 / closed, 1.0, 1e-9),
         fmt("mean b_n^-1/2 AVAR %.4e (se %.1e) over %zu reps vs int w^2 %.4e: ratio %.3f [1+-0.15]",
             mm.mean, mm.se, scaled.size(), w2, mm.mean / w2));
}

struct Limits {
  double g, chi, f1, f2, f12;
};

struct Regime {
  std::vector<double> g, chi, f1, f2, f12;
};

// Per-duration quantities grouped by the regime containing R^{k-1}.
template <class Which>
std::vector<Regime> by_regime(const RefreshData& rd, double b_n, std::size_t count, Which which) {
  std::vector<Regime> out(count);
  for (std::size_t k = 1; k + 1 < rd.size(); ++k) {
    const int idx = which(rd.r[k - 1]);
    if (idx < 0) continue;
    auto& g = out[static_cast<std::size_t>(idx)];
    g.g.push_back(rd.gamma[k] / b_n);
    g.chi.push_back(rd.s_hat[k] == rd.t_hat[k] ? 1.0 : 0.0);
    g.f1.push_back(rd.i_check[k] / b_n);
    g.f2.push_back(rd.j_check[k] / b_n);
    g.f12.push_back(rd.star[k] / b_n);
  }
  return out;
}

bool agree(const Regime& r, const Limits& l, std::string& detail, const char* label) {
  bool ok = r.g.size() >= 10000;
  if (!ok) detail += fmt("%s only %zu durations; ", label, r.g.size());
  auto one = [&](const char* name, const std::vector<double>& v, double target) {
    const auto m = moments(v);
    const bool exact = m.se == 0.0;
    const bool pass = exact ? m.mean == target : within(m.mean, target, 3.0 * m.se);
    ok = ok && pass;
    if (!pass) detail += fmt("%s %s %.4f vs %.4f (se %.4f); ", label, name, m.mean, target, m.se);
  };
  one("G", r.g, l.g);
  one("chi", r.chi, l.chi);
  one("F1", r.f1, l.f1);
  one("F2", r.f2, l.f2);
  one("F12", r.f12, l.f12);
  return ok;
}

// Criterion 7.
void scheme_limits() {
  const double b_n = 1.0 / 3600.0;
  bool ok = true;
  std::string detail;
  std::size_t total = 0;

  {
    TimeGrid g;
    g.t1 = 3.0;
    g.n_fine = 108000;
    ModelConfig m;
    m.sigma = 0.02;
    m.drift_kind = DriftKind::none;
    auto path = simulate_model(g, m, RngSeed{kSeed, 70});
    auto h = gen_barrier_hitting(path, BarrierConfig{}, RngSeed{kSeed, 71});
    auto rd = refresh(h.times.times, h.times.times, g.t1, b_n);
    auto r = by_regime(rd, b_n, 1, [](double) { return 0; });
    total += r[0].g.size();
    ok = agree(r[0], {1.0, 1.0, 1.0, 1.0, 1.0}, detail, "hitting") && ok;
    detail += fmt("hitting G %.4f (n %zu); ", moments(r[0].g).mean, r[0].g.size());
  }

  {
    LoMacKinlayConfig c;
    c.p1 = 0.3;
    c.p2 = 0.6;
    c.b_n = b_n;
    const double horizon = 8.0;
    auto [s, t] = gen_lo_mackinlay(c, horizon, RngSeed{kSeed, 72});
    auto rd = refresh(s, t, horizon);
    auto r = by_regime(rd, b_n, 1, [](double) { return 0; });
    total += r[0].g.size();
    const double q1 = 1 - c.p1, q2 = 1 - c.p2, d = 1 - c.p1 * c.p2;
    const Limits l{1 / q1 + 1 / q2 - 1 / d, q1 * q2 / d, 1 / q1 + c.p1 * c.p2 * q1 / (d * d),
                   1 / q2 + c.p1 * c.p2 * q2 / (d * d), 1 / d + c.p1 * c.p2 * (q1 + q2) / (d * d)};
    ok = agree(r[0], l, detail, "lo_mackinlay") && ok;
    detail += fmt("lo_mackinlay G %.4f [%.4f] chi %.4f [%.4f]; ", moments(r[0].g).mean, l.g,
                  moments(r[0].chi).mean, l.chi);
    info("7", fmt("lo_mackinlay chi %.4f F1 %.4f F12 %.4f; textbook forms chi %.4f F1 %.4f F12 %.4f",
                  moments(r[0].chi).mean, moments(r[0].f1).mean, moments(r[0].f12).mean, q1 * q2,
                  1 / q1, (2 - q1 * q2) / d));
  }

  {
    // Two runs cover all four regimes: tau1 < tau2 and tau2 < tau1.
    PoissonConfig pc;
    pc.p_under1 = 0.5;
    pc.p_over1 = 1.0;
    pc.p_under2 = 0.8;
    pc.p_over2 = 2.0;
    auto lim = [](double a, double b) {
      return Limits{1 / a + 1 / b - 1 / (a + b), 0.0, 1 / a + a / ((a + b) * (a + b)),
                    1 / b + b / ((a + b) * (a + b)), 2 / (a + b)};
    };
    // Regime lengths give each regime at least 10^4 durations.
    for (int run = 0; run < 2; ++run) {
      pc.tau1 = run == 0 ? 7.5 : 14.0;
      pc.tau2 = run == 0 ? 12.5 : 7.5;
      const double horizon = run == 0 ? 16.5 : 18.0;
      auto [s, t] = gen_poisson_changepoint(pc, horizon, RngSeed{kSeed, 73u + static_cast<std::uint64_t>(run)});
      auto rd = refresh(s, t, horizon);
      const double t1 = pc.tau1, t2 = pc.tau2;
      auto r = by_regime(rd, b_n, 4, [&](double x) {
        if (x < std::min(t1, t2)) return 0;
        if (x >= std::max(t1, t2)) return 3;
        return t1 <= x ? 1 : 2;
      });
      const Limits ls[4] = {lim(pc.p_under1, pc.p_under2), lim(pc.p_over1, pc.p_under2),
                            lim(pc.p_under1, pc.p_over2), lim(pc.p_over1, pc.p_over2)};
      for (int k = 0; k < 4; ++k) {
        if (r[static_cast<std::size_t>(k)].g.empty()) continue;
        const auto& reg = r[static_cast<std::size_t>(k)];
        total += reg.g.size();
        const std::string label = fmt("poisson run %d regime %d", run, k);
        ok = agree(reg, ls[k], detail, label.c_str()) && ok;
        detail += fmt("%s G %.4f [%.4f] (n %zu); ", label.c_str(), moments(reg.g).mean, ls[k].g,
                      reg.g.size());
      }
    }
  }
  ok = ok && total >= 10000;
  report("7", ok, fmt("%zu durations; ", total) + detail);
}

struct Instance {
  ObservationSeries xs, ys;
  std::size_t k = 2;
  double horizon = 0.0;
};

Instance random_instance(std::mt19937_64& eng) {
  std::uniform_int_distribution<std::size_t> kd(2, 5);
  Instance in;
  in.k = kd(eng);
  std::uniform_int_distribution<std::size_t> nd(2 * in.k + 8, 60);
  auto s = oracle::random_design(eng, nd(eng));
  auto t = oracle::random_design(eng, nd(eng));
  in.xs = oracle::series(s, oracle::random_values(eng, s.size()));
  in.ys = oracle::series(t, oracle::random_values(eng, t.size()));
  const double end = std::min(s.back(), t.back());
  std::bernoulli_distribution full(0.5);
  std::uniform_real_distribution<double> frac(0.6, 1.0);
  in.horizon = full(eng) ? end + 1.0 : std::floor(4.0 * frac(eng) * end) / 4.0;
  return in;
}

// Criterion 8.
void oracle_equivalence() {
  std::mt19937_64 eng(kSeed);
  std::size_t mismatches = 0, checked = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    auto in = random_instance(eng);
    PreAvgConfig pc;
    pc.k_n = in.k;
    pc.horizon = in.horizon;
    auto o = oracle::refresh(in.xs.times, in.ys.times);
    if (detail::count_le(in.xs.times, in.horizon) <= 2 * in.k || o.r.size() <= 2 * in.k) continue;
    ++checked;
    auto rd = refresh(in.xs.times, in.ys.times, in.horizon);
    const auto& x = in.xs.values;
    const auto& y = in.ys.values;
    if (phy(in.xs, in.ys, pc, false).value !=
        oracle::phy(in.xs.times, x, in.ys.times, y, in.k, min_xx(), in.horizon))
      ++mismatches;
    auto sx = oracle::pick(in.xs.times, o.s_index), vx = oracle::pick(x, o.s_index);
    auto sy = oracle::pick(in.ys.times, o.t_index), vy = oracle::pick(y, o.t_index);
    if (phy_refresh(in.xs, in.ys, rd, pc, false).value !=
        oracle::phy(sx, vx, sy, vy, in.k, min_xx(), in.horizon))
      ++mismatches;
    auto g = gamma1(in.xs, in.ys, rd, in.k, in.horizon);
    auto go = oracle::gamma1(x, y, o, in.k, in.horizon);
    if (g.v11 != go.v11 || g.v22 != go.v22 || g.v12 != go.v12) ++mismatches;
    if (xi(in.xs, in.ys, rd, in.k, min_xx(), quartic_f(), in.horizon).value !=
        oracle::xi(x, y, o, in.k, min_xx(), quartic_f(), in.horizon))
      ++mismatches;
    if (mrc(in.xs, in.ys, rd, pc).value != oracle::mrc(x, y, o, in.k, min_xx(), in.horizon))
      ++mismatches;
    std::uniform_int_distribution<std::size_t> md(2, in.xs.size() - 1);
    const std::size_t m = md(eng);
    if (msrv(in.xs, m, 1e9).value != oracle::msrv(in.xs.times, x, m, 1e9)) ++mismatches;
  }
  report("8", mismatches == 0 && checked >= 500,
         fmt("%zu instances x 6 estimators, %zu mismatches", checked, mismatches));
}

// Criterion 9.
void identities() {
  double worst_sum = 0.0, worst_inv = 0.0;
  for (std::size_t m = 2; m <= 200; ++m) {
    auto a = msrv_weights(m);
    double s = 0.0, si = 0.0;
    for (std::size_t i = 1; i <= m; ++i) {
      s += a[i];
      si += a[i] / static_cast<double>(i);
    }
    worst_sum = std::max(worst_sum, std::abs(s - 1.0));
    worst_inv = std::max(worst_inv, std::abs(si));
  }
  const auto lo = kernel_constants(min_xx(), quartic_f(), 1e-10);
  const auto hi = kernel_constants(min_xx(), quartic_f(), 1e-12);
  double drift = 0.0;
  for (auto f : {&KernelConstants::psi_hy, &KernelConstants::psi1, &KernelConstants::psi2,
                 &KernelConstants::kappa, &KernelConstants::kappa_tilde, &KernelConstants::kappa_bar,
                 &KernelConstants::phi11, &KernelConstants::phi22, &KernelConstants::phi12,
                 &KernelConstants::norm_fprime_sq})
    drift = std::max(drift, std::abs(lo.*f - hi.*f));

  SpotModel m;
  m.qx = [](double s) { return 4e-4 * (1.0 + s); };
  m.qy = constant_fn(9e-4);
  m.qxy = [](double s) { return 2e-4 * std::cos(s); };
  m.psi11 = constant_fn(1e-7);
  m.psi22 = constant_fn(2e-7);
  m.psi12 = constant_fn(5e-8);
  SchemeLimits l;
  l.g = [](double s) { return 1.0 + 0.5 * s; };
  l.chi = constant_fn(0.4);
  l.f1 = constant_fn(1.3);
  l.f2 = constant_fn(1.7);
  l.f12 = constant_fn(1.1);
  const auto& k = default_constants();
  const double exo = theoretical_w2(m, l, k, W2Flavor::phy_exogenous);
  const double endo = theoretical_w2(m, l, k, W2Flavor::phy_endogenous);
  report("9", worst_sum <= 1e-12 && worst_inv <= 1e-12 && drift <= 1e-8 && endo == exo,
         fmt("MSRV |sum a - 1| %.1e, |sum a/i| %.1e [<=1e-12]; constants drift %.1e [<=1e-8]; "
             "endogenous w^2 - exogenous w^2 = %.1e [0]",
             worst_sum, worst_inv, drift, endo - exo));
}

// Criterion 10.
void rv_bias(const McReport& hit) {
  const auto& c = hit.cfg;
  std::vector<double> scaled, predicted;
  for (const auto& r : hit.per_rep) {
    if (r.estimator != "rv" || !std::isfinite(r.value)) continue;
    const auto& info = hit.reps[r.rep];
    scaled.push_back((r.value - r.truth) / std::sqrt(c.b_n()));
    predicted.push_back(rv_limit_law(c.u, c.v, info.x_increment, info.truth).bias);
  }
  const auto z = moments(scaled);
  const auto p = moments(predicted);
  report("10", within(z.mean, p.mean, 3.0 * z.se),
         fmt("mean sqrt(n)(RV - [X]) %.3e (se %.1e) vs (2/3)(v-u)E[X1-X0] %.3e [3 se]", z.mean, z.se,
             p.mean));
}

// Same diagnostic with constant drift x1 in place of the bridge drift.
void rv_bias_constant_drift(const ScenarioConfig& c) {
  const double mu = c.model.x1;
  TimeGrid g;
  g.n_fine = static_cast<std::size_t>(std::llround(c.n * static_cast<double>(c.fine_per_duration)));
  BarrierConfig bc;
  bc.u = c.u;
  bc.v = c.v;
  bc.b_n = c.b_n();
  std::vector<double> scaled, predicted;
  for (std::uint64_t r = 0; r < 400; ++r) {
    const RngSeed seed{kSeed + 1, r};
    auto path = simulate_ito(
        g, [mu](double, Vec2) { return Vec2{mu, mu}; }, constant_vol(c.model.sigma), 0.0,
        seed.child(stream::path));
    auto h = gen_barrier_hitting(path, bc, seed.child(stream::sampling));
    auto xs = observe(h.path, h.times, NoiseConfig{}, seed.child(stream::noise));
    const double qv = h.path.qv_x.back();
    scaled.push_back((rv(xs, 1.0).value - qv) / std::sqrt(c.b_n()));
    predicted.push_back(rv_limit_law(c.u, c.v, h.path.x.back() - h.path.x.front(), qv).bias);
  }
  const auto z = moments(scaled);
  info("10", fmt("constant drift %.3f, 400 reps: mean sqrt(n)(RV - [X]) %.3e (se %.1e) vs %.3e", mu,
                 z.mean, z.se, moments(predicted).mean));
}

// Rate sweep over b_n.
void rate_sweep(const McReport& eq3600) {
  std::vector<double> lx, ly;
  std::string detail;
  for (double n : {900.0, 1800.0, 3600.0}) {
    const McReport rep = n == 3600.0 ? McReport{} : scenario1(SamplingKind::equidistant, n, {"phy"});
    const McReport& src = n == 3600.0 ? eq3600 : rep;
    double q = 0.0;
    std::size_t cnt = 0;
    for (const auto& r : src.per_rep)
      if (r.estimator == "phy" && std::isfinite(r.value)) {
        q += (r.value - r.truth) * (r.value - r.truth);
        ++cnt;
      }
    const double rmse = std::sqrt(q / static_cast<double>(cnt));
    lx.push_back(std::log(1.0 / n));
    ly.push_back(std::log(rmse));
    detail += fmt("n %.0f rmse %.3e; ", n, rmse);
  }
  const double mx = (lx[0] + lx[1] + lx[2]) / 3.0, my = (ly[0] + ly[1] + ly[2]) / 3.0;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  const double slope = sxy / sxx;
  report("rate", within(slope, 0.25, 0.08),
         detail + fmt("slope of log rmse on log b_n %.3f [0.25+-0.08]", slope));
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  try {
    auto t0 = std::chrono::steady_clock::now();
    const auto eq = scenario1(SamplingKind::equidistant);
    const double eq_seconds = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    const auto hit = scenario1(SamplingKind::hitting);
    info("run", fmt("S1 x %zu reps: equidistant %.0f s (%zu failures), hitting %.0f s (%zu failures)",
                    kReps, eq_seconds, eq.failures, seconds_since(t0), hit.failures));

    bias_rmse(eq, hit, eq_seconds);
    studentized(eq, hit);
    densities(eq, hit);
    avar_consistency(eq);
    scheme_limits();
    oracle_equivalence();
    identities();
    rv_bias(hit);
    rv_bias_constant_drift(hit.cfg);
    rate_sweep(eq);
  } catch (const std::exception& e) {
    std::printf("FAIL run aborted: %s\n", e.what());
    return 2;
  }
  std::printf("%s %d failing, %.0f s total\n", g_failures == 0 ? "ALL PASS" : "DONE", g_failures,
              seconds_since(start));
  return g_failures == 0 ? 0 : 1;
}
