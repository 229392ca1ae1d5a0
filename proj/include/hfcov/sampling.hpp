#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "paths.hpp"
#include "rng.hpp"

namespace hfcov {

/// Observation epochs of one asset. times[0] = 0; the last epoch may overshoot
/// the horizon, and consumers truncate.
struct SamplingTimes {
  std::vector<double> times;
  double b_n = 0.0;
  std::string scheme_tag;

  [[nodiscard]] std::size_t size() const { return times.size(); }

  /// Number of returns with end point at or before `horizon`.
  [[nodiscard]] std::size_t returns_until(double horizon) const {
    auto it = std::upper_bound(times.begin(), times.end(), horizon);
    auto n = static_cast<std::size_t>(it - times.begin());
    return n == 0 ? 0 : n - 1;
  }

  void validate() const {
    require(!times.empty() && times.front() == 0.0, "SamplingTimes: must start at 0");
    for (std::size_t i = 1; i < times.size(); ++i)
      require(times[i] > times[i - 1], "SamplingTimes: times must be strictly increasing");
  }
};

inline SamplingTimes gen_equidistant(double horizon, double b_n) {
  require(b_n > 0.0, "gen_equidistant: b_n must be positive");
  require(horizon > 0.0, "gen_equidistant: horizon must be positive");
  auto m = static_cast<std::size_t>(std::ceil(horizon / b_n - 1e-9));
  SamplingTimes s;
  s.b_n = b_n;
  s.scheme_tag = "equidistant";
  s.times.resize(m + 1);
  for (std::size_t i = 0; i <= m; ++i) s.times[i] = static_cast<double>(i) * b_n;
  if (std::abs(s.times[m] - horizon) < 1e-12 * horizon) s.times[m] = horizon;
  return s;
}

/// Process whose barrier crossings define the hitting times.
enum class Driver { martingale_x, martingale_y, wiener_x, wiener_y, latent_x, latent_y };

struct BarrierConfig {
  double u = 0.01;
  double v = 0.04;
  double b_n = 1.0 / 3600.0;
  Driver driver = Driver::martingale_x;
  /// Steps shorter than this are not bisected further.
  double resolution = 1e-10;
  /// Bridge crossing probability below which a step is accepted.
  double crossing_eps = 1e-10;
};

struct HittingResult {
  SamplingTimes times;
  /// Input path with every epoch added as a node. Intermediate bisection points
  /// are marginalized out.
  LatentPath path;
  /// +1 for an exit through the upper barrier, −1 for the lower one.
  std::vector<int> exit_sign;
  std::vector<std::string> warnings;
};

/// (U, V) barrier pair for the next duration.
using UvSampler = std::function<std::pair<double, double>(std::mt19937_64&)>;

namespace detail {

struct DriverView {
  const LatentPath& p;
  Driver d;

  double value(std::size_t i, double t, double wx, double wy) const {
    switch (d) {
      case Driver::martingale_x: return p.mx[i] + p.vol_x[i] * (wx - p.wx[i]);
      case Driver::martingale_y: return p.my[i] + p.vol_y[i] * (wy - p.wy[i]);
      case Driver::wiener_x: return wx;
      case Driver::wiener_y: return wy;
      case Driver::latent_x: return sub_x(p, i, t, wx);
      case Driver::latent_y: return sub_y(p, i, t, wy);
    }
    return 0.0;
  }
  double var_rate(std::size_t i) const {
    switch (d) {
      case Driver::martingale_x:
      case Driver::latent_x: return p.vol_x[i] * p.vol_x[i];
      case Driver::martingale_y:
      case Driver::latent_y: return p.vol_y[i] * p.vol_y[i];
      default: return 1.0;
    }
  }
};

/// Scan the path for successive two-sided exits. Steps that may contain a
/// crossing are bisected with Brownian-bridge midpoints until the crossing is
/// pinned to `resolution`.
inline HittingResult hitting_scan(const LatentPath& path, const BarrierConfig& cfg,
                                  const UvSampler& uv, RngSeed seed, const std::string& tag) {
  require(cfg.b_n > 0.0, "barrier hitting: b_n must be positive");
  auto refine_eng = seed.child(stream::refine).engine();
  auto barrier_eng = seed.child(stream::barrier).engine();
  DriverView dv{path, cfg.driver};
  const double sb = std::sqrt(cfg.b_n);

  HittingResult out;
  out.times.b_n = cfg.b_n;
  out.times.scheme_tag = tag;
  out.times.times.push_back(path.t.front());

  auto draw = [&](double& lo, double& hi, double ref) {
    auto [u, v] = uv(barrier_eng);
    if (!(u > 0.0) || !(v > 0.0)) throw ParameterError("uv_sampler returned a nonpositive barrier");
    lo = ref - u * sb;
    hi = ref + v * sb;
  };
  double lower = 0.0, upper = 0.0;
  double ref = dv.value(0, path.t[0], path.wx[0], path.wy[0]);
  draw(lower, upper, ref);
  {
    double floor = 3.0 * std::sqrt(dv.var_rate(0) * (path.t[1] - path.t[0]));
    if (std::min(ref - lower, upper - ref) < floor)
      out.warnings.push_back("barrier below fine-grid noise floor; bridge refinement carries detection");
  }

  std::vector<SubNode> inserts;
  std::vector<SubNode> local;
  std::vector<double> dval;
  std::vector<char> epoch;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    local.clear();
    dval.clear();
    epoch.assign(2, 0);
    local.push_back({i, path.t[i], path.wx[i], path.wy[i]});
    local.push_back({i, path.t[i + 1], path.wx[i + 1], path.wy[i + 1]});
    dval.push_back(dv.value(i, path.t[i], path.wx[i], path.wy[i]));
    dval.push_back(dv.value(i, path.t[i + 1], path.wx[i + 1], path.wy[i + 1]));
    const double s2 = dv.var_rate(i);
    std::size_t pos = 0;
    while (pos + 1 < local.size()) {
      const SubNode& a = local[pos];
      const SubNode& b = local[pos + 1];
      const double da = dval[pos], db = dval[pos + 1];
      const double dt = b.t - a.t;
      const bool outside = db <= lower || db >= upper;
      if (!outside) {
        double p = 0.0;
        if (s2 > 0.0) {
          p = std::exp(-2.0 * (upper - da) * (upper - db) / (s2 * dt)) +
              std::exp(-2.0 * (da - lower) * (db - lower) / (s2 * dt));
        }
        if (p < cfg.crossing_eps || dt <= cfg.resolution) {
          ++pos;
          continue;
        }
      }
      if (dt > cfg.resolution) {
        SubNode m = bridge_point(a, b, a.t + 0.5 * dt, path.corr, refine_eng);
        double dm = dv.value(i, m.t, m.wx, m.wy);
        local.insert(local.begin() + static_cast<std::ptrdiff_t>(pos) + 1, m);
        dval.insert(dval.begin() + static_cast<std::ptrdiff_t>(pos) + 1, dm);
        epoch.insert(epoch.begin() + static_cast<std::ptrdiff_t>(pos) + 1, 0);
        continue;
      }
      // Crossing inside a step at the resolution floor: place it linearly.
      const double level = db >= upper ? upper : lower;
      const double frac = (level - da) / (db - da);
      std::size_t hit = pos + 1;
      if (frac < 1.0) {
        double th = a.t + frac * dt;
        if (th > a.t) {
          SubNode c{i, th, a.wx + frac * (b.wx - a.wx), a.wy + frac * (b.wy - a.wy)};
          double dc = dv.value(i, c.t, c.wx, c.wy);
          local.insert(local.begin() + static_cast<std::ptrdiff_t>(hit), c);
          dval.insert(dval.begin() + static_cast<std::ptrdiff_t>(hit), dc);
          epoch.insert(epoch.begin() + static_cast<std::ptrdiff_t>(hit), 0);
        }
      }
      epoch[hit] = 1;
      out.times.times.push_back(local[hit].t);
      out.exit_sign.push_back(db >= upper ? 1 : -1);
      ref = dval[hit];
      draw(lower, upper, ref);
      pos = hit;
    }
    for (std::size_t k = 1; k + 1 < local.size(); ++k)
      if (epoch[k]) inserts.push_back(local[k]);
  }
  out.path = with_nodes(path, inserts);
  return out;
}

}  // namespace detail

/// Hitting times of the barriers −u√b_n, v√b_n by the driver's increments.
inline HittingResult gen_barrier_hitting(const LatentPath& path, const BarrierConfig& cfg,
                                         RngSeed seed) {
  require(cfg.u > 0.0 && cfg.v > 0.0, "gen_barrier_hitting: u and v must be positive");
  const double u = cfg.u, v = cfg.v;
  return detail::hitting_scan(
      path, cfg, [u, v](std::mt19937_64&) { return std::pair{u, v}; }, seed, "hitting");
}

/// Hitting times with i.i.d. random barriers (U_i, V_i) per duration.
inline HittingResult gen_general_return(const LatentPath& path, const UvSampler& uv_sampler,
                                        double b_n, RngSeed seed,
                                        Driver driver = Driver::wiener_x) {
  BarrierConfig cfg;
  cfg.b_n = b_n;
  cfg.driver = driver;
  return detail::hitting_scan(path, cfg, uv_sampler, seed, "general_return");
}

/// Inverse Gaussian IG(δ, γ) with density δe^{δγ}(2π)^{-1/2} z^{-3/2} exp(−(δ²/z + γ²z)/2),
/// i.e. mean δ/γ and shape δ². Michael–Schucany–Haas transformation.
template <class Engine>
double sample_inverse_gaussian(double delta, double gamma, Engine& eng) {
  const double m = delta / gamma;
  const double lambda = delta * delta;
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> ud;
  double z = nd(eng);
  double y = z * z;
  double x = m + m * m * y / (2.0 * lambda) -
             m / (2.0 * lambda) * std::sqrt(4.0 * m * lambda * y + m * m * y * y);
  return ud(eng) <= m / (m + x) ? x : m * m / x;
}

inline double inverse_gaussian_pdf(double z, double delta, double gamma) {
  if (z <= 0.0) return 0.0;
  constexpr double inv_sqrt_2pi = 0.39894228040143267794;
  const double log_p = std::log(delta * inv_sqrt_2pi) + delta * gamma - 1.5 * std::log(z) -
                       0.5 * (delta * delta / z + gamma * gamma * z);
  return std::exp(log_p);
}

using ZetaSampler = std::function<double(std::mt19937_64&)>;

inline ZetaSampler unit_zeta() {
  return [](std::mt19937_64&) { return 1.0; };
}

/// Durations IG(√b_n·c·ζ_i, μ/√b_n), cumulated from 0 until the horizon is passed.
inline SamplingTimes gen_mixed_hitting(double mu, double c, const ZetaSampler& zeta_sampler,
                                       double b_n, double horizon, RngSeed seed) {
  require(mu > 0.0 && c > 0.0 && b_n > 0.0, "gen_mixed_hitting: mu, c, b_n must be positive");
  auto eng = seed.child(stream::sampling).engine();
  SamplingTimes s;
  s.b_n = b_n;
  s.scheme_tag = "mixed_hitting";
  s.times.push_back(0.0);
  const double sb = std::sqrt(b_n);
  while (s.times.back() <= horizon) {
    double zeta = zeta_sampler(eng);
    require(zeta > 0.0, "gen_mixed_hitting: zeta must be positive");
    double d = sample_inverse_gaussian(sb * c * zeta, mu / sb, eng);
    if (d > 0.0) s.times.push_back(s.times.back() + d);
  }
  return s;
}

struct PoissonConfig {
  double p_under1 = 1.0, p_over1 = 1.0;
  double p_under2 = 1.0, p_over2 = 1.0;
  double tau1 = 0.5, tau2 = 0.5;
  double n = 3600.0;
};

/// Poisson arrivals with intensity n·p_under before τ and n·p_over after.
inline std::pair<SamplingTimes, SamplingTimes> gen_poisson_changepoint(const PoissonConfig& cfg,
                                                                       double horizon,
                                                                       RngSeed seed) {
  require(cfg.p_under1 > 0 && cfg.p_over1 > 0 && cfg.p_under2 > 0 && cfg.p_over2 > 0 && cfg.n > 0,
          "gen_poisson_changepoint: intensities must be positive");
  require(cfg.tau1 >= 0 && cfg.tau1 <= horizon && cfg.tau2 >= 0 && cfg.tau2 <= horizon,
          "gen_poisson_changepoint: change points must lie in [0, horizon]");
  auto eng = seed.child(stream::sampling).engine();
  auto one = [&](double pu, double po, double tau) {
    SamplingTimes s;
    s.b_n = 1.0 / cfg.n;
    s.scheme_tag = "poisson_changepoint";
    s.times.push_back(0.0);
    std::exponential_distribution<double> under(cfg.n * pu), over(cfg.n * po);
    // Before τ: arrivals of the first process; after: τ + arrivals of the second.
    double t = 0.0;
    while (true) {
      t += under(eng);
      if (t >= tau) break;
      s.times.push_back(t);
    }
    t = tau;
    while (s.times.back() <= horizon) {
      t += over(eng);
      s.times.push_back(t);
    }
    return s;
  };
  auto a = one(cfg.p_under1, cfg.p_over1, cfg.tau1);
  auto b = one(cfg.p_under2, cfg.p_over2, cfg.tau2);
  return {std::move(a), std::move(b)};
}

struct LoMacKinlayConfig {
  double p1 = 0.5;
  double p2 = 0.5;
  double b_n = 1.0 / 3600.0;
  /// Base epochs: equidistant m·b_n, or mixed hitting durations with (mu, c).
  bool mixed_base = false;
  double mu = 1.0;
  double c = 1.0;
};

/// Base epochs thinned independently per asset; asset k keeps an epoch with probability 1 − p^k.
inline std::pair<SamplingTimes, SamplingTimes> gen_lo_mackinlay(const LoMacKinlayConfig& cfg,
                                                                double horizon, RngSeed seed) {
  require(cfg.p1 >= 0 && cfg.p1 < 1 && cfg.p2 >= 0 && cfg.p2 < 1,
          "gen_lo_mackinlay: probabilities must lie in [0, 1)");
  require(cfg.b_n > 0, "gen_lo_mackinlay: b_n must be positive");
  auto eng = seed.child(stream::sampling).engine();
  std::bernoulli_distribution keep1(1.0 - cfg.p1), keep2(1.0 - cfg.p2);
  const double sb = std::sqrt(cfg.b_n);
  SamplingTimes s, t;
  s.b_n = t.b_n = cfg.b_n;
  s.scheme_tag = t.scheme_tag = "lo_mackinlay";
  s.times.push_back(0.0);
  t.times.push_back(0.0);
  double tau = 0.0;
  std::size_t m = 0;
  while (s.times.back() <= horizon || t.times.back() <= horizon) {
    ++m;
    if (cfg.mixed_base)
      tau += sample_inverse_gaussian(sb * cfg.c, cfg.mu / sb, eng);
    else
      tau = static_cast<double>(m) * cfg.b_n;
    bool k1 = keep1(eng);
    bool k2 = keep2(eng);
    if (k1) s.times.push_back(tau);
    if (k2) t.times.push_back(tau);
  }
  return {std::move(s), std::move(t)};
}

/// Refresh-time synchronization products. Index k runs from 0; entries with
/// k = 0 are the definitional edges (Ŝ⁰ = S⁰, Ť⁰ = T⁰, zero-length intervals).
struct RefreshData {
  std::vector<double> r, s_hat, t_hat, s_check, t_check, gamma, i_check, j_check, star;
  /// Positions of Ŝ^k in S and Ť^k in T.
  std::vector<std::size_t> s_index, t_index;
  double horizon = 1.0;
  double b_n = 0.0;

  [[nodiscard]] std::size_t size() const { return r.size(); }
  /// Largest k with R^k ≤ horizon.
  [[nodiscard]] std::size_t last_until(double t) const {
    auto it = std::upper_bound(r.begin(), r.end(), t);
    return static_cast<std::size_t>(it - r.begin()) - 1;
  }
};

namespace detail {

/// Length of the union of up to three half-open intervals.
inline double union_length(std::vector<std::pair<double, double>> iv) {
  std::sort(iv.begin(), iv.end());
  double total = 0.0, cur_lo = 0.0, cur_hi = 0.0;
  bool open = false;
  for (auto [lo, hi] : iv) {
    if (hi <= lo) continue;
    if (!open) {
      cur_lo = lo;
      cur_hi = hi;
      open = true;
    } else if (lo <= cur_hi) {
      cur_hi = std::max(cur_hi, hi);
    } else {
      total += cur_hi - cur_lo;
      cur_lo = lo;
      cur_hi = hi;
    }
  }
  if (open) total += cur_hi - cur_lo;
  return total;
}

inline std::pair<double, double> intersect(std::pair<double, double> a, std::pair<double, double> b) {
  return {std::max(a.first, b.first), std::min(a.second, b.second)};
}

}  // namespace detail

inline RefreshData refresh(const std::vector<double>& s, const std::vector<double>& t,
                           double horizon = 1.0, double b_n = 0.0) {
  if (s.size() < 2 || t.size() < 2)
    throw InsufficientDataError("refresh: each design needs at least 2 epochs");
  RefreshData rd;
  rd.horizon = horizon;
  rd.b_n = b_n;
  rd.r.push_back(std::max(s[0], t[0]));
  rd.s_hat.push_back(s[0]);
  rd.t_hat.push_back(t[0]);
  rd.s_index.push_back(0);
  rd.t_index.push_back(0);
  rd.s_check.push_back(s[0]);
  rd.t_check.push_back(t[0]);
  rd.gamma.push_back(0.0);
  rd.i_check.push_back(0.0);
  rd.j_check.push_back(0.0);
  std::size_t is = 0, it = 0;
  while (true) {
    const double prev = rd.r.back();
    while (is < s.size() && s[is] <= prev) ++is;
    while (it < t.size() && t[it] <= prev) ++it;
    if (is == s.size() || it == t.size()) break;
    const double sh = s[is], th = t[it];
    rd.s_hat.push_back(sh);
    rd.t_hat.push_back(th);
    rd.s_index.push_back(is);
    rd.t_index.push_back(it);
    rd.s_check.push_back(s[is - 1]);
    rd.t_check.push_back(t[it - 1]);
    rd.r.push_back(std::max(sh, th));
    rd.gamma.push_back(rd.r.back() - prev);
    rd.i_check.push_back(sh - s[is - 1]);
    rd.j_check.push_back(th - t[it - 1]);
  }
  const std::size_t n = rd.r.size();
  rd.star.assign(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) {
    std::pair<double, double> ik{rd.s_check[k], rd.s_hat[k]}, jk{rd.t_check[k], rd.t_hat[k]};
    std::vector<std::pair<double, double>> parts{detail::intersect(ik, jk)};
    if (k + 1 < n) {
      std::pair<double, double> ik1{rd.s_check[k + 1], rd.s_hat[k + 1]};
      std::pair<double, double> jk1{rd.t_check[k + 1], rd.t_hat[k + 1]};
      parts.push_back(detail::intersect(ik1, jk));
      parts.push_back(detail::intersect(ik, jk1));
    }
    rd.star[k] = detail::union_length(parts);
  }
  return rd;
}

inline RefreshData refresh(const SamplingTimes& s, const SamplingTimes& t, double horizon = 1.0) {
  return refresh(s.times, t.times, horizon, s.b_n);
}

/// Rolling proxies for G(ρ)ⁿ, F¹, F², F^{1*2} and χⁿ on the refresh grid.
struct DurationDiagnostics {
  std::vector<double> r;
  std::vector<double> rho;
  std::vector<std::vector<double>> g;  ///< g[j][k] for rho[j]
  std::vector<double> f1, f2, f12, chi;
  std::size_t window = 0;
  std::size_t nan_count = 0;
};

inline DurationDiagnostics duration_diagnostics(const RefreshData& rd,
                                                const std::vector<double>& rho_list,
                                                double b_n = 0.0) {
  if (rd.size() < 2) throw InsufficientDataError("duration_diagnostics: empty refresh data");
  for (double r : rho_list) require(r >= 0.0, "duration_diagnostics: rho must be nonnegative");
  const double bn = b_n > 0.0 ? b_n : rd.b_n;
  require(bn > 0.0, "duration_diagnostics: b_n unknown");
  DurationDiagnostics d;
  d.rho = rho_list;
  const std::size_t last = rd.last_until(rd.horizon);
  const std::size_t n = std::max<std::size_t>(last, 1);
  d.window = static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(n), 0.4)));
  d.g.assign(rho_list.size(), {});
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 1; k < rd.size(); ++k) {
    d.r.push_back(rd.r[k]);
    const std::size_t lo = k >= d.window ? k - d.window + 1 : 1;
    const double cnt = static_cast<double>(k - lo + 1);
    if (cnt <= 0) {
      ++d.nan_count;
      for (auto& v : d.g) v.push_back(nan);
      d.f1.push_back(nan);
      d.f2.push_back(nan);
      d.f12.push_back(nan);
      d.chi.push_back(nan);
      continue;
    }
    for (std::size_t j = 0; j < rho_list.size(); ++j) {
      double acc = 0.0;
      for (std::size_t m = lo; m <= k; ++m) acc += std::pow(rd.gamma[m] / bn, rho_list[j]);
      d.g[j].push_back(acc / cnt);
    }
    double a1 = 0.0, a2 = 0.0, a12 = 0.0, ac = 0.0;
    for (std::size_t m = lo; m <= k; ++m) {
      a1 += rd.i_check[m] / bn;
      a2 += rd.j_check[m] / bn;
      a12 += rd.star[m] / bn;
      ac += rd.s_hat[m] == rd.t_hat[m] ? 1.0 : 0.0;
    }
    d.f1.push_back(a1 / cnt);
    d.f2.push_back(a2 / cnt);
    d.f12.push_back(a12 / cnt);
    d.chi.push_back(ac / cnt);
  }
  return d;
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
  std::size_t count = 0;
};

/// Whole-sample means (with standard errors) of b_n⁻¹|Γ^k|, (b_n⁻¹|Γ^k|)², b_n⁻¹|Ǐ^k|,
/// b_n⁻¹|ǰ^k|, b_n⁻¹|Ǐ^k*ǰ^k| and 1{Ŝ^k = Ť^k} over refresh indices 1..K−1.
struct DurationSummary {
  MeanSe g1, g2, f1, f2, f12, chi;
};

inline DurationSummary duration_summary(const RefreshData& rd, double b_n = 0.0) {
  const double bn = b_n > 0.0 ? b_n : rd.b_n;
  require(bn > 0.0, "duration_summary: b_n unknown");
  if (rd.size() < 3) throw InsufficientDataError("duration_summary: too few refresh times");
  std::vector<double> g1, g2, f1, f2, f12, chi;
  for (std::size_t k = 1; k + 1 < rd.size(); ++k) {
    g1.push_back(rd.gamma[k] / bn);
    g2.push_back(std::pow(rd.gamma[k] / bn, 2));
    f1.push_back(rd.i_check[k] / bn);
    f2.push_back(rd.j_check[k] / bn);
    f12.push_back(rd.star[k] / bn);
    chi.push_back(rd.s_hat[k] == rd.t_hat[k] ? 1.0 : 0.0);
  }
  auto ms = [](const std::vector<double>& v) {
    MeanSe m;
    m.count = v.size();
    double s = 0.0;
    for (double x : v) s += x;
    m.mean = s / static_cast<double>(v.size());
    double q = 0.0;
    for (double x : v) q += (x - m.mean) * (x - m.mean);
    m.se = std::sqrt(q / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
    return m;
  };
  return {ms(g1), ms(g2), ms(f1), ms(f2), ms(f12), ms(chi)};
}

/// CSV columns index, time.
inline void write_times_csv(std::ostream& os, const SamplingTimes& s) {
  os.precision(17);
  os << "index,time\n";
  for (std::size_t i = 0; i < s.size(); ++i) os << i << ',' << s.times[i] << '\n';
}

/// CSV columns k, r, s_hat, t_hat, gamma, i_check, j_check, star.
inline void write_refresh_csv(std::ostream& os, const RefreshData& rd) {
  os.precision(17);
  os << "k,r,s_hat,t_hat,gamma,i_check,j_check,star\n";
  for (std::size_t k = 0; k < rd.size(); ++k)
    os << k << ',' << rd.r[k] << ',' << rd.s_hat[k] << ',' << rd.t_hat[k] << ',' << rd.gamma[k]
       << ',' << rd.i_check[k] << ',' << rd.j_check[k] << ',' << rd.star[k] << '\n';
}

}  // namespace hfcov
