#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "error.hpp"
#include "estimators.hpp"
#include "quadrature.hpp"
#include "sampling.hpp"
#include "weights.hpp"

namespace hfcov {

namespace detail {

/// Points c − a + s for c in cb, a in ca, s in shifts, restricted to (lo, hi).
inline std::vector<double> shifted_breaks(const std::vector<double>& cb,
                                          const std::vector<double>& ca,
                                          const std::vector<double>& shifts, double lo, double hi) {
  std::vector<double> out;
  for (double c : cb)
    for (double a : ca)
      for (double s : shifts) {
        double p = c - a + s;
        if (p > lo && p < hi) out.push_back(p);
      }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::vector<double> support_points(const WeightFn& w) {
  std::vector<double> p{0.0, 1.0};
  p.insert(p.end(), w.kinks.begin(), w.kinks.end());
  return p;
}

}  // namespace detail

/// ψ_{α,β}(x) = ∫₀¹ α(u) ∫_{x+u−1}^{x+u+1} β(v) dv du, weights extended by zero.
inline double psi_ab(const WeightFn& alpha, const WeightFn& beta, double x, double tol = 1e-12) {
  if (std::abs(x) >= 2.0) return 0.0;
  auto cum = [&](double y) {
    y = std::clamp(y, 0.0, 1.0);
    return integrate(beta.g, 0.0, y, beta.kinks, tol * 1e-2).value;
  };
  std::vector<double> breaks = alpha.kinks;
  for (double c : detail::support_points(beta)) {
    breaks.push_back(c - x - 1.0);
    breaks.push_back(c - x + 1.0);
  }
  return integrate([&](double u) { return alpha(u) * (cum(x + u + 1.0) - cum(x + u - 1.0)); }, 0.0,
                   1.0, breaks, tol)
      .value;
}

/// φ_{α,β}(s) = ∫_s^1 α(u − s) β(u) du.
inline double phi_ab(const WeightFn& alpha, const WeightFn& beta, double s, double tol = 1e-12) {
  if (s >= 1.0) return 0.0;
  std::vector<double> breaks = beta.kinks;
  for (double a : alpha.kinks) breaks.push_back(s + a);
  return integrate([&](double u) { return alpha(u - s) * beta(u); }, s, 1.0, breaks, tol).value;
}

struct KernelConstants {
  double psi_hy = 0.0, psi1 = 0.0, psi2 = 0.0;
  double kappa = 0.0, kappa_tilde = 0.0, kappa_bar = 0.0;
  double phi11 = 0.0, phi22 = 0.0, phi12 = 0.0;
  double norm_fprime_sq = 0.0;
  double tolerance = 0.0;
};

/// ∫_{-2}^{2} ψ_{α,β}(x)² dx.
inline double psi_sq_integral(const WeightFn& alpha, const WeightFn& beta, double tol) {
  auto breaks = detail::shifted_breaks(detail::support_points(beta), detail::support_points(alpha),
                                       {-1.0, 1.0}, -2.0, 2.0);
  return integrate(
             [&](double x) {
               double p = psi_ab(alpha, beta, x, tol * 1e-2);
               return p * p;
             },
             -2.0, 2.0, breaks, tol)
      .value;
}

inline KernelConstants kernel_constants(const WeightFn& g, const WeightFn& f = quartic_f(),
                                        double tol = 1e-10) {
  KernelConstants k;
  k.tolerance = tol;
  const WeightFn gp = derivative_of(g);
  k.psi_hy = integrate(g.g, 0.0, 1.0, g.kinks, tol).value;
  k.psi1 = integrate([&](double x) { return gp(x) * gp(x); }, 0.0, 1.0, g.kinks, tol).value;
  k.psi2 = integrate([&](double x) { return g(x) * g(x); }, 0.0, 1.0, g.kinks, tol).value;
  k.kappa = psi_sq_integral(g, g, tol);
  k.kappa_tilde = psi_sq_integral(gp, gp, tol);
  k.kappa_bar = psi_sq_integral(g, gp, tol);
  auto sb = detail::shifted_breaks(detail::support_points(g), detail::support_points(g), {0.0},
                                   0.0, 1.0);
  auto phi_gg = [&](double s) { return phi_ab(g, g, s, tol * 1e-2); };
  auto phi_pp = [&](double s) { return phi_ab(gp, gp, s, tol * 1e-2); };
  k.phi11 = integrate([&](double s) { double p = phi_pp(s); return p * p; }, 0.0, 1.0, sb, tol).value;
  k.phi22 = integrate([&](double s) { double p = phi_gg(s); return p * p; }, 0.0, 1.0, sb, tol).value;
  k.phi12 = integrate([&](double s) { return phi_gg(s) * phi_pp(s); }, 0.0, 1.0, sb, tol).value;
  k.norm_fprime_sq =
      integrate([&](double x) { return f.g_prime(x) * f.g_prime(x); }, 0.0, 1.0, f.kinks, tol).value;
  return k;
}

/// Constants for g = x ∧ (1 − x), f = x²(1 − x)², computed once.
inline const KernelConstants& default_constants() {
  static const KernelConstants k = kernel_constants(min_xx(), quartic_f());
  return k;
}

/// CSV columns name, value, quadrature_tolerance.
inline void write_constants_csv(std::ostream& os, const KernelConstants& k) {
  os.precision(17);
  os << "name,value,quadrature_tolerance\n";
  const std::pair<const char*, double> rows[] = {
      {"psi_hy", k.psi_hy},   {"psi1", k.psi1},
      {"psi2", k.psi2},       {"kappa", k.kappa},
      {"kappa_tilde", k.kappa_tilde}, {"kappa_bar", k.kappa_bar},
      {"phi11", k.phi11},     {"phi22", k.phi22},
      {"phi12", k.phi12},     {"norm_fprime_sq", k.norm_fprime_sq}};
  for (auto [n, v] : rows) os << n << ',' << v << ',' << k.tolerance << '\n';
}

/// How the difference quotient treats s < h_n, where the window is cut at 0.
enum class SpotEdge {
  literal,  ///< divide by h_n
  window    ///< divide by the window length s
};

struct SpotConfig {
  /// Bandwidth; 0 selects N^{-0.2} with N the number of refresh returns.
  double h_n = 0.0;
  SpotEdge edge = SpotEdge::literal;
};

struct SpotRecord {
  std::size_t k = 0;
  double r = 0.0;
  double spot_x = 0.0, spot_y = 0.0, spot_xy = 0.0;
  double dgamma11 = 0.0, dgamma22 = 0.0, dgamma12 = 0.0;
  double dxi = 0.0;
  double w2_hat = 0.0;
  bool valid = true;
};

struct SpotSeries {
  std::vector<SpotRecord> records;
  double h_n = 0.0;
  std::size_t k_n = 0;
  double psi = 0.0;
  std::size_t nan_count = 0;
};

inline double resolve_bandwidth(const SpotConfig& spot, std::size_t n_returns) {
  if (spot.h_n > 0.0) return spot.h_n;
  require(n_returns > 0, "spot: no returns");
  return std::pow(static_cast<double>(n_returns), -0.2);
}

/// Backward difference quotients of the PHY, γ(1) and Ξ[f] paths at each
/// refresh time R^k ≤ horizon, k ≥ 1.
inline SpotSeries spot_estimators(const ObservationSeries& xs, const ObservationSeries& ys,
                                  const RefreshData& rd, const PreAvgConfig& cfg,
                                  const SpotConfig& spot, const WeightFn& f = quartic_f()) {
  const std::size_t nret = refresh_returns(rd, cfg.horizon);
  const std::size_t k = resolve_kn(cfg, nret);
  const double h = resolve_bandwidth(spot, nret);
  require(h > 0.0 && h < cfg.horizon, "SpotConfig: h_n must lie in (0, horizon)");
  const double psi = psi_hy(cfg.weight, k, cfg.norm);
  auto xr = refreshed(xs, rd, true);
  auto yr = refreshed(ys, rd, false);
  auto pxx = detail::phy_core(xr.times, xr.values, xr.times, xr.values, k, cfg.weight, psi,
                              cfg.horizon, true);
  auto pyy = detail::phy_core(yr.times, yr.values, yr.times, yr.values, k, cfg.weight, psi,
                              cfg.horizon, true);
  auto pxy = detail::phy_core(xr.times, xr.values, yr.times, yr.values, k, cfg.weight, psi,
                              cfg.horizon, true);
  auto gam = gamma1(xs, ys, rd, k, cfg.horizon);
  auto xif = xi_f(xs, ys, rd, k, f, cfg.horizon);

  SpotSeries out;
  out.h_n = h;
  out.k_n = k;
  out.psi = psi;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const std::size_t last = rd.last_until(cfg.horizon);
  for (std::size_t j = 1; j <= last; ++j) {
    SpotRecord rec;
    rec.k = j;
    rec.r = rd.r[j];
    const double s = rd.r[j];
    const double lo = std::max(0.0, s - h);
    const double den = (spot.edge == SpotEdge::literal || s >= h) ? h : s;
    if (rd.r[j - 1] < lo || den <= 0.0) {
      rec.valid = false;
      rec.spot_x = rec.spot_y = rec.spot_xy = rec.dgamma11 = rec.dgamma22 = rec.dgamma12 =
          rec.dxi = rec.w2_hat = nan;
      ++out.nan_count;
      out.records.push_back(rec);
      continue;
    }
    auto q = [&](const StepSeries& p) { return (p.at(s) - p.at(lo)) / den; };
    rec.spot_x = q(pxx.path);
    rec.spot_y = q(pyy.path);
    rec.spot_xy = q(pxy.path);
    rec.dgamma11 = q(gam.p11);
    rec.dgamma22 = q(gam.p22);
    rec.dgamma12 = q(gam.p12);
    rec.dxi = q(xif.path);
    out.records.push_back(rec);
  }
  return out;
}

struct AvarResult {
  double avar = 0.0;
  /// Sum with every negative ŵ² replaced by 0.
  double avar_floored = 0.0;
  std::size_t negative_terms = 0;
  std::size_t skipped_terms = 0;
  std::vector<SpotRecord> records;
  StepSeries path;
  double h_n = 0.0;
  std::size_t k_n = 0;
};

/// Bracket of the ŵ² display without the k_n ψ^{-4}|Γ^k||Γ^{k+1}| factor.
inline double w2_bracket(const SpotRecord& r, const KernelConstants& c) {
  return c.kappa * (r.spot_x * r.spot_y + r.spot_xy * r.spot_xy) +
         c.kappa_tilde * (r.dgamma11 * r.dgamma22 + r.dgamma12 * r.dgamma12) +
         c.kappa_bar * (r.spot_x * r.dgamma22 + r.spot_y * r.dgamma11 +
                        2.0 * r.spot_xy * r.dgamma12 - r.dxi * r.dxi);
}

/// Σ_{k: R^k ≤ t} ŵ²_{R^k} from precomputed spot records. Terms with invalid
/// records or without a following duration are skipped and counted.
inline AvarResult avar_from_spots(const SpotSeries& spots, const RefreshData& rd,
                                  const KernelConstants& c) {
  AvarResult a;
  a.h_n = spots.h_n;
  a.k_n = spots.k_n;
  const double p2 = spots.psi * spots.psi;
  const double pre = static_cast<double>(spots.k_n) / (p2 * p2);
  double acc = 0.0, accf = 0.0;
  for (auto rec : spots.records) {
    const std::size_t j = rec.k;
    if (!rec.valid || j + 1 >= rd.size()) {
      ++a.skipped_terms;
      rec.w2_hat = std::numeric_limits<double>::quiet_NaN();
      a.records.push_back(rec);
      continue;
    }
    rec.w2_hat = pre * w2_bracket(rec, c) * (rd.gamma[j] * rd.gamma[j + 1]);
    if (rec.w2_hat < 0.0) ++a.negative_terms;
    acc += rec.w2_hat;
    accf += std::max(0.0, rec.w2_hat);
    a.path.t.push_back(rec.r);
    a.path.v.push_back(acc);
    a.records.push_back(rec);
  }
  a.avar = acc;
  a.avar_floored = accf;
  return a;
}

inline AvarResult avar_hat(const ObservationSeries& xs, const ObservationSeries& ys,
                           const RefreshData& rd, const PreAvgConfig& cfg, const SpotConfig& spot,
                           const KernelConstants& c = default_constants(),
                           const WeightFn& f = quartic_f()) {
  return avar_from_spots(spot_estimators(xs, ys, rd, cfg, spot, f), rd, c);
}

/// CSV columns k, r_k, spot_x, spot_y, spot_xy, dgamma11, dgamma22, dgamma12, dxi, w2_hat.
inline void write_spot_csv(std::ostream& os, const std::vector<SpotRecord>& recs) {
  os.precision(17);
  os << "k,r_k,spot_x,spot_y,spot_xy,dgamma11,dgamma22,dgamma12,dxi,w2_hat\n";
  for (const auto& r : recs)
    os << r.k << ',' << r.r << ',' << r.spot_x << ',' << r.spot_y << ',' << r.spot_xy << ','
       << r.dgamma11 << ',' << r.dgamma22 << ',' << r.dgamma12 << ',' << r.dxi << ',' << r.w2_hat
       << '\n';
}

using ScalarFn = std::function<double(double)>;

inline ScalarFn constant_fn(double c) {
  return [c](double) { return c; };
}

/// Spot (co)volatilities of the latent, noise and endogenous-noise processes.
struct SpotModel {
  ScalarFn qx = constant_fn(0.0), qy = constant_fn(0.0), qxy = constant_fn(0.0);
  ScalarFn psi11 = constant_fn(0.0), psi22 = constant_fn(0.0), psi12 = constant_fn(0.0);
  /// [X̲]', [Y̲]', [X̲,Y̲]', [X̲,Y]', [X,Y̲]'.
  ScalarFn ex = constant_fn(0.0), ey = constant_fn(0.0), exy = constant_fn(0.0);
  ScalarFn ex_y = constant_fn(0.0), x_ey = constant_fn(0.0);
};

/// Limits G, χ, F¹, F², F^{1*2} of the sampling scheme.
struct SchemeLimits {
  ScalarFn g = constant_fn(1.0), chi = constant_fn(1.0);
  ScalarFn f1 = constant_fn(1.0), f2 = constant_fn(1.0), f12 = constant_fn(1.0);
};

enum class W2Flavor { phy_exogenous, phy_endogenous, mrc, dep_noise };

struct W2Options {
  double theta = 0.15;
  double horizon = 1.0;
  /// Normalizing ψ_HY; 0 takes the constant from KernelConstants.
  double psi_hy = 0.0;
  /// λ̃⁰ and μ̃⁰ for the linear-process noise flavor.
  double lambda1 = 1.0, lambda2 = 1.0, mu1 = 0.0, mu2 = 0.0;
  /// Points where the spot or scheme functions jump.
  std::vector<double> breaks;
  double tol = 1e-10;
};

/// w²_s of the selected flavor at a single time.
inline double w2_at(double s, const SpotModel& m, const SchemeLimits& l, const KernelConstants& c,
                    W2Flavor flavor, const W2Options& o) {
  const double g = l.g(s);
  if (!(g > 0.0)) throw ParameterError("theoretical_w2: G must be positive");
  const double th = o.theta;
  const double xx = m.qx(s), yy = m.qy(s), xy = m.qxy(s);
  const double signal = xx * yy + xy * xy;
  double p11 = m.psi11(s), p22 = m.psi22(s), p12 = m.psi12(s);
  double cross = 0.0;
  switch (flavor) {
    case W2Flavor::phy_exogenous:
      p12 *= l.chi(s);
      break;
    case W2Flavor::phy_endogenous:
    case W2Flavor::mrc: {
      const double f1 = l.f1(s), f2 = l.f2(s);
      p11 += m.ex(s) * f1;
      p22 += m.ey(s) * f2;
      p12 = p12 * l.chi(s) + m.exy(s) * l.f12(s);
      const double d = m.ex_y(s) * f1 - m.x_ey(s) * f2;
      cross = d * d / g;
      break;
    }
    case W2Flavor::dep_noise: {
      p11 = o.lambda1 * o.lambda1 * p11 + o.mu1 * o.mu1 * m.ex(s) * g;
      p22 = o.lambda2 * o.lambda2 * p22 + o.mu2 * o.mu2 * m.ey(s) * g;
      p12 = o.lambda1 * o.lambda2 * p12 + o.mu1 * o.mu2 * m.exy(s) * g;
      const double d = o.mu1 * m.ex_y(s) - o.mu2 * m.x_ey(s);
      cross = d * d * g;
      break;
    }
  }
  const double noise = p11 * p22 + p12 * p12;
  const double mixed = xx * p22 + yy * p11 + 2.0 * xy * p12 - cross;
  if (flavor == W2Flavor::mrc) {
    const double p2 = c.psi2;
    return 2.0 / (p2 * p2) *
           (th * c.phi22 * signal * g + c.phi11 * noise / (th * th * th * g) +
            c.phi12 * mixed / th);
  }
  const double psi = o.psi_hy > 0.0 ? o.psi_hy : c.psi_hy;
  const double p4 = psi * psi * psi * psi;
  return (th * c.kappa * signal * g + c.kappa_tilde * noise / (th * th * th * g) +
          c.kappa_bar * mixed / th) /
         p4;
}

/// ∫₀^horizon w²_s ds.
inline double theoretical_w2(const SpotModel& m, const SchemeLimits& l, const KernelConstants& c,
                             W2Flavor flavor, const W2Options& o = {}) {
  require(o.theta > 0.0, "theoretical_w2: theta must be positive");
  return integrate([&](double s) { return w2_at(s, m, l, c, flavor, o); }, 0.0, o.horizon,
                   o.breaks, o.tol * 1e-6)
      .value;
}

/// A statistic together with the reason it is undefined, if it is.
struct Stat {
  double value = std::numeric_limits<double>::quiet_NaN();
  std::string reason;

  [[nodiscard]] bool ok() const { return reason.empty() && std::isfinite(value); }
};

inline Stat studentize(double est, double target, double avar) {
  if (!(avar > 0.0)) return {std::numeric_limits<double>::quiet_NaN(), "nonpositive avar"};
  return {(est - target) / std::sqrt(avar), {}};
}

/// (log est − log target) / (√avar / est).
inline Stat log_stat(double est, double target, double avar) {
  if (!(est > 0.0)) return {std::numeric_limits<double>::quiet_NaN(), "nonpositive estimate"};
  if (!(avar > 0.0)) return {std::numeric_limits<double>::quiet_NaN(), "nonpositive avar"};
  return {(std::log(est) - std::log(target)) / (std::sqrt(avar) / est), {}};
}

/// −est²(1/est − 1/target) / √avar.
inline Stat inv_stat(double est, double target, double avar) {
  if (!(est > 0.0)) return {std::numeric_limits<double>::quiet_NaN(), "nonpositive estimate"};
  if (!(avar > 0.0)) return {std::numeric_limits<double>::quiet_NaN(), "nonpositive avar"};
  return {-est * est * (1.0 / est - 1.0 / target) / std::sqrt(avar), {}};
}

/// (RV − truth) / √((2/3) RQ).
inline Stat studentize_rv(double rv_value, double rq_value, double truth) {
  if (!(rq_value > 0.0)) return {std::numeric_limits<double>::quiet_NaN(), "zero realized quarticity"};
  return {(rv_value - truth) / std::sqrt(2.0 / 3.0 * rq_value), {}};
}

struct MsrvTuning {
  double c_multi = 1.0;
  std::size_t m = 2;
  double avar_multi = 0.0;
  double iv_pilot = 0.0;
  double noise_var = 0.0;
  double g21 = 1.0;
  std::vector<std::string> warnings;
};

struct MsrvOptions {
  /// Fixed c_multi; 0 selects the variance-minimizing value.
  double c_override = 0.0;
  double c_min = 0.05;
  double c_max = 5.0;
  double horizon = 1.0;
};

inline std::size_t msrv_scales(double c, std::size_t n) {
  return std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(c * std::sqrt(static_cast<double>(n)))));
}

/// N^{1/2}-scaled variance of the MSRV at c for integrated quarticity iq,
/// duration ratio g21, noise variance w2 and integrated variance iv.
inline double msrv_variance(double c, double iq, double g21, double w2, double iv) {
  return c * (52.0 / 35.0) * iq * g21 + (48.0 / 5.0) * w2 * iv / c + 48.0 * w2 * w2 / (c * c * c);
}

/// Pilot MSRV at c = 1 for IV, ω̂² from the first-lag autocovariance of returns,
/// IQ = IV², G(2)/G(1) from the durations; c_multi minimizes msrv_variance over
/// [c_min, c_max] (golden section).
inline MsrvTuning msrv_tuning(const ObservationSeries& xs, const MsrvOptions& o = {}) {
  const std::size_t cnt = detail::count_le(xs.times, o.horizon);
  if (cnt < 17) throw InsufficientDataError("msrv_tuning: needs at least 16 returns");
  const std::size_t n = cnt - 1;
  MsrvTuning t;
  double s1 = 0.0, s2 = 0.0, ac = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const double d = xs.times[i] - xs.times[i - 1];
    s1 += d;
    s2 += d * d;
    if (i + 1 <= n)
      ac += (xs.values[i] - xs.values[i - 1]) * (xs.values[i + 1] - xs.values[i]);
  }
  t.g21 = static_cast<double>(n) * s2 / (s1 * s1);
  t.noise_var = std::max(0.0, -ac / static_cast<double>(n - 1));
  t.iv_pilot = msrv(xs, msrv_scales(1.0, n), o.horizon).value;
  if (o.c_override > 0.0) {
    t.c_multi = o.c_override;
  } else if (!(t.iv_pilot > 0.0) || !std::isfinite(t.iv_pilot)) {
    t.c_multi = 1.0;
    t.warnings.push_back("pilot MSRV nonpositive; c_multi set to 1");
  } else {
    const double iq = t.iv_pilot * t.iv_pilot;
    auto v = [&](double c) { return msrv_variance(c, iq, t.g21, t.noise_var, t.iv_pilot); };
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = o.c_min, b = o.c_max;
    double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
    double v1 = v(c1), v2 = v(c2);
    for (int it = 0; it < 100 && b - a > 1e-9; ++it) {
      if (v1 <= v2) {
        b = c2;
        c2 = c1;
        v2 = v1;
        c1 = b - gr * (b - a);
        v1 = v(c1);
      } else {
        a = c1;
        c1 = c2;
        v1 = v2;
        c2 = a + gr * (b - a);
        v2 = v(c2);
      }
    }
    t.c_multi = 0.5 * (a + b);
  }
  t.m = std::min(msrv_scales(t.c_multi, n), n);
  const double iv = t.iv_pilot > 0.0 ? t.iv_pilot : 0.0;
  t.avar_multi = msrv_variance(t.c_multi, iv * iv, t.g21, t.noise_var, iv);
  return t;
}

/// N^{1/4}(est − truth) / √avar_multi.
inline Stat studentize_msrv(double est, double truth, std::size_t n_returns, double avar_multi) {
  if (!(avar_multi > 0.0)) return {std::numeric_limits<double>::quiet_NaN(), "nonpositive avar"};
  return {std::pow(static_cast<double>(n_returns), 0.25) * (est - truth) / std::sqrt(avar_multi), {}};
}

struct RvLimitLaw {
  double v_s = 0.0;
  double u_s2 = 0.0;
  /// (2/3) v_s (X₁ − X₀).
  double bias = 0.0;
  /// √((2/3)(u_s² − (2/3)v_s²)) · √[X]₁.
  double diffusion = 0.0;
};

/// Limit of b_n^{-1/2}(RV − [X]) for the two-barrier scheme with v_s = v − u and
/// u_s² = u² − uv + v².
inline RvLimitLaw rv_limit_law(double u, double v, double x_increment, double qv) {
  require(u > 0.0 && v > 0.0, "rv_limit_law: barriers must be positive");
  require(qv >= 0.0, "rv_limit_law: quadratic variation must be nonnegative");
  RvLimitLaw l;
  l.v_s = v - u;
  l.u_s2 = u * u - u * v + v * v;
  const double inner = l.u_s2 - 2.0 / 3.0 * l.v_s * l.v_s;
  if (inner < 0.0) throw ParameterError("rv_limit_law: u_s^2 < (2/3) v_s^2");
  l.bias = 2.0 / 3.0 * l.v_s * x_increment;
  l.diffusion = std::sqrt(2.0 / 3.0 * inner) * std::sqrt(qv);
  return l;
}

}  // namespace hfcov
