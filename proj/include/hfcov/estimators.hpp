#pragma once

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "error.hpp"
#include "noise.hpp"
#include "quadrature.hpp"
#include "sampling.hpp"
#include "weights.hpp"

namespace hfcov {

enum class KnRule {
  data_driven,  ///< k_n = ⌈θ√N⌉
  spec_driven   ///< k_n = ⌈θ/√b_n⌉
};

/// Normalizing constant of the pre-averaged sums. `discrete` uses
/// (1/k)Σ_{p=1}^{k−1} g(p/k), which removes the O(1/k²) bias of ∫g for kinked
/// weights at small k; `continuous` uses ∫₀¹ g.
enum class Normalization { discrete, continuous };

struct PreAvgConfig {
  double b_n = 1.0 / 3600.0;
  double theta = 0.15;
  /// Explicit window length; 0 selects `rule`.
  std::size_t k_n = 0;
  KnRule rule = KnRule::data_driven;
  WeightFn weight = min_xx();
  Normalization norm = Normalization::discrete;
  double horizon = 1.0;
};

inline std::size_t resolve_kn(const PreAvgConfig& cfg, std::size_t n_returns) {
  if (cfg.k_n > 0) return cfg.k_n;
  require(cfg.theta > 0.0, "PreAvgConfig: theta must be positive");
  double k = cfg.rule == KnRule::data_driven
                 ? std::ceil(cfg.theta * std::sqrt(static_cast<double>(n_returns)))
                 : std::ceil(cfg.theta / std::sqrt(cfg.b_n));
  return std::max<std::size_t>(2, static_cast<std::size_t>(k));
}

/// ∫₀¹ w(x)^power dx.
inline double weight_moment(const std::function<double(double)>& w, int power,
                            const std::vector<double>& kinks) {
  return integrate([&](double x) { return std::pow(w(x), power); }, 0.0, 1.0, kinks, 1e-13).value;
}

/// ψ_HY (continuous) or its Riemann-sum counterpart at window k.
inline double psi_hy(const WeightFn& w, std::size_t k, Normalization norm) {
  if (norm == Normalization::continuous) return weight_moment(w.g, 1, w.kinks);
  double s = 0.0;
  for (std::size_t p = 1; p < k; ++p) s += w(static_cast<double>(p) / static_cast<double>(k));
  return s / static_cast<double>(k);
}

/// ψ₂ = ∫g² or (1/k)Σ g(p/k)².
inline double psi_2(const WeightFn& w, std::size_t k, Normalization norm) {
  if (norm == Normalization::continuous) return weight_moment(w.g, 2, w.kinks);
  double s = 0.0;
  for (std::size_t p = 1; p < k; ++p) {
    double g = w(static_cast<double>(p) / static_cast<double>(k));
    s += g * g;
  }
  return s / static_cast<double>(k);
}

/// ψ₁ = ∫g'² or kΣ_{p=1}^{k}(g(p/k) − g((p−1)/k))².
inline double psi_1(const WeightFn& w, std::size_t k, Normalization norm) {
  if (norm == Normalization::continuous) return weight_moment(w.g_prime, 2, w.kinks);
  double s = 0.0;
  const double kd = static_cast<double>(k);
  for (std::size_t p = 1; p <= k; ++p) {
    double d = w(static_cast<double>(p) / kd) - w(static_cast<double>(p - 1) / kd);
    s += d * d;
  }
  return s * kd;
}

/// Right-continuous step function: value v[m] on [t[m], t[m+1]), 0 before t[0].
struct StepSeries {
  std::vector<double> t;
  std::vector<double> v;

  [[nodiscard]] double at(double s) const {
    auto it = std::upper_bound(t.begin(), t.end(), s);
    if (it == t.begin()) return 0.0;
    return v[static_cast<std::size_t>(it - t.begin()) - 1];
  }
  [[nodiscard]] bool empty() const { return t.empty(); }
};

struct EstimatorResult {
  double value = 0.0;
  StepSeries path;
  std::string tag;
  std::size_t k_n = 0;
  std::size_t n_returns = 0;
  /// Normalizing constant(s) actually used.
  double psi = 0.0;
  /// Named parts of composite estimators (e.g. MRC).
  std::vector<std::pair<std::string, double>> parts;
};

/// 𝖷̄^i = Σ_{p=1}^{k−1} g(p/k)(𝖷_{i+p} − 𝖷_{i+p−1}) for i = 0..n−k.
inline std::vector<double> preavg(const std::vector<double>& x, std::size_t k, const WeightFn& w) {
  require(k >= 2, "preavg: k_n must be at least 2");
  if (x.size() <= k) throw InsufficientDataError("preavg: series length must exceed k_n");
  std::vector<double> gw(k);
  for (std::size_t p = 1; p < k; ++p) gw[p] = w(static_cast<double>(p) / static_cast<double>(k));
  const std::size_t m = x.size() - k + 1;
  std::vector<double> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    double acc = 0.0;
    for (std::size_t p = 1; p < k; ++p) acc += gw[p] * (x[i + p] - x[i + p - 1]);
    out[i] = acc;
  }
  return out;
}

inline std::vector<double> preavg(const ObservationSeries& xs, const PreAvgConfig& cfg) {
  std::size_t k = resolve_kn(cfg, xs.size() > 0 ? xs.size() - 1 : 0);
  return preavg(xs.values, k, cfg.weight);
}

namespace detail {

/// Number of epochs at or before t.
inline std::size_t count_le(const std::vector<double>& s, double t) {
  return static_cast<std::size_t>(std::upper_bound(s.begin(), s.end(), t) - s.begin());
}

inline std::vector<double> merged_times(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> u;
  u.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(u));
  u.erase(std::unique(u.begin(), u.end()), u.end());
  return u;
}

inline std::vector<std::size_t> positions(const std::vector<double>& s, const std::vector<double>& u) {
  std::vector<std::size_t> pos(s.size());
  std::size_t j = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    while (u[j] < s[i]) ++j;
    pos[i] = j;
  }
  return pos;
}

/// Kernel sum of the pre-averaged HY estimator on designs (S, X), (T, Y).
/// Pairs are visited i-major with ascending j, the order the brute-force
/// reference uses.
inline EstimatorResult phy_core(const std::vector<double>& s, const std::vector<double>& x,
                                const std::vector<double>& t, const std::vector<double>& y,
                                std::size_t k, const WeightFn& w, double psi, double horizon,
                                bool want_path) {
  if (s.size() <= 2 * k || t.size() <= 2 * k)
    throw InsufficientDataError("phy: each series needs more than 2 k_n observations");
  const std::size_t ns = count_le(s, horizon), nt = count_le(t, horizon);
  const std::size_t ni = ns > k ? ns - k : 0;
  const std::size_t nj = nt > k ? nt - k : 0;
  auto xb = preavg(x, k, w);
  auto yb = preavg(y, k, w);
  const double c = psi * static_cast<double>(k);
  const double scale = 1.0 / (c * c);

  std::vector<double> u;
  std::vector<std::size_t> ps, pt;
  std::vector<double> bucket;
  if (want_path) {
    std::vector<double> sh(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(ns));
    std::vector<double> th(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(nt));
    u = merged_times(sh, th);
    ps = positions(sh, u);
    pt = positions(th, u);
    bucket.assign(u.size(), 0.0);
  }

  double acc = 0.0;
  std::size_t hi = 0;  // #{j : T^j < S^{i+k}}
  std::size_t m = 0;   // first index with T^m > S^i
  for (std::size_t i = 0; i < ni; ++i) {
    while (hi < t.size() && t[hi] < s[i + k]) ++hi;
    while (m < t.size() && t[m] <= s[i]) ++m;
    const std::size_t jlo = m > k ? m - k : 0;
    const std::size_t jend = std::min(hi, nj);
    for (std::size_t j = jlo; j < jend; ++j) {
      const double prod = xb[i] * yb[j];
      acc += prod;
      if (want_path) bucket[std::max(ps[i + k], pt[j + k])] += prod;
    }
  }
  EstimatorResult r;
  r.value = acc * scale;
  r.k_n = k;
  r.psi = psi;
  if (want_path) {
    r.path.t = u;
    r.path.v.resize(u.size());
    double cum = 0.0;
    for (std::size_t q = 0; q < u.size(); ++q) {
      cum += bucket[q];
      r.path.v[q] = cum * scale;
    }
  }
  return r;
}

}  // namespace detail

/// Pre-averaged Hayashi–Yoshida estimator on the raw designs.
inline EstimatorResult phy(const ObservationSeries& xs, const ObservationSeries& ys,
                           const PreAvgConfig& cfg, bool want_path = true) {
  const std::size_t n = std::min(detail::count_le(xs.times, cfg.horizon),
                                 detail::count_le(ys.times, cfg.horizon));
  const std::size_t nret = n > 0 ? n - 1 : 0;
  const std::size_t k = resolve_kn(cfg, nret);
  auto r = detail::phy_core(xs.times, xs.values, ys.times, ys.values, k, cfg.weight,
                            psi_hy(cfg.weight, k, cfg.norm), cfg.horizon, want_path);
  r.tag = "phy";
  r.n_returns = nret;
  return r;
}

/// Values of a series at the next-tick refresh epochs Ŝ^k (or Ť^k).
inline ObservationSeries refreshed(const ObservationSeries& xs, const RefreshData& rd, bool first) {
  const auto& idx = first ? rd.s_index : rd.t_index;
  ObservationSeries o;
  o.times.resize(idx.size());
  o.values.resize(idx.size());
  o.latent.resize(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    o.times[k] = xs.times[idx[k]];
    o.values[k] = xs.values[idx[k]];
    o.latent[k] = xs.latent.empty() ? 0.0 : xs.latent[idx[k]];
  }
  return o;
}

inline std::size_t refresh_returns(const RefreshData& rd, double horizon) {
  return rd.last_until(horizon);
}

/// PHY on the refresh-time designs (Î, Ĵ).
inline EstimatorResult phy_refresh(const ObservationSeries& xs, const ObservationSeries& ys,
                                   const RefreshData& rd, const PreAvgConfig& cfg,
                                   bool want_path = true) {
  auto xr = refreshed(xs, rd, true);
  auto yr = refreshed(ys, rd, false);
  const std::size_t nret = refresh_returns(rd, cfg.horizon);
  const std::size_t k = resolve_kn(cfg, nret);
  auto r = detail::phy_core(xr.times, xr.values, yr.times, yr.values, k, cfg.weight,
                            psi_hy(cfg.weight, k, cfg.norm), cfg.horizon, want_path);
  r.tag = "phy_refresh";
  r.n_returns = nret;
  return r;
}

inline EstimatorResult phy_refresh(const ObservationSeries& xs, const ObservationSeries& ys,
                                   const PreAvgConfig& cfg, bool want_path = true) {
  auto rd = refresh(xs.times, ys.times, cfg.horizon, cfg.b_n);
  return phy_refresh(xs, ys, rd, cfg, want_path);
}

namespace detail {

inline EstimatorResult power_variation(const ObservationSeries& xs, double horizon, int power,
                                       const char* tag) {
  if (xs.size() < 2) throw InsufficientDataError(std::string(tag) + ": needs 2 observations");
  EstimatorResult r;
  r.tag = tag;
  const std::size_t n = count_le(xs.times, horizon);
  double acc = 0.0;
  r.path.t.push_back(xs.times[0]);
  r.path.v.push_back(0.0);
  for (std::size_t i = 1; i < n; ++i) {
    const double d = xs.values[i] - xs.values[i - 1];
    const double d2 = d * d;
    acc += power == 2 ? d2 : d2 * d2;
    r.path.t.push_back(xs.times[i]);
    r.path.v.push_back(acc);
  }
  r.value = acc;
  r.n_returns = n > 0 ? n - 1 : 0;
  return r;
}

}  // namespace detail

/// Realized volatility Σ(Δ𝖷)² up to the horizon.
inline EstimatorResult rv(const ObservationSeries& xs, double horizon = 1.0) {
  return detail::power_variation(xs, horizon, 2, "rv");
}

/// Realized quarticity Σ(Δ𝖷)⁴ up to the horizon.
inline EstimatorResult rq(const ObservationSeries& xs, double horizon = 1.0) {
  return detail::power_variation(xs, horizon, 4, "rq");
}

struct Gamma1Result {
  double v11 = 0.0, v22 = 0.0, v12 = 0.0;
  StepSeries p11, p22, p12;
};

/// Scaled first-order realized autocovariances in refresh time.
inline Gamma1Result gamma1(const ObservationSeries& xs, const ObservationSeries& ys,
                           const RefreshData& rd, std::size_t k_n, double horizon = 1.0) {
  if (rd.size() < 3) throw InsufficientDataError("gamma1: needs at least 3 refresh epochs");
  require(k_n >= 1, "gamma1: k_n must be positive");
  auto xr = refreshed(xs, rd, true);
  auto yr = refreshed(ys, rd, false);
  const double kk = static_cast<double>(k_n) * static_cast<double>(k_n);
  const double c1 = -1.0 / kk;
  const double c12 = -1.0 / (2.0 * kk);
  Gamma1Result g;
  double a11 = 0.0, a22 = 0.0, a12 = 0.0;
  for (std::size_t k = 1; k + 1 < rd.size(); ++k) {
    const double dx0 = xr.values[k] - xr.values[k - 1], dx1 = xr.values[k + 1] - xr.values[k];
    const double dy0 = yr.values[k] - yr.values[k - 1], dy1 = yr.values[k + 1] - yr.values[k];
    if (rd.s_hat[k + 1] <= horizon) {
      a11 += dx0 * dx1;
      g.p11.t.push_back(rd.s_hat[k + 1]);
      g.p11.v.push_back(c1 * a11);
    }
    if (rd.t_hat[k + 1] <= horizon) {
      a22 += dy0 * dy1;
      g.p22.t.push_back(rd.t_hat[k + 1]);
      g.p22.v.push_back(c1 * a22);
    }
    if (rd.r[k + 1] <= horizon) {
      a12 += dx0 * dy1 + dx1 * dy0;
      g.p12.t.push_back(rd.r[k + 1]);
      g.p12.v.push_back(c12 * a12);
    }
  }
  g.v11 = c1 * a11;
  g.v22 = c1 * a22;
  g.v12 = c12 * a12;
  return g;
}

/// Ξ_{α,β} = (1/k)Σ_{i: R^i ≤ t} 𝖷̄_α^i 𝖸̄_β^i on the refresh designs. Terms whose
/// pre-average window runs past the available data are omitted.
inline EstimatorResult xi(const ObservationSeries& xs, const ObservationSeries& ys,
                          const RefreshData& rd, std::size_t k_n, const WeightFn& alpha,
                          const WeightFn& beta, double horizon = 1.0) {
  if (rd.size() <= k_n) throw InsufficientDataError("xi: refresh data shorter than k_n");
  auto xr = refreshed(xs, rd, true);
  auto yr = refreshed(ys, rd, false);
  auto xa = preavg(xr.values, k_n, alpha);
  auto yb = preavg(yr.values, k_n, beta);
  const double inv_k = 1.0 / static_cast<double>(k_n);
  EstimatorResult r;
  r.tag = "xi";
  r.k_n = k_n;
  double acc = 0.0;
  for (std::size_t i = 0; i < xa.size() && rd.r[i] <= horizon; ++i) {
    acc += xa[i] * yb[i];
    r.path.t.push_back(rd.r[i]);
    r.path.v.push_back(acc * inv_k);
  }
  r.value = acc * inv_k;
  return r;
}

/// True if f and f' vanish at both ends (checked one-sidedly).
inline bool has_flat_ends(const WeightFn& f) {
  const double e = 1e-7;
  return std::abs(f(0.0)) < 1e-12 && std::abs(f(1.0)) < 1e-12 && std::abs(f.g_prime(e)) < 1e-5 &&
         std::abs(f.g_prime(1.0 - e)) < 1e-5;
}

/// Ξ[f] = (Ξ_{f',f} − Ξ_{f,f'}) / (2‖f'‖²).
inline EstimatorResult xi_f(const ObservationSeries& xs, const ObservationSeries& ys,
                            const RefreshData& rd, std::size_t k_n, const WeightFn& f,
                            double horizon = 1.0) {
  if (!has_flat_ends(f)) throw ParameterError("xi_f: f and f' must vanish at 0 and 1");
  const auto fp = derivative_of(f);
  auto a = xi(xs, ys, rd, k_n, fp, f, horizon);
  auto b = xi(xs, ys, rd, k_n, f, fp, horizon);
  const double norm = weight_moment(f.g_prime, 2, f.kinks);
  const double c = 1.0 / (2.0 * norm);
  EstimatorResult r;
  r.tag = "xi_f";
  r.k_n = k_n;
  r.psi = norm;
  r.value = (a.value - b.value) * c;
  r.path.t = a.path.t;
  r.path.v.resize(a.path.v.size());
  for (std::size_t i = 0; i < a.path.v.size(); ++i) r.path.v[i] = (a.path.v[i] - b.path.v[i]) * c;
  return r;
}

/// Modulated realized covariance (1/ψ₂)Ξ_{g,g} − (ψ₁/ψ₂)γ(1)^{12}.
inline EstimatorResult mrc(const ObservationSeries& xs, const ObservationSeries& ys,
                           const RefreshData& rd, const PreAvgConfig& cfg) {
  const std::size_t k = resolve_kn(cfg, refresh_returns(rd, cfg.horizon));
  auto x = xi(xs, ys, rd, k, cfg.weight, cfg.weight, cfg.horizon);
  auto g = gamma1(xs, ys, rd, k, cfg.horizon);
  const double p1 = psi_1(cfg.weight, k, cfg.norm);
  const double p2 = psi_2(cfg.weight, k, cfg.norm);
  EstimatorResult r;
  r.tag = "mrc";
  r.k_n = k;
  r.n_returns = refresh_returns(rd, cfg.horizon);
  r.psi = p2;
  const double xi_term = x.value / p2;
  const double gamma_term = (p1 / p2) * g.v12;
  r.value = xi_term - gamma_term;
  r.parts = {{"xi_term", xi_term}, {"gamma_term", gamma_term}, {"psi1", p1}, {"psi2", p2}};
  return r;
}

inline EstimatorResult mrc(const ObservationSeries& xs, const ObservationSeries& ys,
                           const PreAvgConfig& cfg) {
  auto rd = refresh(xs.times, ys.times, cfg.horizon, cfg.b_n);
  return mrc(xs, ys, rd, cfg);
}

/// α_{i,M} = 12i²/(M³−M) − 6i/(M²−1) − 6i/(M³−M), i = 1..M (index 0 unused).
inline std::vector<double> msrv_weights(std::size_t m) {
  require(m >= 2, "msrv_weights: M must be at least 2");
  const double md = static_cast<double>(m);
  const double m3 = md * md * md - md;
  const double m2 = md * md - 1.0;
  std::vector<double> a(m + 1, 0.0);
  for (std::size_t i = 1; i <= m; ++i) {
    const double id = static_cast<double>(i);
    a[i] = 12.0 * id * id / m3 - 6.0 * id / m2 - 6.0 * id / m3;
  }
  return a;
}

/// Σ_{i=1}^{M} (α_i/i) Σ_{j=i}^{N} (𝖷_{S^j} − 𝖷_{S^{j−i}})², N = last index with S^N ≤ horizon.
inline EstimatorResult msrv(const ObservationSeries& xs, std::size_t m, double horizon = 1.0) {
  require(m >= 2, "msrv: M must be at least 2");
  const std::size_t cnt = detail::count_le(xs.times, horizon);
  const std::size_t n = cnt > 0 ? cnt - 1 : 0;
  if (m > n) throw ParameterError("msrv: M exceeds the number of returns");
  auto a = msrv_weights(m);
  double total = 0.0;
  for (std::size_t i = 1; i <= m; ++i) {
    double s = 0.0;
    for (std::size_t j = i; j <= n; ++j) {
      const double d = xs.values[j] - xs.values[j - i];
      s += d * d;
    }
    total += (a[i] / static_cast<double>(i)) * s;
  }
  EstimatorResult r;
  r.tag = "msrv";
  r.value = total;
  r.n_returns = n;
  r.k_n = m;
  return r;
}

/// CSV columns t, value.
inline void write_result_csv(std::ostream& os, const EstimatorResult& r) {
  os.precision(17);
  os << "t,value\n";
  if (r.path.empty()) {
    os << "nan," << r.value << '\n';
    return;
  }
  for (std::size_t i = 0; i < r.path.t.size(); ++i) os << r.path.t[i] << ',' << r.path.v[i] << '\n';
}

}  // namespace hfcov
