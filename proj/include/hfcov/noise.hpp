#pragma once

#include <algorithm>
#include <cmath>
#include <iterator>
#include <optional>
#include <functional>
#include <ostream>
#include <random>
#include <vector>

#include "error.hpp"
#include "paths.hpp"
#include "rng.hpp"
#include "sampling.hpp"

namespace hfcov {

/// Symmetric 2×2 matrix.
struct Mat2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;
};

struct NoiseConfig {
  /// Constant noise covariance Ψ, used when psi_fn is empty.
  Mat2 psi{};
  /// Optional time-varying Ψ_t.
  std::function<Mat2(double)> psi_fn;
  /// Multipliers of b_n^{-1/2}·ΔX̲ and b_n^{-1/2}·ΔY̲.
  double endo_scale_x = 0.0;
  double endo_scale_y = 0.0;
  /// Linear-process weights (finite length).
  std::vector<double> lambda1, lambda2, mu1, mu2;

  [[nodiscard]] Mat2 psi_at(double t) const { return psi_fn ? psi_fn(t) : psi; }

  void validate() const {
    auto psd = [](const Mat2& m) {
      return m.xx >= 0.0 && m.yy >= 0.0 && m.xx * m.yy - m.xy * m.xy >= -1e-15 * (m.xx * m.yy);
    };
    require(psd(psi), "NoiseConfig: psi must be positive semidefinite");
  }
};

enum class Asset { x, y };

struct ObservationSeries {
  std::vector<double> times;
  std::vector<double> values;
  std::vector<double> latent;

  [[nodiscard]] std::size_t size() const { return times.size(); }
};

namespace detail {

/// Ψ^{1/2} applied to (z1, z2): lower Cholesky factor.
inline std::pair<double, double> noise_pair(const Mat2& m, double z1, double z2) {
  if (m.xx < 0.0 || m.yy < 0.0) throw ParameterError("noise covariance not positive semidefinite");
  const double l11 = std::sqrt(m.xx);
  const double l21 = l11 > 0.0 ? m.xy / l11 : 0.0;
  const double r = m.yy - l21 * l21;
  if (r < -1e-12 * std::max(m.yy, 1e-300))
    throw ParameterError("noise covariance not positive semidefinite");
  const double l22 = std::sqrt(std::max(0.0, r));
  return {l11 * z1, l21 * z1 + l22 * z2};
}

/// The path itself if every epoch is a node, otherwise a bridge-refined copy
/// held in `storage`.
inline const LatentPath& path_with_epochs(const LatentPath& path,
                                          const std::vector<double>& epochs, RngSeed seed,
                                          std::optional<LatentPath>& storage) {
  for (double e : epochs)
    require(e >= path.t.front() && e <= path.t.back(), "observe: epoch outside the path");
  for (double e : epochs)
    if (path.node_index(e) == LatentPath::npos) {
      storage = refine(path, epochs, seed.child(stream::refine));
      return *storage;
    }
  return path;
}

struct EpochData {
  std::vector<double> latent;
  std::vector<double> endo_inc;  ///< b_n^{-1/2}(X̲_{S^i} − X̲_{S^{i−1}}), 0 at i = 0
};

inline EpochData epoch_data(const LatentPath& p, const std::vector<double>& epochs, double b_n,
                            Asset a) {
  EpochData d;
  d.latent.resize(epochs.size());
  d.endo_inc.assign(epochs.size(), 0.0);
  const auto& lat = a == Asset::x ? p.x : p.y;
  const auto& endo = a == Asset::x ? p.endo_x : p.endo_y;
  const double isb = b_n > 0.0 ? 1.0 / std::sqrt(b_n) : 0.0;
  std::size_t prev = 0;
  for (std::size_t i = 0; i < epochs.size(); ++i) {
    std::size_t k = p.node_index(epochs[i]);
    if (k == LatentPath::npos) throw ParameterError("observe: epoch is not a path node");
    d.latent[i] = lat[k];
    if (i > 0) d.endo_inc[i] = isb * (endo[k] - endo[prev]);
    prev = k;
  }
  return d;
}

}  // namespace detail

/// Epochs of `times` at or before the path end.
inline std::vector<double> epochs_within(const SamplingTimes& times, const LatentPath& path) {
  std::vector<double> e;
  for (double t : times.times)
    if (t <= path.t.back()) e.push_back(t);
  return e;
}

/// 𝖷_{S^i} = X_{S^i} + endo_scale·b_n^{-1/2}(X̲_{S^i} − X̲_{S^{i−1}}) + ε_{S^i}, ε ~ N(0, Ψ).
/// Epochs beyond the path end are dropped.
inline ObservationSeries observe(const LatentPath& path, const SamplingTimes& times,
                                 const NoiseConfig& cfg, RngSeed seed, Asset asset = Asset::x) {
  cfg.validate();
  auto epochs = epochs_within(times, path);
  const double scale = asset == Asset::x ? cfg.endo_scale_x : cfg.endo_scale_y;
  require(scale == 0.0 || times.b_n > 0.0, "observe: endogenous noise needs b_n");
  std::optional<LatentPath> storage;
  const LatentPath& p = detail::path_with_epochs(path, epochs, seed, storage);
  auto d = detail::epoch_data(p, epochs, times.b_n, asset);
  auto eng = seed.child(stream::noise).engine();
  std::normal_distribution<double> nd;
  ObservationSeries out;
  out.times = epochs;
  out.latent = d.latent;
  out.values.resize(epochs.size());
  for (std::size_t i = 0; i < epochs.size(); ++i) {
    const double z1 = nd(eng);
    const double z2 = nd(eng);
    auto [ex, ey] = detail::noise_pair(cfg.psi_at(epochs[i]), z1, z2);
    const double eps = asset == Asset::x ? ex : ey;
    const double endo = scale * d.endo_inc[i];
    out.values[i] = d.latent[i] + (eps + endo);
  }
  return out;
}

/// Both assets at once. ε^X and ε^Y are jointly drawn per distinct epoch, so
/// coinciding observation times carry the cross-covariance Ψ^{12}.
inline std::pair<ObservationSeries, ObservationSeries> observe_pair(const LatentPath& path,
                                                                    const SamplingTimes& s,
                                                                    const SamplingTimes& t,
                                                                    const NoiseConfig& cfg,
                                                                    RngSeed seed) {
  cfg.validate();
  auto es = epochs_within(s, path);
  auto et = epochs_within(t, path);
  std::vector<double> all;
  std::merge(es.begin(), es.end(), et.begin(), et.end(), std::back_inserter(all));
  all.erase(std::unique(all.begin(), all.end()), all.end());
  std::optional<LatentPath> storage;
  const LatentPath& p = detail::path_with_epochs(path, all, seed, storage);
  auto eng = seed.child(stream::noise).engine();
  std::normal_distribution<double> nd;
  std::vector<double> ex(all.size()), ey(all.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    const double z1 = nd(eng);
    const double z2 = nd(eng);
    auto e = detail::noise_pair(cfg.psi_at(all[i]), z1, z2);
    ex[i] = e.first;
    ey[i] = e.second;
  }
  auto build = [&](const std::vector<double>& epochs, double b_n, Asset a, double scale,
                   const std::vector<double>& eps) {
    require(scale == 0.0 || b_n > 0.0, "observe_pair: endogenous noise needs b_n");
    auto d = detail::epoch_data(p, epochs, b_n, a);
    ObservationSeries o;
    o.times = epochs;
    o.latent = d.latent;
    o.values.resize(epochs.size());
    for (std::size_t i = 0; i < epochs.size(); ++i) {
      auto k = static_cast<std::size_t>(std::lower_bound(all.begin(), all.end(), epochs[i]) -
                                        all.begin());
      o.values[i] = d.latent[i] + (eps[k] + scale * d.endo_inc[i]);
    }
    return o;
  };
  return {build(es, s.b_n, Asset::x, cfg.endo_scale_x, ex),
          build(et, t.b_n, Asset::y, cfg.endo_scale_y, ey)};
}

/// Linear-process noise U_i = Σ_u λ_u ε_{i−u} + Σ_u μ_u b_n^{-1/2}(X̲_{S^{i−u}} − X̲_{S^{i−u−1}}),
/// with pre-sample terms set to zero. ε uses the same stream as observe().
inline ObservationSeries observe_linear_process(const LatentPath& path, const SamplingTimes& times,
                                                const NoiseConfig& cfg, RngSeed seed,
                                                Asset asset = Asset::x) {
  cfg.validate();
  const auto& lambda = asset == Asset::x ? cfg.lambda1 : cfg.lambda2;
  const auto& mu = asset == Asset::x ? cfg.mu1 : cfg.mu2;
  require(mu.empty() || times.b_n > 0.0, "observe_linear_process: endogenous noise needs b_n");
  auto epochs = epochs_within(times, path);
  std::optional<LatentPath> storage;
  const LatentPath& p = detail::path_with_epochs(path, epochs, seed, storage);
  auto d = detail::epoch_data(p, epochs, times.b_n, asset);
  auto eng = seed.child(stream::noise).engine();
  std::normal_distribution<double> nd;
  std::vector<double> eps(epochs.size());
  for (std::size_t i = 0; i < epochs.size(); ++i) {
    const double z1 = nd(eng);
    const double z2 = nd(eng);
    auto [ex, ey] = detail::noise_pair(cfg.psi_at(epochs[i]), z1, z2);
    eps[i] = asset == Asset::x ? ex : ey;
  }
  ObservationSeries out;
  out.times = epochs;
  out.latent = d.latent;
  out.values.resize(epochs.size());
  for (std::size_t i = 0; i < epochs.size(); ++i) {
    double e = 0.0;
    for (std::size_t u = 0; u < lambda.size() && u <= i; ++u) e += lambda[u] * eps[i - u];
    double en = 0.0;
    for (std::size_t u = 0; u < mu.size() && u <= i; ++u) en += mu[u] * d.endo_inc[i - u];
    out.values[i] = d.latent[i] + (e + en);
  }
  return out;
}

/// Latent values at the epochs, no noise.
inline ObservationSeries observe_latent(const LatentPath& path, const SamplingTimes& times,
                                        RngSeed seed, Asset asset = Asset::x) {
  return observe(path, times, NoiseConfig{}, seed, asset);
}

/// CSV columns index, time, value, latent.
inline void write_observations_csv(std::ostream& os, const ObservationSeries& o) {
  os.precision(17);
  os << "index,time,value,latent\n";
  for (std::size_t i = 0; i < o.size(); ++i)
    os << i << ',' << o.times[i] << ',' << o.values[i] << ',' << o.latent[i] << '\n';
}

}  // namespace hfcov
