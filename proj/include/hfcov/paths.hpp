#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <iterator>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "error.hpp"
#include "rng.hpp"

namespace hfcov {

struct TimeGrid {
  double t0 = 0.0;
  double t1 = 1.0;
  std::size_t n_fine = 36000;

  [[nodiscard]] double mesh() const { return (t1 - t0) / static_cast<double>(n_fine); }
  [[nodiscard]] double at(std::size_t i) const {
    return i == n_fine ? t1 : t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n_fine);
  }
  void validate() const {
    require(t1 > t0, "TimeGrid: t1 must exceed t0");
    require(n_fine >= 1, "TimeGrid: n_fine must be at least 1");
  }
};

enum class DriftKind { none, bridge, custom };

struct ModelConfig {
  double sigma = 0.02;
  double x1 = 0.01;
  double corr = 0.0;
  DriftKind drift_kind = DriftKind::bridge;
  /// Endogenous-noise drivers are X̲ = φ^X·X, Y̲ = φ^Y·Y.
  double endo_factor_x = 1.0;
  double endo_factor_y = 1.0;

  void validate() const {
    require(sigma > 0.0, "ModelConfig: sigma must be positive");
    require(std::abs(corr) <= 1.0, "ModelConfig: |corr| must not exceed 1");
  }
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// Coefficient callable (t, state) -> value per coordinate.
using CoefFn = std::function<Vec2(double, Vec2)>;

struct WienerPair {
  std::vector<double> wx, wy;
};

/// Latent bivariate path on a grid of nodes. Nodes start as the fine grid and
/// may be refined by bridge interpolation (see refine()); between nodes the
/// process is X_t = X_i + a_i (t − t_i) + σ_i (W_t − W_i) with coefficients
/// frozen per step.
struct LatentPath {
  TimeGrid grid;
  double corr = 0.0;
  std::vector<double> t;
  std::vector<double> x, y;
  std::vector<double> ax, ay;  ///< drift parts A^X, A^Y
  std::vector<double> mx, my;  ///< martingale parts M^X, M^Y
  std::vector<double> wx, wy;  ///< driving Wiener paths
  std::vector<double> qv_x, qv_y, qc_xy;
  std::vector<double> spot_x, spot_y, spot_xy;
  std::vector<double> endo_x, endo_y;  ///< X̲, Y̲
  // Per step (size nodes − 1).
  std::vector<double> drift_x, drift_y, vol_x, vol_y;
  double endo_factor_x = 1.0;
  double endo_factor_y = 1.0;
  bool external_endo = false;

  [[nodiscard]] std::size_t size() const { return t.size(); }
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  /// Times this close count as the same node, so i·b_n matches i/n_fine.
  static double node_tolerance(double time) { return 1e-12 * std::max(1.0, std::abs(time)); }

  /// Index of the node at `time` up to node_tolerance, or npos.
  [[nodiscard]] std::size_t node_index(double time) const {
    auto it = std::lower_bound(t.begin(), t.end(), time);
    const double tol = node_tolerance(time);
    if (it != t.end() && *it - time <= tol) return static_cast<std::size_t>(it - t.begin());
    if (it != t.begin() && time - *std::prev(it) <= tol)
      return static_cast<std::size_t>(it - t.begin()) - 1;
    return npos;
  }
};

inline WienerPair simulate_wiener(const TimeGrid& grid, double corr, RngSeed seed) {
  grid.validate();
  require(std::abs(corr) <= 1.0, "simulate_wiener: |corr| must not exceed 1");
  auto eng = seed.engine();
  std::normal_distribution<double> nd;
  const double sd = std::sqrt(grid.mesh());
  const double rc = std::sqrt(std::max(0.0, 1.0 - corr * corr));
  WienerPair w;
  w.wx.assign(grid.n_fine + 1, 0.0);
  w.wy.assign(grid.n_fine + 1, 0.0);
  for (std::size_t i = 0; i < grid.n_fine; ++i) {
    double z1 = nd(eng);
    double z2 = nd(eng);
    w.wx[i + 1] = w.wx[i] + sd * z1;
    w.wy[i + 1] = w.wy[i] + sd * (corr * z1 + rc * z2);
  }
  return w;
}

namespace detail {

inline void fill_node_derived(LatentPath& p) {
  const std::size_t n = p.size();
  p.spot_x.resize(n);
  p.spot_y.resize(n);
  p.spot_xy.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t s = i + 1 < n ? i : i - 1;
    p.spot_x[i] = p.vol_x[s] * p.vol_x[s];
    p.spot_y[i] = p.vol_y[s] * p.vol_y[s];
    p.spot_xy[i] = p.corr * p.vol_x[s] * p.vol_y[s];
  }
  if (!p.external_endo) {
    p.endo_x.resize(n);
    p.endo_y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      p.endo_x[i] = p.endo_factor_x * p.x[i];
      p.endo_y[i] = p.endo_factor_y * p.y[i];
    }
  }
}

/// Euler scheme driven by `w`. If `pin` is set, the last step is replaced by
/// the bridge step landing exactly on *pin (both coordinates).
inline LatentPath euler(const TimeGrid& grid, const WienerPair& w, const CoefFn& drift,
                        const CoefFn& vol, double corr, std::optional<double> pin) {
  const std::size_t n = grid.n_fine;
  LatentPath p;
  p.grid = grid;
  p.corr = corr;
  p.t.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) p.t[i] = grid.at(i);
  for (auto* v : {&p.x, &p.y, &p.ax, &p.ay, &p.mx, &p.my, &p.qv_x, &p.qv_y, &p.qc_xy})
    v->assign(n + 1, 0.0);
  p.wx = w.wx;
  p.wy = w.wy;
  p.drift_x.resize(n);
  p.drift_y.resize(n);
  p.vol_x.resize(n);
  p.vol_y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double dt = p.t[i + 1] - p.t[i];
    const Vec2 state{p.x[i], p.y[i]};
    Vec2 s = vol(p.t[i], state);
    const double dwx = p.wx[i + 1] - p.wx[i];
    const double dwy = p.wy[i + 1] - p.wy[i];
    const double dmx = s.x * dwx;
    const double dmy = s.y * dwy;
    Vec2 a;
    if (pin && i + 1 == n) {
      a.x = (*pin - p.x[i] - dmx) / dt;
      a.y = (*pin - p.y[i] - dmy) / dt;
    } else {
      a = drift(p.t[i], state);
    }
    if (!std::isfinite(a.x) || !std::isfinite(a.y) || !std::isfinite(s.x) || !std::isfinite(s.y))
      throw SimulationError("non-finite drift or volatility", i);
    p.drift_x[i] = a.x;
    p.drift_y[i] = a.y;
    p.vol_x[i] = s.x;
    p.vol_y[i] = s.y;
    p.ax[i + 1] = p.ax[i] + a.x * dt;
    p.ay[i + 1] = p.ay[i] + a.y * dt;
    p.mx[i + 1] = p.mx[i] + dmx;
    p.my[i + 1] = p.my[i] + dmy;
    if (pin && i + 1 == n) {
      p.x[i + 1] = *pin;
      p.y[i + 1] = *pin;
    } else {
      p.x[i + 1] = p.x[i] + (a.x * dt + dmx);
      p.y[i + 1] = p.y[i] + (a.y * dt + dmy);
    }
    p.qv_x[i + 1] = p.qv_x[i] + s.x * s.x * dt;
    p.qv_y[i + 1] = p.qv_y[i] + s.y * s.y * dt;
    p.qc_xy[i + 1] = p.qc_xy[i] + corr * s.x * s.y * dt;
  }
  fill_node_derived(p);
  return p;
}

}  // namespace detail

/// Euler–Maruyama for dX = a(t, X) dt + σ(t, X) dW with corr(W^X, W^Y) = corr.
inline LatentPath simulate_ito(const TimeGrid& grid, const CoefFn& drift_fn, const CoefFn& vol_fn,
                               double corr, RngSeed seed) {
  auto w = simulate_wiener(grid, corr, seed);
  return detail::euler(grid, w, drift_fn, vol_fn, corr, std::nullopt);
}

/// Same scheme on a caller-supplied Wiener pair (used for strong-order checks).
inline LatentPath simulate_ito_on(const TimeGrid& grid, const WienerPair& w,
                                  const CoefFn& drift_fn, const CoefFn& vol_fn, double corr) {
  require(w.wx.size() == grid.n_fine + 1 && w.wy.size() == grid.n_fine + 1,
          "simulate_ito_on: Wiener path does not match grid");
  return detail::euler(grid, w, drift_fn, vol_fn, corr, std::nullopt);
}

inline CoefFn bridge_drift(double x1, double horizon) {
  return [x1, horizon](double t, Vec2 s) {
    return Vec2{(x1 - s.x) / (horizon - t), (x1 - s.y) / (horizon - t)};
  };
}

inline CoefFn constant_vol(double sigma) {
  return [sigma](double, Vec2) { return Vec2{sigma, sigma}; };
}

/// Bridge dX = (x1 − X)/(t1 − t) dt + σ dW for both coordinates. The last step
/// lands exactly on x1.
inline LatentPath simulate_bridge(const TimeGrid& grid, const ModelConfig& cfg, RngSeed seed) {
  cfg.validate();
  require(cfg.drift_kind == DriftKind::bridge, "simulate_bridge: drift_kind must be bridge");
  auto w = simulate_wiener(grid, cfg.corr, seed);
  auto p = detail::euler(grid, w, bridge_drift(cfg.x1, grid.t1), constant_vol(cfg.sigma), cfg.corr,
                         cfg.x1);
  p.endo_factor_x = cfg.endo_factor_x;
  p.endo_factor_y = cfg.endo_factor_y;
  detail::fill_node_derived(p);
  return p;
}

/// Dispatch on drift_kind (none or bridge).
inline LatentPath simulate_model(const TimeGrid& grid, const ModelConfig& cfg, RngSeed seed) {
  cfg.validate();
  if (cfg.drift_kind == DriftKind::bridge) return simulate_bridge(grid, cfg, seed);
  require(cfg.drift_kind == DriftKind::none, "simulate_model: custom drift needs simulate_ito");
  auto w = simulate_wiener(grid, cfg.corr, seed);
  auto zero = [](double, Vec2) { return Vec2{}; };
  auto p = detail::euler(grid, w, zero, constant_vol(cfg.sigma), cfg.corr, std::nullopt);
  p.endo_factor_x = cfg.endo_factor_x;
  p.endo_factor_y = cfg.endo_factor_y;
  detail::fill_node_derived(p);
  return p;
}

/// Replace the endogenous-noise drivers by independently simulated ones
/// (values at the current nodes; linear interpolation under refinement).
inline void set_endogenous_drivers(LatentPath& p, std::vector<double> ex, std::vector<double> ey) {
  require(ex.size() == p.size() && ey.size() == p.size(),
          "set_endogenous_drivers: size mismatch");
  p.endo_x = std::move(ex);
  p.endo_y = std::move(ey);
  p.external_endo = true;
}

/// Σ (ΔM)² over nodes, the realized counterpart of qv_x.
inline std::vector<double> realized_qv(const std::vector<double>& m) {
  std::vector<double> out(m.size(), 0.0);
  for (std::size_t i = 1; i < m.size(); ++i) {
    double d = m[i] - m[i - 1];
    out[i] = out[i - 1] + d * d;
  }
  return out;
}

/// Node inserted strictly inside step `step` of a source path.
struct SubNode {
  std::size_t step = 0;
  double t = 0.0;
  double wx = 0.0;
  double wy = 0.0;
};

/// Draw (W^X, W^Y) at time m from the Brownian bridge between (ta, wa) and (tb, wb).
template <class Engine>
SubNode bridge_point(const SubNode& a, const SubNode& b, double m, double corr, Engine& eng) {
  std::normal_distribution<double> nd;
  const double len = b.t - a.t;
  const double frac = (m - a.t) / len;
  const double sd = std::sqrt(std::max(0.0, (m - a.t) * (b.t - m) / len));
  const double z1 = nd(eng);
  const double z2 = nd(eng);
  const double rc = std::sqrt(std::max(0.0, 1.0 - corr * corr));
  SubNode c;
  c.step = a.step;
  c.t = m;
  c.wx = a.wx + frac * (b.wx - a.wx) + sd * z1;
  c.wy = a.wy + frac * (b.wy - a.wy) + sd * (corr * z1 + rc * z2);
  return c;
}

namespace detail {

inline double sub_x(const LatentPath& p, std::size_t i, double t, double wx) {
  return p.x[i] + (p.drift_x[i] * (t - p.t[i]) + p.vol_x[i] * (wx - p.wx[i]));
}
inline double sub_y(const LatentPath& p, std::size_t i, double t, double wy) {
  return p.y[i] + (p.drift_y[i] * (t - p.t[i]) + p.vol_y[i] * (wy - p.wy[i]));
}

}  // namespace detail

/// New path with `inserts` (sorted by time, each strictly inside its step)
/// added as nodes. Original nodes are copied unchanged.
inline LatentPath with_nodes(const LatentPath& src, const std::vector<SubNode>& inserts) {
  if (inserts.empty()) return src;
  LatentPath p;
  p.grid = src.grid;
  p.corr = src.corr;
  p.endo_factor_x = src.endo_factor_x;
  p.endo_factor_y = src.endo_factor_y;
  p.external_endo = src.external_endo;
  const std::size_t n = src.size() + inserts.size();
  for (auto* v : {&p.t, &p.x, &p.y, &p.ax, &p.ay, &p.mx, &p.my, &p.wx, &p.wy, &p.qv_x, &p.qv_y,
                  &p.qc_xy})
    v->reserve(n);
  for (auto* v : {&p.drift_x, &p.drift_y, &p.vol_x, &p.vol_y}) v->reserve(n);
  if (src.external_endo) {
    p.endo_x.reserve(n);
    p.endo_y.reserve(n);
  }
  auto push_node = [&](std::size_t i) {
    p.t.push_back(src.t[i]);
    p.x.push_back(src.x[i]);
    p.y.push_back(src.y[i]);
    p.ax.push_back(src.ax[i]);
    p.ay.push_back(src.ay[i]);
    p.mx.push_back(src.mx[i]);
    p.my.push_back(src.my[i]);
    p.wx.push_back(src.wx[i]);
    p.wy.push_back(src.wy[i]);
    p.qv_x.push_back(src.qv_x[i]);
    p.qv_y.push_back(src.qv_y[i]);
    p.qc_xy.push_back(src.qc_xy[i]);
    if (src.external_endo) {
      p.endo_x.push_back(src.endo_x[i]);
      p.endo_y.push_back(src.endo_y[i]);
    }
  };
  auto push_step = [&](std::size_t i) {
    p.drift_x.push_back(src.drift_x[i]);
    p.drift_y.push_back(src.drift_y[i]);
    p.vol_x.push_back(src.vol_x[i]);
    p.vol_y.push_back(src.vol_y[i]);
  };
  std::size_t k = 0;
  for (std::size_t i = 0; i < src.size(); ++i) {
    push_node(i);
    if (i + 1 == src.size()) break;
    push_step(i);
    for (; k < inserts.size() && inserts[k].step == i; ++k) {
      const SubNode& s = inserts[k];
      const double dtl = s.t - src.t[i];
      p.t.push_back(s.t);
      p.x.push_back(detail::sub_x(src, i, s.t, s.wx));
      p.y.push_back(detail::sub_y(src, i, s.t, s.wy));
      p.ax.push_back(src.ax[i] + src.drift_x[i] * dtl);
      p.ay.push_back(src.ay[i] + src.drift_y[i] * dtl);
      p.mx.push_back(src.mx[i] + src.vol_x[i] * (s.wx - src.wx[i]));
      p.my.push_back(src.my[i] + src.vol_y[i] * (s.wy - src.wy[i]));
      p.wx.push_back(s.wx);
      p.wy.push_back(s.wy);
      p.qv_x.push_back(src.qv_x[i] + src.vol_x[i] * src.vol_x[i] * dtl);
      p.qv_y.push_back(src.qv_y[i] + src.vol_y[i] * src.vol_y[i] * dtl);
      p.qc_xy.push_back(src.qc_xy[i] + src.corr * src.vol_x[i] * src.vol_y[i] * dtl);
      if (src.external_endo) {
        const double f = dtl / (src.t[i + 1] - src.t[i]);
        p.endo_x.push_back(src.endo_x[i] + f * (src.endo_x[i + 1] - src.endo_x[i]));
        p.endo_y.push_back(src.endo_y[i] + f * (src.endo_y[i + 1] - src.endo_y[i]));
      }
      push_step(i);
    }
  }
  require(k == inserts.size(), "with_nodes: inserts not sorted or outside the path");
  detail::fill_node_derived(p);
  return p;
}

/// Add nodes at the given (sorted) times by Brownian-bridge interpolation of
/// the driving Wiener paths. Times already present are skipped.
inline LatentPath refine(const LatentPath& src, const std::vector<double>& times, RngSeed seed) {
  auto eng = seed.engine();
  std::vector<SubNode> inserts;
  std::size_t i = 0;
  SubNode left{}, right{};
  std::size_t cur_step = LatentPath::npos;
  for (double tau : times) {
    require(tau >= src.t.front() && tau <= src.t.back(), "refine: time outside the path");
    while (i + 1 < src.size() && src.t[i + 1] <= tau) ++i;
    const double tol = LatentPath::node_tolerance(tau);
    if (tau - src.t[i] <= tol || (i + 1 < src.size() && src.t[i + 1] - tau <= tol)) continue;
    if (cur_step != i) {
      cur_step = i;
      left = SubNode{i, src.t[i], src.wx[i], src.wy[i]};
      right = SubNode{i, src.t[i + 1], src.wx[i + 1], src.wy[i + 1]};
    }
    if (tau <= left.t) continue;  // duplicate time
    SubNode c = bridge_point(left, right, tau, src.corr, eng);
    inserts.push_back(c);
    left = c;
  }
  return with_nodes(src, inserts);
}

/// CSV columns t, x, y, mx, my, qv_x, qv_y, qc_xy.
inline void write_path_csv(std::ostream& os, const LatentPath& p) {
  os.precision(17);
  os << "t,x,y,mx,my,qv_x,qv_y,qc_xy\n";
  for (std::size_t i = 0; i < p.size(); ++i)
    os << p.t[i] << ',' << p.x[i] << ',' << p.y[i] << ',' << p.mx[i] << ',' << p.my[i] << ','
       << p.qv_x[i] << ',' << p.qv_y[i] << ',' << p.qc_xy[i] << '\n';
}

}  // namespace hfcov
