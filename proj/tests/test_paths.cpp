#include <gtest/gtest.h>

#include <sstream>

#include "hfcov/hfcov.hpp"

using namespace hfcov;

namespace {

TimeGrid grid(std::size_t n, double t1 = 1.0) {
  TimeGrid g;
  g.t1 = t1;
  g.n_fine = n;
  return g;
}

ModelConfig bridge_model(double sigma = 0.02, double x1 = 0.01) {
  ModelConfig m;
  m.sigma = sigma;
  m.x1 = x1;
  return m;
}

}  // namespace

TEST(Wiener, SingleStep) {
  auto w = simulate_wiener(grid(1), 0.0, RngSeed{7, 0});
  ASSERT_EQ(w.wx.size(), 2u);
  EXPECT_EQ(w.wx[0], 0.0);
  EXPECT_EQ(w.wy[0], 0.0);
  EXPECT_NE(w.wx[1], w.wy[1]);
}

TEST(Wiener, PerfectCorrelation) {
  auto w = simulate_wiener(grid(500), 1.0, RngSeed{7, 3});
  for (std::size_t i = 0; i < w.wx.size(); ++i) EXPECT_NEAR(w.wx[i], w.wy[i], 1e-15);
}

TEST(Wiener, InvalidCorrelation) {
  EXPECT_THROW(simulate_wiener(grid(10), 1.5, RngSeed{}), ParameterError);
}

TEST(Wiener, TerminalSecondMoment) {
  double acc = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    auto w = simulate_wiener(grid(4), 0.0, RngSeed{11, static_cast<std::uint64_t>(i)});
    acc += w.wx.back() * w.wx.back();
  }
  EXPECT_NEAR(acc / n, 1.0, 0.05);
}

TEST(Wiener, EmpiricalCorrelation) {
  auto w = simulate_wiener(grid(200000), 0.6, RngSeed{5, 1});
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 1; i < w.wx.size(); ++i) {
    double a = w.wx[i] - w.wx[i - 1], b = w.wy[i] - w.wy[i - 1];
    sxy += a * b;
    sxx += a * a;
    syy += b * b;
  }
  EXPECT_NEAR(sxy / std::sqrt(sxx * syy), 0.6, 0.01);
}

TEST(Bridge, PinnedEndpointAndExactQv) {
  auto p = simulate_bridge(grid(3600), bridge_model(), RngSeed{1, 2});
  EXPECT_EQ(p.x.front(), 0.0);
  EXPECT_EQ(p.y.front(), 0.0);
  EXPECT_EQ(p.x.back(), 0.01);
  EXPECT_NEAR(p.qv_x.back(), 4e-4, 1e-15);
  for (double s : p.spot_x) EXPECT_NEAR(s, 4e-4, 1e-18);
}

TEST(Bridge, SymmetricEndpointMean) {
  double acc = 0.0;
  const int n = 1000;
  for (int i = 0; i < n; ++i) {
    auto p = simulate_bridge(grid(50), bridge_model(0.02, 0.0), RngSeed{3, static_cast<std::uint64_t>(i)});
    acc += p.x[25];
  }
  // X(1/2) of a bridge from 0 to 0 has sd σ/2.
  EXPECT_NEAR(acc / n, 0.0, 3.0 * 0.01 / std::sqrt(n));
}

TEST(Bridge, MidpointVariance) {
  double acc = 0.0, acc2 = 0.0;
  const int n = 4000;
  for (int i = 0; i < n; ++i) {
    auto p = simulate_bridge(grid(100), bridge_model(), RngSeed{4, static_cast<std::uint64_t>(i)});
    acc += p.x[50];
    acc2 += p.x[50] * p.x[50];
  }
  const double mean = acc / n;
  const double var = acc2 / n - mean * mean;
  // Bridge at t = 1/2: mean x1/2, variance σ²/4.
  EXPECT_NEAR(mean, 0.005, 3.0 * 0.01 / std::sqrt(n));
  EXPECT_NEAR(var / 1e-4, 1.0, 0.08);
}

TEST(Bridge, DecompositionBookkeeping) {
  auto p = simulate_bridge(grid(2000), bridge_model(), RngSeed{9, 9});
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_NEAR(p.x[i] - p.ax[i] - p.mx[i], 0.0, 1e-15);
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_NEAR(p.mx[i], 0.02 * p.wx[i], 1e-15);
}

TEST(Bridge, RealizedQvNearExact) {
  auto p = simulate_bridge(grid(36000), bridge_model(), RngSeed{1, 1});
  auto rq = realized_qv(p.mx);
  EXPECT_NEAR(rq.back() / p.qv_x.back(), 1.0, 0.03);
  for (std::size_t i = 1; i < p.size(); ++i) ASSERT_GE(p.qv_x[i], p.qv_x[i - 1]);
}

TEST(Ito, ConstantCoefficientsReduceToWiener) {
  auto g = grid(1000);
  auto zero = [](double, Vec2) { return Vec2{}; };
  auto p = simulate_ito(g, zero, constant_vol(0.3), 0.2, RngSeed{2, 5});
  auto w = simulate_wiener(g, 0.2, RngSeed{2, 5});
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_NEAR(p.x[i], 0.3 * w.wx[i], 1e-15);
    EXPECT_NEAR(p.y[i], 0.3 * w.wy[i], 1e-15);
  }
}

TEST(Ito, BridgeDriftMatchesBridgeBeforeLastStep) {
  auto g = grid(1000);
  auto p = simulate_ito(g, bridge_drift(0.01, 1.0), constant_vol(0.02), 0.0, RngSeed{8, 1});
  auto b = simulate_bridge(g, bridge_model(), RngSeed{8, 1});
  for (std::size_t i = 0; i + 1 < p.size(); ++i) EXPECT_EQ(p.x[i], b.x[i]);
}

TEST(Ito, PiecewiseVolatilityQv) {
  const double s = 0.02;
  auto vol = [s](double t, Vec2) { return t < 0.5 ? Vec2{s, s} : Vec2{2 * s, 2 * s}; };
  auto zero = [](double, Vec2) { return Vec2{}; };
  auto p = simulate_ito(grid(1000), zero, vol, 0.0, RngSeed{1, 0});
  EXPECT_NEAR(p.qv_x.back(), 2.5 * s * s, 1e-15);
}

TEST(Ito, NonFiniteCoefficientReportsStep) {
  auto bad = [](double t, Vec2) { return Vec2{t > 0.5 ? NAN : 0.0, 0.0}; };
  try {
    simulate_ito(grid(10), bad, constant_vol(1.0), 0.0, RngSeed{});
    FAIL();
  } catch (const SimulationError& e) {
    EXPECT_NE(std::string(e.what()).find("6"), std::string::npos);
  }
}

TEST(Paths, StrongOrderUnderRefinement) {
  // Coarse path driven by the pairwise sums of the fine increments.
  const double s = 0.02;
  auto drift = [](double, Vec2 x) { return Vec2{-2.0 * x.x, -2.0 * x.y}; };
  auto vol = [s](double, Vec2 x) { return Vec2{s * (1.0 + 10.0 * std::abs(x.x)), s}; };
  double err_coarse = 0.0, err_fine = 0.0;
  for (int r = 0; r < 100; ++r) {
    auto g4 = grid(4000), g2 = grid(2000), g1 = grid(1000);
    auto w4 = simulate_wiener(g4, 0.0, RngSeed{21, static_cast<std::uint64_t>(r)});
    auto thin = [](const WienerPair& w, std::size_t f) {
      WienerPair o;
      for (std::size_t i = 0; i < w.wx.size(); i += f) {
        o.wx.push_back(w.wx[i]);
        o.wy.push_back(w.wy[i]);
      }
      return o;
    };
    auto p4 = simulate_ito_on(g4, w4, drift, vol, 0.0);
    auto p2 = simulate_ito_on(g2, thin(w4, 2), drift, vol, 0.0);
    auto p1 = simulate_ito_on(g1, thin(w4, 4), drift, vol, 0.0);
    err_fine += std::pow(p2.x.back() - p4.x.back(), 2);
    err_coarse += std::pow(p1.x.back() - p4.x.back(), 2);
  }
  EXPECT_LT(err_fine, err_coarse);
}

TEST(Paths, Deterministic) {
  auto a = simulate_bridge(grid(1000), bridge_model(), RngSeed{42, 17});
  auto b = simulate_bridge(grid(1000), bridge_model(), RngSeed{42, 17});
  auto c = simulate_bridge(grid(1000), bridge_model(), RngSeed{42, 18});
  EXPECT_EQ(a.x, b.x);
  EXPECT_NE(a.x, c.x);
}

TEST(Paths, RefineKeepsNodesAndBookkeeping) {
  auto p = simulate_bridge(grid(100), bridge_model(), RngSeed{3, 3});
  auto q = refine(p, {0.0015, 0.0017, 0.5, 0.73333}, RngSeed{3, 4});
  EXPECT_EQ(q.size(), p.size() + 3);
  for (std::size_t i = 0; i < p.size(); ++i) {
    auto k = q.node_index(p.t[i]);
    ASSERT_NE(k, LatentPath::npos);
    EXPECT_EQ(q.x[k], p.x[i]);
  }
  for (std::size_t i = 0; i < q.size(); ++i) EXPECT_NEAR(q.x[i] - q.ax[i] - q.mx[i], 0.0, 1e-15);
  EXPECT_NE(q.node_index(0.73333), LatentPath::npos);
}

TEST(Paths, CsvHeader) {
  auto p = simulate_bridge(grid(4), bridge_model(), RngSeed{});
  std::ostringstream os;
  write_path_csv(os, p);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "t,x,y,mx,my,qv_x,qv_y,qc_xy");
}

TEST(Paths, CauchySchwarzOnCovariation) {
  ModelConfig m = bridge_model();
  m.corr = 0.7;
  auto p = simulate_bridge(grid(200), m, RngSeed{1, 1});
  for (std::size_t i = 0; i < p.size(); ++i)
    EXPECT_LE(p.qc_xy[i] * p.qc_xy[i], p.qv_x[i] * p.qv_y[i] * (1.0 + 1e-12));
}
