#pragma once

#include <functional>
#include <string>
#include <vector>

namespace hfcov {

enum class WeightTag { min_xx, quartic_f, custom };

/// Weight function on [0,1], extended by zero outside.
struct WeightFn {
  std::function<double(double)> g;
  std::function<double(double)> g_prime;
  WeightTag tag = WeightTag::custom;
  std::string name = "custom";
  /// Interior points where g' jumps; quadrature splits there.
  std::vector<double> kinks;

  double operator()(double x) const { return g(x); }
};

/// g(x) = x ∧ (1 − x).
inline WeightFn min_xx() {
  WeightFn w;
  w.g = [](double x) { return (x <= 0.0 || x >= 1.0) ? 0.0 : (x < 0.5 ? x : 1.0 - x); };
  w.g_prime = [](double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return x < 0.5 ? 1.0 : -1.0;
  };
  w.tag = WeightTag::min_xx;
  w.name = "min_xx";
  w.kinks = {0.5};
  return w;
}

/// f(x) = x²(1 − x)², used by the Ξ[f] statistic.
inline WeightFn quartic_f() {
  WeightFn w;
  w.g = [](double x) { return (x <= 0.0 || x >= 1.0) ? 0.0 : x * x * (1.0 - x) * (1.0 - x); };
  w.g_prime = [](double x) {
    return (x <= 0.0 || x >= 1.0) ? 0.0 : 2.0 * x * (1.0 - x) * (1.0 - 2.0 * x);
  };
  w.tag = WeightTag::quartic_f;
  w.name = "quartic_f";
  return w;
}

/// The derivative of `w` wrapped as a weight in its own right (kinks inherited).
inline WeightFn derivative_of(const WeightFn& w) {
  WeightFn d;
  d.g = w.g_prime;
  d.g_prime = [](double) { return 0.0; };
  d.tag = WeightTag::custom;
  d.name = w.name + "'";
  d.kinks = w.kinks;
  return d;
}

inline WeightFn weight_by_name(const std::string& name) {
  if (name == "min_xx") return min_xx();
  if (name == "quartic_f") return quartic_f();
  throw std::invalid_argument("unknown weight '" + name + "' (valid: min_xx, quartic_f)");
}

}  // namespace hfcov
