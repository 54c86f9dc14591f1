#pragma once

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "selfsim/error.hpp"

namespace selfsim {

/// Shortest round-trip decimal form of a double.
inline std::string format_real(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return ec == std::errc() ? std::string(buf, end) : std::to_string(x);
}

/// Twelve significant digits, for solver output whose last bits are noise.
inline std::string format_measured(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

enum class GrowthModel { Constant, Logarithmic, Linear };

inline std::string to_string(GrowthModel m) {
  switch (m) {
    case GrowthModel::Constant: return "constant";
    case GrowthModel::Logarithmic: return "log";
    case GrowthModel::Linear: return "linear";
  }
  return "?";
}

/// Thresholds of the growth-model fit.
struct GrowthFitConfig {
  /// Fraction of the sequence (its tail) used for the least-squares fits.
  double tail_fraction = 0.5;
  /// A sequence whose local log-slope decays like x^beta with beta below this is bounded.
  double bounded_exponent = -0.5;
  /// Fewer points than this give no verdict.
  std::size_t min_points = 4;
};

/// Least-squares fits y = a + b phi(x) for phi in {0, ln x, x}, plus the decay exponent of
/// the local slope dy / d(ln x), which separates convergent from divergent sequences.
struct GrowthFit {
  bool enough_data = false;
  bool bounded = false;
  GrowthModel model = GrowthModel::Constant;
  double intercept = 0.0;
  double slope = 0.0;
  double rss_constant = 0.0;
  double rss_log = 0.0;
  double rss_linear = 0.0;
  double slope_exponent = 0.0;
  double last_value = 0.0;
};

namespace detail {

struct LineFit {
  double a = 0, b = 0, rss = 0;
};

inline LineFit least_squares(const std::vector<double>& t, const std::vector<double>& y) {
  const double n = static_cast<double>(t.size());
  double st = 0, sy = 0, stt = 0, sty = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    st += t[i];
    sy += y[i];
    stt += t[i] * t[i];
    sty += t[i] * y[i];
  }
  LineFit f;
  double den = n * stt - st * st;
  f.b = den != 0.0 ? (n * sty - st * sy) / den : 0.0;
  f.a = (sy - f.b * st) / n;
  for (std::size_t i = 0; i < t.size(); ++i) {
    double r = y[i] - (f.a + f.b * t[i]);
    f.rss += r * r;
  }
  return f;
}

}  // namespace detail

/// `x` must be positive and increasing.
inline GrowthFit fit_growth(const std::vector<double>& x, const std::vector<double>& y,
                            const GrowthFitConfig& cfg = {}) {
  if (x.size() != y.size()) throw Error("growth fit needs matching sequences");
  GrowthFit fit;
  if (!y.empty()) fit.last_value = y.back();
  if (x.size() < cfg.min_points) return fit;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!(x[i] > 0.0) || (i > 0 && !(x[i] > x[i - 1]))) throw Error("growth fit needs increasing positive x");
  fit.enough_data = true;

  std::size_t keep = std::max(cfg.min_points, static_cast<std::size_t>(std::ceil(cfg.tail_fraction * x.size())));
  keep = std::min(keep, x.size());
  std::vector<double> tx(x.end() - static_cast<long>(keep), x.end());
  std::vector<double> ty(y.end() - static_cast<long>(keep), y.end());

  std::vector<double> zero(keep, 0.0), logs(keep);
  for (std::size_t i = 0; i < keep; ++i) logs[i] = std::log(tx[i]);
  auto c = detail::least_squares(zero, ty);
  auto l = detail::least_squares(logs, ty);
  auto p = detail::least_squares(tx, ty);
  fit.rss_constant = c.rss;
  fit.rss_log = l.rss;
  fit.rss_linear = p.rss;

  // local slopes at the middle and the end of the tail
  auto local = [&](std::size_t i) { return (y[i] - y[i - 1]) / (std::log(x[i]) - std::log(x[i - 1])); };
  std::size_t last = x.size() - 1;
  std::size_t mid = std::clamp<std::size_t>(x.size() - keep / 2 - 1, 1, last - 1);
  double s_last = local(last), s_mid = local(mid);
  if (s_last <= 0.0 || s_mid <= 0.0) {
    fit.bounded = true;
    fit.slope_exponent = -INFINITY;
  } else {
    fit.slope_exponent = std::log(s_last / s_mid) / std::log(x[last] / x[mid]);
    fit.bounded = fit.slope_exponent < cfg.bounded_exponent;
  }
  if (fit.bounded) {
    fit.model = GrowthModel::Constant;
    fit.intercept = c.a;
  } else if (l.rss <= p.rss) {
    fit.model = GrowthModel::Logarithmic;
    fit.intercept = l.a;
    fit.slope = l.b;
  } else {
    fit.model = GrowthModel::Linear;
    fit.intercept = p.a;
    fit.slope = p.b;
  }
  return fit;
}

}  // namespace selfsim
