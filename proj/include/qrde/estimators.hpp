#pragma once

// Quantile estimators: Harrell-Davis (HD), trimmed Harrell-Davis (THD) and
// Hyndman-Fan type 7 (HF7).

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "qrde/error.hpp"
#include "qrde/sample.hpp"
#include "qrde/special.hpp"

namespace qrde {

template <typename E>
concept QuantileEstimator = requires(const E& estimator, const Sample& sample, double p) {
  { estimator(sample, p) } -> std::convertible_to<double>;
};

/// HD weights for one (n, p) pair: weights[i] applies to the (i+1)-th order
/// statistic.
struct HDWeightVector {
  std::size_t n = 0;
  double p = 0.0;
  std::vector<double> weights;
};

/// Width of the retained highest-density interval of the Beta distribution on
/// the unit probability axis. D = 1 means no trimming.
class TrimWidth {
public:
  explicit TrimWidth(double width) : width_(width) {
    if (!(width > 0.0 && width <= 1.0)) {
      throw DomainError("trim width must lie in (0, 1], got " + std::to_string(width));
    }
  }

  /// D = 1 / sqrt(n).
  static TrimWidth rule_of_thumb(std::size_t n) {
    return TrimWidth(1.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(n, 1))));
  }

  double value() const noexcept { return width_; }

private:
  double width_;
};

namespace detail {

inline void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("probability must lie in [0, 1], got " + std::to_string(p));
  }
}

/// Beta(α, β) CDF evaluated at clamp(i/n, lo, hi) for i = 0..n.
///
/// Starts near the bulk of the distribution and walks outwards; once the CDF
/// reaches exactly 0 (or 1) the remaining grid points are filled without
/// further evaluation.
inline std::vector<double> beta_cdf_on_grid(std::size_t n, const BetaParams& params,
                                            double lo = 0.0, double hi = 1.0) {
  const double dn = static_cast<double>(n);
  const double cdf_lo = reg_inc_beta(lo, params);
  const double cdf_hi = reg_inc_beta(hi, params);
  auto at = [&](std::size_t i) {
    const double t = static_cast<double>(i) / dn;
    if (t <= lo) return cdf_lo;
    if (t >= hi) return cdf_hi;
    return reg_inc_beta(t, params);
  };

  std::vector<double> cdf(n + 1);
  const double mean = params.alpha() / (params.alpha() + params.beta());
  const auto start = static_cast<std::size_t>(
      std::clamp(std::round(std::clamp(mean, lo, hi) * dn), 0.0, dn));

  std::size_t i = start;
  while (true) {
    cdf[i] = at(i);
    if (cdf[i] == 0.0 || i == 0) break;
    --i;
  }
  std::fill(cdf.begin(), cdf.begin() + static_cast<std::ptrdiff_t>(i), 0.0);

  for (i = start + 1; i <= n; ++i) {
    cdf[i] = at(i);
    if (cdf[i] == 1.0) {
      std::fill(cdf.begin() + static_cast<std::ptrdiff_t>(i), cdf.end(), 1.0);
      break;
    }
  }
  return cdf;
}

inline std::vector<double> increments(const std::vector<double>& cdf, double scale) {
  std::vector<double> out(cdf.size() - 1);
  for (std::size_t i = 0; i + 1 < cdf.size(); ++i) {
    out[i] = std::max(0.0, cdf[i + 1] - cdf[i]) / scale;
  }
  return out;
}

inline std::vector<double> point_mass(std::size_t n, double p) {
  std::vector<double> out(n, 0.0);
  out[p == 0.0 ? 0 : n - 1] = 1.0;
  return out;
}

inline double weighted_sum(const Sample& sample, std::span<const double> weights) {
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] != 0.0) acc += weights[i] * sample[i];
  }
  return std::clamp(acc, sample.min(), sample.max());
}

}  // namespace detail

/// W_i = I_{i/n}(α, β) − I_{(i−1)/n}(α, β) with α = (n+1)p, β = (n+1)(1−p).
/// p = 0 and p = 1 give the point-mass limits (1, 0, ..., 0) and (0, ..., 0, 1).
inline HDWeightVector hd_weights(std::size_t n, double p) {
  if (n == 0) throw DomainError("hd_weights: n must be positive");
  detail::check_probability(p);
  HDWeightVector out{n, p, {}};
  if (p == 0.0 || p == 1.0) {
    out.weights = detail::point_mass(n, p);
    return out;
  }
  const double np1 = static_cast<double>(n) + 1.0;
  const BetaParams params(np1 * p, np1 * (1.0 - p));
  out.weights = detail::increments(detail::beta_cdf_on_grid(n, params), 1.0);
  return out;
}

/// Harrell-Davis quantile estimate: sum of W_i * x_(i).
inline double hd_quantile(const Sample& sample, double p) {
  const auto w = hd_weights(sample.size(), p);
  return detail::weighted_sum(sample, w.weights);
}

/// Left end L of the width-D window [L, L + D] that carries the largest
/// Beta(α, β) probability, by ternary search (tolerance 1e-9). The window of
/// a unimodal density contains the mode, which brackets the search.
inline double highest_density_window(const BetaParams& params, double width) {
  const double a = params.alpha();
  const double b = params.beta();
  if (a <= 1.0 && b > 1.0) return 0.0;
  if (b <= 1.0 && a > 1.0) return 1.0 - width;
  double lo = 0.0;
  double hi = 1.0 - width;
  if (a > 1.0 && b > 1.0) {
    const double mode = (a - 1.0) / (a + b - 2.0);
    lo = std::clamp(mode - width, 0.0, 1.0 - width);
    hi = std::clamp(mode, 0.0, 1.0 - width);
  }
  auto mass = [&](double left) {
    return reg_inc_beta(std::min(1.0, left + width), params) - reg_inc_beta(left, params);
  };
  while (hi - lo > 1e-9) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (mass(m1) < mass(m2)) {
      lo = m1;
    } else {
      hi = m2;
    }
  }
  return 0.5 * (lo + hi);
}

/// Trimmed Harrell-Davis weights: the Beta(α, β) distribution restricted to
/// its highest-density window of width D and renormalized.
inline std::vector<double> thd_weights(std::size_t n, double p, TrimWidth trim) {
  if (n == 0) throw DomainError("thd_weights: n must be positive");
  detail::check_probability(p);
  if (trim.value() >= 1.0) {
    return hd_weights(n, p).weights;
  }
  if (p == 0.0 || p == 1.0) {
    return detail::point_mass(n, p);
  }
  const double np1 = static_cast<double>(n) + 1.0;
  const BetaParams params(np1 * p, np1 * (1.0 - p));
  const double left = highest_density_window(params, trim.value());
  const double right = std::min(1.0, left + trim.value());
  const auto cdf = detail::beta_cdf_on_grid(n, params, left, right);
  const double mass = cdf.back() - cdf.front();
  if (!(mass > 0.0)) {
    throw NumericalError("trimmed window carries no probability mass");
  }
  return detail::increments(cdf, mass);
}

inline double thd_quantile(const Sample& sample, double p, TrimWidth trim) {
  if (trim.value() >= 1.0) {
    return hd_quantile(sample, p);
  }
  const auto w = thd_weights(sample.size(), p, trim);
  return detail::weighted_sum(sample, w);
}

/// Hyndman-Fan type 7: linear interpolation between order statistics at
/// h = (n − 1)p + 1.
inline double hf7_quantile(const Sample& sample, double p) {
  detail::check_probability(p);
  const std::size_t n = sample.size();
  const double h = static_cast<double>(n - 1) * p;  // 0-based position
  const double floor_h = std::floor(h);
  const auto lo = static_cast<std::size_t>(floor_h);
  const double frac = h - floor_h;
  if (frac == 0.0 || lo + 1 >= n) {
    return sample[std::min(lo, n - 1)];
  }
  const double a = sample[lo];
  const double b = sample[lo + 1];
  return std::clamp(a + frac * (b - a), a, b);
}

struct HarrellDavis {
  static constexpr std::string_view name = "hd";
  double operator()(const Sample& sample, double p) const { return hd_quantile(sample, p); }
};

/// THD with a fixed width, or the 1/sqrt(n) rule of thumb when none is given.
struct TrimmedHarrellDavis {
  static constexpr std::string_view name = "thd";
  std::optional<TrimWidth> width;

  TrimWidth width_for(const Sample& sample) const {
    return width.value_or(TrimWidth::rule_of_thumb(sample.size()));
  }
  double operator()(const Sample& sample, double p) const {
    return thd_quantile(sample, p, width_for(sample));
  }
};

struct HyndmanFan7 {
  static constexpr std::string_view name = "hf7";
  double operator()(const Sample& sample, double p) const { return hf7_quantile(sample, p); }
};

/// Runtime-selected estimator.
class Estimator {
public:
  using Variant = std::variant<HarrellDavis, TrimmedHarrellDavis, HyndmanFan7>;

  Estimator() = default;
  Estimator(HarrellDavis e) : impl_(e) {}
  Estimator(TrimmedHarrellDavis e) : impl_(std::move(e)) {}
  Estimator(HyndmanFan7 e) : impl_(e) {}

  /// "hd", "thd" or "hf7".
  static Estimator from_name(std::string_view name, std::optional<TrimWidth> width = {}) {
    if (name == HarrellDavis::name) return HarrellDavis{};
    if (name == TrimmedHarrellDavis::name) return TrimmedHarrellDavis{width};
    if (name == HyndmanFan7::name) return HyndmanFan7{};
    throw DomainError("unknown estimator '" + std::string(name) + "'");
  }

  double operator()(const Sample& sample, double p) const {
    return std::visit([&](const auto& e) { return e(sample, p); }, impl_);
  }

  std::string_view name() const {
    return std::visit([](const auto& e) { return std::remove_cvref_t<decltype(e)>::name; }, impl_);
  }

  const Variant& variant() const noexcept { return impl_; }

private:
  Variant impl_;
};

/// Evaluates `estimator` at each probability; `ps` must be sorted.
template <QuantileEstimator E>
std::vector<double> quantile_curve(const Sample& sample, const E& estimator,
                                   std::span<const double> ps) {
  for (std::size_t i = 0; i < ps.size(); ++i) {
    detail::check_probability(ps[i]);
    if (i > 0 && ps[i] < ps[i - 1]) {
      throw DomainError("quantile_curve: probabilities must be sorted");
    }
  }
  std::vector<double> out;
  out.reserve(ps.size());
  for (double p : ps) out.push_back(estimator(sample, p));
  return out;
}

}  // namespace qrde
