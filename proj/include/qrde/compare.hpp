#pragma once

// QRDE-HD against the two classic density estimators (Gaussian KDE and the
// equal-width histogram) on a shared grid.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "qrde/error.hpp"
#include "qrde/estimators.hpp"
#include "qrde/qrde.hpp"
#include "qrde/sample.hpp"

namespace qrde {

/// Gaussian kernel density estimate.
class GaussianKde {
public:
  GaussianKde(const Sample& sample, double bandwidth)
      : points_(sample.begin(), sample.end()), bandwidth_(bandwidth) {
    if (!(std::isfinite(bandwidth) && bandwidth > 0.0)) {
      throw DomainError("KDE bandwidth must be positive and finite");
    }
  }

  /// 0.9 * min(sd, IQR / 1.34) * n^(-1/5); IQR from HF7 quartiles.
  static double silverman_bandwidth(const Sample& sample) {
    const auto n = static_cast<double>(sample.size());
    if (sample.size() < 2) {
      throw DomainError("Silverman's rule needs at least two observations");
    }
    double mean = 0.0;
    for (double x : sample) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : sample) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    const double iqr = hf7_quantile(sample, 0.75) - hf7_quantile(sample, 0.25);
    const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
    if (!(spread > 0.0)) {
      throw DomainError("Silverman's rule is undefined for a constant sample");
    }
    return 0.9 * spread * std::pow(n, -0.2);
  }

  double bandwidth() const noexcept { return bandwidth_; }

  double density(double x) const {
    constexpr double inv_sqrt_2pi = 0.398942280401432677939946059934;
    double acc = 0.0;
    for (double xi : points_) {
      const double z = (x - xi) / bandwidth_;
      acc += std::exp(-0.5 * z * z);
    }
    return acc * inv_sqrt_2pi / (bandwidth_ * static_cast<double>(points_.size()));
  }

  double cdf(double x) const {
    constexpr double inv_sqrt2 = 0.707106781186547524400844362105;
    double acc = 0.0;
    for (double xi : points_) {
      acc += 0.5 * std::erfc(-(x - xi) / bandwidth_ * inv_sqrt2);
    }
    return acc / static_cast<double>(points_.size());
  }

  /// Median of the KDE distribution by bisection on its CDF.
  double median() const {
    double lo = points_.front() - 10.0 * bandwidth_;
    double hi = points_.back() + 10.0 * bandwidth_;
    for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(lo) + std::abs(hi));
         ++it) {
      const double mid = 0.5 * (lo + hi);
      (cdf(mid) < 0.5 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

private:
  std::vector<double> points_;
  double bandwidth_;
};

/// Equal-width histogram over [min, max]; the last bin is closed.
class EqualWidthHistogram {
public:
  EqualWidthHistogram(const Sample& sample, std::size_t bins)
      : lo_(sample.min()), hi_(sample.max()), counts_(bins, 0), n_(sample.size()) {
    if (bins == 0) throw DomainError("histogram bin count must be positive");
    if (!(hi_ > lo_)) throw DomainError("equal-width histogram needs a non-zero range");
    for (double x : sample) ++counts_[bin_of(x)];
  }

  /// ceil(sqrt(n)).
  static std::size_t default_bins(std::size_t n) {
    return static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
  }

  std::size_t bins() const noexcept { return counts_.size(); }
  double width() const noexcept { return (hi_ - lo_) / static_cast<double>(bins()); }

  double density(double x) const {
    if (x < lo_ || x > hi_) return 0.0;
    return static_cast<double>(counts_[bin_of(x)]) / (static_cast<double>(n_) * width());
  }

  double cdf(double x) const {
    if (x <= lo_) return 0.0;
    if (x >= hi_) return 1.0;
    const std::size_t bin = bin_of(x);
    std::size_t below = 0;
    for (std::size_t i = 0; i < bin; ++i) below += counts_[i];
    const double left = lo_ + static_cast<double>(bin) * width();
    const double within = std::clamp((x - left) / width(), 0.0, 1.0);
    return (static_cast<double>(below) + within * static_cast<double>(counts_[bin])) /
           static_cast<double>(n_);
  }

  double median() const {
    const double target = 0.5 * static_cast<double>(n_);
    double below = 0.0;
    for (std::size_t i = 0; i < bins(); ++i) {
      const auto c = static_cast<double>(counts_[i]);
      if (c > 0.0 && below + c >= target) {
        return lo_ + (static_cast<double>(i) + (target - below) / c) * width();
      }
      below += c;
    }
    return hi_;
  }

private:
  std::size_t bin_of(double x) const {
    const double pos = (x - lo_) / (hi_ - lo_) * static_cast<double>(bins());
    return std::min(bins() - 1, static_cast<std::size_t>(std::max(0.0, std::floor(pos))));
  }

  double lo_;
  double hi_;
  std::vector<std::size_t> counts_;
  std::size_t n_;
};

struct ComparisonOptions {
  std::size_t qrde_bins = kDefaultBins;
  std::optional<double> bandwidth;      // Silverman's rule when empty
  std::optional<std::size_t> hist_bins;  // ceil(sqrt(n)) when empty
  std::size_t grid_points = 512;
};

/// Three density curves on one grid. Each curve value is the mean density
/// over the grid cell centred on x, so cell_width * sum(curve) equals the
/// curve's probability mass inside the grid range.
struct DensityComparison {
  std::vector<double> x;
  double cell_width = 0.0;
  std::vector<double> qrde;
  std::vector<double> kde;
  std::vector<double> histogram;

  double bandwidth = 0.0;
  std::size_t hist_bins = 0;

  double qrde_median = 0.0;  // Q_HD(0.5)
  double hf7_median = 0.0;
  double kde_median = 0.0;
  double histogram_median = 0.0;

  double median_divergence() const { return std::abs(hf7_median - kde_median); }
};

using ComparisonResult = std::variant<DensityComparison, DegenerateBinReport>;

inline ComparisonResult compare_estimates(const Sample& sample,
                                          const ComparisonOptions& options = {}) {
  if (sample.size() < 2) {
    throw DomainError("compare_estimates needs at least two observations");
  }
  if (options.grid_points == 0) {
    throw DomainError("comparison grid needs at least one point");
  }
  auto built = build_qrde(sample, HarrellDavis{}, options.qrde_bins);
  if (auto* report = std::get_if<DegenerateBinReport>(&built)) {
    return *report;
  }
  const auto& ph = std::get<PseudoHistogram>(built);

  DensityComparison out;
  out.bandwidth = options.bandwidth ? *options.bandwidth : GaussianKde::silverman_bandwidth(sample);
  out.hist_bins = options.hist_bins ? *options.hist_bins
                                    : EqualWidthHistogram::default_bins(sample.size());
  const GaussianKde kde(sample, out.bandwidth);
  const EqualWidthHistogram hist(sample, out.hist_bins);

  // Wide enough that the KDE tails beyond the grid hold < 1e-6 of its mass.
  const double lo = sample.min() - 5.0 * out.bandwidth;
  const double hi = sample.max() + 5.0 * out.bandwidth;
  const std::size_t m = options.grid_points;
  out.cell_width = (hi - lo) / static_cast<double>(m);
  out.x.resize(m);
  out.qrde.resize(m);
  out.kde.resize(m);
  out.histogram.resize(m);

  auto boundary = [&](std::size_t j) {
    return j == m ? hi : lo + static_cast<double>(j) * out.cell_width;
  };
  double qrde_prev = cdf_at(ph, boundary(0));
  double kde_prev = kde.cdf(boundary(0));
  double hist_prev = hist.cdf(boundary(0));
  for (std::size_t j = 0; j < m; ++j) {
    const double right = boundary(j + 1);
    const double width = right - boundary(j);
    out.x[j] = 0.5 * (boundary(j) + right);
    const double qrde_next = cdf_at(ph, right);
    const double kde_next = kde.cdf(right);
    const double hist_next = hist.cdf(right);
    out.qrde[j] = (qrde_next - qrde_prev) / width;
    out.kde[j] = std::max(0.0, kde_next - kde_prev) / width;
    out.histogram[j] = (hist_next - hist_prev) / width;
    qrde_prev = qrde_next;
    kde_prev = kde_next;
    hist_prev = hist_next;
  }

  out.qrde_median = hd_quantile(sample, 0.5);
  out.hf7_median = hf7_quantile(sample, 0.5);
  out.kde_median = kde.median();
  out.histogram_median = hist.median();
  return out;
}

}  // namespace qrde
