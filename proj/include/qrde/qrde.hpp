#pragma once

// Quantile-respectful density estimation: a pseudo-histogram whose k bins each
// carry probability 1/k, with edges taken from a quantile estimator.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qrde/error.hpp"
#include "qrde/estimators.hpp"
#include "qrde/sample.hpp"

namespace qrde {

inline constexpr std::size_t kDefaultBins = 1000;

enum class DegenerateMode { strict, permissive };

/// Bins whose quantile edges (nearly) coincide, so that their height would
/// be unbounded. Bin numbers are 1-based, matching h_1..h_k.
struct DegenerateBinReport {
  static constexpr const char* kAdvice =
      "tied values make neighbouring quantile estimates coincide; jitter the sample "
      "using its measurement resolution (qrde jitter --resolution S) before building "
      "the density";

  std::vector<std::size_t> bins;
  std::string advice = kAdvice;

  std::string message() const {
    std::string out = "degenerate bin";
    out += bins.size() == 1 ? " " : "s ";
    for (std::size_t i = 0; i < bins.size(); ++i) {
      if (i > 0) out += ", ";
      if (i == 8 && bins.size() > 10) {
        out += "... (" + std::to_string(bins.size()) + " in total)";
        break;
      }
      out += std::to_string(bins[i]);
    }
    return out + ": " + advice;
  }
};

/// Piecewise-constant density with k bins of probability xi = 1/k each.
///
/// Bin i (0-based) spans [edges[i], edges[i+1]] and has height
/// xi / (edges[i+1] - edges[i]). Bins with a gap at or below
/// 1e-12 * max(1, edges[k] - edges[0]) are degenerate and carry an infinite
/// height; evaluation functions refuse such histograms.
class PseudoHistogram {
public:
  static constexpr double kUnbounded = std::numeric_limits<double>::infinity();

  /// Builds a histogram from k+1 finite quantile edges.
  static PseudoHistogram from_edges(std::vector<double> edges) {
    if (edges.size() < 2) {
      throw DomainError("a pseudo-histogram needs at least two edges");
    }
    for (double e : edges) {
      if (!std::isfinite(e)) {
        throw NumericalError("quantile estimator produced a non-finite edge");
      }
    }
    return PseudoHistogram(std::move(edges));
  }

  std::size_t bins() const noexcept { return heights_.size(); }
  double step() const noexcept { return 1.0 / static_cast<double>(bins()); }
  std::span<const double> edges() const noexcept { return edges_; }
  std::span<const double> heights() const noexcept { return heights_; }

  /// 1-based numbers of degenerate bins, empty when the histogram is proper.
  std::span<const std::size_t> degenerate_bins() const noexcept { return degenerate_; }
  bool degenerate() const noexcept { return !degenerate_.empty(); }

  double gap(std::size_t bin) const noexcept {
    return std::max(0.0, edges_[bin + 1] - edges_[bin]);
  }

  /// Sum of height * width over all bins.
  double mass() const noexcept {
    double total = 0.0;
    for (std::size_t i = 0; i < bins(); ++i) total += heights_[i] * gap(i);
    return total;
  }

  /// Grid probability p_edge = edge / k.
  double probability_at_edge(std::size_t edge) const noexcept {
    return static_cast<double>(edge) / static_cast<double>(bins());
  }

private:
  explicit PseudoHistogram(std::vector<double> edges) : edges_(std::move(edges)) {
    const std::size_t k = edges_.size() - 1;
    const double xi = 1.0 / static_cast<double>(k);
    const double threshold = 1e-12 * std::max(1.0, std::abs(edges_.back() - edges_.front()));
    heights_.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
      const double width = gap(i);
      if (width <= threshold) {
        heights_[i] = kUnbounded;
        degenerate_.push_back(i + 1);
      } else {
        heights_[i] = xi / width;
      }
    }
  }

  std::vector<double> edges_;
  std::vector<double> heights_;
  std::vector<std::size_t> degenerate_;
};

using QrdeResult = std::variant<PseudoHistogram, DegenerateBinReport>;

/// Evaluates `estimator` at p_i = i/k for i = 0..k and forms the
/// pseudo-histogram. In strict mode a histogram with degenerate bins is
/// replaced by the report naming them.
template <QuantileEstimator E>
QrdeResult build_qrde(const Sample& sample, const E& estimator, std::size_t k = kDefaultBins,
                      DegenerateMode mode = DegenerateMode::strict) {
  if (k == 0) {
    throw DomainError("build_qrde: bin count must be positive");
  }
  std::vector<double> edges(k + 1);
  const auto dk = static_cast<double>(k);
  for (std::size_t i = 0; i <= k; ++i) {
    edges[i] = estimator(sample, static_cast<double>(i) / dk);
  }
  auto histogram = PseudoHistogram::from_edges(std::move(edges));
  if (histogram.degenerate() && mode == DegenerateMode::strict) {
    const auto bad = histogram.degenerate_bins();
    return DegenerateBinReport{{bad.begin(), bad.end()}};
  }
  return histogram;
}

namespace detail {

inline void require_proper(const PseudoHistogram& ph) {
  if (ph.degenerate()) {
    throw UsageError("histogram has degenerate bins; jitter the sample first");
  }
}

/// Index of the bin containing x, for edges[0] <= x < edges[k].
inline std::size_t bin_of(const PseudoHistogram& ph, double x) {
  const auto edges = ph.edges();
  const auto it = std::upper_bound(edges.begin(), edges.end(), x);
  const auto bin = static_cast<std::size_t>(it - edges.begin()) - 1;
  return std::min(bin, ph.bins() - 1);
}

}  // namespace detail

/// Height of the bin whose half-open interval contains x; the last edge
/// belongs to the last bin; zero outside the support.
inline double density_at(const PseudoHistogram& ph, double x) {
  detail::require_proper(ph);
  const auto edges = ph.edges();
  if (x < edges.front() || x > edges.back()) return 0.0;
  if (x == edges.back()) return ph.heights().back();
  return ph.heights()[detail::bin_of(ph, x)];
}

/// Piecewise-linear CDF implied by the piecewise-constant density.
inline double cdf_at(const PseudoHistogram& ph, double x) {
  detail::require_proper(ph);
  const auto edges = ph.edges();
  if (x <= edges.front()) return 0.0;
  if (x >= edges.back()) return 1.0;
  const std::size_t bin = detail::bin_of(ph, x);
  const double within = (x - edges[bin]) / ph.gap(bin);
  return std::min(1.0, (static_cast<double>(bin) + within) / static_cast<double>(ph.bins()));
}

/// Inverse of cdf_at. Grid probabilities i/k map exactly onto edges[i].
inline double quantile_of_qrde(const PseudoHistogram& ph, double p) {
  detail::require_proper(ph);
  detail::check_probability(p);
  const std::size_t k = ph.bins();
  const auto dk = static_cast<double>(k);
  const auto edges = ph.edges();
  const double scaled = p * dk;
  const auto nearest = static_cast<std::size_t>(std::llround(scaled));
  if (nearest <= k && ph.probability_at_edge(nearest) == p) {
    return edges[nearest];
  }
  const auto bin = std::min(k - 1, static_cast<std::size_t>(std::floor(scaled)));
  const double within = std::clamp(scaled - static_cast<double>(bin), 0.0, 1.0);
  return edges[bin] + within * (edges[bin + 1] - edges[bin]);
}

}  // namespace qrde
