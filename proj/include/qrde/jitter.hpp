#pragma once

// Deterministic jittering of tied values. Ties are detected at the
// measurement resolution s and spread uniformly over at most s/2 in either
// direction, keeping the sample range intact unless every value is tied.

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "qrde/error.hpp"
#include "qrde/sample.hpp"

namespace qrde {

/// Measurement resolution s > 0, in sample units.
class Resolution {
public:
  explicit Resolution(double s) : s_(s) {
    if (!(std::isfinite(s) && s > 0.0)) {
      throw DomainError("resolution must be positive and finite, got " + std::to_string(s));
    }
  }
  double value() const noexcept { return s_; }

private:
  double s_;
};

/// Maximal run of tied order statistics, as 0-based inclusive indices into
/// the sorted sample.
struct TiedRun {
  std::size_t first = 0;
  std::size_t last = 0;

  std::size_t length() const noexcept { return last - first + 1; }
  bool operator==(const TiedRun&) const = default;
};

enum class RunPlacement {
  interior,      // neither end touches the sample boundary: s * (u - 1/2)
  at_minimum,    // starts at the minimum: s * u / 2, spreads to the right
  at_maximum,    // ends at the maximum: s * (u - 1) / 2, spreads to the left
  whole_sample,  // every value tied: s * (u - 1/2), the only case that widens the range
};

inline RunPlacement placement_of(const TiedRun& run, std::size_t n) {
  const bool touches_min = run.first == 0;
  const bool touches_max = run.last + 1 == n;
  if (touches_min && touches_max) return RunPlacement::whole_sample;
  if (touches_min) return RunPlacement::at_minimum;
  if (touches_max) return RunPlacement::at_maximum;
  return RunPlacement::interior;
}

/// Greedy left-to-right grouping: a run starting at i extends while
/// x[j+1] - x[i] < s/2. Runs of length one are not reported.
inline std::vector<TiedRun> detect_tied_runs(const Sample& sample, Resolution res) {
  const double half = res.value() / 2.0;
  const std::size_t n = sample.size();
  std::vector<TiedRun> runs;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && sample[j + 1] - sample[i] < half) ++j;
    if (j > i) runs.push_back({i, j});
    i = j + 1;
  }
  return runs;
}

/// Detected runs together with the per-element offsets they receive.
struct JitterPlan {
  std::vector<TiedRun> runs;
  std::vector<double> offsets;  // one per order statistic; zero outside runs
};

inline JitterPlan plan_jitter(const Sample& sample, Resolution res) {
  const double s = res.value();
  JitterPlan plan{detect_tied_runs(sample, res), std::vector<double>(sample.size(), 0.0)};
  for (const TiedRun& run : plan.runs) {
    const auto span = static_cast<double>(run.length() - 1);
    const RunPlacement where = placement_of(run, sample.size());
    for (std::size_t m = 0; m < run.length(); ++m) {
      const double u = static_cast<double>(m) / span;
      double offset = 0.0;
      switch (where) {
        case RunPlacement::interior:
        case RunPlacement::whole_sample:
          offset = s * (u - 0.5);
          break;
        case RunPlacement::at_minimum:
          offset = s * (u / 2.0);
          break;
        case RunPlacement::at_maximum:
          offset = s * (u - 1.0) / 2.0;
          break;
      }
      plan.offsets[run.first + m] = offset;
    }
  }
  return plan;
}

/// Applies the jitter plan and re-sorts. Spreading a run of near-ties can
/// carry its last element past an untouched neighbour closer than s.
inline Sample jitter(const Sample& sample, Resolution res) {
  const JitterPlan plan = plan_jitter(sample, res);
  if (plan.runs.empty()) return sample;
  std::vector<double> out(sample.begin(), sample.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += plan.offsets[i];
  return Sample(std::move(out));
}

}  // namespace qrde
