#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qrde/error.hpp"

namespace qrde {

/// Non-empty, sorted collection of finite observations. Immutable once built.
class Sample {
public:
  /// Validates and sorts `values`.
  explicit Sample(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) {
      throw DomainError("sample must contain at least one value");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!std::isfinite(values_[i])) {
        throw DomainError("sample value #" + std::to_string(i + 1) + " is not finite");
      }
    }
    std::sort(values_.begin(), values_.end());
  }

  Sample(std::initializer_list<double> values) : Sample(std::vector<double>(values)) {}

  std::size_t size() const noexcept { return values_.size(); }
  double min() const noexcept { return values_.front(); }
  double max() const noexcept { return values_.back(); }

  /// i-th order statistic, 0-based.
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  std::span<const double> values() const noexcept { return values_; }

  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

  bool operator==(const Sample&) const = default;

private:
  std::vector<double> values_;
};

}  // namespace qrde
