#pragma once

#include <cstdint>
#include <vector>

namespace msrsim {

/// Simulated time in milliseconds.
using SimTime = std::int64_t;

/// Link-state cost of one link direction.
using Metric = std::uint32_t;

inline constexpr Metric kMinMetric = 1;
inline constexpr Metric kMaxMetric = 65535;

constexpr bool metric_in_range(std::int64_t m) { return m >= kMinMetric && m <= kMaxMetric; }

using Bytes = std::vector<std::uint8_t>;

}  // namespace msrsim
