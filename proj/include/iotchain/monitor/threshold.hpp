#pragma once

#include <cstddef>
#include <span>

namespace iotchain::monitor {

/// th_v = mean + sample standard deviation of the Opt_DS reconstruction errors.
struct DetectionThreshold {
  double th_v = 0.0;
  double opt_mean = 0.0;
  double opt_std = 0.0;
  std::size_t count = 0;

  bool operator==(const DetectionThreshold&) const = default;
};

/// Bessel-corrected (n - 1) standard deviation. Throws
/// Error(Errc::insufficient_data) for fewer than two values.
DetectionThreshold compute_threshold(std::span<const double> opt_mses);

}  // namespace iotchain::monitor
