#include "iotchain/monitor/threshold.hpp"

#include <cmath>

#include "iotchain/core/errors.hpp"

namespace iotchain::monitor {

DetectionThreshold compute_threshold(std::span<const double> opt_mses) {
  if (opt_mses.size() < 2) {
    throw Error(Errc::insufficient_data, "threshold needs at least two Opt_DS errors, got " +
                                             std::to_string(opt_mses.size()));
  }
  const double n = static_cast<double>(opt_mses.size());
  double sum = 0.0;
  for (double v : opt_mses) sum += v;
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : opt_mses) ss += (v - mean) * (v - mean);
  const double s = std::sqrt(ss / (n - 1.0));

  DetectionThreshold th;
  th.opt_mean = mean;
  th.opt_std = s;
  th.th_v = mean + s;
  th.count = opt_mses.size();
  return th;
}

}  // namespace iotchain::monitor
