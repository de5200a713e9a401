#pragma once

#include <algorithm>
#include <cmath>

#include "iotchain/nn/autoencoder.hpp"

namespace iotchain::testing {

/// |a - n| / max(|a|, |n|, floor). The floor keeps entries whose true
/// gradient is ~0 from turning roundoff into huge relative errors.
inline double relative_error(double analytic, double numeric, double floor = 1e-6) {
  return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), floor});
}

/// Largest relative error between backward() and central differences of
/// mean_loss() over every weight and bias.
inline double max_gradient_error(const nn::AutoencoderModel& model, std::span<const FeatureVector> batch,
                                 double h = 1e-5) {
  const auto grads = nn::backward(model, batch);
  auto probe = model;
  double worst = 0.0;
  const auto central = [&](double& param) {
    const double saved = param;
    param = saved + h;
    const double up = nn::mean_loss(probe, batch);
    param = saved - h;
    const double down = nn::mean_loss(probe, batch);
    param = saved;
    return (up - down) / (2.0 * h);
  };
  for (std::size_t l = 0; l < probe.weights.size(); ++l) {
    for (std::size_t k = 0; k < probe.weights[l].data.size(); ++k) {
      worst = std::max(worst, relative_error(grads.weights[l].data[k], central(probe.weights[l].data[k])));
    }
    for (std::size_t k = 0; k < probe.biases[l].size(); ++k) {
      worst = std::max(worst, relative_error(grads.biases[l][k], central(probe.biases[l][k])));
    }
  }
  return worst;
}

}  // namespace iotchain::testing
