#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "iotchain/nn/autoencoder.hpp"

namespace iotchain::nn {

struct TrainConfig {
  double lr_n = 0.01;
  std::size_t epochs = 100;
  std::size_t batch_size = 32;
  std::uint64_t seed = 0;
  std::size_t patience = 5;

  void validate() const;
};

struct TrainResult {
  /// Parameters from the epoch with the lowest Opt_DS loss.
  AutoencoderModel model;
  /// Mean Opt_DS MSE; entry 0 is measured before the first update.
  std::vector<double> history;
  std::size_t best_epoch = 0;
  std::size_t epochs_run = 0;
};

/// Mini-batch SGD on `train_set` with early stopping on `opt_set`. Both sets
/// must already be normalized with the model's normalizer. Throws
/// Error(Errc::diverged) if the Opt_DS loss exceeds 1000x its initial value or
/// stops being finite.
TrainResult train(AutoencoderModel model, std::span<const FeatureVector> train_set,
                  std::span<const FeatureVector> opt_set, const TrainConfig& config);

/// Plain gradient step: p <- p - lr * g.
void apply_gradients(AutoencoderModel& model, const Gradients& grads, double lr);

}  // namespace iotchain::nn
