#include "iotchain/nn/train.hpp"

#include <cmath>
#include <numeric>

#include <algorithm>

#include "iotchain/core/errors.hpp"
#include "iotchain/core/rng.hpp"

namespace iotchain::nn {

void TrainConfig::validate() const {
  if (!(lr_n > 0.0) || !std::isfinite(lr_n)) throw Error(Errc::invalid_argument, "lr_n must be positive");
  if (epochs < 1) throw Error(Errc::invalid_argument, "epochs must be at least 1");
  if (batch_size < 1) throw Error(Errc::invalid_argument, "batch_size must be at least 1");
  if (patience < 1) throw Error(Errc::invalid_argument, "patience must be at least 1");
}

void apply_gradients(AutoencoderModel& model, const Gradients& grads, double lr) {
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    auto& W = model.weights[l].data;
    const auto& gW = grads.weights[l].data;
    for (std::size_t k = 0; k < W.size(); ++k) W[k] -= lr * gW[k];
    auto& b = model.biases[l];
    const auto& gb = grads.biases[l];
    for (std::size_t k = 0; k < b.size(); ++k) b[k] -= lr * gb[k];
  }
}

TrainResult train(AutoencoderModel model, std::span<const FeatureVector> train_set,
                  std::span<const FeatureVector> opt_set, const TrainConfig& config) {
  config.validate();
  if (train_set.empty() || opt_set.empty()) {
    throw Error(Errc::insufficient_data, "training needs non-empty T_DS and Opt_DS");
  }

  TrainResult result;
  const double initial = mean_loss(model, opt_set);
  result.history.push_back(initial);
  result.model = model;
  double best = initial;

  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  core::Rng rng(config.seed);
  std::vector<FeatureVector> batch;

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      batch.clear();
      for (std::size_t k = start; k < end; ++k) batch.push_back(train_set[order[k]]);
      apply_gradients(model, backward(model, batch), config.lr_n);
    }

    const double loss = mean_loss(model, opt_set);
    result.history.push_back(loss);
    result.epochs_run = epoch;
    if (!std::isfinite(loss) || (initial > 0.0 && loss > 1e3 * initial)) {
      throw Error(Errc::diverged, "training diverged at epoch " + std::to_string(epoch) +
                                      " (Opt_DS MSE " + std::to_string(loss) + "); try a smaller lr_n");
    }
    if (loss < best) {
      best = loss;
      result.best_epoch = epoch;
      result.model = model;
    } else if (epoch - result.best_epoch >= config.patience) {
      break;
    }
  }
  return result;
}

}  // namespace iotchain::nn
