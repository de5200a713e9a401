#include "iotchain/nn/autoencoder.hpp"

#include <algorithm>
#include <cmath>

#include "iotchain/core/errors.hpp"
#include "iotchain/core/rng.hpp"

namespace iotchain::nn {

namespace {

double activate(Activation a, double z) {
  switch (a) {
    case Activation::tanh: return std::tanh(z);
    case Activation::sigmoid: return 1.0 / (1.0 + std::exp(-z));
    case Activation::relu: return z > 0.0 ? z : 0.0;
  }
  return z;
}

// Derivative expressed through the activation output y = f(z).
double activate_grad(Activation a, double z, double y) {
  switch (a) {
    case Activation::tanh: return 1.0 - y * y;
    case Activation::sigmoid: return y * (1.0 - y);
    case Activation::relu: return z > 0.0 ? 1.0 : 0.0;
  }
  return 1.0;
}

struct ForwardTrace {
  // pre[l], post[l] for layer l + 1; post[-1] is the input.
  std::vector<std::vector<double>> pre;
  std::vector<std::vector<double>> post;
};

void check_input(const AutoencoderModel& model, std::size_t size) {
  if (size != model.architecture.input_dim()) {
    throw Error(Errc::dimension_mismatch, "expected " + std::to_string(model.architecture.input_dim()) +
                                              " features, got " + std::to_string(size));
  }
}

ForwardTrace run_forward(const AutoencoderModel& model, std::span<const double> x) {
  const auto& arch = model.architecture;
  const std::size_t layers = arch.layer_count();
  ForwardTrace trace;
  trace.pre.resize(layers);
  trace.post.resize(layers);

  std::span<const double> input = x;
  for (std::size_t l = 0; l < layers; ++l) {
    const Matrix& W = model.weights[l];
    auto& z = trace.pre[l];
    z.assign(model.biases[l].begin(), model.biases[l].end());
    for (std::size_t o = 0; o < W.rows; ++o) {
      const double* row = &W.data[o * W.cols];
      double acc = 0.0;
      for (std::size_t i = 0; i < W.cols; ++i) acc += row[i] * input[i];
      z[o] += acc;
    }
    auto& y = trace.post[l];
    if (l + 1 == layers) {
      y = z;
    } else {
      const Activation act = arch.hidden_activations[l];
      y.resize(z.size());
      for (std::size_t o = 0; o < z.size(); ++o) y[o] = activate(act, z[o]);
    }
    input = y;
  }
  return trace;
}

}  // namespace

const char* to_string(Activation activation) noexcept {
  switch (activation) {
    case Activation::tanh: return "tanh";
    case Activation::sigmoid: return "sigmoid";
    case Activation::relu: return "relu";
  }
  return "unknown";
}

Activation activation_from_string(const std::string& name) {
  if (name == "tanh") return Activation::tanh;
  if (name == "sigmoid") return Activation::sigmoid;
  if (name == "relu") return Activation::relu;
  throw Error(Errc::invalid_architecture, "unknown activation '" + name + "' (valid: tanh, sigmoid, relu)");
}

Architecture Architecture::symmetric(std::vector<std::size_t> layer_sizes, Activation activation) {
  Architecture arch;
  const std::size_t hidden = layer_sizes.size() >= 2 ? layer_sizes.size() - 2 : 0;
  arch.layer_sizes = std::move(layer_sizes);
  arch.hidden_activations.assign(hidden, activation);
  arch.validate();
  return arch;
}

Architecture Architecture::default_for(std::size_t input_dim) {
  std::vector<std::size_t> encoder{input_dim};
  for (double ratio : {0.75, 0.5, 0.33, 0.25}) {
    encoder.push_back(std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(input_dim * ratio))));
  }
  std::vector<std::size_t> sizes = encoder;
  for (auto it = encoder.rbegin() + 1; it != encoder.rend(); ++it) sizes.push_back(*it);
  return symmetric(std::move(sizes));
}

void Architecture::validate() const {
  const auto n = layer_sizes.size();
  if (n < 3) throw Error(Errc::invalid_architecture, "an autoencoder needs at least 3 layers");
  for (auto width : layer_sizes) {
    if (width == 0) throw Error(Errc::invalid_architecture, "layer widths must be positive");
  }
  for (std::size_t i = 0; i < n / 2; ++i) {
    if (layer_sizes[i] != layer_sizes[n - 1 - i]) {
      throw Error(Errc::invalid_architecture, "layer widths must mirror around the bottleneck");
    }
  }
  std::size_t bottleneck = layer_sizes.front();
  for (auto width : layer_sizes) bottleneck = std::min(bottleneck, width);
  if (bottleneck >= layer_sizes.front()) {
    throw Error(Errc::invalid_architecture, "bottleneck must be narrower than the input");
  }
  if (hidden_activations.size() != n - 2) {
    throw Error(Errc::invalid_architecture, "need one activation per hidden layer");
  }
}

std::size_t AutoencoderModel::parameter_count() const {
  std::size_t count = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) count += weights[l].data.size() + biases[l].size();
  return count;
}

AutoencoderModel init_model(const Architecture& architecture, std::uint64_t seed) {
  architecture.validate();
  AutoencoderModel model;
  model.architecture = architecture;
  model.normalizer = Normalizer::identity(architecture.input_dim());
  core::Rng rng(seed);
  for (std::size_t l = 0; l < architecture.layer_count(); ++l) {
    const auto fan_in = architecture.layer_sizes[l];
    const auto fan_out = architecture.layer_sizes[l + 1];
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    Matrix W(fan_out, fan_in);
    for (auto& w : W.data) w = rng.uniform(-bound, bound);
    model.weights.push_back(std::move(W));
    model.biases.emplace_back(fan_out, 0.0);
  }
  return model;
}

FeatureVector forward(const AutoencoderModel& model, std::span<const double> x) {
  check_input(model, x.size());
  auto trace = run_forward(model, x);
  return std::move(trace.post.back());
}

double mse(std::span<const double> x, std::span<const double> xhat) {
  if (x.size() != xhat.size()) {
    throw Error(Errc::dimension_mismatch,
                "mse of vectors with sizes " + std::to_string(x.size()) + " and " + std::to_string(xhat.size()));
  }
  if (x.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - xhat[i];
    sum += d * d;
  }
  return sum / static_cast<double>(x.size());
}

Gradients backward(const AutoencoderModel& model, std::span<const FeatureVector> batch) {
  if (batch.empty()) throw Error(Errc::insufficient_data, "backward needs a non-empty batch");
  const auto& arch = model.architecture;
  const std::size_t layers = arch.layer_count();

  Gradients grads;
  for (std::size_t l = 0; l < layers; ++l) {
    grads.weights.emplace_back(model.weights[l].rows, model.weights[l].cols);
    grads.biases.emplace_back(model.biases[l].size(), 0.0);
  }

  const double scale = 2.0 / (static_cast<double>(batch.size()) * static_cast<double>(arch.input_dim()));
  std::vector<double> delta;
  std::vector<double> prev_delta;
  for (const auto& x : batch) {
    check_input(model, x.size());
    const auto trace = run_forward(model, x);

    const auto& out = trace.post.back();
    delta.resize(out.size());
    for (std::size_t i = 0; i < out.size(); ++i) delta[i] = scale * (out[i] - x[i]);

    for (std::size_t l = layers; l-- > 0;) {
      const std::span<const double> input = l == 0 ? std::span<const double>(x) : trace.post[l - 1];
      Matrix& gW = grads.weights[l];
      auto& gb = grads.biases[l];
      for (std::size_t o = 0; o < gW.rows; ++o) {
        const double d = delta[o];
        gb[o] += d;
        double* row = &gW.data[o * gW.cols];
        for (std::size_t i = 0; i < gW.cols; ++i) row[i] += d * input[i];
      }
      if (l == 0) break;

      const Matrix& W = model.weights[l];
      prev_delta.assign(W.cols, 0.0);
      for (std::size_t o = 0; o < W.rows; ++o) {
        const double d = delta[o];
        const double* row = &W.data[o * W.cols];
        for (std::size_t i = 0; i < W.cols; ++i) prev_delta[i] += row[i] * d;
      }
      const Activation act = arch.hidden_activations[l - 1];
      for (std::size_t i = 0; i < prev_delta.size(); ++i) {
        prev_delta[i] *= activate_grad(act, trace.pre[l - 1][i], trace.post[l - 1][i]);
      }
      std::swap(delta, prev_delta);
    }
  }
  return grads;
}

double mean_loss(const AutoencoderModel& model, std::span<const FeatureVector> batch) {
  if (batch.empty()) throw Error(Errc::insufficient_data, "mean loss of an empty batch");
  double sum = 0.0;
  for (const auto& x : batch) sum += mse(x, forward(model, x));
  return sum / static_cast<double>(batch.size());
}

double reconstruction_error(const AutoencoderModel& model, std::span<const double> raw) {
  const auto z = model.normalizer.normalize(raw);
  return mse(z, forward(model, z));
}

}  // namespace iotchain::nn
