#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "iotchain/core/features.hpp"
#include "iotchain/nn/normalizer.hpp"

namespace iotchain::nn {

enum class Activation { tanh, sigmoid, relu };

const char* to_string(Activation activation) noexcept;
Activation activation_from_string(const std::string& name);

/// Mirror-symmetric layer widths; hidden layers use the listed activations,
/// the output layer is linear.
struct Architecture {
  std::vector<std::size_t> layer_sizes;
  std::vector<Activation> hidden_activations;

  /// Symmetric widths with tanh on every hidden layer.
  static Architecture symmetric(std::vector<std::size_t> layer_sizes, Activation activation = Activation::tanh);
  /// Widths round(d * r) for r = 0.75, 0.5, 0.33, 0.25, mirrored. For d = 115:
  /// 115-86-58-38-29-38-58-86-115.
  static Architecture default_for(std::size_t input_dim);

  std::size_t input_dim() const { return layer_sizes.front(); }
  std::size_t layer_count() const { return layer_sizes.size() - 1; }
  /// Throws Error(Errc::invalid_architecture).
  void validate() const;

  bool operator==(const Architecture&) const = default;
};

/// Dense row-major matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  bool operator==(const Matrix&) const = default;
};

struct AutoencoderModel {
  Architecture architecture;
  /// weights[l] maps layer l (cols) to layer l + 1 (rows).
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> biases;
  Normalizer normalizer;

  std::size_t parameter_count() const;
  bool operator==(const AutoencoderModel&) const = default;
};

/// Same shapes as the model parameters.
struct Gradients {
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> biases;
};

/// Glorot-uniform weights, zero biases, identity normalizer.
AutoencoderModel init_model(const Architecture& architecture, std::uint64_t seed);

/// Reconstruction of an already-normalized input.
FeatureVector forward(const AutoencoderModel& model, std::span<const double> x);

/// Mean squared difference. Throws Error(Errc::dimension_mismatch).
double mse(std::span<const double> x, std::span<const double> xhat);

/// Gradients of the batch-mean reconstruction MSE with respect to every parameter.
Gradients backward(const AutoencoderModel& model, std::span<const FeatureVector> batch);

/// Batch-mean reconstruction MSE (inputs already normalized).
double mean_loss(const AutoencoderModel& model, std::span<const FeatureVector> batch);

/// mse(normalize(x), forward(normalize(x))) on a raw feature vector.
double reconstruction_error(const AutoencoderModel& model, std::span<const double> raw);

}  // namespace iotchain::nn
