#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "gradcheck.hpp"
#include "iotchain/core/errors.hpp"
#include "iotchain/core/rng.hpp"
#include "iotchain/nn/autoencoder.hpp"
#include "iotchain/nn/model_io.hpp"
#include "iotchain/nn/normalizer.hpp"
#include "iotchain/nn/train.hpp"

using namespace iotchain;
using namespace iotchain::nn;

namespace {

std::vector<FeatureVector> random_rows(std::size_t n, std::size_t d, std::uint64_t seed, double scale = 1.0) {
  core::Rng rng(seed);
  std::vector<FeatureVector> rows(n, FeatureVector(d));
  for (auto& r : rows) {
    for (auto& v : r) v = rng.normal(0.0, scale);
  }
  return rows;
}

}  // namespace

TEST_CASE("architecture rules") {
  const auto d = Architecture::default_for(115);
  CHECK(d.layer_sizes == std::vector<std::size_t>{115, 86, 58, 38, 29, 38, 58, 86, 115});
  CHECK(d.hidden_activations.size() == 7);
  CHECK_THROWS_AS(Architecture::symmetric({5, 4, 3, 5}), Error);
  CHECK_THROWS_AS(Architecture::symmetric({5, 5, 5}), Error);
  CHECK_THROWS_AS(Architecture::symmetric({5, 5}), Error);
  try {
    (void)init_model(Architecture{{4, 2, 3}, {Activation::tanh}}, 1);
    FAIL("expected invalid architecture");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_architecture);
  }
}

TEST_CASE("Glorot initialization") {
  const auto arch = Architecture::symmetric({10, 6, 3, 6, 10});
  const auto a = init_model(arch, 9);
  const auto b = init_model(arch, 9);
  CHECK(a == b);
  CHECK_FALSE(a == init_model(arch, 10));
  for (std::size_t l = 0; l < a.weights.size(); ++l) {
    const double bound = std::sqrt(6.0 / static_cast<double>(arch.layer_sizes[l] + arch.layer_sizes[l + 1]));
    for (double w : a.weights[l].data) REQUIRE(std::abs(w) <= bound);
    for (double bias : a.biases[l]) REQUIRE(bias == 0.0);
  }
}

TEST_CASE("forward pass") {
  auto zero = init_model(Architecture::symmetric({4, 2, 4}), 1);
  for (auto& W : zero.weights) std::fill(W.data.begin(), W.data.end(), 0.0);
  const FeatureVector x{1.0, -2.0, 3.0, 0.5};
  CHECK(forward(zero, x) == FeatureVector(4, 0.0));
  CHECK_THROWS_AS(forward(zero, FeatureVector(3, 0.0)), Error);

  // 2-2-2 identity embedding. Built by hand: init_model rejects a bottleneck
  // as wide as the input.
  AutoencoderModel id;
  id.architecture = Architecture{{2, 2, 2}, {Activation::relu}};
  Matrix eye(2, 2);
  eye(0, 0) = eye(1, 1) = 1.0;
  id.weights = {eye, eye};
  id.biases = {{0.0, 0.0}, {0.0, 0.0}};
  id.normalizer = Normalizer::identity(2);
  const FeatureVector p{0.25, 3.5};
  CHECK(forward(id, p) == p);

  const auto model = init_model(Architecture::symmetric({4, 3, 4}), 2);
  CHECK(forward(model, x) == forward(model, x));
}

TEST_CASE("mse") {
  CHECK(mse(FeatureVector{0.0, 0.0}, FeatureVector{3.0, 4.0}) == 12.5);
  const FeatureVector a{1.0, 2.0, 3.0}, b{0.0, 2.5, -1.0};
  CHECK(mse(a, a) == 0.0);
  CHECK(mse(a, b) == mse(b, a));
  CHECK_THROWS_AS(mse(a, FeatureVector{1.0}), Error);
}

TEST_CASE("analytic gradients match central differences") {
  const auto model = init_model(Architecture::symmetric({5, 4, 5}), 3);
  const auto batch = random_rows(3, 5, 4);
  CHECK(testing::max_gradient_error(model, batch) < 1e-5);

  for (auto act : {Activation::sigmoid, Activation::tanh}) {
    const auto deep = init_model(Architecture::symmetric({6, 4, 2, 4, 6}, act), 5);
    CHECK(testing::max_gradient_error(deep, random_rows(4, 6, 6)) < 1e-5);
  }
}

TEST_CASE("gradient edge cases") {
  auto zero = init_model(Architecture::symmetric({3, 2, 3}), 1);
  for (auto& W : zero.weights) std::fill(W.data.begin(), W.data.end(), 0.0);
  const std::vector<FeatureVector> zeros(2, FeatureVector(3, 0.0));
  const auto g = backward(zero, zeros);
  for (const auto& W : g.weights) {
    for (double v : W.data) CHECK(v == 0.0);
  }

  const auto model = init_model(Architecture::symmetric({3, 2, 3}), 2);
  const auto one = random_rows(1, 3, 8);
  const std::vector<FeatureVector> twice{one[0], one[0]};
  const auto g1 = backward(model, one);
  const auto g2 = backward(model, twice);
  for (std::size_t l = 0; l < g1.weights.size(); ++l) {
    for (std::size_t k = 0; k < g1.weights[l].data.size(); ++k) {
      CHECK(g1.weights[l].data[k] == doctest::Approx(g2.weights[l].data[k]).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(backward(model, std::vector<FeatureVector>{}), Error);
}

TEST_CASE("training converges on identical points") {
  const FeatureVector point{0.5, -0.3, 0.8, 0.1};
  const std::vector<FeatureVector> rows(64, point);
  TrainConfig config;
  config.lr_n = 0.1;
  config.epochs = 400;
  config.patience = 400;
  config.batch_size = 8;
  const auto result = train(init_model(Architecture::symmetric({4, 2, 4}), 1), rows, rows, config);
  CHECK(mean_loss(result.model, rows) < 1e-4);
  CHECK(result.history[result.best_epoch] < result.history[0]);
}

TEST_CASE("early stopping returns the best epoch's weights") {
  // Opt rows point away from the training rows, so every update hurts them.
  const std::vector<FeatureVector> train_rows(32, FeatureVector{1, 1, 0, 0});
  std::vector<FeatureVector> opt_rows(8, FeatureVector{-1, -1, 1, 1});
  TrainConfig config;
  config.lr_n = 0.05;
  config.epochs = 50;
  config.patience = 3;
  const auto initial = init_model(Architecture::symmetric({4, 2, 4}), 2);
  auto result = train(initial, train_rows, opt_rows, config);
  for (std::size_t e = 1; e < result.history.size(); ++e) REQUIRE(result.history[e] > result.history[e - 1]);
  CHECK(result.best_epoch == 0);
  CHECK(result.epochs_run == 3);
  CHECK(result.model == initial);

  // Interior minimum: improvement first, then `patience` worse epochs.
  opt_rows.assign(8, FeatureVector{0, 0, 1, 1});
  result = train(initial, train_rows, opt_rows, config);
  const auto& h = result.history;
  CHECK(result.best_epoch > 0);
  CHECK(result.epochs_run == result.best_epoch + config.patience);
  CHECK(h[result.best_epoch] == *std::min_element(h.begin(), h.end()));
  CHECK(mean_loss(result.model, opt_rows) == doctest::Approx(h[result.best_epoch]).epsilon(1e-12));
}

TEST_CASE("training is deterministic and reports divergence") {
  const auto rows = random_rows(40, 6, 12);
  TrainConfig config;
  config.epochs = 5;
  config.seed = 3;
  const auto arch = Architecture::symmetric({6, 3, 6});
  const auto a = train(init_model(arch, 1), rows, rows, config);
  const auto b = train(init_model(arch, 1), rows, rows, config);
  CHECK(a.history == b.history);
  CHECK(a.model == b.model);

  config.lr_n = 50.0;
  config.epochs = 20;
  try {
    (void)train(init_model(arch, 1), random_rows(40, 6, 12, 10.0), rows, config);
    FAIL("expected divergence");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::diverged);
    CHECK(std::string(e.what()).find("lr_n") != std::string::npos);
  }
  config.lr_n = 0.0;
  CHECK_THROWS_AS(train(init_model(arch, 1), rows, rows, config), Error);
}

TEST_CASE("normalizer") {
  const std::vector<FeatureVector> rows{{1.0, 5.0, 2.0}, {3.0, 5.0, 4.0}, {5.0, 5.0, 9.0}};
  const auto n = Normalizer::fit(rows);
  CHECK(n.mean()[0] == doctest::Approx(3.0));
  CHECK(n.stddev()[0] == doctest::Approx(std::sqrt(8.0 / 3.0)));
  CHECK(n.stddev()[1] == 1.0);
  const FeatureVector x{2.5, 7.0, -1.0};
  const auto back = n.denormalize(n.normalize(x));
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(back[i] - x[i]) <= 1e-12);
  CHECK_THROWS_AS(Normalizer::fit(std::vector<FeatureVector>{}), Error);
}

TEST_CASE("model file round trip is bit exact") {
  auto model = init_model(Architecture::symmetric({6, 4, 2, 4, 6}), 7);
  model.normalizer = Normalizer::fit(random_rows(20, 6, 1, 3.0));
  const auto bytes = encode_model(model);
  const auto back = decode_model(bytes);
  CHECK(back == model);
  const auto x = random_rows(1, 6, 2)[0];
  CHECK(reconstruction_error(back, x) == reconstruction_error(model, x));

  auto corrupt = bytes;
  corrupt[corrupt.size() / 2] ^= 0x01;
  CHECK_THROWS_AS(decode_model(corrupt), Error);
  CHECK_THROWS_AS(decode_model(Bytes(bytes.begin(), bytes.begin() + 10)), Error);
}
