// tests/unit/test_regressor.cpp

// Copyright 2026 The biasaware Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"

#include "biasaware/errors.hpp"
#include "biasaware/loss_metrics.hpp"
#include "biasaware/random.hpp"
#include "biasaware/regressor.hpp"

using namespace biasaware;

namespace {

FeatureMatrix random_features(Rng& rng, std::size_t rows, std::size_t cols) {
  FeatureMatrix x(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t k = 0; k < cols; ++k) x(i, k) = rng.uniform(-1, 1);
  return x;
}

std::vector<std::size_t> random_hidden(Rng& rng) {
  std::vector<std::size_t> hidden(rng.below(3));
  for (auto& w : hidden) w = 1 + rng.below(16);
  return hidden;
}

}  // namespace

TEST_CASE("initialization is deterministic in the seed") {
  const std::vector<std::size_t> hidden{16, 16};
  const auto a = init_regressor(8, hidden, 42);
  const auto b = init_regressor(8, hidden, 42);
  const auto c = init_regressor(8, hidden, 43);
  CHECK(a == b);
  CHECK(flatten_parameters(a) != flatten_parameters(c));
  CHECK(a.parameter_count() == 8 * 16 + 16 + 16 * 16 + 16 + 16 + 1);
  for (const auto& l : a.layers)
    for (double bias : l.bias) CHECK(bias == 0.0);
}

TEST_CASE("forward examples") {
  const std::vector<std::size_t> hidden{4};
  auto state = init_regressor(3, hidden, 1);
  assign_parameters(state, std::vector<double>(state.parameter_count(), 0.0));
  Rng rng(31);
  const auto x = random_features(rng, 5, 3);
  for (double v : forward(state, x)) CHECK(v == 0.0);

  state = init_regressor(3, hidden, 2);
  FeatureMatrix dup(2, 3);
  for (std::size_t k = 0; k < 3; ++k) dup(0, k) = dup(1, k) = 0.25 * k;
  const auto out = forward(state, dup);
  CHECK(out[0] == out[1]);

  CHECK_THROWS_AS(forward(state, FeatureMatrix(2, 4)), DimensionMismatch);
}

TEST_CASE("backprop matches finite differences of the output") {
  Rng rng(32);
  const double h = 1e-5;
  for (int trial = 0; trial < 20; ++trial) {
    const auto hidden = random_hidden(rng);
    auto state = init_regressor(1 + rng.below(6), hidden, rng.next_u64());
    const auto x = random_features(rng, 1, state.input_dim());
    const auto grads = parameter_gradients(state, x, std::vector<double>{1.0});
    std::vector<double> analytic;
    flatten_into(grads, analytic);
    auto theta = flatten_parameters(state);
    std::vector<double> numeric(theta.size());
    for (std::size_t k = 0; k < theta.size(); ++k) {
      const double saved = theta[k];
      numeric[k] = oracle::central_difference(
          [&](double v) {
            theta[k] = v;
            assign_parameters(state, theta);
            return forward(state, x)[0];
          },
          saved, h);
      theta[k] = saved;
      assign_parameters(state, theta);
    }
    CHECK(oracle::vector_relative_error(analytic, numeric) <= 1e-5);
  }
}

TEST_CASE("end-to-end parameter gradient of the bias-aware loss") {
  Rng rng(33);
  const double h = 1e-5;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto hidden = random_hidden(rng);
    auto state = init_regressor(1 + rng.below(8), hidden, rng.next_u64());
    const std::size_t n = 1 + rng.below(16);
    const auto x = random_features(rng, n, state.input_dim());
    std::vector<double> y(n);
    std::vector<BiasCoefficients> bias(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = rng.uniform(1, 5);
      bias[i] = {rng.uniform(-1, 1), rng.uniform(0.2, 2.0)};
    }
    auto loss_at = [&]() {
      const auto yhat = forward(state, x);
      return bias_aware_loss({y, yhat, bias});
    };
    const auto yhat = forward(state, x);
    std::vector<double> analytic;
    flatten_into(parameter_gradients(state, x, bias_aware_loss_grad({y, yhat, bias})),
                 analytic);
    auto theta = flatten_parameters(state);
    std::vector<double> numeric(theta.size());
    for (std::size_t k = 0; k < theta.size(); ++k) {
      const double saved = theta[k];
      numeric[k] = oracle::central_difference(
          [&](double v) {
            theta[k] = v;
            assign_parameters(state, theta);
            return loss_at();
          },
          saved, h);
      theta[k] = saved;
      assign_parameters(state, theta);
    }
    worst = std::max(worst, oracle::vector_relative_error(analytic, numeric));
  }
  CHECK(worst <= 1e-5);
}

TEST_CASE("zero-residual batch leaves a fresh model unchanged") {
  Rng rng(34);
  const std::vector<std::size_t> hidden{8};
  auto state = init_regressor(4, hidden, 5);
  const auto x = random_features(rng, 10, 4);
  const auto y = forward(state, x);
  const std::vector<BiasCoefficients> bias(10);
  const auto before = state;
  const double loss = train_step(state, x, y, bias, {0.01, 0.9});
  CHECK(loss == 0.0);
  CHECK(state.layers == before.layers);
}

TEST_CASE("zero gradient with momentum applies the decayed velocity") {
  Rng rng(35);
  const std::vector<std::size_t> hidden{3};
  auto state = init_regressor(2, hidden, 6);
  for (auto& l : state.velocity) {
    for (double& v : l.weights) v = rng.uniform(-0.1, 0.1);
    for (double& v : l.bias) v = rng.uniform(-0.1, 0.1);
  }
  const auto before = state;
  const auto x = random_features(rng, 4, 2);
  const auto y = forward(state, x);
  const std::vector<BiasCoefficients> bias(4);
  train_step(state, x, y, bias, {0.01, 0.9});
  for (std::size_t l = 0; l < state.layers.size(); ++l) {
    for (std::size_t k = 0; k < state.layers[l].weights.size(); ++k) {
      const double v = 0.9 * before.velocity[l].weights[k] - 0.01 * 0.0;
      CHECK(state.velocity[l].weights[k] == v);
      CHECK(state.layers[l].weights[k] == before.layers[l].weights[k] + v);
    }
  }
}

TEST_CASE("zero momentum is plain gradient descent") {
  Rng rng(36);
  const std::vector<std::size_t> hidden{5};
  auto state = init_regressor(3, hidden, 7);
  const auto x = random_features(rng, 6, 3);
  std::vector<double> y(6);
  for (double& v : y) v = rng.uniform(1, 5);
  const std::vector<BiasCoefficients> bias(6, BiasCoefficients{0.3, 0.8});
  const auto yhat = forward(state, x);
  const auto grads = parameter_gradients(state, x, bias_aware_loss_grad({y, yhat, bias}));
  std::vector<double> g;
  flatten_into(grads, g);
  auto expected = flatten_parameters(state);
  for (std::size_t k = 0; k < expected.size(); ++k) expected[k] += 0.0 - 0.05 * g[k];
  train_step(state, x, y, bias, {0.05, 0.0});
  CHECK(flatten_parameters(state) == expected);
}

TEST_CASE("identity-bias step equals the MSE step bit for bit") {
  Rng rng(37);
  const std::vector<std::size_t> hidden{16, 16};
  auto a = init_regressor(8, hidden, 8);
  auto b = a;
  const std::vector<BiasCoefficients> bias(32);
  for (int step = 0; step < 50; ++step) {
    const auto x = random_features(rng, 32, 8);
    std::vector<double> y(32);
    for (double& v : y) v = rng.uniform(1, 5);
    const double la = train_step(a, x, y, bias, {0.001, 0.9});
    const double lb = train_step_mse(b, x, y, {0.001, 0.9});
    CHECK(la == lb);
  }
  CHECK(a == b);
}

TEST_CASE("repeated steps on a fixed batch reduce the loss") {
  Rng rng(38);
  const std::vector<std::size_t> hidden{16, 16};
  auto state = init_regressor(8, hidden, 9);
  const auto x = random_features(rng, 64, 8);
  std::vector<double> y(64);
  for (std::size_t i = 0; i < 64; ++i) y[i] = 3.0 + std::sin(2 * x(i, 0)) + x(i, 1);
  const std::vector<BiasCoefficients> bias(64);
  const double first = train_step(state, x, y, bias, {0.001, 0.9});
  double last = first;
  for (int step = 0; step < 100; ++step) last = train_step(state, x, y, bias, {0.001, 0.9});
  CHECK(last < first);
}

TEST_CASE("a linear model fits exactly linear data") {
  Rng rng(39);
  const auto x = random_features(rng, 64, 5);
  std::vector<double> y(64);
  const std::vector<double> w{0.5, -1.0, 0.25, 2.0, -0.75};
  for (std::size_t i = 0; i < 64; ++i) {
    y[i] = 3.0;
    for (std::size_t k = 0; k < 5; ++k) y[i] += w[k] * x(i, k);
  }
  auto state = init_regressor(5, std::vector<std::size_t>{}, 10);
  const std::vector<BiasCoefficients> bias(64);
  double loss = 0.0;
  for (int step = 0; step < 500; ++step) loss = train_step(state, x, y, bias, {0.05, 0.9});
  CHECK(loss < 1e-4);
}

TEST_CASE("divergence raises NonFiniteUpdate") {
  Rng rng(40);
  const std::vector<std::size_t> hidden{4};
  auto state = init_regressor(2, hidden, 11);
  const auto x = random_features(rng, 4, 2);
  const std::vector<double> y(4, 1e300);
  const std::vector<BiasCoefficients> bias(4);
  CHECK_THROWS_AS(
      {
        for (int step = 0; step < 10; ++step) train_step(state, x, y, bias, {1e10, 0.9});
      },
      NonFiniteUpdate);
}

TEST_CASE("weights file round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "biasaware_test_weights";
  std::filesystem::create_directories(dir);
  const auto path = dir / "w.bin";
  const std::vector<std::size_t> hidden{16, 16};
  const auto state = init_regressor(8, hidden, 12);
  write_weights(path, state);
  const auto back = read_weights(path);
  CHECK(back.layers == state.layers);

  const std::size_t expected = 16 + 3 * 16 + 8 * state.parameter_count();
  CHECK(std::filesystem::file_size(path) == expected);

  std::ifstream is(path, std::ios::binary);
  char magic[4];
  is.read(magic, 4);
  CHECK(std::string(magic, 4) == "BAWT");

  {
    std::ofstream bad(dir / "bad.bin", std::ios::binary);
    bad << "NOPE and more bytes";
  }
  CHECK_THROWS_AS(read_weights(dir / "bad.bin"), DataError);
  std::filesystem::resize_file(path, 40);
  CHECK_THROWS_AS(read_weights(path), DataError);
  std::filesystem::remove_all(dir);
}
