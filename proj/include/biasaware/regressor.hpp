// include/biasaware/regressor.hpp

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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "biasaware/bias_model.hpp"
#include "biasaware/feature_matrix.hpp"

namespace biasaware {

/// Fully connected layer; weights are out x in, row-major.
struct DenseLayer {
  std::size_t in = 0;
  std::size_t out = 0;
  std::vector<double> weights;
  std::vector<double> bias;

  DenseLayer() = default;
  DenseLayer(std::size_t in_dim, std::size_t out_dim)
      : in(in_dim), out(out_dim), weights(in_dim * out_dim, 0.0), bias(out_dim, 0.0) {}

  double& w(std::size_t o, std::size_t i) { return weights[o * in + i]; }
  double w(std::size_t o, std::size_t i) const { return weights[o * in + i]; }

  bool operator==(const DenseLayer&) const = default;
};

/// MLP input -> tanh hidden layers -> one linear output (predicted MOS,
/// unbounded), together with the momentum buffers of its optimizer.
struct RegressorState {
  std::vector<DenseLayer> layers;
  std::vector<DenseLayer> velocity;
  std::uint64_t seed = 0;

  std::size_t input_dim() const { return layers.empty() ? 0 : layers.front().in; }
  std::size_t parameter_count() const;

  bool operator==(const RegressorState&) const = default;
};

struct SgdSettings {
  double learning_rate = 0.001;
  double momentum = 0.9;
};

/// Glorot-uniform weights, zero biases, zero momentum. `hidden` may be
/// empty, giving an affine model.
RegressorState init_regressor(std::size_t input_dim, std::span<const std::size_t> hidden,
                              std::uint64_t seed);

/// One prediction per row of `x`.
std::vector<double> forward(const RegressorState& state, const FeatureMatrix& x);

/// Gradient of sum_i g_i * yhat_i with respect to every parameter, where
/// g = d loss / d yhat. Shapes match state.layers.
std::vector<DenseLayer> parameter_gradients(const RegressorState& state,
                                            const FeatureMatrix& x,
                                            std::span<const double> dloss_dyhat);

/// One SGD-with-momentum update under the bias-aware loss. `bias` holds the
/// coefficients of each row's dataset. Returns the loss before the update.
/// Throws NonFiniteUpdate if any parameter stops being finite.
double train_step(RegressorState& state, const FeatureMatrix& x, std::span<const double> y,
                  std::span<const BiasCoefficients> bias, const SgdSettings& sgd);

/// Same update under plain MSE.
double train_step_mse(RegressorState& state, const FeatureMatrix& x,
                      std::span<const double> y, const SgdSettings& sgd);

/// v <- momentum * v - lr * g;  theta <- theta + v.
void apply_sgd(RegressorState& state, const std::vector<DenseLayer>& grads,
               const SgdSettings& sgd);

/// All parameters in layer order (weights then biases per layer).
std::vector<double> flatten_parameters(const RegressorState& state);
void assign_parameters(RegressorState& state, std::span<const double> flat);
void flatten_into(const std::vector<DenseLayer>& layers, std::vector<double>& out);

/// Binary weights file: 16-byte header (magic "BAWT", u32 version, u64 layer
/// count), then (u64 in, u64 out) per layer, then each layer's row-major
/// weights followed by its biases. Little-endian, float64.
void write_weights(const std::filesystem::path& path, const RegressorState& state);
RegressorState read_weights(const std::filesystem::path& path);

inline constexpr std::uint32_t kWeightsVersion = 1;

}  // namespace biasaware
