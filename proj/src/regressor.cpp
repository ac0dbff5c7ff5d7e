// src/regressor.cpp

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

#include "biasaware/regressor.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <fstream>

#include "biasaware/errors.hpp"
#include "biasaware/loss_metrics.hpp"
#include "biasaware/random.hpp"

namespace biasaware {

namespace {

// Activations of every layer for one sample; acts[0] is the input.
using Activations = std::vector<std::vector<double>>;

void forward_sample(const RegressorState& state, std::span<const double> input,
                    Activations& acts) {
  acts.resize(state.layers.size() + 1);
  acts[0].assign(input.begin(), input.end());
  for (std::size_t l = 0; l < state.layers.size(); ++l) {
    const DenseLayer& layer = state.layers[l];
    const bool hidden = l + 1 < state.layers.size();
    auto& out = acts[l + 1];
    out.resize(layer.out);
    for (std::size_t o = 0; o < layer.out; ++o) {
      double z = layer.bias[o];
      for (std::size_t i = 0; i < layer.in; ++i) z += layer.w(o, i) * acts[l][i];
      out[o] = hidden ? std::tanh(z) : z;
    }
  }
}

std::vector<DenseLayer> zeros_like(const std::vector<DenseLayer>& layers) {
  std::vector<DenseLayer> out;
  out.reserve(layers.size());
  for (const auto& l : layers) out.emplace_back(l.in, l.out);
  return out;
}

void check_input(const RegressorState& state, const FeatureMatrix& x) {
  if (state.layers.empty()) throw DimensionMismatch("regressor has no layers");
  if (x.cols() != state.input_dim())
    throw DimensionMismatch("feature matrix has " + std::to_string(x.cols()) +
                            " columns, model expects " +
                            std::to_string(state.input_dim()));
}

bool all_finite(const std::vector<DenseLayer>& layers) {
  for (const auto& l : layers) {
    for (double v : l.weights)
      if (!std::isfinite(v)) return false;
    for (double v : l.bias)
      if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace

std::size_t RegressorState::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.weights.size() + l.bias.size();
  return n;
}

RegressorState init_regressor(std::size_t input_dim, std::span<const std::size_t> hidden,
                              std::uint64_t seed) {
  if (input_dim == 0) throw ConfigError("input dimension must be at least 1");
  RegressorState state;
  state.seed = seed;
  Rng rng(seed);
  std::size_t in = input_dim;
  auto add_layer = [&](std::size_t out) {
    DenseLayer layer(in, out);
    const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
    for (double& w : layer.weights) w = rng.uniform(-limit, limit);
    state.layers.push_back(std::move(layer));
    in = out;
  };
  for (std::size_t width : hidden) {
    if (width == 0) throw ConfigError("hidden layer width must be at least 1");
    add_layer(width);
  }
  add_layer(1);
  state.velocity = zeros_like(state.layers);
  return state;
}

std::vector<double> forward(const RegressorState& state, const FeatureMatrix& x) {
  check_input(state, x);
  std::vector<double> out(x.rows());
  Activations acts;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    forward_sample(state, x.row(r), acts);
    out[r] = acts.back()[0];
  }
  return out;
}

namespace {

// Predictions and parameter gradients in one pass; the loss gradient is
// produced from the predictions by `loss_grad`.
template <typename LossGrad>
std::vector<DenseLayer> backprop(const RegressorState& state, const FeatureMatrix& x,
                                 std::vector<double>& yhat, LossGrad&& loss_grad) {
  check_input(state, x);
  const std::size_t rows = x.rows();
  std::vector<Activations> acts(rows);
  yhat.resize(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    forward_sample(state, x.row(r), acts[r]);
    yhat[r] = acts[r].back()[0];
  }
  const std::vector<double> g = loss_grad(std::span<const double>(yhat));
  if (g.size() != rows) throw DimensionMismatch("loss gradient length");

  std::vector<DenseLayer> grads = zeros_like(state.layers);
  std::vector<double> delta, prev;
  for (std::size_t r = 0; r < rows; ++r) {
    delta.assign(1, g[r]);
    for (std::size_t l = state.layers.size(); l-- > 0;) {
      const DenseLayer& layer = state.layers[l];
      DenseLayer& grad = grads[l];
      const auto& input = acts[r][l];
      for (std::size_t o = 0; o < layer.out; ++o) {
        grad.bias[o] += delta[o];
        for (std::size_t i = 0; i < layer.in; ++i) grad.w(o, i) += delta[o] * input[i];
      }
      if (l == 0) break;
      prev.assign(layer.in, 0.0);
      for (std::size_t o = 0; o < layer.out; ++o)
        for (std::size_t i = 0; i < layer.in; ++i) prev[i] += layer.w(o, i) * delta[o];
      // input is tanh output of layer l-1
      for (std::size_t i = 0; i < layer.in; ++i) prev[i] *= 1.0 - input[i] * input[i];
      delta.swap(prev);
    }
  }
  return grads;
}

}  // namespace

std::vector<DenseLayer> parameter_gradients(const RegressorState& state,
                                            const FeatureMatrix& x,
                                            std::span<const double> dloss_dyhat) {
  std::vector<double> yhat;
  return backprop(state, x, yhat, [&](std::span<const double>) {
    return std::vector<double>(dloss_dyhat.begin(), dloss_dyhat.end());
  });
}

void apply_sgd(RegressorState& state, const std::vector<DenseLayer>& grads,
               const SgdSettings& sgd) {
  for (std::size_t l = 0; l < state.layers.size(); ++l) {
    DenseLayer& p = state.layers[l];
    DenseLayer& v = state.velocity[l];
    const DenseLayer& g = grads[l];
    for (std::size_t k = 0; k < p.weights.size(); ++k) {
      v.weights[k] = sgd.momentum * v.weights[k] - sgd.learning_rate * g.weights[k];
      p.weights[k] += v.weights[k];
    }
    for (std::size_t k = 0; k < p.bias.size(); ++k) {
      v.bias[k] = sgd.momentum * v.bias[k] - sgd.learning_rate * g.bias[k];
      p.bias[k] += v.bias[k];
    }
  }
  if (!all_finite(state.layers) || !all_finite(state.velocity))
    throw NonFiniteUpdate("parameter became non-finite during SGD step");
}

double train_step(RegressorState& state, const FeatureMatrix& x, std::span<const double> y,
                  std::span<const BiasCoefficients> bias, const SgdSettings& sgd) {
  std::vector<double> yhat;
  double loss = 0.0;
  const auto grads = backprop(state, x, yhat, [&](std::span<const double> pred) {
    const LossBatch batch{y, pred, bias};
    loss = bias_aware_loss(batch);
    return bias_aware_loss_grad(batch);
  });
  apply_sgd(state, grads, sgd);
  return loss;
}

double train_step_mse(RegressorState& state, const FeatureMatrix& x,
                      std::span<const double> y, const SgdSettings& sgd) {
  std::vector<double> yhat;
  double loss = 0.0;
  const auto grads = backprop(state, x, yhat, [&](std::span<const double> pred) {
    loss = mse(y, pred);
    return mse_grad(y, pred);
  });
  apply_sgd(state, grads, sgd);
  return loss;
}

void flatten_into(const std::vector<DenseLayer>& layers, std::vector<double>& out) {
  out.clear();
  for (const auto& l : layers) {
    out.insert(out.end(), l.weights.begin(), l.weights.end());
    out.insert(out.end(), l.bias.begin(), l.bias.end());
  }
}

std::vector<double> flatten_parameters(const RegressorState& state) {
  std::vector<double> out;
  flatten_into(state.layers, out);
  return out;
}

void assign_parameters(RegressorState& state, std::span<const double> flat) {
  if (flat.size() != state.parameter_count())
    throw DimensionMismatch("assign_parameters: wrong parameter count");
  std::size_t k = 0;
  for (auto& l : state.layers) {
    for (double& w : l.weights) w = flat[k++];
    for (double& b : l.bias) b = flat[k++];
  }
}

namespace {

constexpr std::array<char, 4> kMagic = {'B', 'A', 'W', 'T'};

template <typename T>
void put_le(std::ostream& os, T value) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  const U bits = std::bit_cast<U>(value);
  char bytes[sizeof(U)];
  for (std::size_t i = 0; i < sizeof(U); ++i)
    bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
  os.write(bytes, sizeof(U));
}

template <typename T>
T get_le(std::istream& is) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  unsigned char bytes[sizeof(U)];
  if (!is.read(reinterpret_cast<char*>(bytes), sizeof(U)))
    throw DataError("weights file truncated");
  U bits = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) bits |= static_cast<U>(bytes[i]) << (8 * i);
  return std::bit_cast<T>(bits);
}

}  // namespace

void write_weights(const std::filesystem::path& path, const RegressorState& state) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  os.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(os, kWeightsVersion);
  put_le<std::uint64_t>(os, state.layers.size());
  for (const auto& l : state.layers) {
    put_le<std::uint64_t>(os, l.in);
    put_le<std::uint64_t>(os, l.out);
  }
  for (const auto& l : state.layers) {
    for (double w : l.weights) put_le<double>(os, w);
    for (double b : l.bias) put_le<double>(os, b);
  }
  if (!os) throw Error("failed writing " + path.string());
}

RegressorState read_weights(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open weights file " + path.string());
  std::array<char, 4> magic{};
  if (!is.read(magic.data(), magic.size()) || magic != kMagic)
    throw DataError("not a weights file: " + path.string());
  if (get_le<std::uint32_t>(is) != kWeightsVersion)
    throw DataError("unsupported weights file version");
  const auto count = get_le<std::uint64_t>(is);
  if (count == 0 || count > 1024) throw DataError("implausible layer count");
  RegressorState state;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> dims(count);
  for (auto& [in, out] : dims) {
    in = get_le<std::uint64_t>(is);
    out = get_le<std::uint64_t>(is);
  }
  for (const auto& [in, out] : dims) {
    DenseLayer l(in, out);
    for (double& w : l.weights) w = get_le<double>(is);
    for (double& b : l.bias) b = get_le<double>(is);
    state.layers.push_back(std::move(l));
  }
  state.velocity = zeros_like(state.layers);
  return state;
}

}  // namespace biasaware
