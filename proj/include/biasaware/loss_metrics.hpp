// include/biasaware/loss_metrics.hpp

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
#include <span>
#include <vector>

#include "biasaware/bias_model.hpp"
#include "biasaware/errors.hpp"

namespace biasaware {

/// One mini-batch as seen by the loss: targets, raw predictions and the
/// bias coefficients already resolved per sample.
struct LossBatch {
  std::span<const double> y;
  std::span<const double> yhat;
  std::span<const BiasCoefficients> bias;

  std::size_t size() const { return y.size(); }
};

/// Base distance applied to each residual. Only the squared residual is
/// provided; another distance plugs in by supplying the same two members.
struct SquaredResidual {
  static double value(double r) { return r * r; }
  static double derivative(double r) { return 2.0 * r; }
};

namespace detail {
void check_batch(const LossBatch& batch);
}

/// (1/N) sum_i dist(y_i - (b0 + b1 * yhat_i)), accumulated in double.
template <typename Distance = SquaredResidual>
double bias_aware_loss(const LossBatch& batch) {
  detail::check_batch(batch);
  double sum = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const double r = batch.y[i] - apply_bias(batch.bias[i], batch.yhat[i]);
    sum += Distance::value(r);
  }
  return sum / static_cast<double>(batch.size());
}

/// d loss / d yhat_i = -(1/N) * b1 * dist'(r_i); for the squared residual
/// this is -(2/N) * b1 * r_i.
template <typename Distance = SquaredResidual>
std::vector<double> bias_aware_loss_grad(const LossBatch& batch) {
  detail::check_batch(batch);
  const double n = static_cast<double>(batch.size());
  std::vector<double> grad(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const double r = batch.y[i] - apply_bias(batch.bias[i], batch.yhat[i]);
    grad[i] = -(batch.bias[i].b1 * Distance::derivative(r)) / n;
  }
  return grad;
}

/// Plain mean squared error and its gradient, the vanilla baseline.
double mse(std::span<const double> y, std::span<const double> yhat);
std::vector<double> mse_grad(std::span<const double> y, std::span<const double> yhat);

/// Sample Pearson correlation, two-pass (mean-subtracted) form.
/// Throws UndefinedCorrelation if either input has zero variance.
double pcc(std::span<const double> a, std::span<const double> b);

double rmse(std::span<const double> a, std::span<const double> b);

}  // namespace biasaware
