// src/loss_metrics.cpp

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

#include "biasaware/loss_metrics.hpp"

#include <algorithm>
#include <cmath>

namespace biasaware {

namespace detail {

void check_batch(const LossBatch& batch) {
  if (batch.y.empty()) throw DimensionMismatch("loss batch is empty");
  if (batch.yhat.size() != batch.y.size() || batch.bias.size() != batch.y.size())
    throw DimensionMismatch("loss batch arrays differ in length");
}

}  // namespace detail

// Bit-identical to bias_aware_loss with identity coefficients.
double mse(std::span<const double> y, std::span<const double> yhat) {
  if (y.empty() || y.size() != yhat.size())
    throw DimensionMismatch("mse: lengths differ or empty");
  double sum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double r = y[i] - yhat[i];
    sum += SquaredResidual::value(r);
  }
  return sum / static_cast<double>(y.size());
}

std::vector<double> mse_grad(std::span<const double> y, std::span<const double> yhat) {
  if (y.empty() || y.size() != yhat.size())
    throw DimensionMismatch("mse_grad: lengths differ or empty");
  const double n = static_cast<double>(y.size());
  std::vector<double> grad(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double r = y[i] - yhat[i];
    grad[i] = -SquaredResidual::derivative(r) / n;
  }
  return grad;
}

double pcc(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionMismatch("pcc: lengths differ");
  if (a.size() < 2) throw UndefinedCorrelation("pcc: need at least two samples");
  auto constant = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
  };
  if (constant(a) || constant(b)) throw UndefinedCorrelation("pcc: input is constant");
  const double n = static_cast<double>(a.size());
  double mean_a = 0.0, mean_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    mean_a += a[i];
    mean_b += b[i];
  }
  mean_a /= n;
  mean_b /= n;

  double saa = 0.0, sbb = 0.0, sab = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    saa += da * da;
    sbb += db * db;
    sab += da * db;
  }
  if (!(saa > 0.0) || !(sbb > 0.0))
    throw UndefinedCorrelation("pcc: input has zero variance");
  const double r = sab / (std::sqrt(saa) * std::sqrt(sbb));
  return std::clamp(r, -1.0, 1.0);
}

double rmse(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || a.size() != b.size())
    throw DimensionMismatch("rmse: lengths differ or empty");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(a.size()));
}

}  // namespace biasaware
