// src/bias_model.cpp

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

#include "biasaware/bias_model.hpp"

#include <cmath>

#include "biasaware/errors.hpp"

namespace biasaware {

BiasCoefficients fit_bias(std::span<const double> yhat, std::span<const double> y) {
  if (yhat.size() != y.size())
    throw DimensionMismatch("fit_bias: prediction and target lengths differ");
  const std::size_t m = yhat.size();
  if (m < 2) throw DegenerateFit("fit_bias: need at least two samples");

  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mean_x += yhat[i];
    mean_y += y[i];
  }
  mean_x /= static_cast<double>(m);
  mean_y /= static_cast<double>(m);

  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double dx = yhat[i] - mean_x;
    sxx += dx * dx;
    sxy += dx * (y[i] - mean_y);
  }
  if (!(sxx > 0.0)) throw DegenerateFit("fit_bias: predictions are constant");

  BiasCoefficients b;
  b.b1 = sxy / sxx;
  b.b0 = mean_y - b.b1 * mean_x;
  if (!std::isfinite(b.b0) || !std::isfinite(b.b1))
    throw DegenerateFit("fit_bias: non-finite coefficients");
  return b;
}

double bias_objective(const BiasCoefficients& b, std::span<const double> yhat,
                      std::span<const double> y) {
  double sum = 0.0;
  for (std::size_t i = 0; i < yhat.size(); ++i) {
    const double r = y[i] - apply_bias(b, yhat[i]);
    sum += r * r;
  }
  return sum / static_cast<double>(yhat.size());
}

BiasTable::BiasTable(std::size_t dataset_count, std::optional<std::size_t> anchor)
    : entries_(dataset_count, identity_bias()), anchor_(anchor) {
  if (anchor_ && *anchor_ >= dataset_count)
    throw ConfigError("anchor dataset index out of range");
}

void BiasTable::set(std::size_t j, const BiasCoefficients& b) {
  if (is_anchor(j)) return;
  entries_.at(j) = b;
}

std::vector<BiasCoefficients> BiasTable::resolve(
    std::span<const std::size_t> db) const {
  std::vector<BiasCoefficients> out;
  out.reserve(db.size());
  for (std::size_t j : db) out.push_back(entries_.at(j));
  return out;
}

BiasTable update_bias_table(const BiasTable& table, std::span<const double> yhat_all,
                            std::span<const double> y_all,
                            std::span<const std::size_t> db,
                            BiasUpdateReport* report) {
  if (yhat_all.size() != y_all.size() || y_all.size() != db.size())
    throw DimensionMismatch("update_bias_table: array lengths differ");

  const std::size_t datasets = table.size();
  std::vector<std::vector<double>> pred(datasets), target(datasets);
  for (std::size_t i = 0; i < db.size(); ++i) {
    if (db[i] >= datasets)
      throw DimensionMismatch("update_bias_table: dataset index out of range");
    pred[db[i]].push_back(yhat_all[i]);
    target[db[i]].push_back(y_all[i]);
  }

  BiasTable next = table;
  for (std::size_t j = 0; j < datasets; ++j) {
    if (table.is_anchor(j)) continue;
    try {
      const BiasCoefficients b = fit_bias(pred[j], target[j]);
      if (report && b.b1 < 0.0) report->negative_slope.push_back(j);
      next.set(j, b);
    } catch (const DegenerateFit&) {
      if (report) report->degenerate.push_back(j);
    }
  }
  return next;
}

}  // namespace biasaware
