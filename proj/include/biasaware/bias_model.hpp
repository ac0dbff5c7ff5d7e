// include/biasaware/bias_model.hpp

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
#include <optional>
#include <span>
#include <vector>

namespace biasaware {

/// First-order map from model predictions onto one dataset's subjective
/// scale: mos = b0 + b1 * prediction.
struct BiasCoefficients {
  double b0 = 0.0;  // offset, MOS units
  double b1 = 1.0;  // slope

  bool operator==(const BiasCoefficients&) const = default;
};

inline constexpr BiasCoefficients identity_bias() { return {0.0, 1.0}; }

/// Raw affine image, no clipping.
inline double apply_bias(const BiasCoefficients& b, double yhat) {
  return b.b0 + b.b1 * yhat;
}

/// Least-squares fit of y ~ b0 + b1 * yhat in closed form (centered
/// moments). Throws DegenerateFit for fewer than two samples, constant
/// predictions, or a non-finite result.
BiasCoefficients fit_bias(std::span<const double> yhat, std::span<const double> y);

/// Mean squared residual of y against the mapped predictions.
double bias_objective(const BiasCoefficients& b, std::span<const double> yhat,
                      std::span<const double> y);

/// Per-dataset bias functions. The anchor entry, when set, is pinned to
/// identity and cannot be modified.
class BiasTable {
 public:
  BiasTable() = default;
  explicit BiasTable(std::size_t dataset_count,
                     std::optional<std::size_t> anchor = std::nullopt);

  std::size_t size() const { return entries_.size(); }
  const BiasCoefficients& operator[](std::size_t j) const { return entries_.at(j); }
  std::optional<std::size_t> anchor() const { return anchor_; }
  bool is_anchor(std::size_t j) const { return anchor_ && *anchor_ == j; }

  /// Ignored for the anchor dataset.
  void set(std::size_t j, const BiasCoefficients& b);

  /// Coefficients for each sample, looked up through its dataset index.
  std::vector<BiasCoefficients> resolve(std::span<const std::size_t> db) const;

  const std::vector<BiasCoefficients>& entries() const { return entries_; }

  bool operator==(const BiasTable&) const = default;

 private:
  std::vector<BiasCoefficients> entries_;
  std::optional<std::size_t> anchor_;
};

/// Diagnostics from one table update.
struct BiasUpdateReport {
  std::vector<std::size_t> degenerate;      // kept previous coefficients
  std::vector<std::size_t> negative_slope;  // fit accepted with b1 < 0
};

/// Refits every non-anchor dataset on exactly its own samples. A dataset
/// whose fit is degenerate (or that has no samples) keeps its previous
/// coefficients and is listed in the report.
BiasTable update_bias_table(const BiasTable& table, std::span<const double> yhat_all,
                            std::span<const double> y_all,
                            std::span<const std::size_t> db,
                            BiasUpdateReport* report = nullptr);

}  // namespace biasaware
