// include/biasaware/dataset.hpp

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

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "biasaware/feature_matrix.hpp"

namespace biasaware {

inline constexpr std::size_t kValidationDataset = std::numeric_limits<std::size_t>::max();

/// One rated stimulus.
struct Sample {
  std::vector<double> features;
  double mos_true = 0.0;      // unbiased MOS (equal to mos_observed for real data)
  double mos_observed = 0.0;  // subjective MOS used as the training target
  std::size_t dataset = 0;    // training dataset index, kValidationDataset otherwise
  double snr = std::numeric_limits<double>::quiet_NaN();  // dB, synthetic data only

  bool operator==(const Sample& o) const {
    auto same = [](double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); };
    return features == o.features && mos_true == o.mos_true &&
           mos_observed == o.mos_observed && dataset == o.dataset && same(snr, o.snr);
  }
};

/// Pooled training corpus split into D datasets, plus a validation set.
struct DatasetCollection {
  std::vector<std::string> dataset_names;  // index j -> id, first-appearance order
  std::string validation_name = "validation";
  std::vector<Sample> train;
  std::vector<Sample> validation;

  std::size_t dataset_count() const { return dataset_names.size(); }
  std::size_t feature_dim() const {
    return train.empty() ? 0 : train.front().features.size();
  }
  /// Index of a dataset id, or throws ConfigError.
  std::size_t index_of(const std::string& name) const;

  bool operator==(const DatasetCollection&) const = default;
};

/// Column-oriented view of a sample list, as consumed by the trainer.
struct SampleArrays {
  FeatureMatrix x;
  std::vector<double> y;       // mos_observed
  std::vector<double> y_true;  // mos_true
  std::vector<std::size_t> db;
};

SampleArrays to_arrays(std::span<const Sample> samples);

}  // namespace biasaware
