// include/biasaware/trainer.hpp

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
#include <optional>
#include <string>
#include <vector>

#include "biasaware/bias_model.hpp"
#include "biasaware/dataset.hpp"
#include "biasaware/regressor.hpp"

namespace biasaware {

enum class LossVariant { kMse, kBiasAware };

struct AnchorMode {
  enum class Kind { kNone, kDataset, kPostHoc };
  Kind kind = Kind::kNone;
  std::size_t dataset = 0;  // used when kind == kDataset

  static AnchorMode none() { return {}; }
  static AnchorMode on_dataset(std::size_t j) { return {Kind::kDataset, j}; }
  static AnchorMode post_hoc() { return {Kind::kPostHoc, 0}; }

  bool operator==(const AnchorMode&) const = default;
};

struct TrainConfig {
  LossVariant loss = LossVariant::kBiasAware;
  AnchorMode anchor;
  double r_th = 0.6;  // gate on training PCC before bias estimation starts
  std::size_t batch_size = 32;
  std::size_t max_epochs = 500;
  std::size_t patience = 20;
  double learning_rate = 0.001;
  double momentum = 0.9;
  std::vector<std::size_t> hidden{16, 16};
  std::uint64_t seed = 0;

  /// Throws ConfigError.
  void validate() const;
  /// Hex digest of every field except the seed.
  std::string fingerprint() const;
};

std::string to_string(LossVariant loss);
/// "none", "posthoc" or the dataset id (index if `names` is empty).
std::string to_string(const AnchorMode& anchor, const std::vector<std::string>& names = {});

struct EpochRecord {
  std::size_t epoch = 0;
  double train_pcc = 0.0;  // gate metric, raw predictions vs observed MOS
  double val_pcc = 0.0;
  double val_rmse = 0.0;
  bool update_bias = false;
  BiasTable bias;  // table after this epoch's estimation step
  std::vector<double> batch_losses;

  double mean_loss() const;
};

struct RunRecord {
  TrainConfig config;
  std::string fingerprint;
  std::vector<EpochRecord> epochs;
  std::size_t best_epoch = 0;
  RegressorState best_weights;
  BiasTable best_bias;   // table in effect at the best epoch
  BiasTable final_bias;  // table after the last epoch
  std::optional<BiasCoefficients> posthoc;
  std::size_t degenerate_fits = 0;
  std::size_t negative_slope_fits = 0;
  bool failed = false;
  std::string failure;

  const EpochRecord& best() const { return epochs.at(best_epoch); }
};

/// Runs the bias-aware training loop on `data` and returns the record of
/// the whole run. A non-finite update does not throw; the run comes back
/// with `failed` set.
RunRecord run_training(const DatasetCollection& data, const TrainConfig& config);

/// Affine map from the best-epoch predictions of all training samples
/// (pooled) onto their subjective MOS; stored in `run.posthoc`.
BiasCoefficients fit_posthoc_mapping(RunRecord& run, const DatasetCollection& data);

/// Best-epoch predictions, mapped through the post-hoc fit if present.
/// With `clip`, reported MOS is limited to [1, 5].
std::vector<double> predict(const RunRecord& run, const FeatureMatrix& features,
                            bool clip = true);

}  // namespace biasaware
