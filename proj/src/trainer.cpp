// src/trainer.cpp

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

#include "biasaware/trainer.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "biasaware/errors.hpp"
#include "biasaware/loss_metrics.hpp"
#include "biasaware/random.hpp"

namespace biasaware {

void TrainConfig::validate() const {
  if (!(r_th >= 0.0 && r_th <= 1.0)) throw ConfigError("r_th must lie in [0, 1]");
  if (batch_size < 1) throw ConfigError("batch size must be at least 1");
  if (patience < 1) throw ConfigError("patience must be at least 1");
  if (max_epochs < 1) throw ConfigError("max epochs must be at least 1");
  if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
  if (!(momentum >= 0.0 && momentum < 1.0)) throw ConfigError("momentum must lie in [0, 1)");
  for (std::size_t w : hidden)
    if (w == 0) throw ConfigError("hidden layer width must be at least 1");
  if (loss == LossVariant::kMse && anchor.kind != AnchorMode::Kind::kNone)
    throw ConfigError("anchoring only applies to the bias-aware loss");
}

std::string TrainConfig::fingerprint() const {
  char buf[96];
  std::ostringstream os;
  os << to_string(loss) << '|' << to_string(anchor) << '|';
  std::snprintf(buf, sizeof buf, "%.17g|%.17g|%.17g", r_th, learning_rate, momentum);
  os << buf << '|' << batch_size << '|' << max_epochs << '|' << patience << '|';
  for (std::size_t w : hidden) os << w << ',';
  // FNV-1a
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : os.str()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string to_string(LossVariant loss) {
  return loss == LossVariant::kMse ? "mse" : "bias-aware";
}

std::string to_string(const AnchorMode& anchor, const std::vector<std::string>& names) {
  switch (anchor.kind) {
    case AnchorMode::Kind::kNone:
      return "none";
    case AnchorMode::Kind::kPostHoc:
      return "posthoc";
    case AnchorMode::Kind::kDataset:
      break;
  }
  if (anchor.dataset < names.size()) return names[anchor.dataset];
  return "dataset:" + std::to_string(anchor.dataset);
}

double EpochRecord::mean_loss() const {
  if (batch_losses.empty()) return 0.0;
  return std::accumulate(batch_losses.begin(), batch_losses.end(), 0.0) /
         static_cast<double>(batch_losses.size());
}

namespace {

double pcc_or_zero(std::span<const double> a, std::span<const double> b) {
  try {
    return pcc(a, b);
  } catch (const UndefinedCorrelation&) {
    return 0.0;
  }
}

}  // namespace

RunRecord run_training(const DatasetCollection& data, const TrainConfig& config) {
  config.validate();
  if (data.train.empty() || data.validation.empty())
    throw DataError("training and validation sets must be non-empty");
  const std::size_t datasets = data.dataset_count();
  std::optional<std::size_t> anchor;
  if (config.anchor.kind == AnchorMode::Kind::kDataset) {
    if (config.anchor.dataset >= datasets) throw ConfigError("anchor dataset out of range");
    anchor = config.anchor.dataset;
  }

  const SampleArrays train = to_arrays(data.train);
  const SampleArrays val = to_arrays(data.validation);
  const std::size_t n = train.y.size();
  for (std::size_t j : train.db)
    if (j >= datasets) throw DataError("training sample has invalid dataset index");

  RunRecord run;
  run.config = config;
  run.fingerprint = config.fingerprint();

  RegressorState state = init_regressor(data.feature_dim(), config.hidden,
                                        derive_seed(config.seed, 1));
  Rng shuffle_rng(derive_seed(config.seed, 2));
  const SgdSettings sgd{config.learning_rate, config.momentum};
  const bool bias_aware = config.loss == LossVariant::kBiasAware;

  BiasTable table(datasets, anchor);
  bool update_bias = false;
  double best_pcc = -std::numeric_limits<double>::infinity();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> batch_y;
  std::vector<BiasCoefficients> batch_bias;

  try {
    for (std::size_t epoch = 0; epoch < config.max_epochs; ++epoch) {
      EpochRecord rec;
      rec.epoch = epoch;

      // 1. shuffle; 2. mini-batch updates with this epoch's fixed table
      shuffle_rng.shuffle(std::span<std::size_t>(order));
      const std::vector<BiasCoefficients> per_sample = table.resolve(train.db);
      for (std::size_t start = 0; start < n; start += config.batch_size) {
        const std::size_t stop = std::min(n, start + config.batch_size);
        const std::span<const std::size_t> idx(order.data() + start, stop - start);
        const FeatureMatrix xb = train.x.gather(idx);
        batch_y.clear();
        batch_bias.clear();
        for (std::size_t i : idx) {
          batch_y.push_back(train.y[i]);
          batch_bias.push_back(per_sample[i]);
        }
        rec.batch_losses.push_back(bias_aware
                                       ? train_step(state, xb, batch_y, batch_bias, sgd)
                                       : train_step_mse(state, xb, batch_y, sgd));
      }

      // 3.-5. predict the full training set, gate on PCC, re-estimate biases
      const std::vector<double> yhat = forward(state, train.x);
      rec.train_pcc = pcc_or_zero(train.y, yhat);
      if (bias_aware && (rec.train_pcc > config.r_th || update_bias)) {
        update_bias = true;
        BiasUpdateReport report;
        table = update_bias_table(table, yhat, train.y, train.db, &report);
        run.degenerate_fits += report.degenerate.size();
        run.negative_slope_fits += report.negative_slope.size();
      }
      rec.update_bias = update_bias;
      rec.bias = table;

      // 6. validation on raw predictions
      const std::vector<double> val_hat = forward(state, val.x);
      rec.val_pcc = pcc_or_zero(val.y, val_hat);
      rec.val_rmse = rmse(val.y, val_hat);
      run.epochs.push_back(std::move(rec));

      // 7. best epoch (ties keep the earliest) and early stopping
      if (run.epochs.back().val_pcc > best_pcc) {
        best_pcc = run.epochs.back().val_pcc;
        run.best_epoch = epoch;
        run.best_weights = state;
        run.best_bias = table;
      } else if (epoch - run.best_epoch >= config.patience) {
        break;
      }
    }
  } catch (const NonFiniteUpdate& e) {
    run.failed = true;
    run.failure = e.what();
  }
  run.final_bias = table;

  if (!run.failed && config.anchor.kind == AnchorMode::Kind::kPostHoc) {
    try {
      fit_posthoc_mapping(run, data);
    } catch (const DegenerateFit& e) {
      run.failed = true;
      run.failure = std::string("post-hoc mapping: ") + e.what();
    }
  }
  return run;
}

BiasCoefficients fit_posthoc_mapping(RunRecord& run, const DatasetCollection& data) {
  if (run.epochs.empty() || run.best_weights.layers.empty())
    throw Error("fit_posthoc_mapping: run has no best-epoch weights");
  const SampleArrays train = to_arrays(data.train);
  const std::vector<double> yhat = forward(run.best_weights, train.x);
  run.posthoc = fit_bias(yhat, train.y);
  return *run.posthoc;
}

std::vector<double> predict(const RunRecord& run, const FeatureMatrix& features, bool clip) {
  if (run.best_weights.layers.empty()) throw Error("predict: run has no best-epoch weights");
  std::vector<double> out = forward(run.best_weights, features);
  for (double& v : out) {
    if (run.posthoc) v = apply_bias(*run.posthoc, v);
    if (clip) v = std::clamp(v, 1.0, 5.0);
  }
  return out;
}

}  // namespace biasaware
