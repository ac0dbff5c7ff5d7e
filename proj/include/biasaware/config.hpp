// include/biasaware/config.hpp

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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "biasaware/experiment.hpp"

namespace biasaware {

enum class Command { kSynth, kTrain, kExperiment, kSweep };

/// Anchor as given by the user, before dataset ids are known.
struct AnchorSpec {
  AnchorMode::Kind kind = AnchorMode::Kind::kNone;
  std::string dataset;  // dataset id when kind == kDataset
};

struct CliOptions {
  Command command = Command::kExperiment;
  ExperimentPlan plan;  // entries already filled in for experiment/train
  TrainConfig train;    // == plan.base plus loss/anchor/r_th/seed of a single run
  std::optional<LossVariant> loss;
  std::optional<AnchorSpec> anchor;
  std::optional<double> r_th;
  std::optional<std::filesystem::path> data;
  std::optional<std::string> holdout;
  std::filesystem::path out = "results";
};

/// Parses `args` (without the program name). Precedence: command-line flags,
/// then keys of the JSON file given by --config, then defaults. Throws
/// ConfigError for malformed values, unknown keys or conflicting anchor
/// settings. Parallelism comes from the BIASAWARE_JOBS environment variable.
CliOptions parse_config(const std::vector<std::string>& args);

/// Plan entries implied by the options: the three-way comparison when no
/// loss, anchor or threshold was given (two entries for external data),
/// otherwise a single entry.
std::vector<PlanEntry> plan_entries(const CliOptions& opts, const DatasetCollection& data,
                                    bool external);

/// Attaches external data (or the synthetic dataset ids when `data` is
/// null) and fills plan.entries and train.anchor. Called by parse_config for
/// synthetic runs; throws ConfigError for an unknown anchor id.
void bind_data(CliOptions& opts, const DatasetCollection* data);

/// Binds an anchor spec to the dataset ids of a collection.
AnchorMode resolve_anchor(const AnchorSpec& spec, const DatasetCollection& data);

/// Parses "none", "posthoc" or a dataset id.
AnchorSpec parse_anchor(const std::string& text);

/// Usage text for --help.
std::string usage();

}  // namespace biasaware
