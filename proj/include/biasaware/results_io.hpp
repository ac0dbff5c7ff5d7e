// include/biasaware/results_io.hpp

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

#include <filesystem>
#include <optional>
#include <vector>

#include "biasaware/experiment.hpp"
#include "biasaware/synthetic_data.hpp"

namespace biasaware {

/// Everything a results directory is written from.
struct ResultsBundle {
  const ExperimentPlan* plan = nullptr;
  const PlanResult* result = nullptr;
  std::vector<const SweepResult*> sweeps;
  /// Run plotted in the scatter_<dataset>.csv files, with its data and the
  /// curves injected into that data (empty for external data).
  const RunRecord* scatter_run = nullptr;
  const DatasetCollection* scatter_data = nullptr;
  std::vector<synth::BiasCurve> scatter_curves;
};

/// Writes results.csv (one row per completed run), failed_runs.csv,
/// summary.csv (one row per configuration), rth_sweep.csv (when sweeps are
/// present), scatter_<dataset>.csv (when a scatter run is given) and
/// manifest.json. Output is a pure function of the bundle.
void emit_results(const ResultsBundle& bundle, const std::filesystem::path& out_dir);

/// Per-epoch metrics of one run.
void write_epochs_csv(const std::filesystem::path& path, const RunRecord& run);

/// Rows of results.csv for a plan, without the header.
std::vector<std::vector<std::string>> results_rows(const ExperimentPlan& plan,
                                                   const PlanResult& result,
                                                   const std::vector<std::string>& dataset_names);

}  // namespace biasaware
