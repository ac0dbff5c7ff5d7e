// include/biasaware/experiment.hpp

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

#include "biasaware/dataset.hpp"
#include "biasaware/synthetic_data.hpp"
#include "biasaware/trainer.hpp"

namespace biasaware {

enum class DataVariant { kUnbiased, kBiased };

std::string to_string(DataVariant data);

/// One configuration of a plan, repeated `repetitions` times.
struct PlanEntry {
  std::string name;
  LossVariant loss = LossVariant::kBiasAware;
  AnchorMode anchor;
  double r_th = 0.6;
  DataVariant data = DataVariant::kBiased;
};

struct ExperimentPlan {
  std::vector<PlanEntry> entries;
  std::size_t repetitions = 15;
  std::uint64_t base_seed = 1;
  TrainConfig base;  // shared hyper-parameters; loss/anchor/r_th/seed are overridden
  synth::SyntheticOptions synthetic;
  /// Train on this collection instead of generating synthetic data. Only the
  /// biased data variant is meaningful for it.
  std::optional<DatasetCollection> external;
  std::size_t jobs = 1;
};

/// Seed of the synthetic collection shared by every run of a plan.
std::uint64_t data_seed(const ExperimentPlan& plan);
/// Training seed of one run; distinct for every (entry, repetition).
std::uint64_t run_seed(const ExperimentPlan& plan, std::size_t entry, std::size_t repetition);

/// The collection a given entry trains on.
DatasetCollection plan_data(const ExperimentPlan& plan, DataVariant variant);

struct RunOutcome {
  std::size_t entry = 0;
  std::size_t repetition = 0;
  std::uint64_t seed = 0;
  RunRecord run;
};

struct AggregateResult {
  std::string name;
  std::vector<double> per_run;  // best-epoch validation PCC of completed runs
  std::size_t failed_runs = 0;
  double mean = 0.0;
  double sd = 0.0;
  double ci_low = 0.0;   // mean -/+ t(0.975, R-1) * sd / sqrt(R)
  double ci_high = 0.0;
  bool failed = false;  // more than 20% of the runs failed

  std::size_t effective_runs() const { return per_run.size(); }
};

/// Mean, sample standard deviation and t-based 95% interval.
AggregateResult aggregate(std::string name, std::vector<double> values,
                          std::size_t failed_runs = 0);

struct PlanResult {
  std::vector<RunOutcome> runs;  // entry-major, repetition-minor
  std::vector<AggregateResult> aggregates;
  bool failed = false;

  const RunOutcome& run(std::size_t entry, std::size_t repetition) const;
  std::size_t repetitions = 0;
};

/// Executes every (entry x repetition) run, `plan.jobs` at a time. Results
/// do not depend on the degree of parallelism.
PlanResult run_plan(const ExperimentPlan& plan);

/// Unbiased+MSE, biased+MSE and biased+bias-aware anchored on train_1.
std::vector<PlanEntry> three_way_entries(double r_th = 0.6);

/// {0.0, 0.1, ..., 0.9, 0.95}.
std::vector<double> default_thresholds();

struct SweepResult {
  bool anchored = true;
  std::vector<double> thresholds;
  ExperimentPlan plan_spec;  // one entry per threshold
  PlanResult plan;
};

/// One bias-aware entry per threshold on the biased data, anchored on the
/// first dataset or unanchored. Other settings are taken from `templ`.
SweepResult sweep_rth(bool anchored, const std::vector<double>& thresholds,
                      const ExperimentPlan& templ);

struct BiasRecovery {
  std::size_t dataset = 0;
  synth::CurveKind kind = synth::CurveKind::kIdentity;
  BiasCoefficients estimated;
  /// Injected coefficients for identity/linear curves; for the cubic, the
  /// least-squares line of the clipped curve over the dataset's realized MOS
  /// (when data is given) or over a uniform grid on [1, 4.5].
  BiasCoefficients reference;
  double offset_error = 0.0;
  double slope_error = 0.0;
  double max_line_deviation = 0.0;  // max |estimated line - curve| on [1, 4.5]
};

/// Compares the best-epoch bias table of a run with the injected curves.
std::vector<BiasRecovery> compare_bias_recovery(const RunRecord& run,
                                                const std::vector<synth::BiasCurve>& curves,
                                                const DatasetCollection* data = nullptr);

}  // namespace biasaware
