// tools/biasaware_cli.cpp

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

// Command-line front end.
//
//   biasaware synth       generate the synthetic collection and export it
//   biasaware train       one training run, with weights and per-epoch log
//   biasaware experiment  repeated runs of a plan (default: three-way comparison)
//   biasaware sweep       r_th sweep, anchored on train_1 unless --anchor none
//
// Exit codes: 0 success, 1 configuration error, 2 data error, 3 too many
// failed runs.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "biasaware/config.hpp"
#include "biasaware/dataset_csv.hpp"
#include "biasaware/errors.hpp"
#include "biasaware/experiment.hpp"
#include "biasaware/results_io.hpp"
#include "biasaware/synthetic_data.hpp"

namespace ba = biasaware;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitData = 2;
constexpr int kExitRunFailure = 3;

void print_summary(const ba::ExperimentPlan& plan, const ba::PlanResult& result) {
  for (std::size_t e = 0; e < plan.entries.size(); ++e) {
    const auto& a = result.aggregates[e];
    std::printf("%-28s runs=%2zu failed=%zu mean PCC=%.4f  95%% CI [%.4f, %.4f]\n",
                a.name.c_str(), a.effective_runs(), a.failed_runs, a.mean, a.ci_low,
                a.ci_high);
  }
}

// Scatter plots show the first repetition of the last bias-aware entry.
const ba::RunOutcome* scatter_run(const ba::ExperimentPlan& plan, const ba::PlanResult& result) {
  for (std::size_t e = plan.entries.size(); e-- > 0;) {
    if (plan.entries[e].loss != ba::LossVariant::kBiasAware) continue;
    for (std::size_t r = 0; r < plan.repetitions; ++r)
      if (!result.run(e, r).run.failed) return &result.run(e, r);
  }
  return nullptr;
}

int run(const std::vector<std::string>& args) {
  ba::CliOptions opts = ba::parse_config(args);
  if (opts.data) {
    const ba::DatasetCollection data = ba::load_dataset_csv(*opts.data, opts.holdout);
    ba::bind_data(opts, &data);
  }
  ba::ExperimentPlan& plan = opts.plan;

  if (opts.command == ba::Command::kSynth) {
    if (opts.data) throw ba::ConfigError("synth does not take --data");
    std::filesystem::create_directories(opts.out);
    const auto data = ba::synth::generate_collection(ba::data_seed(plan), plan.synthetic);
    ba::write_dataset_csv(opts.out / "synthetic.csv", data);
    std::printf("wrote %s (%zu training, %zu validation samples)\n",
                (opts.out / "synthetic.csv").c_str(), data.train.size(), data.validation.size());
    return 0;
  }

  std::vector<ba::synth::BiasCurve> curves;
  if (!plan.external) curves = ba::synth::make_bias_curves(plan.synthetic.curves);

  if (opts.command == ba::Command::kSweep) {
    const bool anchored = !opts.anchor || opts.anchor->kind == ba::AnchorMode::Kind::kDataset;
    if (opts.anchor && opts.anchor->kind == ba::AnchorMode::Kind::kDataset &&
        opts.anchor->dataset != (plan.external ? plan.external->dataset_names.at(0) : "train_1"))
      throw ba::ConfigError("sweeps anchor on the first training dataset");
    const ba::SweepResult sweep = ba::sweep_rth(anchored, ba::default_thresholds(), plan);
    print_summary(sweep.plan_spec, sweep.plan);
    ba::ResultsBundle bundle;
    bundle.plan = &sweep.plan_spec;
    bundle.result = &sweep.plan;
    bundle.sweeps = {&sweep};
    ba::emit_results(bundle, opts.out);
    return sweep.plan.failed ? kExitRunFailure : 0;
  }

  if (opts.command == ba::Command::kTrain) plan.repetitions = 1;
  const ba::PlanResult result = ba::run_plan(plan);
  print_summary(plan, result);

  ba::ResultsBundle bundle;
  bundle.plan = &plan;
  bundle.result = &result;
  const ba::DatasetCollection data = ba::plan_data(plan, ba::DataVariant::kBiased);
  if (const ba::RunOutcome* o = scatter_run(plan, result)) {
    bundle.scatter_run = &o->run;
    bundle.scatter_data = &data;
    bundle.scatter_curves = curves;
  }
  ba::emit_results(bundle, opts.out);

  if (opts.command == ba::Command::kTrain) {
    const ba::RunRecord& run = result.runs.front().run;
    if (!run.failed) {
      ba::write_weights(opts.out / "weights.bin", run.best_weights);
      ba::write_epochs_csv(opts.out / "epochs.csv", run);
    }
  }
  return result.failed ? kExitRunFailure : 0;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  for (const auto& a : args)
    if (a == "-h" || a == "--help") {
      std::cout << "usage: " << ba::usage() << '\n';
      return 0;
    }
  try {
    return run(args);
  } catch (const ba::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ba::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const ba::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRunFailure;
  }
}
