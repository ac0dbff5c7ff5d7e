// src/results_io.cpp

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

#include "biasaware/results_io.hpp"

#include <algorithm>
#include <exception>
#include <fstream>
#include <string>

#include "json.hpp"

#include "biasaware/dataset_csv.hpp"
#include "biasaware/errors.hpp"

namespace biasaware {

namespace fs = std::filesystem;

namespace {

class CsvWriter {
 public:
  explicit CsvWriter(const fs::path& path) : path_(path), os_(path, std::ios::trunc) {
    if (!os_) throw Error("cannot open " + path.string() + " for writing");
  }
  ~CsvWriter() noexcept(false) {
    os_.flush();
    if (!os_ && std::uncaught_exceptions() == 0) throw Error("failed writing " + path_.string());
  }
  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) os_ << (i ? "," : "") << fields[i];
    os_ << '\n';
  }

 private:
  fs::path path_;
  std::ofstream os_;
};

std::string anchor_label(const AnchorMode& a, const std::vector<std::string>& names) {
  return to_string(a, names);
}

std::vector<std::string> names_for(const ExperimentPlan& plan) {
  if (plan.external) return plan.external->dataset_names;
  std::vector<std::string> names;
  for (std::size_t j = 0; j < plan.synthetic.datasets; ++j)
    names.push_back("train_" + std::to_string(j + 1));
  return names;
}

}  // namespace

std::vector<std::vector<std::string>> results_rows(const ExperimentPlan& plan,
                                                   const PlanResult& result,
                                                   const std::vector<std::string>& names) {
  std::vector<std::vector<std::string>> rows;
  for (const RunOutcome& o : result.runs) {
    if (o.run.failed) continue;
    const PlanEntry& e = plan.entries[o.entry];
    const EpochRecord& best = o.run.best();
    std::vector<std::string> row{o.run.fingerprint,
                                 e.name,
                                 to_string(e.loss),
                                 anchor_label(e.anchor, names),
                                 format_double(e.r_th),
                                 to_string(e.data),
                                 std::to_string(o.repetition),
                                 std::to_string(o.seed),
                                 std::to_string(o.run.best_epoch),
                                 format_double(best.val_pcc),
                                 format_double(best.val_rmse),
                                 o.run.posthoc ? format_double(o.run.posthoc->b0) : "",
                                 o.run.posthoc ? format_double(o.run.posthoc->b1) : ""};
    for (std::size_t j = 0; j < names.size(); ++j) {
      const BiasCoefficients b = j < o.run.final_bias.size() ? o.run.final_bias[j] : identity_bias();
      row.push_back(format_double(b.b0));
      row.push_back(format_double(b.b1));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_epochs_csv(const fs::path& path, const RunRecord& run) {
  CsvWriter csv(path);
  std::vector<std::string> header{"epoch", "mean_loss", "train_pcc", "val_pcc", "val_rmse",
                                  "update_bias"};
  const std::size_t d = run.final_bias.size();
  for (std::size_t j = 0; j < d; ++j) {
    header.push_back("b0_" + std::to_string(j));
    header.push_back("b1_" + std::to_string(j));
  }
  csv.row(header);
  for (const EpochRecord& e : run.epochs) {
    std::vector<std::string> row{std::to_string(e.epoch), format_double(e.mean_loss()),
                                 format_double(e.train_pcc), format_double(e.val_pcc),
                                 format_double(e.val_rmse), e.update_bias ? "1" : "0"};
    for (std::size_t j = 0; j < d; ++j) {
      row.push_back(format_double(e.bias[j].b0));
      row.push_back(format_double(e.bias[j].b1));
    }
    csv.row(row);
  }
}

void emit_results(const ResultsBundle& bundle, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  nlohmann::json manifest;

  if (bundle.plan && bundle.result) {
    const ExperimentPlan& plan = *bundle.plan;
    const PlanResult& result = *bundle.result;
    const std::vector<std::string> names = names_for(plan);
    {
      CsvWriter csv(out_dir / "results.csv");
      std::vector<std::string> header{"fingerprint", "config",   "loss",       "anchor",
                                      "r_th",        "data",     "repetition", "seed",
                                      "best_epoch",  "val_pcc",  "val_rmse",   "posthoc_b0",
                                      "posthoc_b1"};
      for (const auto& n : names) {
        header.push_back("b0_" + n);
        header.push_back("b1_" + n);
      }
      csv.row(header);
      for (const auto& row : results_rows(plan, result, names)) csv.row(row);
    }
    {
      CsvWriter csv(out_dir / "failed_runs.csv");
      csv.row({"config", "repetition", "seed", "reason"});
      for (const RunOutcome& o : result.runs)
        if (o.run.failed)
          csv.row({plan.entries[o.entry].name, std::to_string(o.repetition),
                   std::to_string(o.seed), "\"" + o.run.failure + "\""});
    }
    {
      CsvWriter csv(out_dir / "summary.csv");
      csv.row({"config", "loss", "anchor", "r_th", "data", "runs", "failed_runs", "mean_pcc",
               "sd_pcc", "ci95_low", "ci95_high"});
      for (std::size_t e = 0; e < plan.entries.size(); ++e) {
        const PlanEntry& entry = plan.entries[e];
        const AggregateResult& a = result.aggregates[e];
        csv.row({entry.name, to_string(entry.loss), anchor_label(entry.anchor, names),
                 format_double(entry.r_th), to_string(entry.data),
                 std::to_string(a.effective_runs()), std::to_string(a.failed_runs),
                 format_double(a.mean), format_double(a.sd), format_double(a.ci_low),
                 format_double(a.ci_high)});
      }
    }

    nlohmann::json datasets = nlohmann::json::array();
    for (std::size_t j = 0; j < names.size(); ++j)
      datasets.push_back({{"index", j}, {"id", names[j]}});
    manifest["datasets"] = datasets;
    manifest["validation"] = plan.external ? plan.external->validation_name : "validation";
    manifest["base_seed"] = plan.base_seed;
    manifest["repetitions"] = plan.repetitions;
    manifest["data_source"] = plan.external ? "csv" : "synthetic";
    if (!plan.external) {
      const auto& o = plan.synthetic;
      manifest["synthetic"] = {{"data_seed", data_seed(plan)},
                               {"feature_noise", o.feature_noise},
                               {"samples_per_dataset", o.samples_per_dataset},
                               {"validation_samples", o.validation_samples},
                               {"linear2", {o.curves.linear2_offset, o.curves.linear2_slope}},
                               {"linear3", {o.curves.linear3_offset, o.curves.linear3_slope}},
                               {"cubic_x", o.curves.cubic_x},
                               {"cubic_y", o.curves.cubic_y},
                               {"cubic_leading", o.curves.cubic_leading}};
    }
    nlohmann::json configs = nlohmann::json::array();
    for (const PlanEntry& entry : plan.entries) {
      TrainConfig c = plan.base;
      c.loss = entry.loss;
      c.anchor = entry.anchor;
      c.r_th = entry.r_th;
      configs.push_back({{"name", entry.name},
                         {"fingerprint", c.fingerprint()},
                         {"loss", to_string(entry.loss)},
                         {"anchor", anchor_label(entry.anchor, names)},
                         {"r_th", entry.r_th},
                         {"data", to_string(entry.data)},
                         {"batch", c.batch_size},
                         {"lr", c.learning_rate},
                         {"momentum", c.momentum},
                         {"patience", c.patience},
                         {"max_epochs", c.max_epochs},
                         {"hidden", c.hidden}});
    }
    manifest["configs"] = configs;
  }

  if (!bundle.sweeps.empty()) {
    CsvWriter csv(out_dir / "rth_sweep.csv");
    csv.row({"variant", "r_th", "runs", "mean_pcc", "sd_pcc", "ci95_low", "ci95_high"});
    for (const SweepResult* s : bundle.sweeps) {
      for (std::size_t t = 0; t < s->thresholds.size(); ++t) {
        const AggregateResult& a = s->plan.aggregates[t];
        csv.row({s->anchored ? "anchored" : "unanchored", format_double(s->thresholds[t]),
                 std::to_string(a.effective_runs()), format_double(a.mean),
                 format_double(a.sd), format_double(a.ci_low), format_double(a.ci_high)});
      }
    }
  }

  if (bundle.scatter_run && bundle.scatter_data && !bundle.scatter_run->failed) {
    const RunRecord& run = *bundle.scatter_run;
    const DatasetCollection& data = *bundle.scatter_data;
    constexpr std::size_t kLinePoints = 50;
    auto line_x = [](std::size_t i) {
      return synth::kMosFloor +
             (synth::kMosCeiling - synth::kMosFloor) * static_cast<double>(i) / (kLinePoints - 1);
    };
    auto write_set = [&](const std::string& name, const std::vector<Sample>& samples,
                         const synth::BiasCurve* injected, const BiasCoefficients* estimated) {
      CsvWriter csv(out_dir / ("scatter_" + name + ".csv"));
      csv.row({"series", "predicted", "subjective"});
      const SampleArrays arr = to_arrays(samples);
      const std::vector<double> yhat = forward(run.best_weights, arr.x);
      for (std::size_t i = 0; i < yhat.size(); ++i)
        csv.row({"sample", format_double(yhat[i]), format_double(arr.y[i])});
      for (std::size_t i = 0; injected && i < kLinePoints; ++i)
        csv.row({"injected", format_double(line_x(i)),
                 format_double(std::clamp((*injected)(line_x(i)), 1.0, 5.0))});
      for (std::size_t i = 0; estimated && i < kLinePoints; ++i)
        csv.row({"estimated", format_double(line_x(i)),
                 format_double(apply_bias(*estimated, line_x(i)))});
    };
    for (std::size_t j = 0; j < data.dataset_count(); ++j) {
      std::vector<Sample> subset;
      for (const Sample& s : data.train)
        if (s.dataset == j) subset.push_back(s);
      const synth::BiasCurve* injected =
          j < bundle.scatter_curves.size() ? &bundle.scatter_curves[j] : nullptr;
      write_set(data.dataset_names[j], subset, injected, &run.best_bias[j]);
    }
    const synth::BiasCurve identity;
    write_set(data.validation_name, data.validation,
              bundle.scatter_curves.empty() ? nullptr : &identity, nullptr);
    manifest["scatter"] = {{"fingerprint", run.fingerprint},
                           {"seed", run.config.seed},
                           {"best_epoch", run.best_epoch}};
  }

  std::ofstream os(out_dir / "manifest.json", std::ios::trunc);
  if (!os) throw Error("cannot write manifest.json");
  os << manifest.dump(2) << '\n';
}

}  // namespace biasaware
