// src/experiment.cpp

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

#include "biasaware/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <set>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

#include "biasaware/errors.hpp"
#include "biasaware/random.hpp"

namespace biasaware {

std::string to_string(DataVariant data) {
  return data == DataVariant::kUnbiased ? "unbiased" : "biased";
}

std::uint64_t data_seed(const ExperimentPlan& plan) {
  return derive_seed(plan.base_seed, 0x64617461);  // "data"
}

std::uint64_t run_seed(const ExperimentPlan& plan, std::size_t entry, std::size_t repetition) {
  return derive_seed(plan.base_seed, entry + 1, repetition + 1);
}

DatasetCollection plan_data(const ExperimentPlan& plan, DataVariant variant) {
  if (plan.external) {
    if (variant == DataVariant::kUnbiased)
      throw ConfigError("the unbiased data variant needs synthetic data");
    return *plan.external;
  }
  synth::SyntheticOptions options = plan.synthetic;
  options.biased = variant == DataVariant::kBiased;
  return synth::generate_collection(data_seed(plan), options);
}

AggregateResult aggregate(std::string name, std::vector<double> values,
                          std::size_t failed_runs) {
  AggregateResult out;
  out.name = std::move(name);
  out.per_run = std::move(values);
  out.failed_runs = failed_runs;
  const std::size_t total = out.per_run.size() + failed_runs;
  out.failed = total > 0 && 5 * failed_runs > total;
  const std::size_t r = out.per_run.size();
  if (r == 0) {
    out.mean = out.sd = out.ci_low = out.ci_high = std::numeric_limits<double>::quiet_NaN();
    out.failed = true;
    return out;
  }
  double sum = 0.0;
  for (double v : out.per_run) sum += v;
  out.mean = sum / static_cast<double>(r);
  if (r < 2) {
    out.ci_low = out.ci_high = out.mean;
    return out;
  }
  double ss = 0.0;
  for (double v : out.per_run) ss += (v - out.mean) * (v - out.mean);
  out.sd = std::sqrt(ss / static_cast<double>(r - 1));
  const boost::math::students_t dist(static_cast<double>(r - 1));
  const double half = boost::math::quantile(dist, 0.975) * out.sd / std::sqrt(static_cast<double>(r));
  out.ci_low = out.mean - half;
  out.ci_high = out.mean + half;
  return out;
}

const RunOutcome& PlanResult::run(std::size_t entry, std::size_t repetition) const {
  return runs.at(entry * repetitions + repetition);
}

PlanResult run_plan(const ExperimentPlan& plan) {
  if (plan.entries.empty()) throw ConfigError("experiment plan has no configurations");
  if (plan.repetitions == 0) throw ConfigError("repetitions must be at least 1");

  // Data is shared read-only by all runs of the same variant.
  std::optional<DatasetCollection> unbiased, biased;
  for (const auto& e : plan.entries) {
    auto& slot = e.data == DataVariant::kUnbiased ? unbiased : biased;
    if (!slot) slot = plan_data(plan, e.data);
  }

  PlanResult result;
  result.repetitions = plan.repetitions;
  std::set<std::uint64_t> seeds;
  for (std::size_t e = 0; e < plan.entries.size(); ++e) {
    for (std::size_t r = 0; r < plan.repetitions; ++r) {
      RunOutcome out;
      out.entry = e;
      out.repetition = r;
      out.seed = run_seed(plan, e, r);
      if (!seeds.insert(out.seed).second) throw ConfigError("run seed collision in plan");
      result.runs.push_back(std::move(out));
    }
  }

  auto config_for = [&](const RunOutcome& o) {
    const PlanEntry& e = plan.entries[o.entry];
    TrainConfig c = plan.base;
    c.loss = e.loss;
    c.anchor = e.anchor;
    c.r_th = e.r_th;
    c.seed = o.seed;
    return c;
  };
  for (const auto& o : result.runs) config_for(o).validate();

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < result.runs.size(); k = next++) {
      RunOutcome& o = result.runs[k];
      const auto& data = plan.entries[o.entry].data == DataVariant::kUnbiased ? *unbiased : *biased;
      o.run = run_training(data, config_for(o));
    }
  };
  const std::size_t jobs = std::clamp<std::size_t>(plan.jobs, 1, result.runs.size());
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }

  for (std::size_t e = 0; e < plan.entries.size(); ++e) {
    std::vector<double> values;
    std::size_t failed = 0;
    for (std::size_t r = 0; r < plan.repetitions; ++r) {
      const RunOutcome& o = result.run(e, r);
      if (o.run.failed) {
        ++failed;
        std::cerr << "warning: run " << plan.entries[e].name << " #" << r
                  << " failed: " << o.run.failure << '\n';
      } else {
        values.push_back(o.run.best().val_pcc);
      }
    }
    result.aggregates.push_back(aggregate(plan.entries[e].name, std::move(values), failed));
    result.failed = result.failed || result.aggregates.back().failed;
  }
  return result;
}

std::vector<PlanEntry> three_way_entries(double r_th) {
  return {
      {"unbiased-mse", LossVariant::kMse, AnchorMode::none(), 1.0, DataVariant::kUnbiased},
      {"biased-mse", LossVariant::kMse, AnchorMode::none(), 1.0, DataVariant::kBiased},
      {"biased-bias-aware", LossVariant::kBiasAware, AnchorMode::on_dataset(0), r_th,
       DataVariant::kBiased},
  };
}

std::vector<double> default_thresholds() {
  return {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95};
}

SweepResult sweep_rth(bool anchored, const std::vector<double>& thresholds,
                      const ExperimentPlan& templ) {
  if (thresholds.empty()) throw ConfigError("threshold list is empty");
  ExperimentPlan plan = templ;
  plan.entries.clear();
  for (double t : thresholds) {
    if (!(t >= 0.0 && t <= 1.0)) throw ConfigError("thresholds must lie in [0, 1]");
    char name[64];
    std::snprintf(name, sizeof name, "%s-rth-%.2f", anchored ? "anchored" : "unanchored", t);
    plan.entries.push_back({name, LossVariant::kBiasAware,
                            anchored ? AnchorMode::on_dataset(0) : AnchorMode::none(), t,
                            DataVariant::kBiased});
  }
  PlanResult result = run_plan(plan);
  return {anchored, thresholds, std::move(plan), std::move(result)};
}

std::vector<BiasRecovery> compare_bias_recovery(const RunRecord& run,
                                                const std::vector<synth::BiasCurve>& curves,
                                                const DatasetCollection* data) {
  const BiasTable& table = run.best_bias;
  if (table.size() != curves.size())
    throw DimensionMismatch("bias table and curve set differ in dataset count");

  constexpr std::size_t kGrid = 200;
  auto grid_point = [](std::size_t i) {
    return synth::kMosFloor +
           (synth::kMosCeiling - synth::kMosFloor) * static_cast<double>(i) / (kGrid - 1);
  };

  std::vector<BiasRecovery> out;
  for (std::size_t j = 0; j < curves.size(); ++j) {
    const synth::BiasCurve& curve = curves[j];
    BiasRecovery rec;
    rec.dataset = j;
    rec.kind = curve.kind;
    rec.estimated = table[j];
    if (curve.kind == synth::CurveKind::kCubic) {
      std::vector<double> m, y;
      if (data) {
        for (const Sample& s : data->train)
          if (s.dataset == j) {
            m.push_back(s.mos_true);
            y.push_back(std::clamp(curve(s.mos_true), 1.0, 5.0));
          }
      } else {
        for (std::size_t i = 0; i < kGrid; ++i) {
          m.push_back(grid_point(i));
          y.push_back(std::clamp(curve(m.back()), 1.0, 5.0));
        }
      }
      rec.reference = fit_bias(m, y);
    } else {
      rec.reference = {curve.coefficients[0], curve.coefficients[1]};
    }
    rec.offset_error = std::abs(rec.estimated.b0 - rec.reference.b0);
    rec.slope_error = std::abs(rec.estimated.b1 - rec.reference.b1);
    for (std::size_t i = 0; i < kGrid; ++i) {
      const double mm = grid_point(i);
      rec.max_line_deviation =
          std::max(rec.max_line_deviation, std::abs(apply_bias(rec.estimated, mm) - curve(mm)));
    }
    out.push_back(rec);
  }
  return out;
}

}  // namespace biasaware
