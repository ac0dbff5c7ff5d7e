// src/config.cpp

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

#include "biasaware/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "biasaware/errors.hpp"

namespace biasaware {

namespace {

using nlohmann::json;

// Settings shared by the command line and the config file. Every field is
// optional so that precedence can be resolved afterwards.
struct RawSettings {
  std::optional<std::string> loss, anchor, data, holdout, out;
  std::optional<double> rth, lr, momentum, feature_noise;
  std::optional<std::int64_t> runs, batch, patience, max_epochs;
  std::optional<std::uint64_t> seed;
  std::optional<std::vector<std::int64_t>> hidden;
};

template <typename T>
void fill(std::optional<T>& target, const std::optional<T>& fallback) {
  if (!target && fallback) target = fallback;
}

RawSettings read_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    j = json::parse(is);
  } catch (const json::exception& e) {
    throw ConfigError("config file " + path + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");

  RawSettings s;
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "loss") s.loss = value.get<std::string>();
      else if (key == "anchor") s.anchor = value.get<std::string>();
      else if (key == "data") s.data = value.get<std::string>();
      else if (key == "holdout") s.holdout = value.get<std::string>();
      else if (key == "out") s.out = value.get<std::string>();
      else if (key == "rth") s.rth = value.get<double>();
      else if (key == "lr") s.lr = value.get<double>();
      else if (key == "momentum") s.momentum = value.get<double>();
      else if (key == "feature_noise") s.feature_noise = value.get<double>();
      else if (key == "runs") s.runs = value.get<std::int64_t>();
      else if (key == "batch") s.batch = value.get<std::int64_t>();
      else if (key == "patience") s.patience = value.get<std::int64_t>();
      else if (key == "max_epochs") s.max_epochs = value.get<std::int64_t>();
      else if (key == "seed") s.seed = value.get<std::uint64_t>();
      else if (key == "hidden") s.hidden = value.get<std::vector<std::int64_t>>();
      else throw ConfigError("unknown config key '" + key + "'");
    } catch (const json::exception&) {
      throw ConfigError("config key '" + key + "' has the wrong type");
    }
  }
  return s;
}

std::size_t positive(std::int64_t v, const char* what) {
  if (v < 1) throw ConfigError(std::string(what) + " must be at least 1");
  return static_cast<std::size_t>(v);
}

LossVariant parse_loss(const std::string& text) {
  if (text == "mse") return LossVariant::kMse;
  if (text == "bias-aware") return LossVariant::kBiasAware;
  throw ConfigError("loss must be 'mse' or 'bias-aware', got '" + text + "'");
}

std::size_t jobs_from_env() {
  const char* env = std::getenv("BIASAWARE_JOBS");
  if (!env || !*env) return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) throw ConfigError("BIASAWARE_JOBS must be a positive integer");
  return static_cast<std::size_t>(v);
}

}  // namespace

AnchorSpec parse_anchor(const std::string& text) {
  if (text.empty()) throw ConfigError("anchor must not be empty");
  if (text == "none") return {AnchorMode::Kind::kNone, {}};
  if (text == "posthoc") return {AnchorMode::Kind::kPostHoc, {}};
  return {AnchorMode::Kind::kDataset, text};
}

AnchorMode resolve_anchor(const AnchorSpec& spec, const DatasetCollection& data) {
  switch (spec.kind) {
    case AnchorMode::Kind::kNone:
      return AnchorMode::none();
    case AnchorMode::Kind::kPostHoc:
      return AnchorMode::post_hoc();
    case AnchorMode::Kind::kDataset:
      break;
  }
  return AnchorMode::on_dataset(data.index_of(spec.dataset));
}

std::string usage() {
  return "biasaware [synth|train|experiment|sweep] [--loss mse|bias-aware] "
         "[--anchor <dataset_id>|none|posthoc] [--rth <float>] [--runs <int>] "
         "[--seed <int>] [--batch <int>] [--lr <float>] [--patience <int>] "
         "[--data <csv>] [--holdout <dataset_id>] [--out <dir>] [--config <json>]";
}

CliOptions parse_config(const std::vector<std::string>& args) {
  CLI::App app{"Bias-aware loss training and experiments", "biasaware"};
  app.set_help_flag();  // help is handled by the CLI front end
  app.allow_extras(false);

  RawSettings cli;
  std::string config_path;
  // CLI11 binds to plain values; presence is read back through count().
  std::string loss, anchor, data, holdout, out;
  double rth = 0, lr = 0, momentum = 0, feature_noise = 0;
  std::int64_t runs = 0, batch = 0, patience = 0, max_epochs = 0;
  std::uint64_t seed = 0;
  std::vector<std::int64_t> hidden;

  auto add_common = [&](CLI::App* a) {
    a->add_option("--loss", loss);
    a->add_option("--anchor", anchor);
    a->add_option("--rth", rth);
    a->add_option("--runs", runs);
    a->add_option("--seed", seed);
    a->add_option("--batch", batch);
    a->add_option("--lr", lr);
    a->add_option("--momentum", momentum);
    a->add_option("--patience", patience);
    a->add_option("--max-epochs", max_epochs);
    a->add_option("--hidden", hidden)->delimiter(',');
    a->add_option("--feature-noise", feature_noise);
    a->add_option("--data", data);
    a->add_option("--holdout", holdout);
    a->add_option("--out", out);
    a->add_option("--config", config_path);
  };
  add_common(&app);
  std::map<Command, CLI::App*> subs{
      {Command::kSynth, app.add_subcommand("synth", "generate and export a synthetic collection")},
      {Command::kTrain, app.add_subcommand("train", "single training run")},
      {Command::kExperiment, app.add_subcommand("experiment", "run an experiment plan")},
      {Command::kSweep, app.add_subcommand("sweep", "r_th threshold sweep")},
  };
  for (auto& [cmd, sub] : subs) add_common(sub);
  app.require_subcommand(0, 1);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    throw ConfigError(std::string("command line: ") + e.what());
  }

  CliOptions opts;
  const CLI::App* used = &app;
  for (auto& [cmd, sub] : subs)
    if (sub->parsed()) {
      opts.command = cmd;
      used = sub;
    }
  auto given = [&](const char* flag) {
    return app.count(flag) > 0 || (used != &app && used->count(flag) > 0);
  };
  if (given("--loss")) cli.loss = loss;
  if (given("--anchor")) cli.anchor = anchor;
  if (given("--data")) cli.data = data;
  if (given("--holdout")) cli.holdout = holdout;
  if (given("--out")) cli.out = out;
  if (given("--rth")) cli.rth = rth;
  if (given("--lr")) cli.lr = lr;
  if (given("--momentum")) cli.momentum = momentum;
  if (given("--feature-noise")) cli.feature_noise = feature_noise;
  if (given("--runs")) cli.runs = runs;
  if (given("--batch")) cli.batch = batch;
  if (given("--patience")) cli.patience = patience;
  if (given("--max-epochs")) cli.max_epochs = max_epochs;
  if (given("--seed")) cli.seed = seed;
  if (given("--hidden")) cli.hidden = hidden;

  if (given("--config")) {
    const RawSettings file = read_config_file(config_path);
    fill(cli.loss, file.loss);
    fill(cli.anchor, file.anchor);
    fill(cli.data, file.data);
    fill(cli.holdout, file.holdout);
    fill(cli.out, file.out);
    fill(cli.rth, file.rth);
    fill(cli.lr, file.lr);
    fill(cli.momentum, file.momentum);
    fill(cli.feature_noise, file.feature_noise);
    fill(cli.runs, file.runs);
    fill(cli.batch, file.batch);
    fill(cli.patience, file.patience);
    fill(cli.max_epochs, file.max_epochs);
    fill(cli.seed, file.seed);
    fill(cli.hidden, file.hidden);
  }

  TrainConfig& base = opts.plan.base;
  if (cli.lr) base.learning_rate = *cli.lr;
  if (cli.momentum) base.momentum = *cli.momentum;
  if (cli.batch) base.batch_size = positive(*cli.batch, "batch size");
  if (cli.patience) base.patience = positive(*cli.patience, "patience");
  if (cli.max_epochs) base.max_epochs = positive(*cli.max_epochs, "max epochs");
  if (cli.hidden) {
    base.hidden.clear();
    for (auto w : *cli.hidden) base.hidden.push_back(positive(w, "hidden width"));
  }
  if (cli.runs) opts.plan.repetitions = positive(*cli.runs, "runs");
  if (cli.seed) opts.plan.base_seed = *cli.seed;
  if (cli.feature_noise) {
    if (!(*cli.feature_noise >= 0.0)) throw ConfigError("feature noise must be non-negative");
    opts.plan.synthetic.feature_noise = *cli.feature_noise;
  }
  if (cli.data) opts.data = *cli.data;
  if (cli.holdout) opts.holdout = *cli.holdout;
  if (cli.out) opts.out = *cli.out;
  if (opts.holdout && !opts.data) throw ConfigError("--holdout requires --data");

  if (cli.loss) opts.loss = parse_loss(*cli.loss);
  if (cli.anchor) opts.anchor = parse_anchor(*cli.anchor);
  if (cli.rth) {
    if (!(*cli.rth >= 0.0 && *cli.rth <= 1.0)) throw ConfigError("--rth must lie in [0, 1]");
    opts.r_th = *cli.rth;
  }
  if (opts.loss == LossVariant::kMse && opts.anchor &&
      opts.anchor->kind != AnchorMode::Kind::kNone)
    throw ConfigError("an anchor was given together with the mse loss");
  if (opts.loss == LossVariant::kMse && opts.r_th)
    throw ConfigError("--rth has no effect with the mse loss");

  base.validate();
  opts.plan.jobs = jobs_from_env();
  opts.train = base;
  opts.train.loss = opts.loss.value_or(LossVariant::kBiasAware);
  opts.train.r_th = opts.r_th.value_or(0.6);
  opts.train.seed = opts.plan.base_seed;
  if (!opts.data) bind_data(opts, nullptr);
  return opts;
}

std::vector<PlanEntry> plan_entries(const CliOptions& opts, const DatasetCollection& data,
                                    bool external) {
  if (!opts.loss && !opts.anchor && !opts.r_th) {
    if (!external) return three_way_entries(0.6);
    return {{"mse", LossVariant::kMse, AnchorMode::none(), 1.0, DataVariant::kBiased},
            {"bias-aware", LossVariant::kBiasAware, AnchorMode::none(), 0.6,
             DataVariant::kBiased}};
  }
  PlanEntry e;
  e.loss = opts.loss.value_or(LossVariant::kBiasAware);
  e.anchor = opts.anchor ? resolve_anchor(*opts.anchor, data) : AnchorMode::none();
  e.r_th = e.loss == LossVariant::kMse ? 1.0 : opts.r_th.value_or(0.6);
  e.data = DataVariant::kBiased;
  std::ostringstream name;
  name << to_string(e.loss);
  if (e.loss == LossVariant::kBiasAware)
    name << "-anchor-" << to_string(e.anchor, data.dataset_names) << "-rth-" << e.r_th;
  e.name = name.str();
  return {e};
}

void bind_data(CliOptions& opts, const DatasetCollection* data) {
  DatasetCollection names_only;
  if (!data) {
    for (std::size_t j = 0; j < opts.plan.synthetic.datasets; ++j)
      names_only.dataset_names.push_back("train_" + std::to_string(j + 1));
    data = &names_only;
  } else {
    opts.plan.external = *data;
  }
  opts.plan.entries = plan_entries(opts, *data, opts.plan.external.has_value());
  opts.train.anchor = opts.anchor ? resolve_anchor(*opts.anchor, *data) : AnchorMode::none();
  opts.train.validate();
}

}  // namespace biasaware
