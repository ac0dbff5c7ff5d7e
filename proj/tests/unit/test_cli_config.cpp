// tests/unit/test_cli_config.cpp

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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "biasaware/config.hpp"
#include "biasaware/errors.hpp"

using namespace biasaware;
namespace fs = std::filesystem;

namespace {

using Args = std::vector<std::string>;

fs::path config_file(const std::string& name, const std::string& text) {
  const auto path = fs::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_CASE("no arguments give the default three-way experiment") {
  const auto o = parse_config({});
  CHECK(o.command == Command::kExperiment);
  CHECK(o.plan.repetitions == 15);
  REQUIRE(o.plan.entries.size() == 3);
  CHECK(o.plan.entries[2].anchor == AnchorMode::on_dataset(0));
  CHECK(o.plan.entries[2].r_th == 0.6);
  CHECK(o.out == "results");
}

TEST_CASE("train with explicit loss, anchor and threshold") {
  const auto o = parse_config(Args{"train", "--loss", "bias-aware", "--anchor", "train_1",
                                   "--rth", "0.6"});
  CHECK(o.command == Command::kTrain);
  CHECK(o.train.loss == LossVariant::kBiasAware);
  CHECK(o.train.anchor == AnchorMode::on_dataset(0));
  CHECK(o.train.r_th == 0.6);
  REQUIRE(o.plan.entries.size() == 1);
  CHECK(o.plan.entries[0].anchor == AnchorMode::on_dataset(0));
}

TEST_CASE("hyper-parameters and anchors") {
  const auto o = parse_config(Args{"experiment", "--runs", "4", "--seed", "9", "--batch", "16",
                                   "--lr", "0.01", "--patience", "5", "--hidden", "8,4",
                                   "--anchor", "posthoc", "--out", "x"});
  CHECK(o.plan.repetitions == 4);
  CHECK(o.plan.base_seed == 9);
  CHECK(o.plan.base.batch_size == 16);
  CHECK(o.plan.base.learning_rate == 0.01);
  CHECK(o.plan.base.patience == 5);
  CHECK(o.plan.base.hidden == std::vector<std::size_t>{8, 4});
  CHECK(o.plan.entries[0].anchor == AnchorMode::post_hoc());
  CHECK(o.out == "x");
  CHECK(parse_config(Args{"sweep", "--anchor", "none"}).anchor->kind == AnchorMode::Kind::kNone);
}

TEST_CASE("invalid command lines are config errors") {
  CHECK_THROWS_AS(parse_config(Args{"train", "--rth", "1.5"}), ConfigError);
  CHECK_THROWS_AS(parse_config(Args{"train", "--rth", "-0.1"}), ConfigError);
  CHECK_THROWS_AS(parse_config(Args{"train", "--loss", "mae"}), ConfigError);
  CHECK_THROWS_AS(parse_config(Args{"train", "--loss", "mse", "--anchor", "train_1"}),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(Args{"train", "--loss", "mse", "--rth", "0.5"}), ConfigError);
  CHECK_THROWS_AS(parse_config(Args{"train", "--anchor", "train_9"}), ConfigError);
  CHECK_THROWS_AS(parse_config(Args{"train", "--holdout", "A"}), ConfigError);
  CHECK_THROWS_AS(parse_config(Args{"train", "--batch", "0"}), ConfigError);
  CHECK_THROWS_AS(parse_config(Args{"train", "--lr", "abc"}), ConfigError);
  CHECK_THROWS_AS(parse_config(Args{"train", "--bogus"}), ConfigError);
  CHECK_THROWS_AS(parse_config(Args{"dance"}), ConfigError);
}

TEST_CASE("config file values sit between defaults and the command line") {
  const auto path = config_file("biasaware_test_cfg.json",
                                R"({"runs": 3, "lr": 0.005, "rth": 0.4, "hidden": [12]})");
  const auto o = parse_config(Args{"experiment", "--config", path.string(), "--rth", "0.7"});
  CHECK(o.plan.repetitions == 3);
  CHECK(o.plan.base.learning_rate == 0.005);
  CHECK(o.plan.base.hidden == std::vector<std::size_t>{12});
  CHECK(o.r_th == 0.7);
  CHECK(o.plan.base.batch_size == 32);
  fs::remove(path);
}

TEST_CASE("config file problems are config errors") {
  const auto unknown = config_file("biasaware_test_cfg_unknown.json", R"({"epochs": 3})");
  CHECK_THROWS_AS(parse_config(Args{"--config", unknown.string()}), ConfigError);
  const auto wrong = config_file("biasaware_test_cfg_type.json", R"({"runs": "many"})");
  CHECK_THROWS_AS(parse_config(Args{"--config", wrong.string()}), ConfigError);
  const auto broken = config_file("biasaware_test_cfg_broken.json", "{");
  CHECK_THROWS_AS(parse_config(Args{"--config", broken.string()}), ConfigError);
  CHECK_THROWS_AS(parse_config(Args{"--config", "/nonexistent/cfg.json"}), ConfigError);
  for (const auto& p : {unknown, wrong, broken}) fs::remove(p);
}

TEST_CASE("worker count comes from the environment") {
  setenv("BIASAWARE_JOBS", "3", 1);
  CHECK(parse_config({}).plan.jobs == 3);
  setenv("BIASAWARE_JOBS", "zero", 1);
  CHECK_THROWS_AS(parse_config({}), ConfigError);
  unsetenv("BIASAWARE_JOBS");
  CHECK(parse_config({}).plan.jobs == 1);
}

TEST_CASE("parse_anchor") {
  CHECK(parse_anchor("none").kind == AnchorMode::Kind::kNone);
  CHECK(parse_anchor("posthoc").kind == AnchorMode::Kind::kPostHoc);
  const auto a = parse_anchor("train_2");
  CHECK(a.kind == AnchorMode::Kind::kDataset);
  CHECK(a.dataset == "train_2");
  CHECK_THROWS_AS(parse_anchor(""), ConfigError);
}
