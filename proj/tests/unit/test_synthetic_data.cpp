// tests/unit/test_synthetic_data.cpp

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

#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"

#include "biasaware/errors.hpp"
#include "biasaware/synthetic_data.hpp"

using namespace biasaware;
using namespace biasaware::synth;

TEST_CASE("snr_to_mos calibration points") {
  CHECK(std::fabs(snr_to_mos(19.0) - 1.05) <= 1e-12);
  CHECK(std::fabs(snr_to_mos(26.0) - 4.45) <= 1e-12);
  CHECK(snr_to_mos(kCurveMidpointDb) == doctest::Approx(2.75).epsilon(1e-15));
  CHECK(std::fabs(snr_to_mos(lower_saturation_snr()) - 1.0) <= 0.01 + 1e-12);
  CHECK(std::fabs(snr_to_mos(upper_saturation_snr()) - 4.5) <= 0.01 + 1e-12);
  CHECK(lower_saturation_snr() < kSnrLowDb);
  CHECK(upper_saturation_snr() > kSnrHighDb);
}

TEST_CASE("snr_to_mos is monotone and bounded") {
  double prev = snr_to_mos(0.0);
  for (int i = 1; i <= 1000; ++i) {
    const double v = snr_to_mos(0.0 + 45.0 * i / 1000.0);
    CHECK(v >= prev);
    prev = v;
  }
  for (double s : {-1e6, -300.0, 0.0, 22.5, 300.0, 1e6}) {
    CHECK(snr_to_mos(s) >= 1.0);
    CHECK(snr_to_mos(s) <= 4.5);
  }
}

TEST_CASE("default bias curves") {
  const auto curves = make_bias_curves();
  REQUIRE(curves.size() == 4);
  CHECK(curves[0].kind == CurveKind::kIdentity);
  for (double m : {1.0, 2.2, 3.7, 4.5}) CHECK(curves[0](m) == m);

  const BiasCurveOptions o;
  CHECK(curves[1].kind == CurveKind::kLinear);
  CHECK(curves[1](3.0) == doctest::Approx(o.linear2_offset + 3.0 * o.linear2_slope));
  CHECK(curves[2](2.0) == doctest::Approx(o.linear3_offset + 2.0 * o.linear3_slope));
  CHECK(curves[1].coefficients != curves[2].coefficients);
  CHECK(curves[1].coefficients != curves[0].coefficients);

  CHECK(curves[3].kind == CurveKind::kCubic);
  CHECK(curves[3].coefficients[3] != 0.0);
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(curves[3](o.cubic_x[i]) == doctest::Approx(o.cubic_y[i]).epsilon(1e-12));

  for (const auto& c : curves) CHECK(c.is_monotone());
}

TEST_CASE("cubic_through interpolates and adds the cubic term") {
  const auto c = BiasCurve::cubic_through({1.0, 2.0, 4.0}, {1.0, 3.0, 4.0}, 0.05);
  CHECK(c(1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c(2.0) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(c(4.0) == doctest::Approx(4.0).epsilon(1e-12));
  const auto q = BiasCurve::cubic_through({1.0, 2.0, 4.0}, {1.0, 3.0, 4.0}, 0.0);
  const double m = 3.1;
  CHECK(c(m) - q(m) == doctest::Approx(0.05 * (m - 1) * (m - 2) * (m - 4)));
}

TEST_CASE("invalid curve settings are rejected") {
  BiasCurveOptions o;
  o.linear2_slope = -0.5;
  CHECK_THROWS_AS(make_bias_curves(o), ConfigError);
  o = {};
  o.cubic_leading = 0.0;
  CHECK_THROWS_AS(make_bias_curves(o), ConfigError);
  o = {};
  o.cubic_leading = 2.0;
  CHECK_THROWS_AS(make_bias_curves(o), ConfigError);
}

TEST_CASE("features") {
  Rng a(5), b(5);
  CHECK(synthesize_features(21.3, 0.42, a) == synthesize_features(21.3, 0.42, b));
  CHECK(synthesize_features(21.3, 0.0, a) == synthesize_features(21.3, 0.0, b));
  Rng c(6), d(7);
  CHECK(synthesize_features(23.0, 0.0, c) == synthesize_features(23.0, 0.0, d));
  CHECK(synthesize_features(23.0, 0.0, c).size() == kFeatureDim);
  Rng e(8);
  const auto x = synthesize_features(20.0, 0.0, e);
  CHECK(x[0] == std::sin(0.1));
}

TEST_CASE("generated collection layout") {
  const auto data = generate_collection(99);
  CHECK(data.dataset_count() == 4);
  CHECK(data.dataset_names == std::vector<std::string>{"train_1", "train_2", "train_3", "train_4"});
  CHECK(data.train.size() == 320);
  CHECK(data.validation.size() == 80);
  std::vector<std::size_t> counts(4, 0);
  for (const auto& s : data.train) ++counts.at(s.dataset);
  CHECK(counts == std::vector<std::size_t>(4, 80));
  for (const auto& s : data.validation) CHECK(s.dataset == kValidationDataset);
}

TEST_CASE("generated samples obey the data contract") {
  const auto data = generate_collection(100);
  const auto curves = make_bias_curves();
  auto check_sample = [&](const Sample& s, const BiasCurve& curve) {
    CHECK(s.snr >= kSnrLowDb);
    CHECK(s.snr <= kSnrHighDb);
    CHECK(s.mos_true == snr_to_mos(s.snr));
    CHECK(s.mos_true >= 1.0);
    CHECK(s.mos_true <= 4.5);
    CHECK(s.mos_observed == std::clamp(curve(s.mos_true), 1.0, 5.0));
    CHECK(s.mos_observed >= 1.0);
    CHECK(s.mos_observed <= 5.0);
    CHECK(s.features.size() == kFeatureDim);
  };
  for (const auto& s : data.train) check_sample(s, curves[s.dataset]);
  for (const auto& s : data.validation) {
    check_sample(s, curves[0]);
    CHECK(s.mos_observed == s.mos_true);
  }
  for (const auto& s : data.train)
    if (s.dataset == 0) CHECK(s.mos_observed == s.mos_true);
}

TEST_CASE("generation is reproducible and variants share inputs") {
  CHECK(generate_collection(7) == generate_collection(7));
  CHECK(!(generate_collection(7) == generate_collection(8)));

  SyntheticOptions unbiased;
  unbiased.biased = false;
  const auto a = generate_collection(7);
  const auto b = generate_collection(7, unbiased);
  REQUIRE(a.train.size() == b.train.size());
  for (std::size_t i = 0; i < a.train.size(); ++i) {
    CHECK(a.train[i].features == b.train[i].features);
    CHECK(a.train[i].snr == b.train[i].snr);
    CHECK(b.train[i].mos_observed == b.train[i].mos_true);
  }
  CHECK(a.validation == b.validation);
}

TEST_CASE("biased datasets are shifted against the unbiased one") {
  const auto data = generate_collection(101);
  std::vector<std::vector<double>> mos(4);
  for (const auto& s : data.train) mos[s.dataset].push_back(s.mos_observed);
  for (std::size_t j = 1; j < 4; ++j) CHECK(std::fabs(oracle::welch_t(mos[j], mos[0])) > 2.0);
}

TEST_CASE("collection options are validated") {
  SyntheticOptions o;
  o.datasets = 5;
  CHECK_THROWS_AS(generate_collection(1, o), ConfigError);
  o = {};
  o.samples_per_dataset = 1;
  CHECK_THROWS_AS(generate_collection(1, o), ConfigError);
}
