// src/synthetic_data.cpp

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

#include "biasaware/synthetic_data.hpp"

#include <algorithm>
#include <cmath>

#include "biasaware/errors.hpp"

namespace biasaware {

std::size_t DatasetCollection::index_of(const std::string& name) const {
  const auto it = std::find(dataset_names.begin(), dataset_names.end(), name);
  if (it == dataset_names.end()) throw ConfigError("unknown dataset id '" + name + "'");
  return static_cast<std::size_t>(it - dataset_names.begin());
}

SampleArrays to_arrays(std::span<const Sample> samples) {
  SampleArrays out;
  out.y.reserve(samples.size());
  out.y_true.reserve(samples.size());
  out.db.reserve(samples.size());
  for (const Sample& s : samples) {
    out.x.append_row(s.features);
    out.y.push_back(s.mos_observed);
    out.y_true.push_back(s.mos_true);
    out.db.push_back(s.dataset);
  }
  return out;
}

namespace synth {

namespace {

constexpr double kRange = kMosCeiling - kMosFloor;

// Frequencies and phases of the eight feature channels.
constexpr std::array<double, kFeatureDim> kFreq{1.3, 2.1, 2.9, 3.7, 0.9, 1.7, 2.5, 3.3};
constexpr std::array<double, kFeatureDim> kPhase{0.1, 0.7, 1.3, 1.9, 2.5, 0.4, 1.0, 1.6};

// Logistic offset from the midpoint at which the curve sits `gap` MOS away
// from its floor.
double offset_for_gap(double gap) { return std::log(kRange / gap - 1.0) / curve_steepness(); }

}  // namespace

// 3.5 / (1 + e^{k (s0 - 19)}) = 0.05 and the mirrored condition at 26 dB
// both give k * 3.5 = ln 69.
double curve_steepness() { return std::log(69.0) / 3.5; }

double snr_to_mos(double snr_db) {
  return kMosFloor + kRange / (1.0 + std::exp(-curve_steepness() * (snr_db - kCurveMidpointDb)));
}

double lower_saturation_snr() { return kCurveMidpointDb - offset_for_gap(0.01); }
double upper_saturation_snr() { return kCurveMidpointDb + offset_for_gap(0.01); }

double BiasCurve::operator()(double m) const {
  const auto& c = coefficients;
  return c[0] + m * (c[1] + m * (c[2] + m * c[3]));
}

bool BiasCurve::is_monotone(double lo, double hi, std::size_t points) const {
  double prev = (*this)(lo);
  for (std::size_t i = 1; i < points; ++i) {
    const double m = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    const double v = (*this)(m);
    if (v < prev) return false;
    prev = v;
  }
  return true;
}

BiasCurve BiasCurve::linear(double offset, double slope) {
  return {CurveKind::kLinear, {offset, slope, 0.0, 0.0}};
}

BiasCurve BiasCurve::cubic_through(std::array<double, 3> xs, std::array<double, 3> ys,
                                   double leading) {
  // Newton form of the quadratic interpolant.
  const double d01 = (ys[1] - ys[0]) / (xs[1] - xs[0]);
  const double d12 = (ys[2] - ys[1]) / (xs[2] - xs[1]);
  const double d012 = (d12 - d01) / (xs[2] - xs[0]);
  // q(m) = y0 + d01 (m - x0) + d012 (m - x0)(m - x1)
  std::array<double, 4> c{};
  c[0] = ys[0] - d01 * xs[0] + d012 * xs[0] * xs[1];
  c[1] = d01 - d012 * (xs[0] + xs[1]);
  c[2] = d012;
  // + leading (m - x0)(m - x1)(m - x2)
  const double e1 = xs[0] + xs[1] + xs[2];
  const double e2 = xs[0] * xs[1] + xs[0] * xs[2] + xs[1] * xs[2];
  const double e3 = xs[0] * xs[1] * xs[2];
  c[0] -= leading * e3;
  c[1] += leading * e2;
  c[2] -= leading * e1;
  c[3] = leading;
  return {CurveKind::kCubic, c};
}

std::vector<BiasCurve> make_bias_curves(const BiasCurveOptions& o) {
  if (o.cubic_leading == 0.0) throw ConfigError("cubic bias curve needs a non-zero cubic term");
  std::vector<BiasCurve> curves{
      BiasCurve::identity(),
      BiasCurve::linear(o.linear2_offset, o.linear2_slope),
      BiasCurve::linear(o.linear3_offset, o.linear3_slope),
      BiasCurve::cubic_through(o.cubic_x, o.cubic_y, o.cubic_leading),
  };
  for (std::size_t j = 0; j < curves.size(); ++j)
    if (!curves[j].is_monotone())
      throw ConfigError("bias curve " + std::to_string(j + 1) + " is not monotone on [1, 4.5]");
  return curves;
}

std::vector<double> synthesize_features(double snr_db, double noise, Rng& rng) {
  const double s = (snr_db - kSnrLowDb) / (kSnrHighDb - kSnrLowDb);
  std::vector<double> x(kFeatureDim);
  for (std::size_t k = 0; k < kFeatureDim; ++k) {
    const double eps = rng.normal();
    x[k] = std::sin(kFreq[k] * s + kPhase[k]) + noise * eps;
  }
  return x;
}

DatasetCollection generate_collection(std::uint64_t seed, const SyntheticOptions& options) {
  if (options.datasets == 0 || options.datasets > 4)
    throw ConfigError("synthetic collection supports 1 to 4 datasets");
  if (options.samples_per_dataset < 2 || options.validation_samples < 2)
    throw ConfigError("synthetic datasets need at least two samples");
  const std::vector<BiasCurve> curves = make_bias_curves(options.curves);

  DatasetCollection data;
  Rng rng(seed);
  auto draw = [&](std::size_t dataset, const BiasCurve& curve) {
    Sample s;
    s.snr = rng.uniform(kSnrLowDb, kSnrHighDb);
    s.mos_true = snr_to_mos(s.snr);
    s.mos_observed = std::clamp(curve(s.mos_true), 1.0, 5.0);
    s.dataset = dataset;
    s.features = synthesize_features(s.snr, options.feature_noise, rng);
    return s;
  };
  for (std::size_t j = 0; j < options.datasets; ++j) {
    data.dataset_names.push_back("train_" + std::to_string(j + 1));
    const BiasCurve& curve = options.biased ? curves[j] : curves[0];
    for (std::size_t i = 0; i < options.samples_per_dataset; ++i)
      data.train.push_back(draw(j, curve));
  }
  for (std::size_t i = 0; i < options.validation_samples; ++i)
    data.validation.push_back(draw(kValidationDataset, curves[0]));
  return data;
}

}  // namespace synth
}  // namespace biasaware
