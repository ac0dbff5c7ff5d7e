// include/biasaware/synthetic_data.hpp

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

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "biasaware/dataset.hpp"
#include "biasaware/random.hpp"

namespace biasaware::synth {

inline constexpr double kSnrLowDb = 20.0;
inline constexpr double kSnrHighDb = 25.0;
inline constexpr double kMosFloor = 1.0;
inline constexpr double kMosCeiling = 4.5;

/// Logistic SNR -> MOS curve 1 + 3.5 / (1 + exp(-k (snr - s0))), calibrated
/// so that 19 dB -> 1.05 and 26 dB -> 4.45.
inline constexpr double kCurveMidpointDb = 22.5;
double curve_steepness();

double snr_to_mos(double snr_db);

/// SNRs where the curve is within 0.01 MOS of its floor and ceiling.
double lower_saturation_snr();
double upper_saturation_snr();

enum class CurveKind { kIdentity, kLinear, kCubic };

/// Polynomial c0 + c1 m + c2 m^2 + c3 m^3 applied to the true MOS.
struct BiasCurve {
  CurveKind kind = CurveKind::kIdentity;
  std::array<double, 4> coefficients{0.0, 1.0, 0.0, 0.0};

  double operator()(double mos) const;
  /// Non-decreasing on a `points`-point grid over [lo, hi].
  bool is_monotone(double lo = kMosFloor, double hi = kMosCeiling,
                   std::size_t points = 100) const;

  static BiasCurve identity() { return {}; }
  static BiasCurve linear(double offset, double slope);
  /// Cubic through three points (x0, y0), (x1, y1), (x2, y2) with the given
  /// leading coefficient: the quadratic interpolant plus
  /// leading * (m - x0)(m - x1)(m - x2).
  static BiasCurve cubic_through(std::array<double, 3> xs, std::array<double, 3> ys,
                                 double leading);
};

struct BiasCurveOptions {
  double linear2_offset = 1.2;
  double linear2_slope = 0.75;
  double linear3_offset = 0.4;
  double linear3_slope = 0.6;
  std::array<double, 3> cubic_x{1.0, 2.75, 4.5};
  std::array<double, 3> cubic_y{1.0, 1.8, 3.9};
  double cubic_leading = 0.12;
};

/// Identity, two linear curves and one strict cubic. Throws ConfigError if a
/// curve is not monotone on [1, 4.5] or the cubic term vanishes.
std::vector<BiasCurve> make_bias_curves(const BiasCurveOptions& options = {});

inline constexpr std::size_t kFeatureDim = 8;

/// x_k = sin(a_k * s + phi_k) + eps_k with s = (snr - 20) / 5 and
/// eps_k ~ N(0, noise^2).
std::vector<double> synthesize_features(double snr_db, double noise, Rng& rng);

struct SyntheticOptions {
  std::size_t datasets = 4;
  std::size_t samples_per_dataset = 80;
  std::size_t validation_samples = 80;
  double feature_noise = 0.42;
  BiasCurveOptions curves;
  bool biased = true;  // false: every training dataset uses the identity curve
};

/// Training datasets "train_1".."train_D" and an unbiased validation set.
/// SNRs and features depend only on the seed, so the biased and unbiased
/// variants of one seed share inputs and differ only in observed MOS.
DatasetCollection generate_collection(std::uint64_t seed,
                                      const SyntheticOptions& options = {});

}  // namespace biasaware::synth
