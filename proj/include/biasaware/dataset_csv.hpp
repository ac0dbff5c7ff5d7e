// include/biasaware/dataset_csv.hpp

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
#include <string>

#include "biasaware/dataset.hpp"

namespace biasaware {

/// Reads a dataset table. Required columns: `dataset_id`, `mos` and
/// `feature_0` .. `feature_{d-1}`; optional: `split` (train | validation),
/// `snr`, `mos_true`. The validation set comes from the `split` column or,
/// with `holdout`, from every row of that dataset (leave-one-dataset-out).
/// Training dataset ids get indices 0..D-1 in first-appearance order.
/// Throws DataError with the offending line number.
DatasetCollection load_dataset_csv(const std::filesystem::path& path,
                                   const std::optional<std::string>& holdout = std::nullopt);

/// Writes every sample (training then validation) with all columns above;
/// values use 17 significant digits so re-import is lossless.
void write_dataset_csv(const std::filesystem::path& path, const DatasetCollection& data);

/// "%.17g".
std::string format_double(double v);

}  // namespace biasaware
