// src/dataset_csv.cpp

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

#include "biasaware/dataset_csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "biasaware/errors.hpp"

namespace biasaware {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& text, const std::string& column, std::size_t line) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || text.empty())
    throw DataError("column '" + column + "': cannot parse '" + text + "' as a number", line);
  return v;
}

void check_mos(double v, const std::string& column, std::size_t line) {
  if (!(v >= 1.0 && v <= 5.0))
    throw DataError("column '" + column + "': MOS " + format_double(v) +
                        " outside [1, 5]",
                    line);
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

DatasetCollection load_dataset_csv(const std::filesystem::path& path,
                                   const std::optional<std::string>& holdout) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open " + path.string());

  std::string line;
  if (!std::getline(is, line)) throw DataError("missing header row", 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_fields(line);

  std::map<std::string, std::size_t> column;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (!column.emplace(header[c], c).second)
      throw DataError("duplicate column '" + header[c] + "'", 1);
  }
  std::size_t features = 0;
  while (column.count("feature_" + std::to_string(features))) ++features;
  for (const auto& [name, c] : column) {
    const bool known = name == "dataset_id" || name == "mos" || name == "split" ||
                       name == "snr" || name == "mos_true" ||
                       (name.rfind("feature_", 0) == 0 && [&] {
                         for (std::size_t k = 0; k < features; ++k)
                           if (name == "feature_" + std::to_string(k)) return true;
                         return false;
                       }());
    if (!known) throw DataError("unknown column '" + name + "'", 1);
  }
  if (!column.count("dataset_id")) throw DataError("missing column 'dataset_id'", 1);
  if (!column.count("mos")) throw DataError("missing column 'mos'", 1);
  if (features == 0) throw DataError("need at least one feature column (feature_0)", 1);
  const bool has_split = column.count("split") > 0;
  if (has_split && holdout)
    throw DataError("both a split column and a holdout dataset were given", 1);
  if (!has_split && !holdout)
    throw DataError("no validation split: add a 'split' column or pass a holdout dataset", 1);

  DatasetCollection data;
  data.validation_name.clear();
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> f = split_fields(line);
    if (f.size() != header.size())
      throw DataError("expected " + std::to_string(header.size()) + " columns, found " +
                          std::to_string(f.size()),
                      lineno);

    Sample s;
    const std::string& id = f[column["dataset_id"]];
    if (id.empty()) throw DataError("empty dataset_id", lineno);
    s.mos_observed = parse_number(f[column["mos"]], "mos", lineno);
    check_mos(s.mos_observed, "mos", lineno);
    s.mos_true = s.mos_observed;
    if (column.count("mos_true")) {
      s.mos_true = parse_number(f[column["mos_true"]], "mos_true", lineno);
      check_mos(s.mos_true, "mos_true", lineno);
    }
    if (column.count("snr")) s.snr = parse_number(f[column["snr"]], "snr", lineno);
    s.features.resize(features);
    for (std::size_t k = 0; k < features; ++k) {
      const std::string name = "feature_" + std::to_string(k);
      s.features[k] = parse_number(f[column[name]], name, lineno);
      if (!std::isfinite(s.features[k])) throw DataError(name + " is not finite", lineno);
    }

    bool is_validation = false;
    if (holdout) {
      is_validation = id == *holdout;
    } else {
      const std::string& split = f[column["split"]];
      if (split == "validation") is_validation = true;
      else if (split != "train")
        throw DataError("split must be 'train' or 'validation', got '" + split + "'", lineno);
    }

    if (is_validation) {
      if (data.validation_name.empty()) data.validation_name = id;
      s.dataset = kValidationDataset;
      data.validation.push_back(std::move(s));
    } else {
      auto it = std::find(data.dataset_names.begin(), data.dataset_names.end(), id);
      if (it == data.dataset_names.end()) {
        data.dataset_names.push_back(id);
        it = data.dataset_names.end() - 1;
      }
      s.dataset = static_cast<std::size_t>(it - data.dataset_names.begin());
      data.train.push_back(std::move(s));
    }
  }
  if (holdout && data.validation.empty())
    throw DataError("holdout dataset '" + *holdout + "' has no rows");
  if (data.train.empty()) throw DataError("no training rows");
  if (data.validation.empty()) throw DataError("no validation rows");
  return data;
}

void write_dataset_csv(const std::filesystem::path& path, const DatasetCollection& data) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  const std::size_t d = data.feature_dim();
  os << "dataset_id,split,snr,mos_true,mos";
  for (std::size_t k = 0; k < d; ++k) os << ",feature_" << k;
  os << '\n';
  auto write = [&](const Sample& s, const std::string& id, const char* split) {
    if (s.features.size() != d) throw DimensionMismatch("inconsistent feature count");
    os << id << ',' << split << ',' << format_double(s.snr) << ','
       << format_double(s.mos_true) << ',' << format_double(s.mos_observed);
    for (double v : s.features) os << ',' << format_double(v);
    os << '\n';
  };
  for (const Sample& s : data.train) write(s, data.dataset_names.at(s.dataset), "train");
  for (const Sample& s : data.validation) write(s, data.validation_name, "validation");
  if (!os) throw Error("failed writing " + path.string());
}

}  // namespace biasaware
