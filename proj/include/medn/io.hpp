// Copyright 2026 The medn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Line-delimited JSON files for datasets and trained models, plus CSV helpers.
//
// Dataset file:
//   line 1   {"format":"medn-dataset","version":1,"d":D,"m":M,"n":N,"generator":{...}}
//   line 2.. {"x":[[...],...],"y":[...]}        one instance per line
//
// Model file: a single JSON object with "format":"medn-model" and "version".

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "medn/models.hpp"
#include "medn/synth.hpp"

namespace medn {

inline constexpr int kDatasetVersion = 1;
inline constexpr int kModelVersion = 1;

struct Dataset {
  FeatureSpec spec;
  std::vector<SequenceInstance> instances;
  nlohmann::json generator;  // null unless synthetic
};

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Header metadata for a synthetic set: config, seed, relevant indices and
/// the generating weights.
nlohmann::json generator_metadata(const SyntheticDataset& data);
Dataset to_dataset(const SyntheticDataset& data);

void write_dataset(std::ostream& out, const Dataset& data);
Dataset read_dataset(std::istream& in);
void save_dataset(const std::filesystem::path& path, const Dataset& data);
Dataset load_dataset(const std::filesystem::path& path);

nlohmann::json model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const nlohmann::json& j);
void save_model(const std::filesystem::path& path, const TrainedModel& model);
TrainedModel load_model(const std::filesystem::path& path);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

/// Writes one CSV row; fields containing ',' or '"' are quoted.
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace medn
