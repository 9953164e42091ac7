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

#include "medn/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

namespace medn {

using nlohmann::json;

namespace {

template <typename T>
T required(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad field '") + key + "': " + e.what());
  }
}

}  // namespace

json generator_metadata(const SyntheticDataset& data) {
  const GeneratorConfig& c = data.config;
  return json{{"seed", c.seed},
              {"d", c.d},
              {"d_rel", c.d_rel},
              {"L", c.L},
              {"m", c.m},
              {"n_samples", c.n_samples},
              {"gibbs_sweeps", c.gibbs_iters},
              {"correlated", c.correlated},
              {"group_size", c.group_size},
              {"noise_sd", c.noise_sd},
              {"weight_distribution", "standard_normal"},
              {"relevant", data.truth.relevant},
              {"true_weights", data.truth.model.weights}};
}

Dataset to_dataset(const SyntheticDataset& data) {
  return {data.config.spec(), data.instances, generator_metadata(data)};
}

void write_dataset(std::ostream& out, const Dataset& data) {
  json header{{"format", "medn-dataset"},
              {"version", kDatasetVersion},
              {"d", data.spec.d},
              {"m", data.spec.m},
              {"n", data.instances.size()}};
  if (!data.generator.is_null()) header["generator"] = data.generator;
  out << header.dump() << '\n';
  for (const auto& inst : data.instances) {
    json x = json::array();
    for (std::size_t l = 0; l < inst.features.rows(); ++l) {
      const auto row = inst.features.row(l);
      x.push_back(std::vector<double>(row.begin(), row.end()));
    }
    out << json{{"x", std::move(x)}, {"y", inst.labels}}.dump() << '\n';
  }
}

Dataset read_dataset(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("dataset: missing header line");
  json header;
  try {
    header = json::parse(line);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("dataset header: ") + e.what());
  }
  if (required<std::string>(header, "format") != "medn-dataset")
    throw FormatError("dataset: not a medn-dataset file");
  if (required<int>(header, "version") != kDatasetVersion)
    throw FormatError("dataset: unsupported version");

  Dataset data;
  data.spec = {required<std::size_t>(header, "d"), required<std::size_t>(header, "m")};
  try {
    data.spec.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("dataset header: ") + e.what());
  }
  if (header.contains("generator")) data.generator = header["generator"];

  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = "dataset line " + std::to_string(lineno) + ": ";
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw FormatError(where + e.what());
    }
    const auto rows = required<std::vector<std::vector<double>>>(rec, "x");
    SequenceInstance inst;
    inst.labels = required<LabelSeq>(rec, "y");
    inst.features = Matrix(rows.size(), data.spec.d);
    for (std::size_t l = 0; l < rows.size(); ++l) {
      if (rows[l].size() != data.spec.d) throw FormatError(where + "row width != d");
      std::copy(rows[l].begin(), rows[l].end(), inst.features.row(l).begin());
    }
    try {
      inst.validate(data.spec);
    } catch (const std::invalid_argument& e) {
      throw FormatError(where + e.what());
    }
    data.instances.push_back(std::move(inst));
  }
  if (header.contains("n") && header["n"].get<std::size_t>() != data.instances.size())
    throw FormatError("dataset: header count does not match number of records");
  return data;
}

void save_dataset(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_dataset(out, data);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_dataset(in);
}

json model_to_json(const TrainedModel& model) {
  const TrainOptions& o = model.options;
  json hyper{{"beta", o.beta}, {"C", o.subgrad().C}, {"iterations", o.iterations}};
  switch (model.kind) {
    case ModelKind::M3N: break;
    case ModelKind::LapMEDN:
      hyper["lambda"] = o.lambda;
      hyper["lap_C"] = o.lap_C;
      hyper["outer_iters"] = o.outer_iters;
      break;
    case ModelKind::L1M3N: hyper["radius"] = o.radius; break;
  }
  json j{{"format", "medn-model"},
         {"version", kModelVersion},
         {"model", to_string(model.kind)},
         {"d", model.spec.d},
         {"m", model.spec.m},
         {"n_train", model.n_train},
         {"seed", o.seed},
         {"hyper", std::move(hyper)},
         {"weights", model.weights}};
  if (model.variance) j["variance"] = *model.variance;
  return j;
}

TrainedModel model_from_json(const json& j) {
  if (required<std::string>(j, "format") != "medn-model") throw FormatError("not a medn-model file");
  if (required<int>(j, "version") != kModelVersion) throw FormatError("unsupported model version");
  TrainedModel m;
  m.kind = parse_model_kind(required<std::string>(j, "model"));
  m.spec = {required<std::size_t>(j, "d"), required<std::size_t>(j, "m")};
  m.n_train = required<std::size_t>(j, "n_train");
  m.weights = required<Vector>(j, "weights");
  if (j.contains("variance")) m.variance = required<Vector>(j, "variance");

  const json h = required<json>(j, "hyper");
  TrainOptions& o = m.options;
  o.kind = m.kind;
  o.seed = required<std::uint64_t>(j, "seed");
  o.beta = required<double>(h, "beta");
  o.C = required<double>(h, "C");
  o.iterations = required<int>(h, "iterations");
  if (m.kind == ModelKind::LapMEDN) {
    o.lambda = required<double>(h, "lambda");
    o.lap_C = required<double>(h, "lap_C");
    o.outer_iters = required<int>(h, "outer_iters");
  }
  if (m.kind == ModelKind::L1M3N) o.radius = required<double>(h, "radius");

  if (m.weights.size() != m.spec.num_weights()) throw FormatError("model: weight length != K");
  if (m.variance && m.variance->size() != m.spec.num_weights())
    throw FormatError("model: variance length != K");
  return m;
}

void save_model(const std::filesystem::path& path, const TrainedModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << model_to_json(model).dump(1) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return model_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    const std::string& f = fields[i];
    if (f.find_first_of(",\"\n") == std::string::npos) {
      out << f;
      continue;
    }
    out << '"';
    for (char ch : f) {
      if (ch == '"') out << '"';
      out << ch;
    }
    out << '"';
  }
  out << '\n';
}

}  // namespace medn
