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

// Linear-chain model: features, scoring, Viterbi and loss-augmented decoding.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace medn {

using Vector = std::vector<double>;
using Label = int;
using LabelSeq = std::vector<Label>;

/// Dense row-major matrix. Used for per-position input features (L x d).
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

  const std::vector<double>& data() const { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Weight layout: state feature (k, c) lives at k*m + c, so both label slots
/// of one input feature are adjacent; transition (c, c') at d*m + c*m + c'.
struct FeatureSpec {
  std::size_t d = 1;  // input feature dimension
  std::size_t m = 2;  // label arity

  std::size_t num_state() const { return d * m; }
  std::size_t num_weights() const { return d * m + m * m; }
  std::size_t state_index(std::size_t k, Label c) const {
    return k * m + static_cast<std::size_t>(c);
  }
  std::size_t transition_index(Label from, Label to) const {
    return d * m + static_cast<std::size_t>(from) * m + static_cast<std::size_t>(to);
  }

  /// Throws std::invalid_argument unless d >= 1 and m >= 2.
  void validate() const;

  friend bool operator==(const FeatureSpec&, const FeatureSpec&) = default;
};

struct SequenceInstance {
  Matrix features;  // L x d
  LabelSeq labels;  // length L

  std::size_t length() const { return labels.size(); }

  /// Throws std::invalid_argument if shapes, label range or finiteness fail.
  void validate(const FeatureSpec& spec) const;

  friend bool operator==(const SequenceInstance&, const SequenceInstance&) = default;
};

struct ChainModel {
  FeatureSpec spec;
  Vector weights;

  ChainModel() = default;
  explicit ChainModel(FeatureSpec s) : spec(s), weights(s.num_weights(), 0.0) {}
  ChainModel(FeatureSpec s, Vector w);
};

Vector feature_vector(const FeatureSpec& spec, const Matrix& x, std::span<const Label> y);

/// Adds scale * f(x, y) into out without materializing f.
void accumulate_features(const FeatureSpec& spec, const Matrix& x, std::span<const Label> y,
                         double scale, std::span<double> out);

double score(const ChainModel& model, const Matrix& x, std::span<const Label> y);

/// argmax_y w'f(x, y). Ties go to the lowest label index at every backpointer.
LabelSeq decode(const ChainModel& model, const Matrix& x);

struct AugmentedDecode {
  LabelSeq labels;
  double value = 0.0;  // w'f(x, y) + hamming(y, gold)
};

/// argmax_y [w'f(x, y) + hamming(y, gold)] with the same tie-break as decode.
AugmentedDecode loss_augmented_decode(const ChainModel& model, const SequenceInstance& instance);

std::size_t hamming_loss(std::span<const Label> a, std::span<const Label> b);

}  // namespace medn
