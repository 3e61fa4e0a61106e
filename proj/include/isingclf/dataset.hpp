// Copyright 2026 The isingclf Authors
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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace isingclf {

// Dense samples-by-features matrix with integer class labels in [0, K).
struct LabeledDataset {
  Eigen::MatrixXd features;  // n_samples x n_features
  std::vector<int> labels;
  int n_classes = 0;
  std::vector<std::string> feature_names;
  std::vector<std::string> sample_ids;
  // Original label values; label_names[k] is the name of class k. May be
  // empty for programmatically built datasets.
  std::vector<std::string> label_names;

  std::size_t n_samples() const { return labels.size(); }
  std::size_t n_features() const { return static_cast<std::size_t>(features.cols()); }

  // Throws DimensionError / DomainError / DegenerateInputError if an
  // invariant is broken. With `require_all_classes`, every class in [0,K)
  // must have at least one sample.
  void validate(bool require_all_classes = true) const;

  std::vector<std::size_t> class_counts() const;

  // Rows at `rows`, in that order. Metadata is carried over.
  LabeledDataset subset(std::span<const std::size_t> rows) const;

  // Same samples with features replaced (e.g. after PCA); names become
  // `prefix1..prefixM` when the column count changes.
  LabeledDataset with_features(Eigen::MatrixXd new_features,
                               const std::string& prefix = "f") const;
};

// Builds a dataset with default ids/names. K is inferred as max(label)+1
// unless given.
LabeledDataset make_dataset(Eigen::MatrixXd features, std::vector<int> labels,
                            int n_classes = 0);

}  // namespace isingclf
