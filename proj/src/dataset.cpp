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

#include "isingclf/dataset.hpp"

#include <algorithm>
#include <string>

#include "isingclf/errors.hpp"

namespace isingclf {

void LabeledDataset::validate(bool require_all_classes) const {
  const auto n = n_samples();
  if (static_cast<std::size_t>(features.rows()) != n) {
    throw DimensionError("dataset has " + std::to_string(features.rows()) +
                         " feature rows but " + std::to_string(n) + " labels");
  }
  if (!feature_names.empty() && feature_names.size() != n_features()) {
    throw DimensionError("feature_names length does not match feature count");
  }
  if (!sample_ids.empty() && sample_ids.size() != n) {
    throw DimensionError("sample_ids length does not match sample count");
  }
  if (n_classes < 1) throw DegenerateInputError("dataset has no classes");
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] < 0 || labels[i] >= n_classes) {
      throw DomainError("label " + std::to_string(labels[i]) + " of sample " +
                        std::to_string(i) + " outside [0, " + std::to_string(n_classes) + ")");
    }
  }
  if (!features.allFinite()) throw DomainError("dataset contains non-finite feature values");
  if (require_all_classes) {
    const auto counts = class_counts();
    for (int k = 0; k < n_classes; ++k) {
      if (counts[static_cast<std::size_t>(k)] == 0) {
        throw DegenerateInputError("class " + std::to_string(k) + " has no samples");
      }
    }
  }
}

std::vector<std::size_t> LabeledDataset::class_counts() const {
  std::vector<std::size_t> counts(static_cast<std::size_t>(std::max(n_classes, 0)), 0);
  for (int y : labels) {
    if (y >= 0 && y < n_classes) ++counts[static_cast<std::size_t>(y)];
  }
  return counts;
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> rows) const {
  LabeledDataset out;
  out.n_classes = n_classes;
  out.feature_names = feature_names;
  out.label_names = label_names;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), features.cols());
  out.labels.reserve(rows.size());
  if (!sample_ids.empty()) out.sample_ids.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto src = rows[r];
    if (src >= n_samples()) throw DimensionError("subset row index out of range");
    out.features.row(static_cast<Eigen::Index>(r)) = features.row(static_cast<Eigen::Index>(src));
    out.labels.push_back(labels[src]);
    if (!sample_ids.empty()) out.sample_ids.push_back(sample_ids[src]);
  }
  return out;
}

LabeledDataset LabeledDataset::with_features(Eigen::MatrixXd new_features,
                                             const std::string& prefix) const {
  if (static_cast<std::size_t>(new_features.rows()) != n_samples()) {
    throw DimensionError("replacement features have the wrong number of rows");
  }
  LabeledDataset out = *this;
  if (new_features.cols() != features.cols()) {
    out.feature_names.clear();
    for (Eigen::Index j = 0; j < new_features.cols(); ++j) {
      out.feature_names.push_back(prefix + std::to_string(j + 1));
    }
  }
  out.features = std::move(new_features);
  return out;
}

LabeledDataset make_dataset(Eigen::MatrixXd features, std::vector<int> labels, int n_classes) {
  LabeledDataset d;
  if (n_classes <= 0) {
    n_classes = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  }
  d.n_classes = n_classes;
  d.features = std::move(features);
  d.labels = std::move(labels);
  for (Eigen::Index j = 0; j < d.features.cols(); ++j) {
    d.feature_names.push_back("f" + std::to_string(j + 1));
  }
  for (std::size_t i = 0; i < d.labels.size(); ++i) {
    d.sample_ids.push_back("s" + std::to_string(i + 1));
  }
  return d;
}

}  // namespace isingclf
