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
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "isingclf/dataset.hpp"

namespace isingclf {

struct ZScoreStats {
  Eigen::VectorXd means;
  Eigen::VectorXd stds;           // population std; flagged entries are 1
  std::vector<bool> flagged;      // std < 1e-12 on the training data
};

ZScoreStats zscore_fit(const Eigen::MatrixXd& train);
ZScoreStats zscore_fit(const LabeledDataset& train);
Eigen::MatrixXd zscore_apply(const ZScoreStats& stats, const Eigen::MatrixXd& data);
LabeledDataset zscore_apply(const ZScoreStats& stats, const LabeledDataset& data);

// Principal components of the centered training matrix, computed by SVD.
// Each component is sign-normalized so its largest-magnitude entry is
// positive.
struct PcaModel {
  Eigen::MatrixXd components;         // k x M, orthonormal rows
  Eigen::VectorXd explained_variance; // k, non-increasing (divisor n - 1)
  Eigen::VectorXd center;             // M

  std::size_t k() const { return static_cast<std::size_t>(components.rows()); }
};

PcaModel pca_fit(const Eigen::MatrixXd& train, std::size_t k);
PcaModel pca_fit(const LabeledDataset& train, std::size_t k);
Eigen::MatrixXd pca_project(const PcaModel& model, const Eigen::MatrixXd& data);
LabeledDataset pca_project(const PcaModel& model, const LabeledDataset& data);

// Indices of the n largest |loading| entries of the first component, by
// descending magnitude (ties by index).
std::vector<std::size_t> top_features_by_pc1(const PcaModel& model, std::size_t n = 44);

// Fitted transform from raw features to model inputs: z-score, then optional
// PCA projection.
struct Preprocessing {
  ZScoreStats zscore;
  std::optional<PcaModel> pca;

  Eigen::MatrixXd apply(const Eigen::MatrixXd& raw) const;
  LabeledDataset apply(const LabeledDataset& raw) const;
};

// pca_k == 0 skips PCA.
Preprocessing fit_preprocessing(const LabeledDataset& train, std::size_t pca_k);

}  // namespace isingclf
