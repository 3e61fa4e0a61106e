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

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "isingclf/dataset.hpp"
#include "isingclf/preprocess.hpp"
#include "isingclf/rbm.hpp"

namespace isingclf {

// A fitted classifier. Linear methods score with the (K-1) x M softmax weights
// (class K-1 is the zero-weight reference); the rbm method scores with its
// free energies instead.
struct TrainedModel {
  Eigen::MatrixXd weights;
  int n_classes = 0;
  std::shared_ptr<const Preprocessing> preprocessing;
  std::string method_tag;
  std::optional<RbmModel> rbm;
  // Non-fatal training notes (e.g. an optimizer that hit its iteration cap).
  std::vector<std::string> diagnostics;

  std::size_t n_features() const;
};

// Softmax probabilities for an already preprocessed sample. Uses
// log-sum-exp over the logits [w_0.x, ..., w_{K-2}.x, 0].
Eigen::VectorXd predict_proba(const TrainedModel& model, const Eigen::VectorXd& x);

// n x K probabilities for every row of `x`.
Eigen::MatrixXd predict_proba(const TrainedModel& model, const Eigen::MatrixXd& x);

// Highest-probability class; ties go to the lowest index.
int classify(const TrainedModel& model, const Eigen::VectorXd& x);
int argmax_lowest(const Eigen::VectorXd& probabilities);

struct MetricSet {
  double accuracy = 0.0;
  double balanced_accuracy = 0.0;
  double auc = 0.0;
  double f1 = 0.0;
};

inline constexpr const char* kMetricNames[] = {"accuracy", "balanced_accuracy", "auc", "f1"};
double metric_value(const MetricSet& m, std::size_t index);

struct MetricResult {
  MetricSet metrics;
  std::vector<std::string> warnings;
};

// Accuracy, balanced accuracy (mean recall over classes present in y_true),
// AUC (Mann-Whitney, ties count 1/2; macro one-vs-rest for K > 2) and F1
// (positive class = label 0 for K = 2; macro for K > 2). `scores` is n x K.
MetricResult compute_metrics(std::span<const int> y_true, std::span<const int> y_pred,
                             const Eigen::MatrixXd& scores, int n_classes);

// Two-class AUC of `scores` for the samples flagged positive.
double binary_auc(std::span<const double> scores, std::span<const bool> positive);

// confusion(i, j) = count of true class i predicted as j.
Eigen::MatrixXi confusion_matrix(std::span<const int> y_true, std::span<const int> y_pred,
                                 int n_classes);

// Evaluates a model on preprocessed data.
MetricResult evaluate(const TrainedModel& model, const LabeledDataset& data);

// Row indices of a per-class split. Class c contributes round(f * n_c)
// samples to train, clamped to [1, n_c - 1].
struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

SplitIndices stratified_split_indices(std::span<const int> labels, int n_classes,
                                      double train_fraction, std::uint64_t seed);

std::pair<LabeledDataset, LabeledDataset> stratified_split(const LabeledDataset& data,
                                                           double train_fraction,
                                                           std::uint64_t seed);

// Class-balanced subsample: class c keeps round(f * n_c) rows (at least 1,
// f == 1 keeps all).
std::vector<std::size_t> stratified_subsample(std::span<const int> labels, int n_classes,
                                              double fraction, std::uint64_t seed);

// folds[i] is the fold id of row i. Each class is shuffled and dealt
// round-robin.
std::vector<int> stratified_folds(std::span<const int> labels, int n_classes, int folds,
                                  std::uint64_t seed);

}  // namespace isingclf
