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
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "isingclf/dataset.hpp"
#include "isingclf/model_eval.hpp"
#include "isingclf/rbm.hpp"
#include "isingclf/solvers.hpp"

namespace isingclf {

enum class Method { sa, random, field, exhaustive, rbm, ridge };

std::string_view to_string(Method method);
// Throws Error on an unknown name.
Method parse_method(std::string_view name);
bool is_ising_method(Method method);

struct RidgeOptions {
  double tolerance = 1e-6;
  std::size_t max_iterations = 50000;
};

// Knobs shared by every training call in a run.
struct MethodSettings {
  AnnealSchedule schedule;        // beta_final is overridden by the grid
  std::size_t restarts = 1000;
  std::size_t random_samples = 1000;
  std::size_t top_n = 20;
  std::size_t exhaustive_keep = 1000;
  std::size_t capacity = kDefaultCapacity;
  RbmTrainConfig rbm;             // learning_rate is overridden by the grid
  RidgeOptions ridge;
  std::size_t threads = 1;
};

// The tuned hyperparameter per method: beta_final (sa), lambda (ridge),
// learning rate (rbm). Methods without an entry are not tuned.
using HyperparameterGrids = std::map<Method, std::vector<double>>;
HyperparameterGrids default_grids();

// Trains on already preprocessed data. `hyperparameter` is ignored by
// untuned methods. The returned model has no preprocessing attached.
TrainedModel train_method(Method method, const LabeledDataset& train, double hyperparameter,
                          const MethodSettings& settings, std::uint64_t seed);

struct CvResult {
  double best = 0.0;
  std::vector<double> mean_balanced_accuracy;  // per grid point
};

// Stratified k-fold selection by mean validation balanced accuracy; ties go
// to the earliest grid point. A one-point grid is returned without search.
CvResult cross_validate(const LabeledDataset& train, Method method,
                        const std::vector<double>& grid, const MethodSettings& settings,
                        int folds, std::uint64_t seed);

struct RidgeFit {
  Eigen::MatrixXd weights;  // (K-1) x M
  double gradient_norm = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

// Minimizes (1/n) NLL(W) + (lambda/2) ||W||^2 by accelerated full-batch
// gradient descent with adaptive restart.
RidgeFit fit_ridge_logistic(const LabeledDataset& train, double lambda,
                            const RidgeOptions& options = {});

// Lambda chosen by cross_validate, then refit on all of `train`.
TrainedModel ridge_logistic_baseline(const LabeledDataset& train,
                                     const std::vector<double>& lambda_grid,
                                     std::uint64_t seed, const MethodSettings& settings = {},
                                     int folds = 10);

struct BenchmarkConfig {
  std::vector<Method> methods;
  std::size_t n_splits = 100;
  double train_fraction = 0.8;
  std::size_t pca_k = 44;  // 0 skips PCA
  std::uint64_t seed = 0;
  int cv_folds = 10;
  MethodSettings settings;
  HyperparameterGrids grids = default_grids();
};

struct SweepConfig {
  std::vector<Method> methods;
  std::vector<double> fractions{0.95, 0.85, 0.75, 0.65, 0.55, 0.45, 0.35, 0.25, 0.2};
  std::size_t n_splits = 50;
  double holdout_train_fraction = 0.8;
  std::size_t pca_k = 44;
  std::uint64_t seed = 0;
  int cv_folds = 10;
  MethodSettings settings;
  HyperparameterGrids grids = default_grids();
};

struct SplitRecord {
  std::size_t split_id = 0;
  std::optional<double> fraction;
  std::string method;
  MetricSet test;
  MetricSet train;
  std::optional<double> hyperparameter;
  std::size_t n_train = 0;
  std::size_t n_test = 0;

  double overfitting_gap() const { return train.balanced_accuracy - test.balanced_accuracy; }
};

struct AggregateRow {
  std::optional<double> fraction;
  std::string method;
  std::size_t n = 0;
  MetricSet mean;
  MetricSet sem;
  double mean_gap = 0.0;
  double sem_gap = 0.0;
};

struct PairwiseTest {
  std::optional<double> fraction;
  std::string metric;
  std::string method_a;
  std::string method_b;
  double statistic = 0.0;
  double p_raw = 1.0;
  double p_adjusted = 1.0;
  std::size_t family_size = 0;
  bool degenerate = false;
};

struct RunReport {
  std::string kind;  // "benchmark" or "sweep"
  std::vector<SplitRecord> splits;
  std::vector<AggregateRow> aggregate;
  std::vector<PairwiseTest> pairwise_tests;
  nlohmann::ordered_json config_snapshot;
  std::vector<std::string> notices;
  // Sweep only: ids of the fixed held-out test rows.
  std::vector<std::string> holdout_ids;
};

RunReport run_benchmark(const LabeledDataset& data, const BenchmarkConfig& config);
RunReport fraction_sweep(const LabeledDataset& data, const SweepConfig& config);

// Mean/SEM rows and Bonferroni-adjusted pairwise Wilcoxon tests, grouped by
// fraction. The family for the correction is every (method pair, metric) test
// within one fraction group.
void summarize(RunReport& report);

nlohmann::ordered_json to_json(const MethodSettings& settings);
nlohmann::ordered_json to_json(const BenchmarkConfig& config);
nlohmann::ordered_json to_json(const SweepConfig& config);
nlohmann::ordered_json to_json(const RunReport& report);

// One row per (split, method) with test and train metrics.
std::string splits_csv(const RunReport& report);
// One row per aggregate entry.
std::string aggregate_csv(const RunReport& report);

}  // namespace isingclf
