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

#include "isingclf/model_eval.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <string>

#include "isingclf/errors.hpp"
#include "isingclf/rng.hpp"

namespace isingclf {

std::size_t TrainedModel::n_features() const {
  if (rbm) return static_cast<std::size_t>(rbm->n_features());
  return static_cast<std::size_t>(weights.cols());
}

Eigen::VectorXd predict_proba(const TrainedModel& model, const Eigen::VectorXd& x) {
  if (model.rbm) return predict_rbm(*model.rbm, x);
  if (model.weights.rows() != model.n_classes - 1 || x.size() != model.weights.cols()) {
    throw DimensionError("sample has " + std::to_string(x.size()) + " features, model expects " +
                         std::to_string(model.weights.cols()));
  }
  Eigen::VectorXd logits(model.n_classes);
  logits.head(model.n_classes - 1) = model.weights * x;
  logits(model.n_classes - 1) = 0.0;
  const double top = logits.maxCoeff();
  const Eigen::ArrayXd e = (logits.array() - top).exp();
  return (e / e.sum()).matrix();
}

Eigen::MatrixXd predict_proba(const TrainedModel& model, const Eigen::MatrixXd& x) {
  Eigen::MatrixXd out(x.rows(), model.n_classes);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    out.row(i) = predict_proba(model, Eigen::VectorXd(x.row(i).transpose())).transpose();
  }
  return out;
}

int argmax_lowest(const Eigen::VectorXd& probabilities) {
  int best = 0;
  for (Eigen::Index k = 1; k < probabilities.size(); ++k) {
    if (probabilities(k) > probabilities(best)) best = static_cast<int>(k);
  }
  return best;
}

int classify(const TrainedModel& model, const Eigen::VectorXd& x) {
  return argmax_lowest(predict_proba(model, x));
}

double metric_value(const MetricSet& m, std::size_t index) {
  switch (index) {
    case 0: return m.accuracy;
    case 1: return m.balanced_accuracy;
    case 2: return m.auc;
    case 3: return m.f1;
    default: throw DimensionError("metric index out of range");
  }
}

double binary_auc(std::span<const double> scores, std::span<const bool> positive) {
  if (scores.size() != positive.size()) throw DimensionError("scores and flags differ in length");
  const auto n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] < scores[b]; });
  double rank_sum = 0.0;
  double n_pos = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) {
      if (positive[order[t]]) {
        rank_sum += avg_rank;
        n_pos += 1.0;
      }
    }
    i = j + 1;
  }
  const double n_neg = static_cast<double>(n) - n_pos;
  if (n_pos == 0.0 || n_neg == 0.0) return 0.5;
  return (rank_sum - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg);
}

Eigen::MatrixXi confusion_matrix(std::span<const int> y_true, std::span<const int> y_pred,
                                 int n_classes) {
  if (y_true.size() != y_pred.size()) throw DimensionError("label vectors differ in length");
  Eigen::MatrixXi c = Eigen::MatrixXi::Zero(n_classes, n_classes);
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if (y_true[i] < 0 || y_true[i] >= n_classes || y_pred[i] < 0 || y_pred[i] >= n_classes) {
      throw DomainError("label outside [0, K) at position " + std::to_string(i));
    }
    ++c(y_true[i], y_pred[i]);
  }
  return c;
}

namespace {

double f1_for(const Eigen::MatrixXi& c, int k) {
  const double tp = c(k, k);
  const double fp = c.col(k).sum() - tp;
  const double fn = c.row(k).sum() - tp;
  const double denom = 2.0 * tp + fp + fn;
  return denom == 0.0 ? 0.0 : 2.0 * tp / denom;
}

}  // namespace

MetricResult compute_metrics(std::span<const int> y_true, std::span<const int> y_pred,
                             const Eigen::MatrixXd& scores, int n_classes) {
  const auto n = y_true.size();
  if (n == 0) throw EmptyInputError("no samples to score");
  if (y_pred.size() != n || static_cast<std::size_t>(scores.rows()) != n ||
      scores.cols() != n_classes) {
    throw DimensionError("labels, predictions and scores must describe the same samples");
  }
  MetricResult out;
  const auto c = confusion_matrix(y_true, y_pred, n_classes);
  out.metrics.accuracy = static_cast<double>(c.trace()) / static_cast<double>(n);

  double recall_sum = 0.0;
  int present = 0;
  for (int k = 0; k < n_classes; ++k) {
    const auto support = c.row(k).sum();
    if (support == 0) {
      out.warnings.push_back("class " + std::to_string(k) +
                             " absent from y_true; excluded from balanced accuracy");
      continue;
    }
    recall_sum += static_cast<double>(c(k, k)) / static_cast<double>(support);
    ++present;
  }
  out.metrics.balanced_accuracy = recall_sum / present;

  std::vector<double> col(n);
  std::unique_ptr<bool[]> flags(new bool[n]);
  const auto auc_for = [&](int k) {
    for (std::size_t i = 0; i < n; ++i) {
      col[i] = scores(static_cast<Eigen::Index>(i), k);
      flags[i] = y_true[i] == k;
    }
    return binary_auc(col, std::span<const bool>(flags.get(), n));
  };

  if (n_classes == 2) {
    const auto pos = c.row(0).sum();
    if (pos == 0 || pos == static_cast<int>(n)) {
      out.warnings.push_back("AUC undefined with a single class in y_true; reported as 0.5");
    }
    out.metrics.auc = auc_for(0);
    out.metrics.f1 = f1_for(c, 0);
  } else {
    double auc_sum = 0.0;
    int auc_count = 0;
    double f1_sum = 0.0;
    int f1_count = 0;
    for (int k = 0; k < n_classes; ++k) {
      const auto support = c.row(k).sum();
      if (support > 0 && support < static_cast<int>(n)) {
        auc_sum += auc_for(k);
        ++auc_count;
      }
      if (support > 0 || c.col(k).sum() > 0) {
        f1_sum += f1_for(c, k);
        ++f1_count;
      }
    }
    if (auc_count == 0) out.warnings.push_back("AUC undefined; reported as 0.5");
    out.metrics.auc = auc_count ? auc_sum / auc_count : 0.5;
    out.metrics.f1 = f1_count ? f1_sum / f1_count : 0.0;
  }
  return out;
}

MetricResult evaluate(const TrainedModel& model, const LabeledDataset& data) {
  const Eigen::MatrixXd proba = predict_proba(model, data.features);
  std::vector<int> pred(data.n_samples());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    pred[i] = argmax_lowest(proba.row(static_cast<Eigen::Index>(i)).transpose());
  }
  return compute_metrics(data.labels, pred, proba, data.n_classes);
}

namespace {

std::vector<std::vector<std::size_t>> rows_by_class(std::span<const int> labels, int n_classes) {
  std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(n_classes));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= n_classes) throw DomainError("label outside [0, K)");
    by_class[static_cast<std::size_t>(labels[i])].push_back(i);
  }
  return by_class;
}

}  // namespace

SplitIndices stratified_split_indices(std::span<const int> labels, int n_classes,
                                      double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw DomainError("train fraction must lie in (0, 1)");
  }
  Rng rng(seed);
  SplitIndices out;
  auto by_class = rows_by_class(labels, n_classes);
  for (std::size_t k = 0; k < by_class.size(); ++k) {
    auto& rows = by_class[k];
    if (rows.empty()) continue;
    if (rows.size() < 2) {
      throw StratificationError("class " + std::to_string(k) + " has fewer than 2 samples");
    }
    rng.shuffle(rows.begin(), rows.end());
    const auto n_c = static_cast<double>(rows.size());
    const auto take = std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(train_fraction * n_c)),
                                              1, rows.size() - 1);
    out.train.insert(out.train.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(take));
    out.test.insert(out.test.end(), rows.begin() + static_cast<std::ptrdiff_t>(take), rows.end());
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

std::pair<LabeledDataset, LabeledDataset> stratified_split(const LabeledDataset& data,
                                                           double train_fraction,
                                                           std::uint64_t seed) {
  const auto idx = stratified_split_indices(data.labels, data.n_classes, train_fraction, seed);
  return {data.subset(idx.train), data.subset(idx.test)};
}

std::vector<std::size_t> stratified_subsample(std::span<const int> labels, int n_classes,
                                              double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw DomainError("fraction must lie in (0, 1]");
  if (fraction == 1.0) {
    std::vector<std::size_t> all(labels.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return all;
  }
  Rng rng(seed);
  std::vector<std::size_t> out;
  auto by_class = rows_by_class(labels, n_classes);
  for (std::size_t k = 0; k < by_class.size(); ++k) {
    auto& rows = by_class[k];
    if (rows.empty()) continue;
    const auto take = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(rows.size())));
    if (take == 0) {
      throw StratificationError("fraction " + std::to_string(fraction) + " leaves class " +
                                std::to_string(k) + " without samples");
    }
    rng.shuffle(rows.begin(), rows.end());
    out.insert(out.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(take));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> stratified_folds(std::span<const int> labels, int n_classes, int folds,
                                  std::uint64_t seed) {
  if (folds < 2) throw DomainError("cross-validation needs at least 2 folds");
  Rng rng(seed);
  std::vector<int> fold_of(labels.size(), 0);
  auto by_class = rows_by_class(labels, n_classes);
  std::size_t next = 0;
  for (std::size_t k = 0; k < by_class.size(); ++k) {
    auto& rows = by_class[k];
    if (rows.empty()) continue;
    if (rows.size() < static_cast<std::size_t>(folds)) {
      throw StratificationError("class " + std::to_string(k) + " has " +
                                std::to_string(rows.size()) + " samples, fewer than " +
                                std::to_string(folds) + " folds");
    }
    rng.shuffle(rows.begin(), rows.end());
    for (auto r : rows) fold_of[r] = static_cast<int>(next++ % static_cast<std::size_t>(folds));
  }
  return fold_of;
}

}  // namespace isingclf
