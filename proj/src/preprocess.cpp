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

#include "isingclf/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/SVD>

#include "isingclf/errors.hpp"

namespace isingclf {

ZScoreStats zscore_fit(const Eigen::MatrixXd& train) {
  if (train.rows() == 0) throw EmptyInputError("cannot fit z-score statistics on no samples");
  ZScoreStats stats;
  stats.means = train.colwise().mean().transpose();
  const Eigen::MatrixXd centered = train.rowwise() - stats.means.transpose();
  stats.stds = (centered.colwise().squaredNorm() / static_cast<double>(train.rows()))
                   .cwiseSqrt()
                   .transpose();
  stats.flagged.assign(static_cast<std::size_t>(train.cols()), false);
  for (Eigen::Index j = 0; j < stats.stds.size(); ++j) {
    if (stats.stds(j) < 1e-12) {
      stats.stds(j) = 1.0;
      stats.flagged[static_cast<std::size_t>(j)] = true;
    }
  }
  return stats;
}

ZScoreStats zscore_fit(const LabeledDataset& train) { return zscore_fit(train.features); }

Eigen::MatrixXd zscore_apply(const ZScoreStats& stats, const Eigen::MatrixXd& data) {
  if (data.cols() != stats.means.size()) {
    throw DimensionError("z-score statistics fitted on " + std::to_string(stats.means.size()) +
                         " features, data has " + std::to_string(data.cols()));
  }
  return (data.rowwise() - stats.means.transpose()).array().rowwise() /
         stats.stds.transpose().array();
}

LabeledDataset zscore_apply(const ZScoreStats& stats, const LabeledDataset& data) {
  return data.with_features(zscore_apply(stats, data.features));
}

PcaModel pca_fit(const Eigen::MatrixXd& train, std::size_t k) {
  const auto n = static_cast<std::size_t>(train.rows());
  const auto m = static_cast<std::size_t>(train.cols());
  if (k == 0 || k > std::min(m, n)) {
    throw CapacityError("cannot retain " + std::to_string(k) + " components from " +
                        std::to_string(n) + " samples x " + std::to_string(m) + " features");
  }
  if (n < 2) throw DegenerateInputError("PCA needs at least two samples");

  PcaModel model;
  model.center = train.colwise().mean().transpose();
  const Eigen::MatrixXd centered = train.rowwise() - model.center.transpose();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const auto kk = static_cast<Eigen::Index>(k);
  model.components = svd.matrixV().leftCols(kk).transpose();
  model.explained_variance =
      svd.singularValues().head(kk).array().square() / static_cast<double>(n - 1);

  for (Eigen::Index r = 0; r < kk; ++r) {
    Eigen::Index arg = 0;
    model.components.row(r).cwiseAbs().maxCoeff(&arg);
    if (model.components(r, arg) < 0.0) model.components.row(r) *= -1.0;
  }
  return model;
}

PcaModel pca_fit(const LabeledDataset& train, std::size_t k) { return pca_fit(train.features, k); }

Eigen::MatrixXd pca_project(const PcaModel& model, const Eigen::MatrixXd& data) {
  if (data.cols() != model.center.size()) {
    throw DimensionError("PCA fitted on " + std::to_string(model.center.size()) +
                         " features, data has " + std::to_string(data.cols()));
  }
  return (data.rowwise() - model.center.transpose()) * model.components.transpose();
}

LabeledDataset pca_project(const PcaModel& model, const LabeledDataset& data) {
  return data.with_features(pca_project(model, data.features), "PC");
}

std::vector<std::size_t> top_features_by_pc1(const PcaModel& model, std::size_t n) {
  if (model.k() == 0) throw EmptyInputError("PCA model has no components");
  const auto m = static_cast<std::size_t>(model.components.cols());
  if (n > m) {
    throw CapacityError("requested " + std::to_string(n) + " features from " + std::to_string(m));
  }
  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  const auto pc1 = model.components.row(0);
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) {
    return std::abs(pc1(static_cast<Eigen::Index>(a))) > std::abs(pc1(static_cast<Eigen::Index>(b)));
  });
  idx.resize(n);
  return idx;
}

Eigen::MatrixXd Preprocessing::apply(const Eigen::MatrixXd& raw) const {
  Eigen::MatrixXd z = zscore_apply(zscore, raw);
  return pca ? pca_project(*pca, z) : z;
}

LabeledDataset Preprocessing::apply(const LabeledDataset& raw) const {
  LabeledDataset z = zscore_apply(zscore, raw);
  return pca ? pca_project(*pca, z) : z;
}

Preprocessing fit_preprocessing(const LabeledDataset& train, std::size_t pca_k) {
  Preprocessing p;
  p.zscore = zscore_fit(train);
  if (pca_k > 0) p.pca = pca_fit(zscore_apply(p.zscore, train.features), pca_k);
  return p;
}

}  // namespace isingclf
