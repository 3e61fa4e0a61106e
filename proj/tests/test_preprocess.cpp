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

#include <doctest.h>

#include "fixtures.hpp"
#include "isingclf/errors.hpp"
#include "isingclf/preprocess.hpp"

using namespace isingclf;

TEST_CASE("z-score") {
  Eigen::MatrixXd x(4, 3);
  x << 1, 5, 2,
       2, 5, 4,
       3, 5, 6,
       4, 5, 9;
  const auto z = zscore_fit(x);
  CHECK(z.flagged == std::vector<bool>{false, true, false});
  CHECK(z.stds(1) == 1.0);
  const auto t = zscore_apply(z, x);
  CHECK(t.col(1).isZero());
  for (Eigen::Index j : {0, 2}) {
    CHECK(std::abs(t.col(j).mean()) < 1e-12);
    CHECK((t.col(j).array() - t.col(j).mean()).square().mean() == doctest::Approx(1.0));
  }
  // Test rows use training statistics, not their own.
  Eigen::MatrixXd other = Eigen::MatrixXd::Constant(2, 3, 10.0);
  const auto o = zscore_apply(z, other);
  CHECK(o(0, 0) == doctest::Approx((10.0 - 2.5) / z.stds(0)));
  CHECK_THROWS_AS(zscore_apply(z, Eigen::MatrixXd::Zero(2, 2)), DimensionError);
}

TEST_CASE("PCA on rank-one data") {
  Eigen::MatrixXd x(5, 2);
  for (int i = 0; i < 5; ++i) x.row(i) << i, 2.0 * i;
  const auto p = pca_fit(x, 2);
  CHECK(p.explained_variance(1) < 1e-20 + 1e-12 * p.explained_variance(0));
  CHECK(std::abs(p.components(0, 1) / p.components(0, 0) - 2.0) < 1e-9);
}

TEST_CASE("PCA reconstruction and ordering") {
  Rng rng(4);
  Eigen::MatrixXd x(12, 5);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.normal();
  const auto p = pca_fit(x, 5);
  const auto y = pca_project(p, x);
  const Eigen::MatrixXd back = y * p.components;
  const Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
  CHECK((back - centered).cwiseAbs().maxCoeff() < 1e-8);
  CHECK((p.components * p.components.transpose()).isApprox(Eigen::MatrixXd::Identity(5, 5), 1e-10));
  for (Eigen::Index i = 1; i < 5; ++i) CHECK(p.explained_variance(i) <= p.explained_variance(i - 1));
  // Variance of each projected column equals its explained variance.
  for (Eigen::Index j = 0; j < 5; ++j) {
    const double var = y.col(j).squaredNorm() / 11.0;
    CHECK(var == doctest::Approx(p.explained_variance(j)));
  }
  CHECK_THROWS_AS(pca_fit(x, 6), CapacityError);
  CHECK_THROWS_AS(pca_fit(x, 0), CapacityError);
}

TEST_CASE("top features by PC1") {
  PcaModel m;
  m.components = Eigen::RowVector3d(0.9, -0.1, 0.4);
  m.explained_variance = Eigen::VectorXd::Ones(1);
  m.center = Eigen::Vector3d::Zero();
  CHECK(top_features_by_pc1(m, 2) == std::vector<std::size_t>{0, 2});
  auto all = top_features_by_pc1(m, 3);
  std::sort(all.begin(), all.end());
  CHECK(all == std::vector<std::size_t>{0, 1, 2});

  // Signal only on features 1 and 3, tiny noise elsewhere.
  Rng rng(2);
  Eigen::MatrixXd x(40, 5);
  for (Eigen::Index i = 0; i < 40; ++i) {
    const double t = rng.normal();
    for (Eigen::Index j = 0; j < 5; ++j) x(i, j) = 1e-3 * rng.normal();
    x(i, 1) += 2 * t;
    x(i, 3) -= t;
  }
  auto top = top_features_by_pc1(pca_fit(x, 2), 2);
  CHECK(top == std::vector<std::size_t>{1, 3});
}

TEST_CASE("preprocessing pipeline on datasets") {
  const auto d = isingclf::testing::random_dataset(2, 6, 30, 1);
  const auto prep = fit_preprocessing(d, 3);
  const auto t = prep.apply(d);
  CHECK(t.n_features() == 3);
  CHECK(t.feature_names == std::vector<std::string>{"PC1", "PC2", "PC3"});
  CHECK(t.labels == d.labels);
  CHECK(fit_preprocessing(d, 0).apply(d).n_features() == 6);
}
