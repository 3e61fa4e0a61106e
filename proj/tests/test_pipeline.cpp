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

#include <cmath>

#include <doctest.h>

#include "fixtures.hpp"
#include "isingclf/errors.hpp"
#include "isingclf/io.hpp"
#include "isingclf/pipeline.hpp"

using namespace isingclf;

namespace {

MethodSettings quick_settings() {
  MethodSettings s;
  s.schedule.sweeps = 100;
  s.restarts = 50;
  s.random_samples = 200;
  s.rbm.epochs = 10;
  s.rbm.n_hidden = 16;
  return s;
}

LabeledDataset separable(std::size_t n_per_class, std::uint64_t seed) {
  return generate_synthetic(separable_binomial_spec(6, 3.0, n_per_class), seed);
}

}  // namespace

TEST_CASE("method names") {
  for (auto m : {Method::sa, Method::random, Method::field, Method::exhaustive, Method::rbm,
                 Method::ridge}) {
    CHECK(parse_method(to_string(m)) == m);
  }
  CHECK_THROWS_AS(parse_method("lasso"), Error);
  CHECK(is_ising_method(Method::field));
  CHECK(!is_ising_method(Method::ridge));
  const auto g = default_grids();
  CHECK(g.at(Method::sa) == std::vector<double>{0.03, 0.1, 0.3, 1, 3});
  CHECK(g.at(Method::ridge).size() == 5);
}

TEST_CASE("cross validation") {
  const auto data = separable(30, 1);
  const auto s = quick_settings();
  const auto single = cross_validate(data, Method::ridge, {0.5}, s, 5, 1);
  CHECK(single.best == 0.5);
  CHECK(single.mean_balanced_accuracy.empty());

  // Field ignores its hyperparameter, so every grid point ties and the first wins.
  const auto tie = cross_validate(data, Method::field, {7, 3}, s, 5, 1);
  CHECK(tie.best == 7);
  CHECK(tie.mean_balanced_accuracy[0] == tie.mean_balanced_accuracy[1]);

  // A vanishing learning rate leaves the RBM at its random initialization.
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    CHECK(cross_validate(data, Method::rbm, {1e-9, 0.05}, s, 5, seed).best == 0.05);
  }
  CHECK_THROWS_AS(cross_validate(separable(3, 1), Method::ridge, {1, 2}, s, 5, 1),
                  StratificationError);
}

TEST_CASE("ridge solution is stationary") {
  const auto data = isingclf::testing::random_dataset(3, 4, 40, 6);
  const double lambda = 0.05;
  const auto fit = fit_ridge_logistic(data, lambda);
  CHECK(fit.converged);
  const double n = static_cast<double>(data.n_samples());
  const double d = 1e-6;
  for (Eigen::Index i = 0; i < fit.weights.size(); ++i) {
    Eigen::MatrixXd a = fit.weights, b = fit.weights;
    a.data()[i] += d;
    b.data()[i] -= d;
    const double obj_a = exact_nll(a, data) / n + 0.5 * lambda * a.squaredNorm();
    const double obj_b = exact_nll(b, data) / n + 0.5 * lambda * b.squaredNorm();
    CHECK(std::abs((obj_a - obj_b) / (2 * d)) < 1e-5);
  }

  const auto flat = fit_ridge_logistic(data, 1e8);
  CHECK(flat.weights.cwiseAbs().maxCoeff() < 1e-6);

  RidgeOptions tight;
  tight.max_iterations = 3;
  tight.tolerance = 1e-14;
  const auto stopped = fit_ridge_logistic(data, 1e-4, tight);
  CHECK(!stopped.converged);
  CHECK(stopped.gradient_norm > 0);
  const auto m = ridge_logistic_baseline(data, {1e-4}, 1, MethodSettings{.ridge = tight});
  CHECK(!m.diagnostics.empty());
}

TEST_CASE("ridge separates separable data") {
  const auto [train, test] = stratified_split(separable(100, 4), 0.8, 3);
  const auto m = ridge_logistic_baseline(train, {1e-3, 1e-2}, 5, quick_settings(), 5);
  CHECK(evaluate(m, test).metrics.balanced_accuracy >= 0.95);
}

TEST_CASE("every method trains and classifies") {
  // Ising builders expect decorrelated inputs, as the pipeline provides.
  const auto raw = separable(40, 2);
  const auto data = fit_preprocessing(raw, 6).apply(raw);
  for (auto m : {Method::sa, Method::random, Method::field, Method::exhaustive, Method::rbm,
                 Method::ridge}) {
    CAPTURE(to_string(m));
    const double hyper = m == Method::sa ? 3.0 : m == Method::ridge ? 1e-3 : m == Method::rbm ? 0.05 : NAN;
    auto settings = quick_settings();
    settings.rbm.epochs = 50;
    const auto model = train_method(m, data, hyper, settings, 3);
    CHECK(model.n_classes == 2);
    CHECK(model.method_tag == to_string(m));
    CHECK(evaluate(model, data).metrics.balanced_accuracy >= 0.9);
    if (is_ising_method(m)) CHECK(model.weights.cwiseAbs().maxCoeff() <= 1.0);
  }
}

TEST_CASE("benchmark report shape and determinism") {
  const auto data = separable(30, 3);
  BenchmarkConfig c;
  c.methods = {Method::field};
  c.n_splits = 2;
  c.pca_k = 4;
  c.seed = 11;
  c.cv_folds = 5;
  c.settings = quick_settings();
  const auto r = run_benchmark(data, c);
  CHECK(r.splits.size() == 2);
  CHECK(r.aggregate.size() == 1);
  CHECK(r.pairwise_tests.empty());
  CHECK(r.aggregate[0].n == 2);
  const double mean = 0.5 * (r.splits[0].test.balanced_accuracy + r.splits[1].test.balanced_accuracy);
  CHECK(r.aggregate[0].mean.balanced_accuracy == doctest::Approx(mean));
  const double sd = std::abs(r.splits[0].test.balanced_accuracy - r.splits[1].test.balanced_accuracy) /
                    std::sqrt(2.0);
  CHECK(r.aggregate[0].sem.balanced_accuracy == doctest::Approx(sd / std::sqrt(2.0)));

  c.methods = {Method::field, Method::ridge};
  const auto a = run_benchmark(data, c);
  const auto b = run_benchmark(data, c);
  CHECK(a.pairwise_tests.size() == 4);
  for (const auto& t : a.pairwise_tests) CHECK(t.family_size == 4);
  CHECK(to_json(a).dump() == to_json(b).dump());
  CHECK(splits_csv(a) == splits_csv(b));
  // Adding a method does not move the field results.
  CHECK(a.splits[0].test.balanced_accuracy == r.splits[0].test.balanced_accuracy);

  c.methods = {Method::exhaustive};
  c.pca_k = 0;
  c.settings.capacity = 0;
  auto wide = generate_synthetic(separable_binomial_spec(27, 1.0, 20), 1);
  CHECK_THROWS_AS(run_benchmark(wide, c), CapacityError);
}

TEST_CASE("fraction sweep") {
  const auto data = separable(40, 5);
  SweepConfig s;
  s.methods = {Method::field, Method::ridge};
  s.fractions = {1.0, 0.5};
  s.n_splits = 2;
  s.pca_k = 3;
  s.seed = 21;
  s.cv_folds = 3;
  s.settings = quick_settings();
  const auto r = fraction_sweep(data, s);
  CHECK(r.splits.size() == 2 * 2 * 2);
  CHECK(r.aggregate.size() == 4);
  CHECK(r.holdout_ids.size() == 16);
  for (const auto& rec : r.splits) CHECK(rec.n_test == 16);
  CHECK(r.splits.back().n_train == 32);

  // At fraction 1 with one split the sweep is a benchmark split on the same partition.
  s.fractions = {1.0};
  s.n_splits = 1;
  const auto one = fraction_sweep(data, s);
  BenchmarkConfig b;
  b.methods = s.methods;
  b.n_splits = 1;
  b.pca_k = 3;
  b.seed = 21;
  b.cv_folds = 3;
  b.settings = s.settings;
  const auto bench = run_benchmark(data, b);
  REQUIRE(one.splits.size() == bench.splits.size());
  for (std::size_t i = 0; i < one.splits.size(); ++i) {
    CHECK(one.splits[i].test.balanced_accuracy == bench.splits[i].test.balanced_accuracy);
    CHECK(one.splits[i].test.auc == bench.splits[i].test.auc);
    CHECK(one.splits[i].hyperparameter == bench.splits[i].hyperparameter);
  }

  s.fractions = {0.01};
  CHECK_THROWS_AS(fraction_sweep(data, s), StratificationError);
}

TEST_CASE("summaries of hand-made records") {
  RunReport r;
  r.kind = "benchmark";
  const double a[] = {0.9, 0.8, 0.85, 0.95, 0.7, 0.88};
  const double b[] = {0.6, 0.7, 0.65, 0.75, 0.5, 0.68};
  for (std::size_t i = 0; i < 6; ++i) {
    SplitRecord x;
    x.split_id = i;
    x.method = "a";
    x.test.balanced_accuracy = a[i];
    SplitRecord y = x;
    y.method = "b";
    y.test.balanced_accuracy = b[i];
    r.splits.push_back(x);
    r.splits.push_back(y);
  }
  summarize(r);
  REQUIRE(r.pairwise_tests.size() == 4);
  const auto& t = *std::find_if(r.pairwise_tests.begin(), r.pairwise_tests.end(),
                                [](const auto& p) { return p.metric == "balanced_accuracy"; });
  CHECK(t.p_raw == doctest::Approx(2.0 / 64));
  CHECK(t.p_adjusted == doctest::Approx(4 * 2.0 / 64));
  const auto& acc = *std::find_if(r.pairwise_tests.begin(), r.pairwise_tests.end(),
                                  [](const auto& p) { return p.metric == "accuracy"; });
  CHECK(acc.degenerate);
  CHECK(acc.p_adjusted == 1.0);
}
