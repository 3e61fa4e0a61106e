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

#include "isingclf/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>

#include "isingclf/errors.hpp"
#include "isingclf/io.hpp"
#include "isingclf/ising.hpp"
#include "isingclf/preprocess.hpp"
#include "isingclf/rng.hpp"
#include "isingclf/stats.hpp"
#include "parallel.hpp"

namespace isingclf {

namespace {

constexpr std::uint64_t kSplitStream = 1;
constexpr std::uint64_t kSubsampleStream = 2;
constexpr std::uint64_t kTrainStream = 100;
constexpr std::uint64_t kCvStream = 200;
constexpr std::uint64_t kFoldStream = 300;

constexpr Method kAllMethods[] = {Method::sa,         Method::random, Method::field,
                                  Method::exhaustive, Method::rbm,    Method::ridge};

double no_hyperparameter() { return std::numeric_limits<double>::quiet_NaN(); }

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::sa: return "sa";
    case Method::random: return "random";
    case Method::field: return "field";
    case Method::exhaustive: return "exhaustive";
    case Method::rbm: return "rbm";
    case Method::ridge: return "ridge";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  for (auto m : kAllMethods) {
    if (to_string(m) == name) return m;
  }
  throw Error("unknown method '" + std::string(name) +
              "' (expected sa, random, field, exhaustive, rbm or ridge)");
}

bool is_ising_method(Method method) {
  return method == Method::sa || method == Method::random || method == Method::field ||
         method == Method::exhaustive;
}

HyperparameterGrids default_grids() {
  return {{Method::sa, {0.03, 0.1, 0.3, 1.0, 3.0}},
          {Method::ridge, {1e-4, 1e-3, 1e-2, 1e-1, 1.0}}};
}

// ---------------------------------------------------------------------------
// Ridge-penalized multinomial logistic regression

namespace {

// Gradient of (1/n) NLL + (lambda/2)||W||^2 at W; also returns the objective.
double ridge_objective(const Eigen::MatrixXd& X, const std::vector<int>& y, int K, double lambda,
                       const Eigen::MatrixXd& W, Eigen::MatrixXd* grad) {
  const auto n = X.rows();
  const Eigen::MatrixXd logits = X * W.transpose();  // n x (K-1)
  Eigen::MatrixXd residual(n, K - 1);
  double nll = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double top = std::max(0.0, logits.row(i).maxCoeff());
    const Eigen::ArrayXd e = (logits.row(i).array() - top).exp();
    const double z = std::exp(-top) + e.sum();
    nll += top + std::log(z);
    const int yi = y[static_cast<std::size_t>(i)];
    if (yi < K - 1) nll -= logits(i, yi);
    residual.row(i) = (e / z).matrix().transpose();
    if (yi < K - 1) residual(i, yi) -= 1.0;
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  if (grad) *grad = inv_n * residual.transpose() * X + lambda * W;
  return inv_n * nll + 0.5 * lambda * W.squaredNorm();
}

}  // namespace

RidgeFit fit_ridge_logistic(const LabeledDataset& train, double lambda, const RidgeOptions& options) {
  train.validate(/*require_all_classes=*/false);
  if (train.n_classes < 2) throw DegenerateInputError("ridge baseline needs K >= 2");
  if (!(lambda >= 0.0)) throw DomainError("lambda must be non-negative");
  if (train.n_samples() == 0) throw EmptyInputError("ridge baseline needs training samples");
  const int K = train.n_classes;
  const auto& X = train.features;
  const auto M = X.cols();

  // Lipschitz bound of the gradient: the softmax Hessian is at most I/2.
  const Eigen::MatrixXd gram = X.transpose() * X / static_cast<double>(X.rows());
  const double top_eig =
      M > 0 ? Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gram, Eigen::EigenvaluesOnly)
                  .eigenvalues()
                  .maxCoeff()
            : 0.0;
  const double L = 0.5 * std::max(top_eig, 0.0) + lambda + 1e-12;
  const double step = 1.0 / L;

  RidgeFit fit;
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(K - 1, M);
  Eigen::MatrixXd Y = W;
  Eigen::MatrixXd grad;
  double t = 1.0;
  for (std::size_t it = 1; it <= options.max_iterations; ++it) {
    ridge_objective(X, train.labels, K, lambda, Y, &grad);
    const Eigen::MatrixXd W_next = Y - step * grad;
    // Adaptive restart when the momentum direction opposes descent.
    if ((grad.array() * (W_next - W).array()).sum() > 0.0) {
      t = 1.0;
      ridge_objective(X, train.labels, K, lambda, W, &grad);
      W -= step * grad;
      Y = W;
    } else {
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      Y = W_next + ((t - 1.0) / t_next) * (W_next - W);
      W = W_next;
      t = t_next;
    }
    fit.iterations = it;
    if (it % 10 == 0 || it == options.max_iterations) {
      Eigen::MatrixXd g;
      ridge_objective(X, train.labels, K, lambda, W, &g);
      fit.gradient_norm = g.norm();
      if (fit.gradient_norm < options.tolerance) {
        fit.converged = true;
        break;
      }
    }
  }
  fit.weights = W;
  return fit;
}

// ---------------------------------------------------------------------------
// Training and model selection

TrainedModel train_method(Method method, const LabeledDataset& train, double hyperparameter,
                          const MethodSettings& settings, std::uint64_t seed) {
  TrainedModel model;
  model.n_classes = train.n_classes;
  model.method_tag = std::string(to_string(method));
  const bool tuned = !std::isnan(hyperparameter);

  if (is_ising_method(method)) {
    const auto built = build_multiclass_problem(train, BuildOptions{settings.capacity});
    // The annealer schedules assume coefficients in [-1, 1].
    const auto problem = scale_to_unit(built.problem);
    Eigen::VectorXd flat;
    switch (method) {
      case Method::sa: {
        AnnealSchedule schedule = settings.schedule;
        if (tuned) schedule.beta_final = hyperparameter;
        const auto result = simulated_anneal(
            problem, schedule, AnnealOptions{settings.restarts, seed, settings.threads});
        flat = ensemble_average(problem, result, settings.top_n);
        break;
      }
      case Method::random:
        flat = ensemble_average(problem, random_search(problem, settings.random_samples, seed),
                                settings.top_n);
        break;
      case Method::exhaustive:
        flat = ensemble_average(problem, exhaustive_solve(problem, settings.exhaustive_keep),
                                settings.top_n);
        break;
      default:
        flat = field_solve(problem).as_real();
        break;
    }
    model.weights = built.layout.to_weight_matrix(flat);
    return model;
  }

  if (method == Method::ridge) {
    const auto fit = fit_ridge_logistic(train, tuned ? hyperparameter : 1e-2, settings.ridge);
    model.weights = fit.weights;
    if (!fit.converged) {
      std::ostringstream msg;
      msg << "ridge did not converge in " << fit.iterations
          << " iterations; final gradient norm " << fit.gradient_norm;
      model.diagnostics.push_back(msg.str());
    }
    return model;
  }

  RbmTrainConfig config = settings.rbm;
  if (tuned) config.learning_rate = hyperparameter;
  config.seed = seed;
  model.rbm = train_rbm(train, config);
  return model;
}

CvResult cross_validate(const LabeledDataset& train, Method method, const std::vector<double>& grid,
                        const MethodSettings& settings, int folds, std::uint64_t seed) {
  if (grid.empty()) throw EmptyInputError("hyperparameter grid is empty");
  CvResult out;
  if (grid.size() == 1) {
    out.best = grid.front();
    return out;
  }
  const auto fold_of = stratified_folds(train.labels, train.n_classes, folds, seed);
  out.mean_balanced_accuracy.assign(grid.size(), 0.0);
  for (int f = 0; f < folds; ++f) {
    std::vector<std::size_t> fit_rows, val_rows;
    for (std::size_t i = 0; i < fold_of.size(); ++i) {
      (fold_of[i] == f ? val_rows : fit_rows).push_back(i);
    }
    const auto fit_data = train.subset(fit_rows);
    const auto val_data = train.subset(val_rows);
    const auto fold_seed = derive_seed(seed, kFoldStream, static_cast<std::uint64_t>(f));
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const auto model = train_method(method, fit_data, grid[g], settings, fold_seed);
      out.mean_balanced_accuracy[g] += evaluate(model, val_data).metrics.balanced_accuracy;
    }
  }
  std::size_t best = 0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    out.mean_balanced_accuracy[g] /= folds;
    if (out.mean_balanced_accuracy[g] > out.mean_balanced_accuracy[best]) best = g;
  }
  out.best = grid[best];
  return out;
}

TrainedModel ridge_logistic_baseline(const LabeledDataset& train,
                                     const std::vector<double>& lambda_grid, std::uint64_t seed,
                                     const MethodSettings& settings, int folds) {
  if (train.n_classes < 2) throw DegenerateInputError("ridge baseline needs K >= 2");
  const auto cv = cross_validate(train, Method::ridge, lambda_grid, settings, folds, seed);
  return train_method(Method::ridge, train, cv.best, settings, seed);
}

// ---------------------------------------------------------------------------
// Protocols

namespace {

struct MethodRun {
  MetricSet test;
  MetricSet train;
  std::optional<double> hyperparameter;
  std::vector<std::string> notes;
};

std::vector<double> grid_for(const HyperparameterGrids& grids, Method m) {
  const auto it = grids.find(m);
  if (it == grids.end() || it->second.empty()) return {no_hyperparameter()};
  return it->second;
}

void check_capacity(const LabeledDataset& data, const std::vector<Method>& methods,
                    std::size_t pca_k, const MethodSettings& settings) {
  if (methods.empty()) throw EmptyInputError("no methods requested");
  const auto m = pca_k > 0 ? pca_k : data.n_features();
  const auto spins = m * static_cast<std::size_t>(std::max(data.n_classes - 1, 0));
  for (auto method : methods) {
    if (!is_ising_method(method)) continue;
    if (settings.capacity > 0 && spins > settings.capacity) {
      throw CapacityError("method " + std::string(to_string(method)) + " needs " +
                          std::to_string(spins) + " spins (features x (K-1)), capacity is " +
                          std::to_string(settings.capacity));
    }
    if (method == Method::exhaustive && spins > kExhaustiveLimit) {
      throw CapacityError("exhaustive method limited to " + std::to_string(kExhaustiveLimit) +
                          " spins, run needs " + std::to_string(spins));
    }
  }
}

// Fits preprocessing on `train_raw`, then tunes, trains and scores every method.
std::vector<MethodRun> run_methods(const LabeledDataset& train_raw, const LabeledDataset& test_raw,
                                   const std::vector<Method>& methods, std::size_t pca_k,
                                   int cv_folds, const MethodSettings& settings,
                                   const HyperparameterGrids& grids, std::uint64_t master,
                                   std::size_t split_id) {
  const auto prep = std::make_shared<const Preprocessing>(fit_preprocessing(train_raw, pca_k));
  const auto train = prep->apply(train_raw);
  const auto test = prep->apply(test_raw);
  std::vector<MethodRun> runs;
  for (auto method : methods) {
    const auto id = static_cast<std::uint64_t>(method);
    const auto grid = grid_for(grids, method);
    try {
      const auto cv = cross_validate(train, method, grid, settings, cv_folds,
                                     derive_seed(master, kCvStream + id, split_id));
      auto model = train_method(method, train, cv.best, settings,
                                derive_seed(master, kTrainStream + id, split_id));
      model.preprocessing = prep;
      MethodRun run;
      run.test = evaluate(model, test).metrics;
      run.train = evaluate(model, train).metrics;
      if (!std::isnan(cv.best)) run.hyperparameter = cv.best;
      run.notes = model.diagnostics;
      runs.push_back(std::move(run));
    } catch (const Error& e) {
      throw Error("split " + std::to_string(split_id) + ", method " +
                  std::string(to_string(method)) + ": " + e.what());
    }
  }
  return runs;
}

nlohmann::ordered_json dataset_summary(const LabeledDataset& data) {
  nlohmann::ordered_json j;
  j["n_samples"] = data.n_samples();
  j["n_features"] = data.n_features();
  j["n_classes"] = data.n_classes;
  j["label_names"] = data.label_names;
  j["class_counts"] = data.class_counts();
  return j;
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sem_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double mu = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - mu) * (x - mu);
  return std::sqrt(ss / static_cast<double>(v.size() - 1)) / std::sqrt(static_cast<double>(v.size()));
}

}  // namespace

RunReport run_benchmark(const LabeledDataset& data, const BenchmarkConfig& config) {
  data.validate();
  check_capacity(data, config.methods, config.pca_k, config.settings);
  if (config.n_splits < 1) throw DomainError("n_splits must be >= 1");

  RunReport report;
  report.kind = "benchmark";
  report.config_snapshot = to_json(config);
  report.config_snapshot["dataset"] = dataset_summary(data);

  std::vector<std::vector<MethodRun>> per_split(config.n_splits);
  std::vector<std::pair<std::size_t, std::size_t>> sizes(config.n_splits);
  MethodSettings inner = config.settings;
  if (config.settings.threads > 1) inner.threads = 1;
  detail::parallel_for(config.n_splits, config.settings.threads, [&](std::size_t s) {
    const auto idx = stratified_split_indices(data.labels, data.n_classes, config.train_fraction,
                                              derive_seed(config.seed, kSplitStream, s));
    const auto train_raw = data.subset(idx.train);
    const auto test_raw = data.subset(idx.test);
    sizes[s] = {idx.train.size(), idx.test.size()};
    per_split[s] = run_methods(train_raw, test_raw, config.methods, config.pca_k, config.cv_folds,
                               inner, config.grids, config.seed, s);
  });

  for (std::size_t s = 0; s < config.n_splits; ++s) {
    for (std::size_t m = 0; m < config.methods.size(); ++m) {
      auto& run = per_split[s][m];
      SplitRecord rec;
      rec.split_id = s;
      rec.method = std::string(to_string(config.methods[m]));
      rec.test = run.test;
      rec.train = run.train;
      rec.hyperparameter = run.hyperparameter;
      rec.n_train = sizes[s].first;
      rec.n_test = sizes[s].second;
      for (auto& note : run.notes) {
        report.notices.push_back("split " + std::to_string(s) + ", " + rec.method + ": " + note);
      }
      report.splits.push_back(std::move(rec));
    }
  }
  summarize(report);
  return report;
}

RunReport fraction_sweep(const LabeledDataset& data, const SweepConfig& config) {
  data.validate();
  check_capacity(data, config.methods, config.pca_k, config.settings);
  if (config.fractions.empty()) throw EmptyInputError("no training fractions requested");
  for (double f : config.fractions) {
    if (!(f > 0.0 && f <= 1.0)) throw DomainError("training fractions must lie in (0, 1]");
  }
  if (config.n_splits < 1) throw DomainError("n_splits must be >= 1");

  RunReport report;
  report.kind = "sweep";
  report.config_snapshot = to_json(config);
  report.config_snapshot["dataset"] = dataset_summary(data);

  // One held-out test set for the whole sweep.
  const auto holdout = stratified_split_indices(data.labels, data.n_classes,
                                                config.holdout_train_fraction,
                                                derive_seed(config.seed, kSplitStream, 0));
  const auto pool = data.subset(holdout.train);
  const auto test_raw = data.subset(holdout.test);
  for (auto i : holdout.test) {
    report.holdout_ids.push_back(data.sample_ids.empty() ? std::to_string(i) : data.sample_ids[i]);
  }

  const auto n_units = config.fractions.size() * config.n_splits;
  std::vector<std::vector<MethodRun>> runs(n_units);
  std::vector<std::size_t> train_sizes(n_units);
  MethodSettings inner = config.settings;
  if (config.settings.threads > 1) inner.threads = 1;
  detail::parallel_for(n_units, config.settings.threads, [&](std::size_t unit) {
    const auto fi = unit / config.n_splits;
    const auto s = unit % config.n_splits;
    const auto rows = stratified_subsample(
        pool.labels, pool.n_classes, config.fractions[fi],
        derive_seed(config.seed, kSubsampleStream, fi * 1000003ULL + s));
    const auto train_raw = pool.subset(rows);
    train_sizes[unit] = rows.size();
    runs[unit] = run_methods(train_raw, test_raw, config.methods, config.pca_k, config.cv_folds,
                             inner, config.grids, config.seed, s);
  });

  for (std::size_t unit = 0; unit < n_units; ++unit) {
    const auto fi = unit / config.n_splits;
    const auto s = unit % config.n_splits;
    for (std::size_t m = 0; m < config.methods.size(); ++m) {
      auto& run = runs[unit][m];
      SplitRecord rec;
      rec.split_id = s;
      rec.fraction = config.fractions[fi];
      rec.method = std::string(to_string(config.methods[m]));
      rec.test = run.test;
      rec.train = run.train;
      rec.hyperparameter = run.hyperparameter;
      rec.n_train = train_sizes[unit];
      rec.n_test = holdout.test.size();
      for (auto& note : run.notes) {
        report.notices.push_back("fraction " + std::to_string(config.fractions[fi]) + ", split " +
                                 std::to_string(s) + ", " + rec.method + ": " + note);
      }
      report.splits.push_back(std::move(rec));
    }
  }
  summarize(report);
  return report;
}

void summarize(RunReport& report) {
  report.aggregate.clear();
  report.pairwise_tests.clear();

  // Groups keyed by fraction, in order of first appearance.
  std::vector<std::optional<double>> groups;
  for (const auto& r : report.splits) {
    if (std::find(groups.begin(), groups.end(), r.fraction) == groups.end()) {
      groups.push_back(r.fraction);
    }
  }
  constexpr std::size_t kMetrics = std::size(kMetricNames);
  for (const auto& group : groups) {
    std::vector<std::string> methods;
    for (const auto& r : report.splits) {
      if (r.fraction == group &&
          std::find(methods.begin(), methods.end(), r.method) == methods.end()) {
        methods.push_back(r.method);
      }
    }
    // values[method][metric] ordered by split_id; gap stored as metric index kMetrics.
    std::vector<std::vector<std::vector<double>>> values(
        methods.size(), std::vector<std::vector<double>>(kMetrics + 1));
    std::vector<std::vector<std::size_t>> split_ids(methods.size());
    for (const auto& r : report.splits) {
      if (r.fraction != group) continue;
      const auto m = static_cast<std::size_t>(
          std::find(methods.begin(), methods.end(), r.method) - methods.begin());
      for (std::size_t k = 0; k < kMetrics; ++k) values[m][k].push_back(metric_value(r.test, k));
      values[m][kMetrics].push_back(r.overfitting_gap());
      split_ids[m].push_back(r.split_id);
    }
    for (std::size_t m = 0; m < methods.size(); ++m) {
      AggregateRow row;
      row.fraction = group;
      row.method = methods[m];
      row.n = values[m][0].size();
      double* mean_fields[] = {&row.mean.accuracy, &row.mean.balanced_accuracy, &row.mean.auc,
                               &row.mean.f1};
      double* sem_fields[] = {&row.sem.accuracy, &row.sem.balanced_accuracy, &row.sem.auc,
                              &row.sem.f1};
      for (std::size_t k = 0; k < kMetrics; ++k) {
        *mean_fields[k] = mean_of(values[m][k]);
        *sem_fields[k] = sem_of(values[m][k]);
      }
      row.mean_gap = mean_of(values[m][kMetrics]);
      row.sem_gap = sem_of(values[m][kMetrics]);
      report.aggregate.push_back(row);
    }

    const auto pairs = methods.size() * (methods.size() - 1) / 2;
    const auto family = pairs * kMetrics;
    for (std::size_t k = 0; k < kMetrics; ++k) {
      for (std::size_t a = 0; a < methods.size(); ++a) {
        for (std::size_t b = a + 1; b < methods.size(); ++b) {
          if (split_ids[a] != split_ids[b]) {
            throw Error("methods " + methods[a] + " and " + methods[b] +
                        " were not evaluated on the same splits");
          }
          const auto w = wilcoxon_signed_rank({values[a][k], values[b][k]});
          PairwiseTest t;
          t.fraction = group;
          t.metric = kMetricNames[k];
          t.method_a = methods[a];
          t.method_b = methods[b];
          t.statistic = w.statistic;
          t.p_raw = w.p_value;
          t.p_adjusted = bonferroni(std::span<const double>(&w.p_value, 1), family).front();
          t.family_size = family;
          t.degenerate = w.degenerate;
          report.pairwise_tests.push_back(t);
        }
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

nlohmann::ordered_json metrics_json(const MetricSet& m) {
  nlohmann::ordered_json j;
  for (std::size_t k = 0; k < std::size(kMetricNames); ++k) j[kMetricNames[k]] = metric_value(m, k);
  return j;
}

nlohmann::ordered_json grids_json(const HyperparameterGrids& grids) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (auto m : kAllMethods) {
    const auto it = grids.find(m);
    if (it != grids.end()) j[std::string(to_string(m))] = it->second;
  }
  return j;
}

nlohmann::ordered_json methods_json(const std::vector<Method>& methods) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (auto m : methods) j.push_back(std::string(to_string(m)));
  return j;
}

template <class T>
nlohmann::ordered_json optional_json(const std::optional<T>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

nlohmann::ordered_json to_json(const MethodSettings& s) {
  nlohmann::ordered_json j;
  j["sweeps"] = s.schedule.sweeps;
  j["beta_initial"] = s.schedule.beta_initial;
  j["beta_final_default"] = s.schedule.beta_final;
  j["restarts"] = s.restarts;
  j["random_samples"] = s.random_samples;
  j["top_n"] = s.top_n;
  j["exhaustive_keep"] = s.exhaustive_keep;
  j["capacity"] = s.capacity;
  j["rbm"] = {{"n_hidden", s.rbm.n_hidden},
              {"epochs", s.rbm.epochs},
              {"batch_size", s.rbm.batch_size},
              {"cd_steps", s.rbm.cd_steps},
              {"learning_rate", s.rbm.learning_rate}};
  j["ridge"] = {{"tolerance", s.ridge.tolerance}, {"max_iterations", s.ridge.max_iterations}};
  return j;
}

nlohmann::ordered_json to_json(const BenchmarkConfig& c) {
  nlohmann::ordered_json j;
  j["protocol"] = "benchmark";
  j["seed"] = c.seed;
  j["methods"] = methods_json(c.methods);
  j["n_splits"] = c.n_splits;
  j["train_fraction"] = c.train_fraction;
  j["pca_k"] = c.pca_k;
  j["cv_folds"] = c.cv_folds;
  j["grids"] = grids_json(c.grids);
  j["settings"] = to_json(c.settings);
  return j;
}

nlohmann::ordered_json to_json(const SweepConfig& c) {
  nlohmann::ordered_json j;
  j["protocol"] = "sweep";
  j["seed"] = c.seed;
  j["methods"] = methods_json(c.methods);
  j["fractions"] = c.fractions;
  j["n_splits"] = c.n_splits;
  j["holdout_train_fraction"] = c.holdout_train_fraction;
  j["pca_k"] = c.pca_k;
  j["cv_folds"] = c.cv_folds;
  j["grids"] = grids_json(c.grids);
  j["settings"] = to_json(c.settings);
  return j;
}

nlohmann::ordered_json to_json(const RunReport& r) {
  nlohmann::ordered_json j;
  j["kind"] = r.kind;
  j["config"] = r.config_snapshot;
  j["notices"] = r.notices;
  if (r.kind == "sweep") j["holdout_ids"] = r.holdout_ids;
  auto& splits = j["per_split"] = nlohmann::ordered_json::array();
  for (const auto& s : r.splits) {
    nlohmann::ordered_json e;
    e["split_id"] = s.split_id;
    e["fraction"] = optional_json(s.fraction);
    e["method"] = s.method;
    e["hyperparameter"] = optional_json(s.hyperparameter);
    e["n_train"] = s.n_train;
    e["n_test"] = s.n_test;
    e["test"] = metrics_json(s.test);
    e["train"] = metrics_json(s.train);
    e["overfitting_gap"] = s.overfitting_gap();
    splits.push_back(std::move(e));
  }
  auto& agg = j["aggregate"] = nlohmann::ordered_json::array();
  for (const auto& a : r.aggregate) {
    nlohmann::ordered_json e;
    e["fraction"] = optional_json(a.fraction);
    e["method"] = a.method;
    e["n"] = a.n;
    e["mean"] = metrics_json(a.mean);
    e["sem"] = metrics_json(a.sem);
    e["mean_overfitting_gap"] = a.mean_gap;
    e["sem_overfitting_gap"] = a.sem_gap;
    agg.push_back(std::move(e));
  }
  auto& tests = j["pairwise_tests"] = nlohmann::ordered_json::array();
  for (const auto& t : r.pairwise_tests) {
    nlohmann::ordered_json e;
    e["fraction"] = optional_json(t.fraction);
    e["metric"] = t.metric;
    e["method_a"] = t.method_a;
    e["method_b"] = t.method_b;
    e["statistic"] = t.statistic;
    e["p_raw"] = t.p_raw;
    e["p_adjusted"] = t.p_adjusted;
    e["family_size"] = t.family_size;
    e["degenerate"] = t.degenerate;
    tests.push_back(std::move(e));
  }
  return j;
}

namespace {

// FNV-1a over the compact config dump; ties CSV rows to their JSON report.
std::string config_digest(const nlohmann::ordered_json& snapshot) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : snapshot.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << h;
  return out.str();
}

std::string master_seed(const RunReport& r) {
  const auto it = r.config_snapshot.find("seed");
  return it == r.config_snapshot.end() ? std::string() : it->dump();
}

std::string optional_cell(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

}  // namespace

std::string splits_csv(const RunReport& r) {
  std::ostringstream out;
  out << "split_id,fraction,method,hyperparameter,n_train,n_test";
  for (const char* prefix : {"test_", "train_"}) {
    for (const char* name : kMetricNames) out << ',' << prefix << name;
  }
  out << ",overfitting_gap,master_seed,config_digest\r\n";
  const auto seed = master_seed(r);
  const auto digest = config_digest(r.config_snapshot);
  for (const auto& s : r.splits) {
    out << s.split_id << ',' << optional_cell(s.fraction) << ',' << csv_escape(s.method) << ','
        << optional_cell(s.hyperparameter) << ',' << s.n_train << ',' << s.n_test;
    for (const MetricSet* m : {&s.test, &s.train}) {
      for (std::size_t k = 0; k < std::size(kMetricNames); ++k) out << ',' << format_double(metric_value(*m, k));
    }
    out << ',' << format_double(s.overfitting_gap()) << ',' << seed << ',' << digest << "\r\n";
  }
  return out.str();
}

std::string aggregate_csv(const RunReport& r) {
  std::ostringstream out;
  out << "fraction,method,n";
  for (const char* prefix : {"mean_", "sem_"}) {
    for (const char* name : kMetricNames) out << ',' << prefix << name;
  }
  out << ",mean_overfitting_gap,sem_overfitting_gap,master_seed,config_digest\r\n";
  const auto seed = master_seed(r);
  const auto digest = config_digest(r.config_snapshot);
  for (const auto& a : r.aggregate) {
    out << optional_cell(a.fraction) << ',' << csv_escape(a.method) << ',' << a.n;
    for (const MetricSet* m : {&a.mean, &a.sem}) {
      for (std::size_t k = 0; k < std::size(kMetricNames); ++k) out << ',' << format_double(metric_value(*m, k));
    }
    out << ',' << format_double(a.mean_gap) << ',' << format_double(a.sem_gap) << ',' << seed << ','
        << digest << "\r\n";
  }
  return out.str();
}

}  // namespace isingclf
