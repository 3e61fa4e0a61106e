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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "isingclf/cli.hpp"
#include "isingclf/errors.hpp"
#include "isingclf/io.hpp"
#include "isingclf/model_eval.hpp"
#include "isingclf/pipeline.hpp"
#include "isingclf/rbm.hpp"
#include "isingclf/solvers.hpp"
#include "isingclf/stats.hpp"

using namespace isingclf;
using isingclf::testing::brute_energy;
using isingclf::testing::random_dataset;
using isingclf::testing::random_problem;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
  bool skipped = false;
};

int failures = 0;

void criterion(int id, const std::string& name, double limit_seconds,
               const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs < limit_seconds;
  std::string status = o.skipped ? "SKIP" : (o.pass && in_time) ? "PASS" : "FAIL";
  if (status == "FAIL") ++failures;
  std::ostringstream line;
  line << "[" << status << "] " << id << ". " << name << ": " << o.detail << " ("
       << std::fixed << std::setprecision(1) << secs << " s, limit " << limit_seconds << " s)";
  std::cout << line.str() << std::endl;
}

std::string fmt(double v, int digits = 4) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

// Two-sided Wilcoxon p by enumerating all 2^n sign patterns.
double enumerated_p(const std::vector<double>& d) {
  const auto ranks = abs_ranks(d);
  const auto n = d.size();
  double observed = 0;
  for (std::size_t i = 0; i < n; ++i) observed += d[i] > 0 ? ranks[i] : 0.0;
  double lower = 0, upper = 0;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t code = 0; code < total; ++code) {
    double w = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if ((code >> i) & 1U) w += ranks[i];
    }
    if (w <= observed + 1e-9) ++lower;
    if (w >= observed - 1e-9) ++upper;
  }
  return std::min(1.0, 2.0 * std::min(lower, upper) / static_cast<double>(total));
}

// Noisy two-class task with five latent factors of distinct variance. The
// class shift along each factor is proportional to its variance, so equal
// weights on the leading components are near-optimal.
LabeledDataset factor_task(std::size_t n_per_class, std::uint64_t seed) {
  const Eigen::Index M = 44;
  const Eigen::VectorXd lambda = (Eigen::VectorXd(5) << 20, 12, 7.5, 4.7, 3).finished();
  const double shift = 0.12;
  Rng rng(99);
  Eigen::MatrixXd G(M, lambda.size());
  for (Eigen::Index i = 0; i < G.size(); ++i) G.data()[i] = rng.normal();
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
  const Eigen::MatrixXd U = qr.householderQ() * Eigen::MatrixXd::Identity(M, lambda.size());
  SyntheticSpec spec;
  const Eigen::VectorXd mu = U * (shift * lambda);
  spec.means = {mu, -mu};
  spec.covariances = {U * lambda.asDiagonal() * U.transpose() + Eigen::MatrixXd::Identity(M, M)};
  spec.n_per_class = n_per_class;
  return generate_synthetic(spec, seed);
}

const AggregateRow& row_for(const RunReport& r, const std::string& method) {
  for (const auto& a : r.aggregate) {
    if (a.method == method) return a;
  }
  throw Error("no aggregate row for " + method);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

int main() {
  criterion(1, "Taylor-approximation fidelity", 10, [] {
    int ok = 0, total = 0;
    double worst = 0.0;
    const int ks[] = {2, 3, 6};
    for (int t = 0; t < 20; ++t) {
      const int K = ks[t % 3];
      const std::size_t M = 1 + static_cast<std::size_t>(t * 7 % 13);
      const std::size_t n = 10 + static_cast<std::size_t>(t * 11 % 41);
      const auto data = random_dataset(K, M, n, 1000 + static_cast<std::uint64_t>(t));
      const auto built = build_multiclass_problem(data);
      Rng rng(2000 + static_cast<std::uint64_t>(t));
      Eigen::VectorXd w(static_cast<Eigen::Index>(built.problem.n_spins()));
      for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = rng.normal();
      w.normalize();
      const double base = exact_nll(built.layout.to_weight_matrix(Eigen::VectorXd::Zero(w.size())), data);
      const auto residual = [&](double eps) {
        const Eigen::VectorXd v = eps * w;
        return std::abs(exact_nll(built.layout.to_weight_matrix(v), data) - base -
                        energy_real(built.problem, v));
      };
      const double scale = residual(1e-1) / 1e-3;
      for (double eps : {1e-1, 1e-2}) {
        ++total;
        const double r = residual(eps);
        // 1e-12 absorbs floating-point cancellation in the NLL difference.
        if (r <= 10 * std::pow(eps, 3) * scale + 1e-12) ++ok;
        if (eps == 1e-2 && scale > 0) worst = std::max(worst, r / (scale * 1e-6));
      }
    }
    return Outcome{ok == total, std::to_string(ok) + "/" + std::to_string(total) +
                                    " within 10*eps^3*C; worst residual/(C*eps^3) at eps=1e-2 = " +
                                    fmt(worst, 3)};
  });

  criterion(2, "Solver-oracle equivalence (N=16)", 120, [] {
    int hits = 0;
    for (std::uint64_t i = 0; i < 100; ++i) {
      const auto p = random_problem(16, 10'000 + i);
      const double ground = *exhaustive_solve(p, 1).best().energy;
      const auto sa = simulated_anneal(p, AnnealSchedule{1000, 0.01, 3.0}, 1000, i);
      if (std::abs(*sa.best().energy - ground) <= 1e-9 * std::max(1.0, std::abs(ground))) ++hits;
    }
    return Outcome{hits >= 99, std::to_string(hits) + "/100 instances reach the exhaustive ground energy (need >= 99)"};
  });

  criterion(3, "Field exactness on decoupled problems", 1, [] {
    int hits = 0;
    for (std::uint64_t i = 0; i < 100; ++i) {
      const auto p = random_problem(12, 20'000 + i, /*couplings=*/false);
      const auto ground = exhaustive_solve(p, 1).best();
      if (field_solve(p).spins == ground.spins) ++hits;
    }
    return Outcome{hits == 100, std::to_string(hits) + "/100 match the exhaustive ground state"};
  });

  criterion(4, "Ensemble monotonicity", 10, [] {
    int hits = 0;
    for (std::uint64_t i = 0; i < 100; ++i) {
      const auto data = random_dataset(2 + static_cast<int>(i % 3), 5, 30, 30'000 + i);
      const auto problem = scale_to_unit(build_multiclass_problem(data).problem);
      const auto result = i % 2 == 0 ? random_search(problem, 1000, i)
                                     : simulated_anneal(problem, AnnealSchedule{100, 0.01, 3.0}, 100, i);
      const double avg = energy_real(problem, ensemble_average(problem, result, 20));
      if (avg <= *result.best().energy) ++hits;
    }
    return Outcome{hits == 100, std::to_string(hits) + "/100 ensembles at or below the best configuration"};
  });

  criterion(5, "Classification sanity on separable data", 300, [] {
    const auto data = generate_synthetic(separable_binomial_spec(10, 3.0, 250), 5);
    BenchmarkConfig c;
    c.methods = {Method::sa, Method::random, Method::field, Method::exhaustive, Method::rbm, Method::ridge};
    c.n_splits = 20;
    c.pca_k = 10;
    c.seed = 5;
    const auto r = run_benchmark(data, c);
    bool ok = true;
    std::string detail;
    for (auto m : c.methods) {
      const double ba = row_for(r, std::string(to_string(m))).mean.balanced_accuracy;
      ok = ok && ba >= 0.95;
      detail += std::string(to_string(m)) + "=" + fmt(ba) + " ";
    }
    return Outcome{ok, "mean test balanced accuracy over 20 splits (need >= 0.95): " + detail};
  });

  criterion(6, "Small-sample robustness trend", 900, [] {
    const auto data = factor_task(500, 6);
    SweepConfig s;
    s.methods = {Method::sa, Method::ridge};
    s.fractions = {0.2};
    s.n_splits = 50;
    s.holdout_train_fraction = 0.25;
    s.pca_k = 5;
    s.seed = 6;
    const auto small = fraction_sweep(data, s);
    const auto& sa = row_for(small, "sa");
    const auto& ridge = row_for(small, "ridge");

    s.methods = {Method::ridge};
    s.fractions = {1.0};
    s.n_splits = 1;
    const double ridge_full = row_for(fraction_sweep(data, s), "ridge").mean.balanced_accuracy;

    const bool accuracy_ok = sa.mean.balanced_accuracy >= ridge.mean.balanced_accuracy - 0.02;
    const bool gap_ok = sa.mean_gap <= ridge.mean_gap;
    return Outcome{accuracy_ok && gap_ok,
                   "ridge at full data " + fmt(ridge_full) + "; at 20%: SA " +
                       fmt(sa.mean.balanced_accuracy) + " +- " + fmt(sa.sem.balanced_accuracy) +
                       " vs ridge " + fmt(ridge.mean.balanced_accuracy) + " +- " +
                       fmt(ridge.sem.balanced_accuracy) + " (need SA >= ridge - 0.02: " +
                       (accuracy_ok ? "yes" : "no") + "); gap SA " + fmt(sa.mean_gap) + " vs ridge " +
                       fmt(ridge.mean_gap) + " (need SA <= ridge: " + (gap_ok ? "yes" : "no") + ")"};
  });

  criterion(7, "Wilcoxon correctness", 30, [] {
    Rng rng(7);
    int exact_ok = 0, exact_total = 0, approx_ok = 0, approx_total = 0;
    double worst = 0.0;
    for (std::size_t n = 1; n <= 12; ++n) {
      for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) {
          // Coarse values so ties and zero differences occur.
          a[i] = std::round(4 * rng.normal()) / 4;
          b[i] = std::round(4 * (rng.normal() + 0.3)) / 4;
        }
        std::vector<double> d;
        for (std::size_t i = 0; i < n; ++i) {
          if (a[i] != b[i]) d.push_back(a[i] - b[i]);
        }
        if (d.empty()) continue;
        ++exact_total;
        const double p = wilcoxon_signed_rank({a, b}).p_value;
        if (std::abs(p - enumerated_p(d)) <= 1e-12) ++exact_ok;
      }
    }
    for (std::size_t n = 20; n <= 25; ++n) {
      for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> d(n);
        for (auto& v : d) v = rng.normal() + 0.1 * (rep % 8);
        ++approx_total;
        const double err = std::abs(wilcoxon_normal_p(d) - wilcoxon_exact_p(d));
        worst = std::max(worst, err);
        if (err <= 0.01) ++approx_ok;
      }
    }
    return Outcome{exact_ok == exact_total && approx_ok == approx_total,
                   "exact " + std::to_string(exact_ok) + "/" + std::to_string(exact_total) +
                       " equal to enumeration; normal approximation " + std::to_string(approx_ok) +
                       "/" + std::to_string(approx_total) + " within 0.01 (worst " + fmt(worst) + ")"};
  });

  criterion(8, "Metric unit suite", 10, [] {
    Rng rng(8);
    int ok = 0;
    for (int t = 0; t < 200; ++t) {
      const int K = 2 + t % 3;
      const std::size_t n = static_cast<std::size_t>(K) + rng.below(12);
      std::vector<int> y(n), p(n);
      Eigen::MatrixXd s(static_cast<Eigen::Index>(n), K);
      for (std::size_t i = 0; i < n; ++i) {
        y[i] = i < static_cast<std::size_t>(K) ? static_cast<int>(i) : static_cast<int>(rng.below(K));
        p[i] = static_cast<int>(rng.below(K));
        for (int k = 0; k < K; ++k) s(static_cast<Eigen::Index>(i), k) = 1.0 + static_cast<double>(rng.below(5));
        s.row(static_cast<Eigen::Index>(i)) /= s.row(static_cast<Eigen::Index>(i)).sum();
      }
      const auto m = compute_metrics(y, p, s, K).metrics;
      double recall = 0, f1 = 0, auc = 0;
      for (int c = 0; c < K; ++c) {
        double hit = 0, tot = 0, tp = 0, fp = 0, fn = 0, num = 0, den = 0;
        for (std::size_t i = 0; i < n; ++i) {
          if (y[i] == c) { ++tot; hit += p[i] == c; }
          tp += y[i] == c && p[i] == c;
          fp += y[i] != c && p[i] == c;
          fn += y[i] == c && p[i] != c;
          for (std::size_t j = 0; j < n; ++j) {
            if (y[i] != c || y[j] == c) continue;
            const double a = s(static_cast<Eigen::Index>(i), c), b = s(static_cast<Eigen::Index>(j), c);
            den += 1;
            num += a > b ? 1.0 : a == b ? 0.5 : 0.0;
          }
        }
        recall += hit / tot;
        const double f = tp == 0 ? 0.0 : 2 * tp / (2 * tp + fp + fn);
        if (K == 2 && c == 0) {
          f1 = f;
          auc = num / den;
        } else if (K > 2) {
          f1 += f / K;
          auc += num / den / K;
        }
      }
      const bool good = std::abs(m.balanced_accuracy - recall / K) < 1e-12 &&
                        std::abs(m.f1 - f1) < 1e-12 && std::abs(m.auc - auc) < 1e-12;
      ok += good;
    }
    return Outcome{ok == 200, std::to_string(ok) + "/200 cases match brute-force definitions"};
  });

  criterion(9, "RBM validity", 300, [] {
    Rng rng(9);
    double worst_rel = 0.0, worst_sum = 0.0;
    for (int t = 0; t < 30; ++t) {
      const int H = 1 + t % 10;
      auto m = RbmModel::zeros(H, 4, 3);
      for (auto* x : {&m.weights_data, &m.weights_label}) {
        for (Eigen::Index i = 0; i < x->size(); ++i) x->data()[i] = rng.normal();
      }
      for (auto* x : {&m.bias_visible_data, &m.bias_visible_label, &m.bias_hidden}) {
        for (Eigen::Index i = 0; i < x->size(); ++i) (*x)(i) = rng.normal();
      }
      Eigen::VectorXd v(4);
      for (Eigen::Index i = 0; i < 4; ++i) v(i) = rng.normal();
      for (int c = 0; c < 3; ++c) {
        const Eigen::VectorXd l = Eigen::VectorXd::Unit(3, c);
        const Eigen::VectorXd act = m.weights_data * v + m.weights_label * l;
        std::vector<double> terms;
        for (std::uint64_t code = 0; code < (std::uint64_t{1} << H); ++code) {
          double e = m.bias_visible_data.dot(v) + m.bias_visible_label.dot(l);
          for (int j = 0; j < H; ++j) {
            if ((code >> j) & 1U) e += m.bias_hidden(j) + act(j);
          }
          terms.push_back(e);
        }
        const double mx = *std::max_element(terms.begin(), terms.end());
        double acc = 0;
        for (double e : terms) acc += std::exp(e - mx);
        const double ref = -(mx + std::log(acc));
        worst_rel = std::max(worst_rel, std::abs(free_energy(m, v, l) - ref) / std::max(1.0, std::abs(ref)));
      }
      worst_sum = std::max(worst_sum, std::abs(predict_rbm(m, v).sum() - 1.0));
    }

    const auto raw = generate_synthetic(separable_binomial_spec(10, 3.0, 250), 9);
    const auto [train_raw, test_raw] = stratified_split(raw, 0.8, 9);
    const auto prep = fit_preprocessing(train_raw, 0);
    RbmTrainConfig cfg;
    cfg.seed = 9;
    TrainedModel model;
    model.n_classes = 2;
    model.method_tag = "rbm";
    model.rbm = train_rbm(prep.apply(train_raw), cfg);
    const double ba = evaluate(model, prep.apply(test_raw)).metrics.balanced_accuracy;
    return Outcome{worst_rel <= 1e-8 && worst_sum <= 1e-9 && ba >= 0.9,
                   "worst relative free-energy error " + fmt(worst_rel * 1e12, 3) +
                       "e-12; worst |sum p - 1| " + fmt(worst_sum * 1e15, 3) +
                       "e-15; held-out balanced accuracy " + fmt(ba)};
  });

  criterion(10, "Determinism of benchmark and sweep", 60, [] {
    const auto dir = fs::temp_directory_path() / "isingclf_acceptance_det";
    fs::remove_all(dir);
    fs::create_directories(dir);
    save_dataset_csv(generate_synthetic(separable_binomial_spec(6, 1.0, 40), 10), dir / "d.csv");
    {
      std::ofstream cfg(dir / "config.json");
      cfg << R"({"dataset": ")" << (dir / "d.csv").string() << R"(",
        "methods": ["sa", "random", "field", "exhaustive", "rbm", "ridge"],
        "seed": 10, "pca_k": 6, "n_splits": 3, "fractions": [0.8, 0.4], "cv_folds": 3,
        "solver": {"sweeps": 100, "restarts": 50, "random_samples": 200},
        "rbm": {"epochs": 10}})";
    }
    std::ostringstream sink;
    bool ok = true;
    for (const char* cmd : {"benchmark", "sweep"}) {
      for (const char* run : {"a", "b"}) {
        const int code = run_cli({"--config", (dir / "config.json").string(), "--out-dir",
                                  (dir / run).string(), cmd},
                                 sink, sink);
        ok = ok && code == 0;
      }
    }
    int identical = 0, compared = 0;
    for (const char* kind : {"benchmark", "sweep"}) {
      for (const char* suffix : {"_report.json", "_splits.csv", "_aggregate.csv"}) {
        const std::string f = std::string(kind) + suffix;
        ++compared;
        const auto a = slurp(dir / "a" / f);
        identical += !a.empty() && a == slurp(dir / "b" / f);
      }
    }
    fs::remove_all(dir);
    return Outcome{ok && identical == compared,
                   std::to_string(identical) + "/" + std::to_string(compared) + " report files byte-identical"};
  });

  criterion(11, "Published LumA vs LumB balanced accuracy (conditional)", 3600, [] {
    const char* path = std::getenv("ISINGCLF_LUMA_LUMB_CSV");
    if (path == nullptr || *path == '\0') {
      return Outcome{true,
                     "skipped: set ISINGCLF_LUMA_LUMB_CSV to a 44-component LumA/LumB matrix to run",
                     true};
    }
    const auto data = load_dataset_csv(path);
    BenchmarkConfig c;
    c.methods = {Method::sa};
    c.n_splits = 100;
    c.pca_k = std::min<std::size_t>(44, data.n_features());
    c.seed = 11;
    const auto r = run_benchmark(data, c);
    const double ba = row_for(r, "sa").mean.balanced_accuracy;
    return Outcome{std::abs(ba - 0.752) <= 0.02,
                   "SA mean balanced accuracy " + fmt(ba) + " vs 0.752 (tolerance 0.02)"};
  });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
