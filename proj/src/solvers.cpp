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

#include "isingclf/solvers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <queue>
#include <string>
#include <thread>

#include "isingclf/errors.hpp"
#include "isingclf/rng.hpp"

namespace isingclf {

void AnnealSchedule::validate() const {
  if (sweeps < 1) throw DomainError("anneal schedule needs at least one sweep");
  if (!(beta_initial > 0.0) || !(beta_final > 0.0)) {
    throw DomainError("inverse temperatures must be positive");
  }
  if (beta_final < beta_initial) throw DomainError("beta_final must be >= beta_initial");
}

double AnnealSchedule::beta_at(std::size_t sweep) const {
  if (sweeps == 1) return beta_final;
  const double t = static_cast<double>(sweep) / static_cast<double>(sweeps - 1);
  return beta_initial + (beta_final - beta_initial) * t;
}

const SpinConfiguration& SolveResult::best() const {
  if (configurations.empty()) throw EmptyInputError("solve result is empty");
  return configurations.front();
}

namespace {

// Off-diagonal couplings, dense row-major.
std::vector<double> off_diagonal(const IsingProblem& problem) {
  const auto n = problem.n_spins();
  std::vector<double> J(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      J[i * n + j] = i == j ? 0.0 : problem.couplings()(static_cast<Eigen::Index>(i),
                                                         static_cast<Eigen::Index>(j));
    }
  }
  return J;
}

// h_i + sum_{j != i} J_ij s_j for every i.
void init_local_fields(const IsingProblem& problem, const std::vector<double>& J,
                       const std::vector<Spin>& s, std::vector<double>& local) {
  const auto n = s.size();
  local.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double f = problem.fields()(static_cast<Eigen::Index>(i));
    const double* row = &J[i * n];
    for (std::size_t j = 0; j < n; ++j) f += row[j] * s[j];
    local[i] = f;
  }
}

// Flips spin i and updates the cached local fields.
inline void flip(std::size_t i, std::vector<Spin>& s, std::vector<double>& local,
                 const std::vector<double>& J) {
  const auto n = s.size();
  s[i] = static_cast<Spin>(-s[i]);
  const double delta = 2.0 * s[i];
  const double* row = &J[i * n];
  for (std::size_t j = 0; j < n; ++j) local[j] += delta * row[j];
}

SpinConfiguration anneal_once(const IsingProblem& problem, const std::vector<double>& J,
                              const AnnealSchedule& schedule, std::uint64_t seed) {
  const auto n = problem.n_spins();
  Rng rng(seed);
  std::vector<Spin> s(n);
  for (auto& v : s) v = rng.uniform() < 0.5 ? Spin{-1} : Spin{1};
  std::vector<double> local;
  init_local_fields(problem, J, s, local);

  for (std::size_t sweep = 0; sweep < schedule.sweeps; ++sweep) {
    const double beta = schedule.beta_at(sweep);
    for (std::size_t i = 0; i < n; ++i) {
      const double dE = -2.0 * s[i] * local[i];
      if (dE <= 0.0) {
        flip(i, s, local, J);
        continue;
      }
      const double x = beta * dE;
      // exp(-40) is below the resolution of a 53-bit uniform draw.
      if (x > 40.0) continue;
      if (rng.uniform() < std::exp(-x)) flip(i, s, local, J);
    }
  }
  SpinConfiguration out{std::move(s), std::nullopt};
  return evaluated(problem, std::move(out));
}

void sort_by_energy(std::vector<SpinConfiguration>& configs) {
  std::stable_sort(configs.begin(), configs.end(),
                   [](const SpinConfiguration& a, const SpinConfiguration& b) {
                     return *a.energy < *b.energy;
                   });
}

}  // namespace

SolveResult simulated_anneal(const IsingProblem& problem, const AnnealSchedule& schedule,
                             const AnnealOptions& options) {
  schedule.validate();
  if (options.restarts < 1) throw DomainError("simulated_anneal needs restarts >= 1");
  const auto J = off_diagonal(problem);

  std::vector<SpinConfiguration> configs(options.restarts);
  const auto worker = [&](std::size_t first, std::size_t stride) {
    for (std::size_t r = first; r < options.restarts; r += stride) {
      configs[r] = anneal_once(problem, J, schedule, derive_seed(options.seed, 0, r));
    }
  };
  const auto threads = std::clamp<std::size_t>(options.threads, 1, options.restarts);
  if (threads == 1) {
    worker(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker, t, threads);
  }
  sort_by_energy(configs);
  return {std::move(configs), options.restarts, options.seed};
}

SolveResult simulated_anneal(const IsingProblem& problem, const AnnealSchedule& schedule,
                             std::size_t restarts, std::uint64_t seed) {
  return simulated_anneal(problem, schedule, AnnealOptions{restarts, seed, 1});
}

SolveResult random_search(const IsingProblem& problem, std::size_t samples, std::uint64_t seed) {
  if (samples < 1) throw DomainError("random_search needs samples >= 1");
  Rng rng(seed);
  std::vector<SpinConfiguration> configs(samples);
  for (auto& c : configs) {
    c.spins.resize(problem.n_spins());
    for (auto& v : c.spins) v = rng.uniform() < 0.5 ? Spin{-1} : Spin{1};
    c.energy = energy(problem, c);
  }
  sort_by_energy(configs);
  return {std::move(configs), samples, seed};
}

SpinConfiguration field_solve(const IsingProblem& problem) {
  SpinConfiguration out;
  out.spins.resize(problem.n_spins());
  for (std::size_t i = 0; i < out.spins.size(); ++i) {
    out.spins[i] = problem.fields()(static_cast<Eigen::Index>(i)) > 0.0 ? Spin{-1} : Spin{1};
  }
  return evaluated(problem, std::move(out));
}

SolveResult exhaustive_solve(const IsingProblem& problem, std::size_t keep) {
  const auto n = problem.n_spins();
  if (n > kExhaustiveLimit) {
    throw CapacityError("exhaustive_solve supports at most " + std::to_string(kExhaustiveLimit) +
                        " spins, got " + std::to_string(n));
  }
  const std::uint64_t total = std::uint64_t{1} << n;
  const bool keep_all = keep == 0 || keep >= total;

  // Bit i of a code is set when spin i is +1.
  struct Entry {
    double energy;
    std::uint64_t code;
    bool operator<(const Entry& o) const {
      return energy < o.energy || (energy == o.energy && code < o.code);
    }
  };
  std::vector<Entry> all;
  std::priority_queue<Entry> heap;  // max-heap of the `keep` best so far
  if (keep_all) all.reserve(total);

  const auto J = off_diagonal(problem);
  std::vector<Spin> s(n, Spin{-1});
  std::vector<double> local;
  init_local_fields(problem, J, s, local);
  double e = energy(problem, s);
  std::uint64_t code = 0;
  const auto offer = [&](double en, std::uint64_t c) {
    if (keep_all) {
      all.push_back({en, c});
    } else if (heap.size() < keep) {
      heap.push({en, c});
    } else if (Entry{en, c} < heap.top()) {
      heap.pop();
      heap.push({en, c});
    }
  };
  offer(e, code);
  for (std::uint64_t g = 1; g < total; ++g) {
    const auto i = static_cast<std::size_t>(std::countr_zero(g));
    e += -2.0 * s[i] * local[i];
    flip(i, s, local, J);
    code ^= std::uint64_t{1} << i;
    offer(e, code);
  }
  if (!keep_all) {
    while (!heap.empty()) {
      all.push_back(heap.top());
      heap.pop();
    }
  }

  std::vector<SpinConfiguration> configs;
  configs.reserve(all.size());
  for (auto& entry : all) {
    SpinConfiguration c;
    c.spins.resize(n);
    for (std::size_t i = 0; i < n; ++i) c.spins[i] = (entry.code >> i) & 1U ? Spin{1} : Spin{-1};
    entry.energy = energy(problem, c);  // replace the incrementally accumulated value
    c.energy = entry.energy;
    configs.push_back(std::move(c));
  }
  std::vector<std::size_t> order(all.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return all[a] < all[b]; });
  std::vector<SpinConfiguration> sorted;
  sorted.reserve(configs.size());
  for (auto idx : order) sorted.push_back(std::move(configs[idx]));
  return {std::move(sorted), 1, 0};
}

Eigen::VectorXd ensemble_average(const IsingProblem& problem, const SolveResult& result,
                                 std::size_t top_n) {
  if (result.configurations.empty()) throw EmptyInputError("ensemble_average on empty result");
  const auto limit = std::min(std::max<std::size_t>(top_n, 1), result.configurations.size());

  Eigen::VectorXd sum = result.configurations.front().as_real();
  double count = 1.0;
  Eigen::VectorXd current = sum;
  double objective = energy_real(problem, current);
  for (std::size_t c = 1; c < limit; ++c) {
    const Eigen::VectorXd trial_sum = sum + result.configurations[c].as_real();
    const Eigen::VectorXd trial = trial_sum / (count + 1.0);
    const double trial_objective = energy_real(problem, trial);
    if (trial_objective < objective) {
      sum = trial_sum;
      count += 1.0;
      current = trial;
      objective = trial_objective;
    }
  }
  return current;
}

}  // namespace isingclf
