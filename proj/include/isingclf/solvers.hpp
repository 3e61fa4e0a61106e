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
#include <vector>

#include <Eigen/Dense>

#include "isingclf/ising.hpp"

namespace isingclf {

// Linear-in-beta schedule: sweep t of S uses
//   beta_t = beta_initial + (beta_final - beta_initial) * t / (S - 1).
struct AnnealSchedule {
  std::size_t sweeps = 1000;
  double beta_initial = 0.01;
  double beta_final = 3.0;

  void validate() const;
  double beta_at(std::size_t sweep) const;
};

// Candidate configurations sorted by ascending energy.
struct SolveResult {
  std::vector<SpinConfiguration> configurations;
  std::size_t restarts = 0;
  std::uint64_t seed = 0;

  const SpinConfiguration& best() const;
};

struct AnnealOptions {
  std::size_t restarts = 1000;
  std::uint64_t seed = 0;
  // Worker threads for restarts. Output does not depend on this.
  std::size_t threads = 1;
};

// Metropolis simulated annealing with sequential spin order. Restart r starts
// from uniform random spins drawn from derive_seed(seed, 0, r).
SolveResult simulated_anneal(const IsingProblem& problem, const AnnealSchedule& schedule,
                             const AnnealOptions& options);

// Convenience overload matching the common call shape.
SolveResult simulated_anneal(const IsingProblem& problem, const AnnealSchedule& schedule,
                             std::size_t restarts, std::uint64_t seed);

// `samples` uniform random spin configurations, sorted by energy.
SolveResult random_search(const IsingProblem& problem, std::size_t samples,
                          std::uint64_t seed);

// Spins anti-aligned with the fields (h_i = 0 -> +1). Ignores couplings.
SpinConfiguration field_solve(const IsingProblem& problem);

inline constexpr std::size_t kExhaustiveLimit = 26;

// Enumerates all 2^N states in Gray-code order. Keeps the `keep` lowest
// (0 keeps everything). Ties are ordered lexicographically by spins.
SolveResult exhaustive_solve(const IsingProblem& problem, std::size_t keep = 0);

// Greedy low-energy averaging: starting from the best configuration, each of
// the next top_n - 1 configurations (in energy order) is folded into the
// running mean iff that strictly lowers energy_real.
Eigen::VectorXd ensemble_average(const IsingProblem& problem, const SolveResult& result,
                                 std::size_t top_n = 20);

}  // namespace isingclf
