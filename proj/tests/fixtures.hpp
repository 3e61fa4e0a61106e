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

// Shared fixtures for the unit and acceptance tests.

#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "isingclf/dataset.hpp"
#include "isingclf/ising.hpp"
#include "isingclf/rng.hpp"

namespace isingclf::testing {

// Fields and couplings drawn from N(0, 1); symmetric, zero diagonal.
inline IsingProblem random_problem(std::size_t n, std::uint64_t seed, bool couplings = true) {
  Rng rng(seed);
  const auto N = static_cast<Eigen::Index>(n);
  Eigen::VectorXd h(N);
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(N, N);
  for (Eigen::Index i = 0; i < N; ++i) h(i) = rng.normal();
  if (couplings) {
    for (Eigen::Index i = 0; i < N; ++i) {
      for (Eigen::Index j = i + 1; j < N; ++j) {
        J(i, j) = rng.normal();
        J(j, i) = J(i, j);
      }
    }
  }
  return IsingProblem(h, J);
}

// Direct double-loop evaluation, independent of the library's energy().
inline double brute_energy(const IsingProblem& p, const Eigen::VectorXd& w) {
  double e = 0.0;
  const auto n = p.fields().size();
  for (Eigen::Index i = 0; i < n; ++i) {
    e += p.fields()(i) * w(i);
    e += p.couplings()(i, i) * w(i) * w(i);
    for (Eigen::Index j = i + 1; j < n; ++j) e += p.couplings()(i, j) * w(i) * w(j);
  }
  return e;
}

inline Eigen::VectorXd spins_of(std::uint64_t code, std::size_t n) {
  Eigen::VectorXd w(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) w(static_cast<Eigen::Index>(i)) = (code >> i) & 1U ? 1.0 : -1.0;
  return w;
}

// Minimum over all 2^n configurations by direct enumeration.
inline double brute_ground_energy(const IsingProblem& p) {
  const auto n = p.n_spins();
  double best = 1e300;
  for (std::uint64_t c = 0; c < (std::uint64_t{1} << n); ++c) {
    best = std::min(best, brute_energy(p, spins_of(c, n)));
  }
  return best;
}

// Gaussian features, labels cycling 0..K-1 so every class is present.
inline LabeledDataset random_dataset(int K, std::size_t M, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd X(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(M));
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = static_cast<int>(i % static_cast<std::size_t>(K));
    for (std::size_t j = 0; j < M; ++j) {
      X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rng.normal() + 0.5 * y[i];
    }
  }
  return make_dataset(X, y, K);
}

inline Spin to_spin(double v) { return v > 0 ? Spin{1} : Spin{-1}; }

}  // namespace isingclf::testing
