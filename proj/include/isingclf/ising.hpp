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
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "isingclf/dataset.hpp"

namespace isingclf {

// Default bound on M * (K - 1): the largest complete graph embeddable on the
// annealer the formulation was designed for.
inline constexpr std::size_t kDefaultCapacity = 66;

// Spin index <-> (class block k, feature m). Spin k * M + m holds feature m of
// the weight vector for class k; classes 0..K-2 own blocks, class K-1 is the
// reference class.
class ClassBlockLayout {
 public:
  ClassBlockLayout() = default;
  ClassBlockLayout(int n_classes, std::size_t n_features);

  int n_classes() const { return n_classes_; }
  std::size_t n_features() const { return n_features_; }
  std::size_t n_blocks() const { return static_cast<std::size_t>(n_classes_ - 1); }
  std::size_t n_spins() const { return n_blocks() * n_features_; }

  std::size_t spin_index(std::size_t block, std::size_t feature) const;
  struct Slot {
    std::size_t block;
    std::size_t feature;
  };
  Slot slot(std::size_t spin) const;

  // (K-1) x M weight matrix from a flat spin/weight vector, and back.
  Eigen::MatrixXd to_weight_matrix(const Eigen::VectorXd& flat) const;
  Eigen::VectorXd to_flat(const Eigen::MatrixXd& weights) const;

 private:
  int n_classes_ = 0;
  std::size_t n_features_ = 0;
};

// Ising problem over N spins:
//   E(s) = sum_i h_i s_i + sum_{i<j} J_ij s_i s_j + sum_i J_ii.
// The diagonal of J is a constant for +-1 spins but contributes J_ii * w_i^2
// to energy_real, so it is kept.
class IsingProblem {
 public:
  IsingProblem() = default;
  // Only the upper triangle (including the diagonal) of `couplings` is read;
  // the lower triangle is overwritten with its mirror.
  IsingProblem(Eigen::VectorXd fields, Eigen::MatrixXd couplings,
               std::optional<ClassBlockLayout> layout = std::nullopt);

  std::size_t n_spins() const { return static_cast<std::size_t>(fields_.size()); }
  const Eigen::VectorXd& fields() const { return fields_; }
  const Eigen::MatrixXd& couplings() const { return couplings_; }
  const std::optional<ClassBlockLayout>& layout() const { return layout_; }

  // Sum of the diagonal couplings; the energy offset seen by spin solvers.
  double offset() const { return couplings_.diagonal().sum(); }
  // Largest |h_i| or |J_ij| over the upper triangle.
  double max_abs_coefficient() const;

 private:
  Eigen::VectorXd fields_;
  Eigen::MatrixXd couplings_;
  std::optional<ClassBlockLayout> layout_;
};

using Spin = std::int8_t;

struct SpinConfiguration {
  std::vector<Spin> spins;
  std::optional<double> energy;

  std::size_t size() const { return spins.size(); }
  Eigen::VectorXd as_real() const;
};

// Throws DomainError unless every entry is -1 or +1.
void validate_spins(std::span<const Spin> spins);

double energy(const IsingProblem& problem, std::span<const Spin> spins);
double energy(const IsingProblem& problem, const SpinConfiguration& config);

// Same bilinear form at real weights in [-1, 1]^N.
double energy_real(const IsingProblem& problem, const Eigen::VectorXd& weights);

// Returns `config` with its cached energy filled in.
SpinConfiguration evaluated(const IsingProblem& problem, SpinConfiguration config);

// Terms of the second-order expansion of the multinomial negative
// log-likelihood around zero weights.
struct BuildIntermediates {
  std::vector<Eigen::VectorXd> b_vectors;  // K-1 vectors: -(sum of x_i in class k)
  Eigen::VectorXd mean_term;               // (1/K) sum_i x_i
  Eigen::MatrixXd intra_coupling;          // (K-1)/(2K^2) sum_i x_i x_i^T
  Eigen::MatrixXd inter_coupling;          // 1/(2K^2) sum_i x_i x_i^T
};

struct BuiltProblem {
  IsingProblem problem;
  ClassBlockLayout layout;
  BuildIntermediates intermediates;
};

struct BuildOptions {
  std::size_t capacity = kDefaultCapacity;  // max M * (K - 1); 0 disables
};

// Quadratic surrogate of the multinomial NLL as an Ising problem:
//   L(w) ~= sum_k w_k.(b_k + mean) + sum_k w_k' J' w_k
//           - sum_k sum_{j != k} w_j' J'' w_k
// (up to the constant N log K). Off-diagonal couplings are stored doubled
// because energy() counts each pair once, so that energy_real(w) equals the
// expression above exactly.
BuiltProblem build_multiclass_problem(const LabeledDataset& data,
                                      const BuildOptions& options = {});

// K = 2 entry point; throws ArityError otherwise.
BuiltProblem build_binomial_problem(const LabeledDataset& data,
                                    const BuildOptions& options = {});

// Divides every coefficient by the largest magnitude so all lie in [-1, 1].
IsingProblem scale_to_unit(const IsingProblem& problem);

// -sum_i log Pr(y_i) under the softmax with an implicit zero-weight
// reference class K-1. `weights` is (K-1) x M.
double exact_nll(const Eigen::MatrixXd& weights, const LabeledDataset& data);

}  // namespace isingclf
