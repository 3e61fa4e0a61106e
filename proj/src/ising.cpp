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

#include "isingclf/ising.hpp"

#include <cmath>
#include <string>

#include "isingclf/errors.hpp"

namespace isingclf {

ClassBlockLayout::ClassBlockLayout(int n_classes, std::size_t n_features)
    : n_classes_(n_classes), n_features_(n_features) {
  if (n_classes < 2) throw DegenerateInputError("layout needs at least two classes");
}

std::size_t ClassBlockLayout::spin_index(std::size_t block, std::size_t feature) const {
  if (block >= n_blocks() || feature >= n_features_) {
    throw DimensionError("(block, feature) outside the layout");
  }
  return block * n_features_ + feature;
}

ClassBlockLayout::Slot ClassBlockLayout::slot(std::size_t spin) const {
  if (spin >= n_spins()) throw DimensionError("spin index outside the layout");
  return {spin / n_features_, spin % n_features_};
}

Eigen::MatrixXd ClassBlockLayout::to_weight_matrix(const Eigen::VectorXd& flat) const {
  if (static_cast<std::size_t>(flat.size()) != n_spins()) {
    throw DimensionError("flat weight vector length does not match layout");
  }
  Eigen::MatrixXd w(static_cast<Eigen::Index>(n_blocks()), static_cast<Eigen::Index>(n_features_));
  for (std::size_t i = 0; i < n_spins(); ++i) {
    const auto s = slot(i);
    w(static_cast<Eigen::Index>(s.block), static_cast<Eigen::Index>(s.feature)) =
        flat(static_cast<Eigen::Index>(i));
  }
  return w;
}

Eigen::VectorXd ClassBlockLayout::to_flat(const Eigen::MatrixXd& weights) const {
  if (static_cast<std::size_t>(weights.rows()) != n_blocks() ||
      static_cast<std::size_t>(weights.cols()) != n_features_) {
    throw DimensionError("weight matrix shape does not match layout");
  }
  Eigen::VectorXd flat(static_cast<Eigen::Index>(n_spins()));
  for (std::size_t i = 0; i < n_spins(); ++i) {
    const auto s = slot(i);
    flat(static_cast<Eigen::Index>(i)) =
        weights(static_cast<Eigen::Index>(s.block), static_cast<Eigen::Index>(s.feature));
  }
  return flat;
}

IsingProblem::IsingProblem(Eigen::VectorXd fields, Eigen::MatrixXd couplings,
                           std::optional<ClassBlockLayout> layout)
    : fields_(std::move(fields)), couplings_(std::move(couplings)), layout_(std::move(layout)) {
  const auto n = fields_.size();
  if (couplings_.rows() != n || couplings_.cols() != n) {
    throw DimensionError("couplings must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  if (!fields_.allFinite() || !couplings_.allFinite()) {
    throw DomainError("Ising coefficients must be finite");
  }
  couplings_.triangularView<Eigen::StrictlyLower>() = couplings_.transpose().eval();
  if (layout_ && layout_->n_spins() != static_cast<std::size_t>(n)) {
    throw DimensionError("layout spin count does not match problem size");
  }
}

double IsingProblem::max_abs_coefficient() const {
  double m = fields_.size() ? fields_.cwiseAbs().maxCoeff() : 0.0;
  const auto n = fields_.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) m = std::max(m, std::abs(couplings_(i, j)));
  }
  return m;
}

Eigen::VectorXd SpinConfiguration::as_real() const {
  Eigen::VectorXd v(static_cast<Eigen::Index>(spins.size()));
  for (std::size_t i = 0; i < spins.size(); ++i) v(static_cast<Eigen::Index>(i)) = spins[i];
  return v;
}

void validate_spins(std::span<const Spin> spins) {
  for (std::size_t i = 0; i < spins.size(); ++i) {
    if (spins[i] != 1 && spins[i] != -1) {
      throw DomainError("spin " + std::to_string(i) + " is not +-1");
    }
  }
}

namespace {

// Shared by both energy routes so that +-1 inputs give bit-identical sums.
template <class Value>
double bilinear(const IsingProblem& problem, const Value& w) {
  const auto& h = problem.fields();
  const auto& J = problem.couplings();
  const auto n = h.size();
  double e = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double wi = static_cast<double>(w[static_cast<std::size_t>(i)]);
    double row = h(i) + J(i, i) * wi;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      row += J(i, j) * static_cast<double>(w[static_cast<std::size_t>(j)]);
    }
    e += wi * row;
  }
  return e;
}

struct EigenIndexer {
  const Eigen::VectorXd& v;
  double operator[](std::size_t i) const { return v(static_cast<Eigen::Index>(i)); }
};

}  // namespace

double energy(const IsingProblem& problem, std::span<const Spin> spins) {
  if (spins.size() != problem.n_spins()) {
    throw DimensionError("configuration has " + std::to_string(spins.size()) +
                         " spins, problem has " + std::to_string(problem.n_spins()));
  }
  validate_spins(spins);
  return bilinear(problem, spins);
}

double energy(const IsingProblem& problem, const SpinConfiguration& config) {
  return energy(problem, std::span<const Spin>(config.spins));
}

double energy_real(const IsingProblem& problem, const Eigen::VectorXd& weights) {
  if (static_cast<std::size_t>(weights.size()) != problem.n_spins()) {
    throw DimensionError("weight vector length does not match problem size");
  }
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (!(weights(i) >= -1.0 && weights(i) <= 1.0)) {
      throw DomainError("weight " + std::to_string(i) + " outside [-1, 1]");
    }
  }
  return bilinear(problem, EigenIndexer{weights});
}

SpinConfiguration evaluated(const IsingProblem& problem, SpinConfiguration config) {
  config.energy = energy(problem, config);
  return config;
}

BuiltProblem build_multiclass_problem(const LabeledDataset& data, const BuildOptions& options) {
  data.validate(/*require_all_classes=*/false);
  const int K = data.n_classes;
  if (K < 2) throw DegenerateInputError("classification needs at least two classes");
  const auto M = data.n_features();
  const auto blocks = static_cast<std::size_t>(K - 1);
  if (options.capacity > 0 && M * blocks > options.capacity) {
    throw CapacityError("M x (K-1) = " + std::to_string(M * blocks) + " exceeds capacity " +
                        std::to_string(options.capacity));
  }

  const auto& X = data.features;
  const double k = static_cast<double>(K);
  const Eigen::MatrixXd scatter = X.transpose() * X;

  BuildIntermediates mid;
  mid.b_vectors.assign(blocks, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(M)));
  for (std::size_t i = 0; i < data.n_samples(); ++i) {
    const auto y = data.labels[i];
    if (y < K - 1) {
      mid.b_vectors[static_cast<std::size_t>(y)] -= X.row(static_cast<Eigen::Index>(i)).transpose();
    }
  }
  mid.mean_term = X.colwise().sum().transpose() / k;
  mid.intra_coupling = scatter * ((k - 1.0) / (2.0 * k * k));
  mid.inter_coupling = scatter * (1.0 / (2.0 * k * k));

  ClassBlockLayout layout(K, M);
  const auto n = static_cast<Eigen::Index>(layout.n_spins());
  const auto m = static_cast<Eigen::Index>(M);
  Eigen::VectorXd fields(n);
  Eigen::MatrixXd couplings = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index b = 0; b < static_cast<Eigen::Index>(blocks); ++b) {
    fields.segment(b * m, m) = mid.b_vectors[static_cast<std::size_t>(b)] + mid.mean_term;
    for (Eigen::Index p = 0; p < m; ++p) {
      couplings(b * m + p, b * m + p) = mid.intra_coupling(p, p);
      for (Eigen::Index q = p + 1; q < m; ++q) {
        couplings(b * m + p, b * m + q) = 2.0 * mid.intra_coupling(p, q);
      }
    }
    for (Eigen::Index c = b + 1; c < static_cast<Eigen::Index>(blocks); ++c) {
      couplings.block(b * m, c * m, m, m) = -2.0 * mid.inter_coupling;
    }
  }
  IsingProblem problem(std::move(fields), std::move(couplings), layout);
  return {std::move(problem), layout, std::move(mid)};
}

BuiltProblem build_binomial_problem(const LabeledDataset& data, const BuildOptions& options) {
  if (data.n_classes != 2) {
    throw ArityError("binomial builder needs K = 2, got " + std::to_string(data.n_classes));
  }
  return build_multiclass_problem(data, options);
}

IsingProblem scale_to_unit(const IsingProblem& problem) {
  const double scale = problem.max_abs_coefficient();
  if (scale == 0.0) throw DegenerateInputError("cannot scale an all-zero Ising problem");
  return IsingProblem(problem.fields() / scale, problem.couplings() / scale, problem.layout());
}

double exact_nll(const Eigen::MatrixXd& weights, const LabeledDataset& data) {
  const int K = data.n_classes;
  if (weights.rows() != K - 1 || static_cast<std::size_t>(weights.cols()) != data.n_features()) {
    throw DimensionError("weights must be (K-1) x M = " + std::to_string(K - 1) + "x" +
                         std::to_string(data.n_features()));
  }
  double total = 0.0;
  for (std::size_t i = 0; i < data.n_samples(); ++i) {
    const Eigen::VectorXd logits = weights * data.features.row(static_cast<Eigen::Index>(i)).transpose();
    const double top = std::max(0.0, logits.size() ? logits.maxCoeff() : 0.0);
    const double lse = top + std::log(std::exp(-top) + (logits.array() - top).exp().sum());
    const int y = data.labels[i];
    total += lse - (y < K - 1 ? logits(y) : 0.0);
  }
  return total;
}

}  // namespace isingclf
