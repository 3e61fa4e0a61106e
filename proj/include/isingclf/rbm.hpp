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

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>

#include <Eigen/Dense>

#include "isingclf/dataset.hpp"

namespace isingclf {

// Classification RBM. The visible layer is [x (real, M units) | one-hot label
// (K units)]; the hidden layer has H binary units.
struct RbmModel {
  Eigen::MatrixXd weights_data;   // H x M
  Eigen::MatrixXd weights_label;  // H x K
  Eigen::VectorXd bias_visible_data;
  Eigen::VectorXd bias_visible_label;
  Eigen::VectorXd bias_hidden;

  int n_hidden() const { return static_cast<int>(bias_hidden.size()); }
  int n_features() const { return static_cast<int>(bias_visible_data.size()); }
  int n_classes() const { return static_cast<int>(bias_visible_label.size()); }

  // All-zero parameters of the given shape.
  static RbmModel zeros(int n_hidden, int n_features, int n_classes);

  bool all_finite() const;
};

struct RbmTrainConfig {
  int cd_steps = 1;
  int batch_size = 32;
  double learning_rate = 0.01;
  int epochs = 50;
  int n_hidden = 64;
  std::uint64_t seed = 0;

  void validate() const;
};

// Called after each epoch with (epoch, mean squared reconstruction error of
// the data units over the training set).
using RbmEpochCallback = std::function<void(int, double)>;

// CD-k training. Visible data units are linear (Gaussian mean field), label
// units are a softmax group, hidden units are sampled as binary.
RbmModel train_rbm(const LabeledDataset& data, const RbmTrainConfig& config,
                   const RbmEpochCallback& on_epoch = {});

// F(v) = -b.v - sum_h log(1 + exp(c_h + W_h . v)) for v = [x | one-hot label].
double free_energy(const RbmModel& model, const Eigen::VectorXd& v_data,
                   const Eigen::VectorXd& v_label);

// Softmax over -F(x, e_c).
Eigen::VectorXd predict_rbm(const RbmModel& model, const Eigen::VectorXd& x);

// Text format:
//   isingclf-rbm 1
//   H M K
//   then W_data (H rows of M), W_label (H rows of K), b_data, b_label, c,
//   each row on one line, values in shortest round-trip decimal form.
void save_rbm(const RbmModel& model, std::ostream& out);
RbmModel load_rbm(std::istream& in);

}  // namespace isingclf
