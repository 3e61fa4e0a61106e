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

#include "isingclf/rbm.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>

#include "isingclf/errors.hpp"
#include "isingclf/io.hpp"
#include "isingclf/rng.hpp"

namespace isingclf {

namespace {

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

Eigen::VectorXd sigmoid(const Eigen::VectorXd& z) {
  return z.unaryExpr([](double v) {
    return v >= 0.0 ? 1.0 / (1.0 + std::exp(-v)) : std::exp(v) / (1.0 + std::exp(v));
  });
}

Eigen::VectorXd softmax(const Eigen::VectorXd& z) {
  const Eigen::ArrayXd e = (z.array() - z.maxCoeff()).exp();
  return (e / e.sum()).matrix();
}

Eigen::VectorXd one_hot(int label, int k) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(k);
  v(label) = 1.0;
  return v;
}

// Rows in canonical order (by sample id when ids are present and unique), so
// the shuffle seed alone decides the visiting order.
std::vector<std::size_t> canonical_order(const LabeledDataset& data) {
  std::vector<std::size_t> order(data.n_samples());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (data.sample_ids.size() != data.n_samples()) return order;
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    return data.sample_ids[a] < data.sample_ids[b];
  });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (data.sample_ids[order[i]] == data.sample_ids[order[i - 1]]) {
      std::iota(order.begin(), order.end(), std::size_t{0});
      break;
    }
  }
  return order;
}

double reconstruction_error(const RbmModel& m, const LabeledDataset& data) {
  if (data.n_samples() == 0 || m.n_features() == 0) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < data.n_samples(); ++i) {
    const Eigen::VectorXd x = data.features.row(static_cast<Eigen::Index>(i)).transpose();
    const Eigen::VectorXd l = one_hot(data.labels[i], m.n_classes());
    const Eigen::VectorXd h = sigmoid(m.bias_hidden + m.weights_data * x + m.weights_label * l);
    const Eigen::VectorXd recon = m.bias_visible_data + m.weights_data.transpose() * h;
    total += (x - recon).squaredNorm();
  }
  return total / static_cast<double>(data.n_samples() * static_cast<std::size_t>(m.n_features()));
}

}  // namespace

RbmModel RbmModel::zeros(int n_hidden, int n_features, int n_classes) {
  RbmModel m;
  m.weights_data = Eigen::MatrixXd::Zero(n_hidden, n_features);
  m.weights_label = Eigen::MatrixXd::Zero(n_hidden, n_classes);
  m.bias_visible_data = Eigen::VectorXd::Zero(n_features);
  m.bias_visible_label = Eigen::VectorXd::Zero(n_classes);
  m.bias_hidden = Eigen::VectorXd::Zero(n_hidden);
  return m;
}

bool RbmModel::all_finite() const {
  return weights_data.allFinite() && weights_label.allFinite() && bias_visible_data.allFinite() &&
         bias_visible_label.allFinite() && bias_hidden.allFinite();
}

void RbmTrainConfig::validate() const {
  if (cd_steps < 1) throw DomainError("cd_steps must be >= 1");
  if (batch_size < 1) throw DomainError("batch_size must be >= 1");
  if (!(learning_rate > 0.0)) throw DomainError("learning_rate must be positive");
  if (epochs < 0) throw DomainError("epochs must be >= 0");
  if (n_hidden < 1) throw DomainError("n_hidden must be >= 1");
}

RbmModel train_rbm(const LabeledDataset& data, const RbmTrainConfig& config,
                   const RbmEpochCallback& on_epoch) {
  config.validate();
  data.validate(/*require_all_classes=*/false);
  const int M = static_cast<int>(data.n_features());
  const int K = data.n_classes;
  const int H = config.n_hidden;

  Rng rng(config.seed);
  RbmModel m = RbmModel::zeros(H, M, K);
  for (Eigen::Index i = 0; i < m.weights_data.size(); ++i) m.weights_data.data()[i] = 0.01 * rng.normal();
  for (Eigen::Index i = 0; i < m.weights_label.size(); ++i) m.weights_label.data()[i] = 0.01 * rng.normal();

  auto order = canonical_order(data);
  const auto n = order.size();
  const auto batch = static_cast<std::size_t>(config.batch_size);

  Eigen::MatrixXd dWd(H, M), dWl(H, K);
  Eigen::VectorXd dbd(M), dbl(K), dc(H);
  Eigen::VectorXd h_sample(H);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order.begin(), order.end());
    for (std::size_t start = 0; start < n; start += batch) {
      const auto stop = std::min(n, start + batch);
      dWd.setZero();
      dWl.setZero();
      dbd.setZero();
      dbl.setZero();
      dc.setZero();
      for (std::size_t p = start; p < stop; ++p) {
        const auto row = static_cast<Eigen::Index>(order[p]);
        const Eigen::VectorXd x0 = data.features.row(row).transpose();
        const Eigen::VectorXd l0 = one_hot(data.labels[order[p]], K);
        const Eigen::VectorXd h0 = sigmoid(m.bias_hidden + m.weights_data * x0 + m.weights_label * l0);

        Eigen::VectorXd hk = h0, xk = x0, lk = l0;
        for (int step = 0; step < config.cd_steps; ++step) {
          for (int j = 0; j < H; ++j) h_sample(j) = rng.uniform() < hk(j) ? 1.0 : 0.0;
          xk = m.bias_visible_data + m.weights_data.transpose() * h_sample;
          lk = softmax(m.bias_visible_label + m.weights_label.transpose() * h_sample);
          hk = sigmoid(m.bias_hidden + m.weights_data * xk + m.weights_label * lk);
        }
        dWd.noalias() += h0 * x0.transpose() - hk * xk.transpose();
        dWl.noalias() += h0 * l0.transpose() - hk * lk.transpose();
        dbd += x0 - xk;
        dbl += l0 - lk;
        dc += h0 - hk;
      }
      const double step = config.learning_rate / static_cast<double>(stop - start);
      m.weights_data += step * dWd;
      m.weights_label += step * dWl;
      m.bias_visible_data += step * dbd;
      m.bias_visible_label += step * dbl;
      m.bias_hidden += step * dc;
    }
    if (!m.all_finite()) {
      throw DomainError("RBM parameters diverged at epoch " + std::to_string(epoch + 1) +
                        "; lower the learning rate");
    }
    if (on_epoch) on_epoch(epoch + 1, reconstruction_error(m, data));
  }
  return m;
}

double free_energy(const RbmModel& model, const Eigen::VectorXd& v_data,
                   const Eigen::VectorXd& v_label) {
  if (v_data.size() != model.n_features() || v_label.size() != model.n_classes()) {
    throw DimensionError("visible vector does not match the RBM");
  }
  const Eigen::VectorXd pre =
      model.bias_hidden + model.weights_data * v_data + model.weights_label * v_label;
  double f = -model.bias_visible_data.dot(v_data) - model.bias_visible_label.dot(v_label);
  for (Eigen::Index j = 0; j < pre.size(); ++j) f -= softplus(pre(j));
  return f;
}

Eigen::VectorXd predict_rbm(const RbmModel& model, const Eigen::VectorXd& x) {
  if (x.size() != model.n_features()) throw DimensionError("sample does not match the RBM");
  const int K = model.n_classes();
  const Eigen::VectorXd base = model.bias_hidden + model.weights_data * x;
  Eigen::VectorXd neg_f(K);
  for (int c = 0; c < K; ++c) {
    // The data-unit bias term is shared by every class and cancels.
    double v = model.bias_visible_label(c);
    const Eigen::VectorXd pre = base + model.weights_label.col(c);
    for (Eigen::Index j = 0; j < pre.size(); ++j) v += softplus(pre(j));
    neg_f(c) = v;
  }
  return softmax(neg_f);
}

namespace {

void write_row(std::ostream& out, const double* values, Eigen::Index n) {
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i) out << ' ';
    out << format_double(values[i]);
  }
  out << '\n';
}

void read_values(std::istream& in, double* values, Eigen::Index n, const char* what) {
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(in >> values[i])) throw ParseError(std::string("RBM file truncated in ") + what);
  }
}

}  // namespace

void save_rbm(const RbmModel& model, std::ostream& out) {
  out << "isingclf-rbm 1\n"
      << model.n_hidden() << ' ' << model.n_features() << ' ' << model.n_classes() << '\n';
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> wd = model.weights_data;
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> wl = model.weights_label;
  for (Eigen::Index r = 0; r < wd.rows(); ++r) write_row(out, wd.row(r).data(), wd.cols());
  for (Eigen::Index r = 0; r < wl.rows(); ++r) write_row(out, wl.row(r).data(), wl.cols());
  write_row(out, model.bias_visible_data.data(), model.bias_visible_data.size());
  write_row(out, model.bias_visible_label.data(), model.bias_visible_label.size());
  write_row(out, model.bias_hidden.data(), model.bias_hidden.size());
}

RbmModel load_rbm(std::istream& in) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "isingclf-rbm" || version != 1) {
    throw ParseError("not an isingclf-rbm version 1 file");
  }
  int H = 0, M = 0, K = 0;
  if (!(in >> H >> M >> K) || H < 1 || M < 0 || K < 1) throw ParseError("bad RBM dimensions");
  RbmModel m = RbmModel::zeros(H, M, K);
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> wd(H, M), wl(H, K);
  read_values(in, wd.data(), wd.size(), "weights_data");
  read_values(in, wl.data(), wl.size(), "weights_label");
  read_values(in, m.bias_visible_data.data(), M, "bias_visible_data");
  read_values(in, m.bias_visible_label.data(), K, "bias_visible_label");
  read_values(in, m.bias_hidden.data(), H, "bias_hidden");
  m.weights_data = wd;
  m.weights_label = wl;
  return m;
}

}  // namespace isingclf
