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

#include "isingclf/model_io.hpp"

#include <sstream>
#include <string>

#include "isingclf/errors.hpp"

namespace isingclf {

namespace {

nlohmann::ordered_json vec_json(const Eigen::VectorXd& v) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

nlohmann::ordered_json mat_json(const Eigen::MatrixXd& m) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) j.push_back(vec_json(m.row(r).transpose()));
  return j;
}

Eigen::VectorXd vec_from(const nlohmann::json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string("model file: '") + what + "' must be an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return v;
}

Eigen::MatrixXd mat_from(const nlohmann::json& j, Eigen::Index cols, const char* what) {
  if (!j.is_array()) throw ParseError(std::string("model file: '") + what + "' must be an array");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    const auto row = vec_from(j[r], what);
    if (row.size() != cols) throw ParseError(std::string("model file: ragged matrix '") + what + "'");
    m.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return m;
}

Eigen::Index cols_of(const nlohmann::json& j, Eigen::Index fallback) {
  return j.is_array() && !j.empty() && j[0].is_array() ? static_cast<Eigen::Index>(j[0].size())
                                                       : fallback;
}

}  // namespace

nlohmann::ordered_json to_json(const Preprocessing& prep) {
  nlohmann::ordered_json j;
  j["zscore"] = {{"means", vec_json(prep.zscore.means)},
                 {"stds", vec_json(prep.zscore.stds)},
                 {"flagged", prep.zscore.flagged}};
  if (prep.pca) {
    j["pca"] = {{"center", vec_json(prep.pca->center)},
                {"explained_variance", vec_json(prep.pca->explained_variance)},
                {"components", mat_json(prep.pca->components)}};
  } else {
    j["pca"] = nullptr;
  }
  return j;
}

Preprocessing preprocessing_from_json(const nlohmann::json& j) {
  try {
    Preprocessing p;
    const auto& z = j.at("zscore");
    p.zscore.means = vec_from(z.at("means"), "means");
    p.zscore.stds = vec_from(z.at("stds"), "stds");
    p.zscore.flagged = z.at("flagged").get<std::vector<bool>>();
    if (p.zscore.stds.size() != p.zscore.means.size()) {
      throw ParseError("model file: z-score vectors differ in length");
    }
    if (j.contains("pca") && !j.at("pca").is_null()) {
      const auto& pj = j.at("pca");
      PcaModel pca;
      pca.center = vec_from(pj.at("center"), "center");
      pca.explained_variance = vec_from(pj.at("explained_variance"), "explained_variance");
      pca.components = mat_from(pj.at("components"), pca.center.size(), "components");
      p.pca = std::move(pca);
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("model file: ") + e.what());
  }
}

nlohmann::ordered_json to_json(const TrainedModel& model) {
  nlohmann::ordered_json j;
  j["format"] = "isingclf-model";
  j["version"] = 1;
  j["method"] = model.method_tag;
  j["n_classes"] = model.n_classes;
  j["weights"] = mat_json(model.weights);
  j["preprocessing"] = model.preprocessing ? to_json(*model.preprocessing) : nlohmann::ordered_json(nullptr);
  if (model.rbm) {
    const auto& r = *model.rbm;
    j["rbm"] = {{"weights_data", mat_json(r.weights_data)},
                {"weights_label", mat_json(r.weights_label)},
                {"bias_visible_data", vec_json(r.bias_visible_data)},
                {"bias_visible_label", vec_json(r.bias_visible_label)},
                {"bias_hidden", vec_json(r.bias_hidden)}};
  } else {
    j["rbm"] = nullptr;
  }
  return j;
}

TrainedModel model_from_json(const nlohmann::json& j) {
  try {
    if (j.value("format", "") != "isingclf-model") throw ParseError("not an isingclf model file");
    TrainedModel m;
    m.method_tag = j.at("method").get<std::string>();
    m.n_classes = j.at("n_classes").get<int>();
    if (m.n_classes < 2) throw ParseError("model file: n_classes must be >= 2");
    const auto& w = j.at("weights");
    m.weights = mat_from(w, cols_of(w, 0), "weights");
    if (j.contains("preprocessing") && !j.at("preprocessing").is_null()) {
      m.preprocessing = std::make_shared<const Preprocessing>(preprocessing_from_json(j.at("preprocessing")));
    }
    if (j.contains("rbm") && !j.at("rbm").is_null()) {
      const auto& r = j.at("rbm");
      RbmModel rbm;
      rbm.bias_visible_data = vec_from(r.at("bias_visible_data"), "bias_visible_data");
      rbm.bias_visible_label = vec_from(r.at("bias_visible_label"), "bias_visible_label");
      rbm.bias_hidden = vec_from(r.at("bias_hidden"), "bias_hidden");
      rbm.weights_data = mat_from(r.at("weights_data"), rbm.bias_visible_data.size(), "weights_data");
      rbm.weights_label = mat_from(r.at("weights_label"), rbm.bias_visible_label.size(), "weights_label");
      if (rbm.weights_data.rows() != rbm.bias_hidden.size() ||
          rbm.weights_label.rows() != rbm.bias_hidden.size()) {
        throw ParseError("model file: RBM dimensions are inconsistent");
      }
      m.rbm = std::move(rbm);
    } else if (m.weights.rows() != m.n_classes - 1) {
      throw ParseError("model file: weights must have K-1 rows");
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("model file: ") + e.what());
  }
}

}  // namespace isingclf
