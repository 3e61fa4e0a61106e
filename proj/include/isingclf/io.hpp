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
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "isingclf/dataset.hpp"
#include "isingclf/ising.hpp"

namespace isingclf {

// CSV with header `sample_id,label,<feature...>`. Labels are mapped to
// 0..K-1 in sorted order of their distinct string values; the mapping is
// kept in label_names. Quoted fields follow RFC 4180.
LabeledDataset read_dataset_csv(std::istream& in, std::string_view source = "<stream>");
LabeledDataset load_dataset_csv(const std::filesystem::path& path);
void write_dataset_csv(const LabeledDataset& data, std::ostream& out);
void save_dataset_csv(const LabeledDataset& data, const std::filesystem::path& path);

// Ising problem text format. '#' starts a comment.
//   N
//   h_0 ... h_{N-1}
//   i j J_ij        (one coupling per line, 0-based, any order; i == j sets
//                    the diagonal; repeated pairs accumulate)
IsingProblem read_ising_text(std::istream& in);
IsingProblem load_ising_text(const std::filesystem::path& path);
// Writes the upper triangle nonzeros.
void write_ising_text(const IsingProblem& problem, std::ostream& out);

struct SyntheticSpec {
  std::vector<Eigen::VectorXd> means;        // one per class, all length M
  std::vector<Eigen::MatrixXd> covariances;  // one per class, or one shared
  std::size_t n_per_class = 100;
};

// Gaussian class-conditional samples. Throws DomainError for a covariance
// that is not symmetric positive semidefinite.
LabeledDataset generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

// Two classes with every mean coordinate at +separation and -separation
// respectively; identity covariance.
SyntheticSpec separable_binomial_spec(std::size_t n_features, double separation,
                                      std::size_t n_per_class);

// CSV helpers.
std::string csv_escape(std::string_view field);
std::vector<std::string> split_csv_line(std::string_view line);
// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

}  // namespace isingclf
