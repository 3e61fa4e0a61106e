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

#include "isingclf/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>

#include "isingclf/errors.hpp"
#include "isingclf/rng.hpp"

namespace isingclf {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

namespace {

// Reads one RFC 4180 record. Quoted fields may span lines. Returns false at
// end of input. `line` tracks the physical line number.
bool read_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line) {
  fields.clear();
  if (in.peek() == std::char_traits<char>::eof()) return false;
  ++line;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (;;) {
    const int ch = in.get();
    if (ch == std::char_traits<char>::eof()) {
      if (quoted) throw ParseError("line " + std::to_string(line) + ": unterminated quoted field");
      break;
    }
    any = true;
    const char c = static_cast<char>(ch);
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          field += '"';
          in.get();
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      break;
    } else if (c != '\r') {
      field += c;
    }
  }
  if (any) fields.push_back(std::move(field));
  return any;
}

bool parse_double(std::string_view text, double& out) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
  return res.ec == std::errc() && res.ptr == text.data() + text.size() && !text.empty();
}

}  // namespace

std::vector<std::string> split_csv_line(std::string_view line) {
  std::istringstream in{std::string(line)};
  std::vector<std::string> fields;
  std::size_t n = 0;
  read_record(in, fields, n);
  return fields;
}

LabeledDataset read_dataset_csv(std::istream& in, std::string_view source) {
  const std::string where(source);
  std::vector<std::string> header;
  std::size_t line = 0;
  if (!read_record(in, header, line)) throw ParseError(where + ": empty file");
  if (header.size() < 2 || header[0] != "sample_id" || header[1] != "label") {
    throw ParseError(where + ": header must start with 'sample_id,label'");
  }
  const auto m = header.size() - 2;

  std::vector<std::string> ids, raw_labels;
  std::vector<double> values;
  std::vector<std::string> fields;
  std::size_t row = 0;
  while (read_record(in, fields, line)) {
    if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
    ++row;
    if (fields.size() != header.size()) {
      throw ParseError(where + ": row " + std::to_string(row) + " (line " + std::to_string(line) +
                       ") has " + std::to_string(fields.size()) + " fields, header has " +
                       std::to_string(header.size()));
    }
    ids.push_back(fields[0]);
    raw_labels.push_back(fields[1]);
    for (std::size_t j = 0; j < m; ++j) {
      double v = 0.0;
      if (!parse_double(fields[j + 2], v) || !std::isfinite(v)) {
        throw ParseError(where + ": row " + std::to_string(row) + " (line " +
                         std::to_string(line) + "), column '" + header[j + 2] +
                         "': invalid or non-finite value '" + fields[j + 2] + "'");
      }
      values.push_back(v);
    }
  }
  if (ids.empty()) throw ParseError(where + ": no data rows");

  LabeledDataset d;
  d.label_names = raw_labels;
  std::sort(d.label_names.begin(), d.label_names.end());
  d.label_names.erase(std::unique(d.label_names.begin(), d.label_names.end()), d.label_names.end());
  std::map<std::string, int> index;
  for (std::size_t k = 0; k < d.label_names.size(); ++k) index[d.label_names[k]] = static_cast<int>(k);
  d.n_classes = static_cast<int>(d.label_names.size());
  for (const auto& l : raw_labels) d.labels.push_back(index[l]);
  d.sample_ids = std::move(ids);
  d.feature_names.assign(header.begin() + 2, header.end());
  d.features.resize(static_cast<Eigen::Index>(d.labels.size()), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < d.labels.size(); ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      d.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = values[i * m + j];
    }
  }
  return d;
}

LabeledDataset load_dataset_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open dataset '" + path.string() + "'");
  return read_dataset_csv(in, path.string());
}

void write_dataset_csv(const LabeledDataset& data, std::ostream& out) {
  data.validate(/*require_all_classes=*/false);
  out << "sample_id,label";
  for (std::size_t j = 0; j < data.n_features(); ++j) {
    out << ',' << csv_escape(j < data.feature_names.size() ? data.feature_names[j]
                                                            : "f" + std::to_string(j + 1));
  }
  out << "\r\n";
  for (std::size_t i = 0; i < data.n_samples(); ++i) {
    const auto id = i < data.sample_ids.size() ? data.sample_ids[i] : "s" + std::to_string(i + 1);
    const auto y = static_cast<std::size_t>(data.labels[i]);
    const auto label = y < data.label_names.size() ? data.label_names[y] : std::to_string(y);
    out << csv_escape(id) << ',' << csv_escape(label);
    for (std::size_t j = 0; j < data.n_features(); ++j) {
      out << ',' << format_double(data.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
    out << "\r\n";
  }
}

void save_dataset_csv(const LabeledDataset& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  write_dataset_csv(data, out);
}

// ---------------------------------------------------------------------------

namespace {

// Whitespace-separated tokens with '#' comments stripped.
std::vector<std::string> tokens(std::istream& in) {
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) out.push_back(tok);
  }
  return out;
}

long long parse_index(const std::string& tok, const char* what) {
  long long v = 0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
    throw ParseError(std::string("Ising file: bad ") + what + " '" + tok + "'");
  }
  return v;
}

double parse_value(const std::string& tok, const char* what) {
  double v = 0.0;
  if (!parse_double(tok, v) || !std::isfinite(v)) {
    throw ParseError(std::string("Ising file: bad ") + what + " '" + tok + "'");
  }
  return v;
}

}  // namespace

IsingProblem read_ising_text(std::istream& in) {
  const auto tok = tokens(in);
  if (tok.empty()) throw ParseError("Ising file: missing spin count");
  const auto n = parse_index(tok[0], "spin count");
  if (n < 1) throw ParseError("Ising file: spin count must be positive");
  if (tok.size() < static_cast<std::size_t>(n) + 1) throw ParseError("Ising file: too few fields");
  Eigen::VectorXd h(n);
  for (long long i = 0; i < n; ++i) h(i) = parse_value(tok[static_cast<std::size_t>(i) + 1], "field");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  const auto rest = tok.size() - static_cast<std::size_t>(n) - 1;
  if (rest % 3 != 0) throw ParseError("Ising file: coupling lines must be 'i j J_ij'");
  for (std::size_t p = static_cast<std::size_t>(n) + 1; p < tok.size(); p += 3) {
    const auto i = parse_index(tok[p], "coupling index");
    const auto j = parse_index(tok[p + 1], "coupling index");
    if (i < 0 || j < 0 || i >= n || j >= n) {
      throw ParseError("Ising file: coupling (" + tok[p] + ", " + tok[p + 1] + ") out of range");
    }
    J(std::min(i, j), std::max(i, j)) += parse_value(tok[p + 2], "coupling");
  }
  return IsingProblem(std::move(h), std::move(J));
}

IsingProblem load_ising_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open Ising file '" + path.string() + "'");
  return read_ising_text(in);
}

void write_ising_text(const IsingProblem& problem, std::ostream& out) {
  const auto n = static_cast<Eigen::Index>(problem.n_spins());
  out << n << '\n';
  for (Eigen::Index i = 0; i < n; ++i) out << (i ? " " : "") << format_double(problem.fields()(i));
  out << '\n';
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const double v = problem.couplings()(i, j);
      if (v != 0.0) out << i << ' ' << j << ' ' << format_double(v) << '\n';
    }
  }
}

// ---------------------------------------------------------------------------

LabeledDataset generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  const auto K = spec.means.size();
  if (K < 1) throw EmptyInputError("synthetic spec has no classes");
  const auto M = spec.means.front().size();
  for (const auto& mu : spec.means) {
    if (mu.size() != M) throw DimensionError("class means differ in length");
    if (!mu.allFinite()) throw DomainError("class mean is not finite");
  }
  if (spec.covariances.size() != 1 && spec.covariances.size() != K) {
    throw DimensionError("need one shared covariance or one per class");
  }
  std::vector<Eigen::MatrixXd> factors;
  for (const auto& cov : spec.covariances) {
    if (cov.rows() != M || cov.cols() != M) throw DimensionError("covariance must be M x M");
    if (!cov.allFinite()) throw DomainError("covariance is not finite");
    const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
    if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
      throw DomainError("covariance is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    if (M > 0 && eig.eigenvalues().minCoeff() < -1e-10 * scale) {
      throw DomainError("covariance is not positive semidefinite");
    }
    factors.push_back(eig.eigenvectors() *
                      eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal());
  }

  Rng rng(seed);
  LabeledDataset d;
  d.n_classes = static_cast<int>(K);
  const auto total = K * spec.n_per_class;
  d.features.resize(static_cast<Eigen::Index>(total), M);
  const int width = static_cast<int>(std::to_string(K - 1).size());
  for (std::size_t k = 0; k < K; ++k) {
    std::string name = std::to_string(k);
    name.insert(0, static_cast<std::size_t>(width) - name.size(), '0');
    d.label_names.push_back("class" + name);
  }
  Eigen::VectorXd z(M);
  std::size_t row = 0;
  for (std::size_t k = 0; k < K; ++k) {
    const auto& A = factors.size() == 1 ? factors.front() : factors[k];
    for (std::size_t i = 0; i < spec.n_per_class; ++i, ++row) {
      for (Eigen::Index j = 0; j < M; ++j) z(j) = rng.normal();
      d.features.row(static_cast<Eigen::Index>(row)) = (spec.means[k] + A * z).transpose();
      d.labels.push_back(static_cast<int>(k));
      d.sample_ids.push_back("s" + std::to_string(row + 1));
    }
  }
  for (Eigen::Index j = 0; j < M; ++j) d.feature_names.push_back("f" + std::to_string(j + 1));
  return d;
}

SyntheticSpec separable_binomial_spec(std::size_t n_features, double separation,
                                      std::size_t n_per_class) {
  SyntheticSpec spec;
  const auto m = static_cast<Eigen::Index>(n_features);
  const Eigen::VectorXd mu = Eigen::VectorXd::Constant(m, separation);
  spec.means = {mu, -mu};
  spec.covariances = {Eigen::MatrixXd::Identity(m, m)};
  spec.n_per_class = n_per_class;
  return spec;
}

}  // namespace isingclf
