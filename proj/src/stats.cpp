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

#include "isingclf/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "isingclf/errors.hpp"

namespace isingclf {

std::vector<double> abs_ranks(std::span<const double> values) {
  const auto n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](auto a, auto b) { return std::abs(values[a]) < std::abs(values[b]); });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && std::abs(values[order[j + 1]]) == std::abs(values[order[i]])) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
    i = j + 1;
  }
  return ranks;
}

namespace {

double clamp_p(double p) {
  return std::clamp(p, std::numeric_limits<double>::min(), 1.0);
}

double positive_rank_sum(std::span<const double> d, const std::vector<double>& ranks) {
  double w = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] > 0.0) w += ranks[i];
  }
  return w;
}

}  // namespace

double wilcoxon_exact_p(std::span<const double> differences) {
  const auto ranks = abs_ranks(differences);
  // Doubled ranks are integers even with ties (average ranks are multiples of 1/2).
  std::vector<std::size_t> doubled(ranks.size());
  std::size_t total = 0;
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    doubled[i] = static_cast<std::size_t>(std::llround(2.0 * ranks[i]));
    total += doubled[i];
  }
  // counts[t]: number of sign assignments with doubled W+ == t.
  std::vector<double> counts(total + 1, 0.0);
  counts[0] = 1.0;
  std::size_t reach = 0;
  for (auto r : doubled) {
    for (std::size_t t = reach + 1; t-- > 0;) {
      if (counts[t] != 0.0) counts[t + r] += counts[t];
    }
    reach += r;
  }
  const auto observed =
      static_cast<std::size_t>(std::llround(2.0 * positive_rank_sum(differences, ranks)));
  double lower = 0.0, upper = 0.0, all = 0.0;
  for (std::size_t t = 0; t <= total; ++t) {
    all += counts[t];
    if (t <= observed) lower += counts[t];
    if (t >= observed) upper += counts[t];
  }
  return clamp_p(2.0 * std::min(lower, upper) / all);
}

double wilcoxon_normal_p(std::span<const double> differences) {
  const auto n = static_cast<double>(differences.size());
  const auto ranks = abs_ranks(differences);
  const double w_plus = positive_rank_sum(differences, ranks);
  const double mean = n * (n + 1.0) / 4.0;

  double tie_term = 0.0;
  std::vector<double> sorted = ranks;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i + 1);
    tie_term += t * t * t - t;
    i = j + 1;
  }
  const double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
  if (var <= 0.0) return 1.0;
  const double z = std::max(0.0, std::abs(w_plus - mean) - 0.5) / std::sqrt(var);
  return clamp_p(std::erfc(z / std::sqrt(2.0)));
}

WilcoxonResult wilcoxon_signed_rank(const PairedSample& pair, std::size_t exact_limit) {
  if (pair.values_a.size() != pair.values_b.size()) {
    throw DimensionError("paired samples differ in length");
  }
  std::vector<double> d;
  d.reserve(pair.values_a.size());
  for (std::size_t i = 0; i < pair.values_a.size(); ++i) {
    if (!std::isfinite(pair.values_a[i]) || !std::isfinite(pair.values_b[i])) {
      throw DomainError("paired sample contains a non-finite value");
    }
    const double diff = pair.values_a[i] - pair.values_b[i];
    if (diff != 0.0) d.push_back(diff);
  }
  WilcoxonResult out;
  out.n_used = d.size();
  if (d.empty()) {
    out.degenerate = true;
    out.p_value = 1.0;
    return out;
  }
  const auto ranks = abs_ranks(d);
  const double w_plus = positive_rank_sum(d, ranks);
  const double n = static_cast<double>(d.size());
  out.statistic = std::min(w_plus, n * (n + 1.0) / 2.0 - w_plus);
  out.exact = d.size() <= exact_limit;
  out.p_value = out.exact ? wilcoxon_exact_p(d) : wilcoxon_normal_p(d);
  return out;
}

std::vector<double> bonferroni(std::span<const double> p_values, std::size_t m) {
  if (m < p_values.size()) {
    throw DimensionError("Bonferroni family size " + std::to_string(m) +
                         " is smaller than the number of p-values");
  }
  std::vector<double> out;
  out.reserve(p_values.size());
  for (double p : p_values) out.push_back(std::min(1.0, p * static_cast<double>(m)));
  return out;
}

}  // namespace isingclf
