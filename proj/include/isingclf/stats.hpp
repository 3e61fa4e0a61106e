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
#include <span>
#include <vector>

namespace isingclf {

struct PairedSample {
  std::vector<double> values_a;
  std::vector<double> values_b;
};

struct WilcoxonResult {
  double statistic = 0.0;  // min(W+, W-)
  double p_value = 1.0;    // two-sided
  std::size_t n_used = 0;  // nonzero differences
  bool exact = false;
  bool degenerate = false;  // every difference was zero
};

inline constexpr std::size_t kWilcoxonExactLimit = 25;

// Paired two-sided Wilcoxon signed-rank test. Zero differences are dropped
// and tied |differences| share their average rank. Exact null distribution
// for n <= exact_limit, otherwise the normal approximation with continuity
// and tie corrections.
WilcoxonResult wilcoxon_signed_rank(const PairedSample& pair,
                                    std::size_t exact_limit = kWilcoxonExactLimit);

// The two p-value routes on already computed nonzero differences. The exact
// route counts sign assignments by dynamic programming over doubled ranks.
double wilcoxon_exact_p(std::span<const double> differences);
double wilcoxon_normal_p(std::span<const double> differences);

// Average ranks (1-based) of |values|.
std::vector<double> abs_ranks(std::span<const double> values);

// min(1, p * m) for every p. Throws DimensionError if m < p_values.size().
std::vector<double> bonferroni(std::span<const double> p_values, std::size_t m);

}  // namespace isingclf
