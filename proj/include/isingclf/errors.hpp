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

#include <stdexcept>
#include <string>

namespace isingclf {

// Base of every error raised by the library. The CLI maps any of these to a
// nonzero exit status.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inputs whose sizes disagree (vector length vs. spin count, weight shape vs.
// feature count, ...).
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A value outside its admissible range (weights outside [-1,1], non-PSD
// covariance, non-finite entries).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Problem too large for a configured bound: graph capacity, exhaustive
// enumeration limit, PCA rank.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Degenerate input such as a single-class dataset or an all-zero problem.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

class ArityError : public Error {
 public:
  using Error::Error;
};

class EmptyInputError : public Error {
 public:
  using Error::Error;
};

// A class has too few samples to be split or folded.
class StratificationError : public Error {
 public:
  using Error::Error;
};

// Malformed input file. The message names the row/column where known.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace isingclf
