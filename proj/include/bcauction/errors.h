// Copyright 2026 The bcauction Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BCAUCTION_ERRORS_H_
#define BCAUCTION_ERRORS_H_

#include <stdexcept>
#include <string>

namespace bcauction {

// Bad arguments: wrong sizes, out-of-range values, unsorted cuts.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A conditional expectation over an interval carrying zero probability.
class DegenerateInterval : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A point where the density vanishes, so the virtual valuation is undefined.
class UnsupportedPoint : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The virtual valuation is not strictly increasing.
class NotRegular : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Fixed-point iteration failed to reach tolerance.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double best_residual)
      : std::runtime_error(what), best_residual_(best_residual) {}
  double best_residual() const { return best_residual_; }

 private:
  double best_residual_;
};

// No optimal mechanism is known for the requested bidder / bid counts.
class CharacterizationOpen : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed mechanism, tree or replay.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exhaustive search asked to go beyond its enumeration budget.
class BudgetError : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace bcauction

#endif  // BCAUCTION_ERRORS_H_
