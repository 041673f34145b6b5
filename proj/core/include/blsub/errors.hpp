// Copyright 2026 The Authors.
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

#ifndef BLSUB_ERRORS_HPP_
#define BLSUB_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace blsub {

// Base for everything thrown by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or out-of-contract inputs (zero columns, bad dimensions, ...).
class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(what) {}
};

// Numeric-domain failures: indefinite matrices, singular Gram matrices,
// non-converging iterations. The message names the offending quantity.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(what) {}
};

// Instance exceeds a documented enumeration envelope (exponential searches).
class CapacityError : public Error {
 public:
  explicit CapacityError(const std::string& what) : Error(what) {}
};

// The weight vector lies outside the feasibility polytope.
class InfeasibleError : public Error {
 public:
  explicit InfeasibleError(const std::string& what) : Error(what) {}
};

// A discretization cannot meet its accuracy budget (box too small, grid too
// coarse, truncated tails dominating).
class AccuracyError : public Error {
 public:
  explicit AccuracyError(const std::string& what) : Error(what) {}
};

// An operation was invoked in a state its contract excludes (for example
// asking for critical subsets of an interior instance).
class LogicError : public Error {
 public:
  explicit LogicError(const std::string& what) : Error(what) {}
};

// A stated precondition (frame identity, matching grids) fails.
class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what) : Error(what) {}
};

// Internal consistency violated; indicates contradictory inputs, e.g. a
// projected column vanishing where theory forbids it.
class ConsistencyError : public Error {
 public:
  explicit ConsistencyError(const std::string& what) : Error(what) {}
};

}  // namespace blsub

#endif  // BLSUB_ERRORS_HPP_
