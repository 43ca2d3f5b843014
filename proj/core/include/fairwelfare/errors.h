/*
 * Copyright 2026 The fairwelfare Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FAIRWELFARE_ERRORS_H_
#define FAIRWELFARE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace fairwelfare {

// Failures are reported with exceptions. Each subclass maps to one failure
// category; the command-line tool turns categories into exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inputs that do not fit together (alphabet mismatch, malformed tables).
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

// Caller misuse of an API (for example an empty variable subset).
class UsageError : public Error {
 public:
  using Error::Error;
};

// Conditioning on an event of probability zero.
class UndefinedConditionalError : public Error {
 public:
  using Error::Error;
};

// A value outside the admissible domain or range of a transform.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Numerical failure inside an optimizer.
class SolverError : public Error {
 public:
  using Error::Error;
};

// Exhaustive enumeration would exceed the evaluation cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Two results that must agree by construction did not.
class InternalConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace fairwelfare

#endif  // FAIRWELFARE_ERRORS_H_
