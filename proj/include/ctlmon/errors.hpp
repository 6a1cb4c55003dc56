// Copyright 2026 The ctlmon Authors
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

#ifndef CTLMON_ERRORS_HPP_
#define CTLMON_ERRORS_HPP_

#include <exception>
#include <stdexcept>
#include <string>

namespace ctlmon {

// Bad user input: unknown signal, malformed file, precondition violated by
// the caller. Maps to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A reference design disagrees with its own functional oracle on a
// fault-free run. This is a bug in the design model, never a monitor fault.
// Maps to exit code 2.
class DesignDefect : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Maps to exit code 3.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// API misuse that the caller could have checked (e.g. firing a disabled
// transition).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Internal data structure no longer satisfies its invariant.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Metric is undefined for the given input (e.g. DR with zero output errors).
class UndefinedMetric : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Status code for an exception raised by the library: 1 for ConfigError,
// UndefinedMetric and ContractViolation, 3 for IoError and filesystem
// errors, 2 for DesignDefect and anything else. Sets `message`.
int status_of(std::exception_ptr error, std::string& message);

}  // namespace ctlmon

#endif  // CTLMON_ERRORS_HPP_
