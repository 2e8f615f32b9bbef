// Copyright 2026 The eitmem Authors.
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

#ifndef EITMEM_ERRORS_HPP
#define EITMEM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace eitmem {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A value is outside its physical/documented domain.
struct ParameterError : Error {
  using Error::Error;
};

/// An interval or lookup argument lies outside the covered range.
struct RangeError : Error {
  using Error::Error;
};

/// Operation undefined for this input (e.g. zero-energy pulse).
struct DegenerateInputError : Error {
  using Error::Error;
};

/// The integrator produced NaN/Inf; message names the offending step.
struct NumericalError : Error {
  using Error::Error;
};

/// An iterative procedure exceeded its cycle cap.
struct ConvergenceError : Error {
  ConvergenceError(const std::string& msg, double last_ratio)
      : Error(msg), last_eigenvalue_ratio(last_ratio) {}
  double last_eigenvalue_ratio;
};

/// Iterative signal optimization lost the signal (retrieved energy under floor).
struct OptimizationStalledError : Error {
  using Error::Error;
};

/// Invalid run configuration; carries the offending field path.
struct ConfigError : Error {
  ConfigError(const std::string& field, const std::string& msg)
      : Error(field + ": " + msg), field_path(field) {}
  std::string field_path;
};

}  // namespace eitmem

#endif  // EITMEM_ERRORS_HPP
