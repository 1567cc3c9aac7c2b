/*
 * Copyright 2026 The lssboost Authors.
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

#ifndef LSSBOOST_ERRORS_HPP_
#define LSSBOOST_ERRORS_HPP_

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lssboost {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Response or parameter outside the admissible domain of a family.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Invalid user input: unknown columns, bad selectors, malformed configs.
class InputError : public Error {
 public:
  using Error::Error;
};

// Singular systems, non-finite gradients and similar numeric breakdowns.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Smoothing parameter could not be matched to the requested degrees of
// freedom.
class CalibrationError : public Error {
 public:
  using Error::Error;
};

// Coordinate-wise offset search did not converge.
class OffsetError : public Error {
 public:
  using Error::Error;
};

// Model file could not be read (version, fingerprint, structure).
class FormatError : public Error {
 public:
  using Error::Error;
};

using WarningHandler = std::function<void(std::string_view)>;

// Installs a process-wide warning sink and returns the previous one. The
// default handler writes "warning: <msg>" to stderr.
WarningHandler set_warning_handler(WarningHandler handler);

void warn(std::string_view message);

}  // namespace lssboost

#endif  // LSSBOOST_ERRORS_HPP_
