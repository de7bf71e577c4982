// Copyright 2026 The paracz Authors
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

#ifndef PARACZ_ERROR_HPP_
#define PARACZ_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace paracz {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: violated preconditions, malformed configs. CLI exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A computation that could not produce a trustworthy result. CLI exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NoSignChangeError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NoRootError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class FitError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularSystemError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class AssignmentAmbiguityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ObjectiveError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SignMismatchError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ZeroShiftError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class StepTooLargeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NonUnitaryError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NonDiagonalError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class AmplitudeRangeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class CollinearError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

}  // namespace paracz

#endif  // PARACZ_ERROR_HPP_
