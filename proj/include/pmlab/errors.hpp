// Copyright 2026 the pmlab developers.
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
#include <stdexcept>
#include <string>

namespace pmlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape/contract mismatch between operands.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Joint dimension would exceed the configured cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// A dense solver (eigendecomposition, SVD, least squares) failed, or a
/// numerical postcondition could not be certified.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The system Hamiltonian violates the nondegeneracy precondition. Carries
/// the offending level pair and their gap so the caller can perturb.
class DegenerateSpectrumError : public Error {
 public:
  DegenerateSpectrumError(std::size_t a, std::size_t b, double gap, const std::string& what)
      : Error(what), level_a(a), level_b(b), gap(gap) {}
  std::size_t level_a;
  std::size_t level_b;
  double gap;
};

/// Time slicing failed its doubling self-test.
class AccuracyError : public Error {
 public:
  AccuracyError(double defect, const std::string& what) : Error(what), defect(defect) {}
  double defect;
};

/// Pointer packet left the safe lattice window.
class ReadoutError : public Error {
 public:
  using Error::Error;
};

/// Expectation set does not determine a pure state.
class IncompleteTomographyError : public Error {
 public:
  using Error::Error;
};

/// Expectation set is tomographically complete but self-contradictory.
class InconsistentExpectationsError : public Error {
 public:
  InconsistentExpectationsError(double residual, const std::string& what)
      : Error(what), residual(residual) {}
  double residual;
};

}  // namespace pmlab
