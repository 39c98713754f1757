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

/**
 * @file
 * Dense complex linear algebra on top of the kernel layer: matrices, state
 * vectors, Hermitian operators, and the handful of decompositions the rest
 * of the lab is built on. Eigendecomposition, SVD and least squares are
 * delegated to LAPACK; everything data-parallel goes through pmlab::kernels.
 *
 * Index convention (fixed project-wide): tensor products put the left
 * (system) factor on the slow index and the right (apparatus) factor on the
 * fast one, so |i>|a> lives at flat index i*dimA + a. No module does raw
 * joint-index arithmetic; use the helpers here.
 */

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "pmlab/errors.hpp"
#include "pmlab/kernels.hpp"

namespace pmlab {

using cdouble = std::complex<double>;

/// One knob object for every tolerance the lab uses. Values are the defaults
/// stated per operation; the strict profile tightens construction checks.
struct Tolerances {
  double hermiticity = 1e-12;     // construction: max |M - M^dag|
  double normalization = 1e-12;   // state norm after normalizing constructor
  double unitarity = 1e-10;       // |U^dag U - I|_max for single exponentials
  double propagator_unitarity = 1e-8;  // after time slicing
  double trace = 1e-10;           // density-matrix trace precondition
  double commutation = 1e-10;     // [H_A,P], [Otilde,H_S] certificates
  double degeneracy_rel = 1e-9;   // min gap relative to |H_S|
  double slicing = 1e-6;          // doubling-test acceptance
  double entropy_floor = 1e-10;   // Schmidt weights below this count as 0
  std::size_t max_joint_dim = 4096;

  static const Tolerances& standard();
  static const Tolerances& strict();
};

/// Dense row-major complex matrix. Entries are finite by construction; the
/// data constructors reject NaN/Inf.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, cdouble{0.0, 0.0}) {}
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cdouble> entries);

  static ComplexMatrix identity(std::size_t n);
  /// Square matrix from a row-major initializer, e.g. {{1,0},{0,-1}}.
  static ComplexMatrix from_rows(const std::vector<std::vector<cdouble>>& rows);
  static ComplexMatrix diagonal(const std::vector<cdouble>& d);
  static ComplexMatrix diagonal_real(const std::vector<double>& d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool is_square() const { return rows_ == cols_; }

  cdouble& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cdouble& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  cdouble* data() { return data_.data(); }
  const cdouble* data() const { return data_.data(); }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conjugate() const;
  cdouble trace() const;
  double max_abs() const { return kernels::max_abs(data_.data(), data_.size()); }
  double frobenius_norm() const;

  ComplexMatrix operator*(const ComplexMatrix& rhs) const;
  ComplexMatrix operator+(const ComplexMatrix& rhs) const;
  ComplexMatrix operator-(const ComplexMatrix& rhs) const;
  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix& operator*=(cdouble alpha);
  friend ComplexMatrix operator*(cdouble alpha, const ComplexMatrix& m);

  bool has_nonfinite() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cdouble> data_;
};

/// Normalized complex amplitude vector over a labeled basis (system,
/// apparatus, or joint).
class StateVector {
 public:
  StateVector() = default;
  /// Wraps amplitudes that must already be normalized within tol.normalization.
  StateVector(std::vector<cdouble> amplitudes, const Tolerances& tol = Tolerances::standard());
  /// Normalizes whatever is passed in (rejects the zero vector).
  static StateVector normalized(std::vector<cdouble> amplitudes);
  static StateVector basis_state(std::size_t dim, std::size_t index);

  std::size_t dim() const { return amps_.size(); }
  const std::vector<cdouble>& amplitudes() const { return amps_; }
  cdouble operator[](std::size_t i) const { return amps_[i]; }
  cdouble* data() { return amps_.data(); }
  const cdouble* data() const { return amps_.data(); }

  double norm() const;

 private:
  std::vector<cdouble> amps_;
};

/// Square matrix certified Hermitian at construction: |M - M^dag|_max must
/// not exceed tol.hermiticity. The stored matrix is the Hermitian average
/// (M + M^dag)/2, so downstream algebra sees an exactly Hermitian operand.
class HermitianOperator {
 public:
  HermitianOperator() = default;
  explicit HermitianOperator(ComplexMatrix m, const Tolerances& tol = Tolerances::standard());

  std::size_t dim() const { return matrix_.rows(); }
  const ComplexMatrix& matrix() const { return matrix_; }
  double hermiticity_defect() const { return defect_; }

 private:
  ComplexMatrix matrix_;
  double defect_ = 0.0;
};

enum class Factor { system, apparatus };

// ---- operations ----

/// Kronecker product (system index slow, apparatus index fast). Throws
/// CapacityError when the result would exceed tol.max_joint_dim per side.
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b,
                             const Tolerances& tol = Tolerances::standard());
StateVector tensor_product(const StateVector& a, const StateVector& b,
                           const Tolerances& tol = Tolerances::standard());

struct EighResult {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // columns, orthonormal
};

/// Hermitian eigendecomposition (LAPACK zheevd).
EighResult eigh(const HermitianOperator& h);

/// exp(scale * H) through the eigendecomposition; unitary to tol.unitarity
/// when scale is purely imaginary.
ComplexMatrix expm_hermitian(const HermitianOperator& h, cdouble scale);
/// Same, reusing a precomputed eigendecomposition of H.
ComplexMatrix expm_from_eigh(const EighResult& es, cdouble scale);

/// Reduced density matrix of rho (a (dimS*dimA)^2 density matrix, trace 1
/// within tol.trace) over the kept factor.
ComplexMatrix partial_trace(const ComplexMatrix& rho, std::size_t dim_system,
                            std::size_t dim_apparatus, Factor keep,
                            const Tolerances& tol = Tolerances::standard());

/// Reduced density matrix of a pure joint state (no trace-1 precondition
/// beyond the state's own normalization).
ComplexMatrix reduced_density(const StateVector& psi, std::size_t dim_system,
                              std::size_t dim_apparatus, Factor keep);

/// Schmidt coefficients (singular values of the dimS x dimA reshape).
std::vector<double> schmidt_coefficients(const StateVector& psi, std::size_t dim_system,
                                         std::size_t dim_apparatus);

/// Von Neumann entanglement entropy in nats: S = -sum lambda ln lambda over
/// Schmidt weights lambda = s^2, with 0 ln 0 := 0.
double entanglement_entropy(const StateVector& psi, std::size_t dim_system,
                            std::size_t dim_apparatus);

/// Largest singular value (LAPACK zgesvd).
double operator_norm(const ComplexMatrix& m);
std::vector<double> singular_values(const ComplexMatrix& m);

/// y = M x.
std::vector<cdouble> apply(const ComplexMatrix& m, const std::vector<cdouble>& x);
StateVector apply(const ComplexMatrix& m, const StateVector& x);

/// Real least squares min |A x - b| (LAPACK dgelsd). Returns the solution;
/// rank and residual norm are written through the out-parameters.
std::vector<double> solve_least_squares(const std::vector<double>& a, std::size_t rows,
                                        std::size_t cols, const std::vector<double>& b,
                                        std::size_t* rank_out, double* residual_out);

/// Trace distance (1/2)|rho - sigma|_1 between Hermitian matrices.
double trace_distance(const ComplexMatrix& rho, const ComplexMatrix& sigma);

cdouble expectation(const HermitianOperator& op, const StateVector& psi);
double fidelity(const StateVector& a, const StateVector& b);  // |<a|b>|^2

}  // namespace pmlab
