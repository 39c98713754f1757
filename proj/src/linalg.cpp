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

#include "pmlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace pmlab {

const Tolerances& Tolerances::standard() {
  static const Tolerances t{};
  return t;
}

const Tolerances& Tolerances::strict() {
  static const Tolerances t = [] {
    Tolerances s;
    s.hermiticity = 1e-13;
    s.normalization = 1e-13;
    s.unitarity = 1e-11;
    s.propagator_unitarity = 1e-9;
    s.trace = 1e-11;
    s.commutation = 1e-11;
    s.degeneracy_rel = 1e-10;
    s.slicing = 1e-8;
    return s;
  }();
  return t;
}

// ---- ComplexMatrix ----

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cdouble> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols)
    throw DimensionError("matrix data size does not match rows*cols");
  if (has_nonfinite()) throw NumericalError("matrix constructed with non-finite entries");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::from_rows(const std::vector<std::vector<cdouble>>& rows) {
  const std::size_t n = rows.size();
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) throw DimensionError("from_rows expects a square initializer");
    for (std::size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
  }
  if (m.has_nonfinite()) throw NumericalError("matrix constructed with non-finite entries");
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<cdouble>& d) {
  ComplexMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

ComplexMatrix ComplexMatrix::diagonal_real(const std::vector<double>& d) {
  ComplexMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
  return r;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

ComplexMatrix ComplexMatrix::conjugate() const {
  ComplexMatrix r(rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = std::conj(data_[i]);
  return r;
}

cdouble ComplexMatrix::trace() const {
  cdouble t{0.0, 0.0};
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm() const {
  return std::sqrt(kernels::nrm2sq(data_.data(), data_.size()));
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& rhs) const {
  if (cols_ != rhs.rows_) {
    std::ostringstream os;
    os << "matmul dimension mismatch: " << rows_ << "x" << cols_ << " times " << rhs.rows_
       << "x" << rhs.cols_;
    throw DimensionError(os.str());
  }
  ComplexMatrix c(rows_, rhs.cols_);
  kernels::matmul(c.data(), data(), rhs.data(), rows_, cols_, rhs.cols_);
  return c;
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix& rhs) const {
  ComplexMatrix r = *this;
  r += rhs;
  return r;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix& rhs) const {
  ComplexMatrix r = *this;
  r -= rhs;
  return r;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
    throw DimensionError("matrix addition dimension mismatch");
  kernels::axpy(data(), cdouble{1.0, 0.0}, rhs.data(), data_.size());
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
    throw DimensionError("matrix subtraction dimension mismatch");
  kernels::axpy(data(), cdouble{-1.0, 0.0}, rhs.data(), data_.size());
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cdouble alpha) {
  kernels::scale(data(), alpha, data_.size());
  return *this;
}

ComplexMatrix operator*(cdouble alpha, const ComplexMatrix& m) {
  ComplexMatrix r(m.rows(), m.cols());
  kernels::scaled_copy(r.data(), alpha, m.data(), m.size());
  return r;
}

bool ComplexMatrix::has_nonfinite() const {
  for (const cdouble& z : data_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return true;
  return false;
}

// ---- StateVector ----

StateVector::StateVector(std::vector<cdouble> amplitudes, const Tolerances& tol)
    : amps_(std::move(amplitudes)) {
  for (const cdouble& z : amps_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw NumericalError("state vector with non-finite amplitudes");
  const double n = norm();
  if (std::abs(n - 1.0) > tol.normalization) {
    std::ostringstream os;
    os << "state vector not normalized: |norm - 1| = " << std::abs(n - 1.0);
    throw NumericalError(os.str());
  }
}

StateVector StateVector::normalized(std::vector<cdouble> amplitudes) {
  const double n = std::sqrt(kernels::nrm2sq(amplitudes.data(), amplitudes.size()));
  if (!(n > 0.0) || !std::isfinite(n))
    throw NumericalError("cannot normalize a zero or non-finite vector");
  kernels::scale(amplitudes.data(), cdouble{1.0 / n, 0.0}, amplitudes.size());
  StateVector s;
  s.amps_ = std::move(amplitudes);
  return s;
}

StateVector StateVector::basis_state(std::size_t dim, std::size_t index) {
  if (index >= dim) throw DimensionError("basis_state index out of range");
  std::vector<cdouble> a(dim, cdouble{0.0, 0.0});
  a[index] = 1.0;
  StateVector s;
  s.amps_ = std::move(a);
  return s;
}

double StateVector::norm() const {
  return std::sqrt(kernels::nrm2sq(amps_.data(), amps_.size()));
}

// ---- HermitianOperator ----

HermitianOperator::HermitianOperator(ComplexMatrix m, const Tolerances& tol) {
  if (!m.is_square()) throw DimensionError("Hermitian operator must be square");
  const ComplexMatrix adj = m.adjoint();
  defect_ = kernels::max_abs_diff(m.data(), adj.data(), m.size());
  if (defect_ > tol.hermiticity) {
    std::ostringstream os;
    os << "matrix is not Hermitian: |M - M^dag|_max = " << defect_;
    throw NumericalError(os.str());
  }
  // store the exact Hermitian average
  matrix_ = m;
  kernels::axpy(matrix_.data(), cdouble{1.0, 0.0}, adj.data(), matrix_.size());
  kernels::scale(matrix_.data(), cdouble{0.5, 0.0}, matrix_.size());
}

// ---- tensor products ----

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b,
                             const Tolerances& tol) {
  const bool both_square = a.is_square() && b.is_square();
  const bool both_vectors = (a.cols() == 1 && b.cols() == 1);
  if (!both_square && !both_vectors)
    throw DimensionError("tensor_product expects two square matrices or two column vectors");
  const std::size_t rows = a.rows() * b.rows();
  const std::size_t cols = a.cols() * b.cols();
  if (rows > tol.max_joint_dim) {
    std::ostringstream os;
    os << "joint dimension " << rows << " exceeds the configured cap " << tol.max_joint_dim;
    throw CapacityError(os.str());
  }
  ComplexMatrix c(rows, cols);
  kernels::kron(c.data(), a.data(), a.rows(), a.cols(), b.data(), b.rows(), b.cols());
  return c;
}

StateVector tensor_product(const StateVector& a, const StateVector& b, const Tolerances& tol) {
  const std::size_t dim = a.dim() * b.dim();
  if (dim > tol.max_joint_dim) {
    std::ostringstream os;
    os << "joint dimension " << dim << " exceeds the configured cap " << tol.max_joint_dim;
    throw CapacityError(os.str());
  }
  std::vector<cdouble> out(dim);
  kernels::kron(out.data(), a.data(), a.dim(), 1, b.data(), b.dim(), 1);
  StateVector s = StateVector::normalized(std::move(out));
  return s;
}

// ---- decompositions ----

EighResult eigh(const HermitianOperator& h) {
  const std::size_t n = h.dim();
  EighResult r;
  r.eigenvalues.resize(n);
  r.eigenvectors = h.matrix();
  const lapack_int info =
      LAPACKE_zheevd(LAPACK_ROW_MAJOR, 'V', 'U', static_cast<lapack_int>(n),
                     r.eigenvectors.data(), static_cast<lapack_int>(n), r.eigenvalues.data());
  if (info != 0) {
    std::ostringstream os;
    os << "zheevd failed (info=" << info << ", dim=" << n << ")";
    throw NumericalError(os.str());
  }
  return r;
}

ComplexMatrix expm_from_eigh(const EighResult& es, cdouble scale) {
  const std::size_t n = es.eigenvalues.size();
  std::vector<cdouble> d(n);
  for (std::size_t j = 0; j < n; ++j) d[j] = std::exp(scale * es.eigenvalues[j]);
  ComplexMatrix w(n, n);
  kernels::rowwise_mul(w.data(), es.eigenvectors.data(), d.data(), n, n);
  return w * es.eigenvectors.adjoint();
}

ComplexMatrix expm_hermitian(const HermitianOperator& h, cdouble scale) {
  return expm_from_eigh(eigh(h), scale);
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, std::size_t dim_system,
                            std::size_t dim_apparatus, Factor keep, const Tolerances& tol) {
  const std::size_t d = dim_system * dim_apparatus;
  if (rho.rows() != d || rho.cols() != d)
    throw DimensionError("partial_trace: density matrix does not match dimS*dimA");
  if (std::abs(rho.trace() - cdouble{1.0, 0.0}) > tol.trace)
    throw NumericalError("partial_trace: input trace deviates from 1 beyond tolerance");
  if (keep == Factor::system) {
    ComplexMatrix out(dim_system, dim_system);
    for (std::size_t i = 0; i < dim_system; ++i)
      for (std::size_t j = 0; j < dim_system; ++j) {
        cdouble s{0.0, 0.0};
        for (std::size_t a = 0; a < dim_apparatus; ++a)
          s += rho(i * dim_apparatus + a, j * dim_apparatus + a);
        out(i, j) = s;
      }
    return out;
  }
  ComplexMatrix out(dim_apparatus, dim_apparatus);
  for (std::size_t a = 0; a < dim_apparatus; ++a)
    for (std::size_t b = 0; b < dim_apparatus; ++b) {
      cdouble s{0.0, 0.0};
      for (std::size_t i = 0; i < dim_system; ++i)
        s += rho(i * dim_apparatus + a, i * dim_apparatus + b);
      out(a, b) = s;
    }
  return out;
}

ComplexMatrix reduced_density(const StateVector& psi, std::size_t dim_system,
                              std::size_t dim_apparatus, Factor keep) {
  if (psi.dim() != dim_system * dim_apparatus)
    throw DimensionError("reduced_density: state does not match dimS*dimA");
  // view psi as the dimS x dimA matrix M; rho_S = M M^dag, rho_A = M^T conj(M)
  ComplexMatrix m(dim_system, dim_apparatus,
                  std::vector<cdouble>(psi.amplitudes().begin(), psi.amplitudes().end()));
  if (keep == Factor::system) return m * m.adjoint();
  return m.transpose() * m.conjugate();
}

std::vector<double> schmidt_coefficients(const StateVector& psi, std::size_t dim_system,
                                         std::size_t dim_apparatus) {
  if (psi.dim() != dim_system * dim_apparatus)
    throw DimensionError("schmidt_coefficients: state does not match dimS*dimA");
  ComplexMatrix m(dim_system, dim_apparatus,
                  std::vector<cdouble>(psi.amplitudes().begin(), psi.amplitudes().end()));
  return singular_values(m);
}

double entanglement_entropy(const StateVector& psi, std::size_t dim_system,
                            std::size_t dim_apparatus) {
  const std::vector<double> s = schmidt_coefficients(psi, dim_system, dim_apparatus);
  double ent = 0.0;
  for (double sv : s) {
    const double lambda = sv * sv;
    if (lambda > 0.0) ent -= lambda * std::log(lambda);
  }
  return std::max(ent, 0.0);
}

std::vector<double> singular_values(const ComplexMatrix& m) {
  ComplexMatrix a = m;  // destroyed by zgesvd
  const std::size_t rows = m.rows(), cols = m.cols();
  std::vector<double> s(std::min(rows, cols));
  std::vector<double> superb(std::max<std::size_t>(1, std::min(rows, cols)));
  const lapack_int info = LAPACKE_zgesvd(
      LAPACK_ROW_MAJOR, 'N', 'N', static_cast<lapack_int>(rows), static_cast<lapack_int>(cols),
      a.data(), static_cast<lapack_int>(cols), s.data(), nullptr, 1, nullptr, 1, superb.data());
  if (info != 0) {
    std::ostringstream os;
    os << "zgesvd failed (info=" << info << ", shape=" << rows << "x" << cols << ")";
    throw NumericalError(os.str());
  }
  return s;
}

double operator_norm(const ComplexMatrix& m) {
  if (!m.is_square()) throw DimensionError("operator_norm expects a square matrix");
  if (m.rows() == 0) return 0.0;
  return singular_values(m).front();
}

std::vector<cdouble> apply(const ComplexMatrix& m, const std::vector<cdouble>& x) {
  if (m.cols() != x.size()) throw DimensionError("apply: matrix/vector dimension mismatch");
  std::vector<cdouble> y(m.rows());
  kernels::matmul(y.data(), m.data(), x.data(), m.rows(), m.cols(), 1);
  return y;
}

StateVector apply(const ComplexMatrix& m, const StateVector& x) {
  return StateVector::normalized(apply(m, x.amplitudes()));
}

std::vector<double> solve_least_squares(const std::vector<double>& a, std::size_t rows,
                                        std::size_t cols, const std::vector<double>& b,
                                        std::size_t* rank_out, double* residual_out) {
  if (a.size() != rows * cols || b.size() != rows)
    throw DimensionError("solve_least_squares: inconsistent shapes");
  std::vector<double> awork = a;
  std::vector<double> bwork(std::max(rows, cols), 0.0);
  std::copy(b.begin(), b.end(), bwork.begin());
  std::vector<double> s(std::min(rows, cols));
  lapack_int rank = 0;
  const lapack_int info = LAPACKE_dgelsd(
      LAPACK_ROW_MAJOR, static_cast<lapack_int>(rows), static_cast<lapack_int>(cols), 1,
      awork.data(), static_cast<lapack_int>(cols), bwork.data(), 1, s.data(), 1e-12, &rank);
  if (info != 0) {
    std::ostringstream os;
    os << "dgelsd failed (info=" << info << ")";
    throw NumericalError(os.str());
  }
  std::vector<double> x(bwork.begin(), bwork.begin() + cols);
  if (rank_out) *rank_out = static_cast<std::size_t>(rank);
  if (residual_out) {
    double r2 = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      double ax = 0.0;
      for (std::size_t j = 0; j < cols; ++j) ax += a[i * cols + j] * x[j];
      r2 += (ax - b[i]) * (ax - b[i]);
    }
    *residual_out = std::sqrt(r2);
  }
  return x;
}

double trace_distance(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
    throw DimensionError("trace_distance: dimension mismatch");
  ComplexMatrix diff = rho - sigma;
  // Hermitize before asking for eigenvalues; inputs are density matrices.
  ComplexMatrix adj = diff.adjoint();
  kernels::axpy(diff.data(), cdouble{1.0, 0.0}, adj.data(), diff.size());
  kernels::scale(diff.data(), cdouble{0.5, 0.0}, diff.size());
  const std::size_t n = diff.rows();
  std::vector<double> w(n);
  const lapack_int info = LAPACKE_zheevd(LAPACK_ROW_MAJOR, 'N', 'U', static_cast<lapack_int>(n),
                                         diff.data(), static_cast<lapack_int>(n), w.data());
  if (info != 0) throw NumericalError("zheevd failed in trace_distance");
  double sum = 0.0;
  for (double v : w) sum += std::abs(v);
  return 0.5 * sum;
}

cdouble expectation(const HermitianOperator& op, const StateVector& psi) {
  const std::vector<cdouble> y = apply(op.matrix(), psi.amplitudes());
  return kernels::dotc(psi.data(), y.data(), psi.dim());
}

double fidelity(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) throw DimensionError("fidelity: dimension mismatch");
  return std::norm(kernels::dotc(a.data(), b.data(), a.dim()));
}

}  // namespace pmlab
