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
 * Dense complex-double kernels: scalar reference implementations plus an
 * AVX2 variant selected at runtime. Everything above this layer (matrices,
 * propagators, diagnostics) calls these entry points; the two backends are
 * equivalence-tested against each other in tests/test_kernels.cpp.
 *
 * Data layout is interleaved std::complex<double> (re, im pairs), row-major
 * for matrices, fully contiguous.
 */

#pragma once

#include <complex>
#include <cstddef>

namespace pmlab::kernels {

using cdouble = std::complex<double>;

enum class Backend { scalar, avx2 };

/// Function table for one backend. matmul computes C = A(m x k) * B(k x n);
/// none of the kernels alias their output with an input.
struct KernelTable {
  void (*matmul)(cdouble* c, const cdouble* a, const cdouble* b,
                 std::size_t m, std::size_t k, std::size_t n);
  void (*scaled_copy)(cdouble* y, cdouble alpha, const cdouble* x, std::size_t n);  // y = alpha*x
  void (*axpy)(cdouble* y, cdouble alpha, const cdouble* x, std::size_t n);         // y += alpha*x
  void (*scale)(cdouble* x, cdouble alpha, std::size_t n);                          // x *= alpha
  cdouble (*dotc)(const cdouble* x, const cdouble* y, std::size_t n);               // sum conj(x)*y
  double (*nrm2sq)(const cdouble* x, std::size_t n);                                // sum |x|^2
  // w[i,:] = v[i,:] .* d  (elementwise row scaling; used for V*diag(d))
  void (*rowwise_mul)(cdouble* w, const cdouble* v, const cdouble* d,
                      std::size_t rows, std::size_t cols);
  double (*max_abs)(const cdouble* x, std::size_t n);                               // max |x_i|
  double (*max_abs_diff)(const cdouble* x, const cdouble* y, std::size_t n);        // max |x_i - y_i|
};

extern const KernelTable scalar_table;
#if defined(__x86_64__) || defined(_M_X64)
extern const KernelTable avx2_table;
#endif

/// Active table (auto-detected at first use; PMLAB_KERNELS=scalar|avx2|auto
/// overrides detection).
const KernelTable& active();
Backend active_backend();
const char* backend_name();
void force_backend(Backend b);
bool cpu_supports_avx2();

// Convenience forwarders through the active table.
inline void matmul(cdouble* c, const cdouble* a, const cdouble* b,
                   std::size_t m, std::size_t k, std::size_t n) {
  active().matmul(c, a, b, m, k, n);
}
inline void scaled_copy(cdouble* y, cdouble alpha, const cdouble* x, std::size_t n) {
  active().scaled_copy(y, alpha, x, n);
}
inline void axpy(cdouble* y, cdouble alpha, const cdouble* x, std::size_t n) {
  active().axpy(y, alpha, x, n);
}
inline void scale(cdouble* x, cdouble alpha, std::size_t n) { active().scale(x, alpha, n); }
inline cdouble dotc(const cdouble* x, const cdouble* y, std::size_t n) {
  return active().dotc(x, y, n);
}
inline double nrm2sq(const cdouble* x, std::size_t n) { return active().nrm2sq(x, n); }
inline void rowwise_mul(cdouble* w, const cdouble* v, const cdouble* d,
                        std::size_t rows, std::size_t cols) {
  active().rowwise_mul(w, v, d, rows, cols);
}
inline double max_abs(const cdouble* x, std::size_t n) { return active().max_abs(x, n); }
inline double max_abs_diff(const cdouble* x, const cdouble* y, std::size_t n) {
  return active().max_abs_diff(x, y, n);
}

/// Kronecker product C = A (x) B with the fixed index convention: the left
/// (system) factor is the slow index, the right (apparatus) factor the fast
/// one. C is (ma*mb) x (na*nb), row-major. Built on scaled_copy so both
/// backends share the traversal order.
void kron(cdouble* c, const cdouble* a, std::size_t ma, std::size_t na,
          const cdouble* b, std::size_t mb, std::size_t nb);

}  // namespace pmlab::kernels
