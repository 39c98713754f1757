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

// Reference kernels. Deliberately plain loops: these define the semantics
// the SIMD variants are tested against.

#include "pmlab/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace pmlab::kernels {
namespace {

void matmul_scalar(cdouble* c, const cdouble* a, const cdouble* b,
                   std::size_t m, std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    cdouble* ci = c + i * n;
    std::fill(ci, ci + n, cdouble{0.0, 0.0});
    for (std::size_t l = 0; l < k; ++l) {
      const cdouble ail = a[i * k + l];
      if (ail == cdouble{0.0, 0.0}) continue;
      const cdouble* bl = b + l * n;
      for (std::size_t j = 0; j < n; ++j) ci[j] += ail * bl[j];
    }
  }
}

void scaled_copy_scalar(cdouble* y, cdouble alpha, const cdouble* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = alpha * x[i];
}

void axpy_scalar(cdouble* y, cdouble alpha, const cdouble* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale_scalar(cdouble* x, cdouble alpha, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

cdouble dotc_scalar(const cdouble* x, const cdouble* y, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

double nrm2sq_scalar(const cdouble* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return s;
}

void rowwise_mul_scalar(cdouble* w, const cdouble* v, const cdouble* d,
                        std::size_t rows, std::size_t cols) {
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) w[i * cols + j] = v[i * cols + j] * d[j];
}

double max_abs_scalar(const cdouble* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    if (a > m) m = a;
  }
  return std::sqrt(m);
}

double max_abs_diff_scalar(const cdouble* x, const cdouble* y, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dr = x[i].real() - y[i].real();
    const double di = x[i].imag() - y[i].imag();
    const double a = dr * dr + di * di;
    if (a > m) m = a;
  }
  return std::sqrt(m);
}

}  // namespace

const KernelTable scalar_table = {
    matmul_scalar, scaled_copy_scalar, axpy_scalar,    scale_scalar,
    dotc_scalar,   nrm2sq_scalar,      rowwise_mul_scalar,
    max_abs_scalar, max_abs_diff_scalar,
};

void kron(cdouble* c, const cdouble* a, std::size_t ma, std::size_t na,
          const cdouble* b, std::size_t mb, std::size_t nb) {
  const std::size_t nc = na * nb;
  for (std::size_t ia = 0; ia < ma; ++ia)
    for (std::size_t ib = 0; ib < mb; ++ib) {
      cdouble* crow = c + (ia * mb + ib) * nc;
      const cdouble* brow = b + ib * nb;
      for (std::size_t ja = 0; ja < na; ++ja)
        scaled_copy(crow + ja * nb, a[ia * na + ja], brow, nb);
    }
}

}  // namespace pmlab::kernels
