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

// AVX2+FMA variants. Complex doubles stay interleaved; one __m256d holds two
// complex values. For a scalar a broadcast as (ar, ai) and a vector b,
//   a*b = fmaddsub(ar, b, ai * swap(b))
// where swap exchanges re/im inside each pair: even lanes get ar*br - ai*bi,
// odd lanes ar*bi + ai*br.

#include "pmlab/kernels.hpp"

#include <immintrin.h>

#include <cmath>

namespace pmlab::kernels {
namespace {

inline __m256d swap_pairs(__m256d v) { return _mm256_shuffle_pd(v, v, 0x5); }

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

inline double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

void matmul_avx2(cdouble* c, const cdouble* a, const cdouble* b,
                 std::size_t m, std::size_t k, std::size_t n) {
  const double* bd = reinterpret_cast<const double*>(b);
  double* cd = reinterpret_cast<double*>(c);
  const std::size_t jblk = n - n % 8;  // 8 complex per j-tile

  std::size_t i = 0;
  for (; i + 2 <= m; i += 2) {
    for (std::size_t j = 0; j < jblk; j += 8) {
      __m256d acc00 = _mm256_setzero_pd(), acc01 = _mm256_setzero_pd();
      __m256d acc02 = _mm256_setzero_pd(), acc03 = _mm256_setzero_pd();
      __m256d acc10 = _mm256_setzero_pd(), acc11 = _mm256_setzero_pd();
      __m256d acc12 = _mm256_setzero_pd(), acc13 = _mm256_setzero_pd();
      for (std::size_t l = 0; l < k; ++l) {
        const cdouble a0 = a[i * k + l];
        const cdouble a1 = a[(i + 1) * k + l];
        const __m256d ar0 = _mm256_set1_pd(a0.real());
        const __m256d ai0 = _mm256_set1_pd(a0.imag());
        const __m256d ar1 = _mm256_set1_pd(a1.real());
        const __m256d ai1 = _mm256_set1_pd(a1.imag());
        const double* brow = bd + 2 * (l * n + j);
        const __m256d b0 = _mm256_loadu_pd(brow);
        const __m256d b1 = _mm256_loadu_pd(brow + 4);
        const __m256d b2 = _mm256_loadu_pd(brow + 8);
        const __m256d b3 = _mm256_loadu_pd(brow + 12);
        const __m256d s0 = swap_pairs(b0), s1 = swap_pairs(b1);
        const __m256d s2 = swap_pairs(b2), s3 = swap_pairs(b3);
        acc00 = _mm256_add_pd(acc00, _mm256_fmaddsub_pd(ar0, b0, _mm256_mul_pd(ai0, s0)));
        acc01 = _mm256_add_pd(acc01, _mm256_fmaddsub_pd(ar0, b1, _mm256_mul_pd(ai0, s1)));
        acc02 = _mm256_add_pd(acc02, _mm256_fmaddsub_pd(ar0, b2, _mm256_mul_pd(ai0, s2)));
        acc03 = _mm256_add_pd(acc03, _mm256_fmaddsub_pd(ar0, b3, _mm256_mul_pd(ai0, s3)));
        acc10 = _mm256_add_pd(acc10, _mm256_fmaddsub_pd(ar1, b0, _mm256_mul_pd(ai1, s0)));
        acc11 = _mm256_add_pd(acc11, _mm256_fmaddsub_pd(ar1, b1, _mm256_mul_pd(ai1, s1)));
        acc12 = _mm256_add_pd(acc12, _mm256_fmaddsub_pd(ar1, b2, _mm256_mul_pd(ai1, s2)));
        acc13 = _mm256_add_pd(acc13, _mm256_fmaddsub_pd(ar1, b3, _mm256_mul_pd(ai1, s3)));
      }
      double* c0 = cd + 2 * (i * n + j);
      double* c1 = cd + 2 * ((i + 1) * n + j);
      _mm256_storeu_pd(c0, acc00);
      _mm256_storeu_pd(c0 + 4, acc01);
      _mm256_storeu_pd(c0 + 8, acc02);
      _mm256_storeu_pd(c0 + 12, acc03);
      _mm256_storeu_pd(c1, acc10);
      _mm256_storeu_pd(c1 + 4, acc11);
      _mm256_storeu_pd(c1 + 8, acc12);
      _mm256_storeu_pd(c1 + 12, acc13);
    }
    for (std::size_t j = jblk; j < n; ++j) {  // j tail
      cdouble s0{0.0, 0.0}, s1{0.0, 0.0};
      for (std::size_t l = 0; l < k; ++l) {
        s0 += a[i * k + l] * b[l * n + j];
        s1 += a[(i + 1) * k + l] * b[l * n + j];
      }
      c[i * n + j] = s0;
      c[(i + 1) * n + j] = s1;
    }
  }
  if (i < m) {  // odd last row
    for (std::size_t j = 0; j < n; ++j) {
      cdouble s{0.0, 0.0};
      for (std::size_t l = 0; l < k; ++l) s += a[i * k + l] * b[l * n + j];
      c[i * n + j] = s;
    }
  }
}

void scaled_copy_avx2(cdouble* y, cdouble alpha, const cdouble* x, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  const double* xd = reinterpret_cast<const double*>(x);
  double* yd = reinterpret_cast<double*>(y);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(xd + 2 * i);
    _mm256_storeu_pd(yd + 2 * i, _mm256_fmaddsub_pd(ar, v, _mm256_mul_pd(ai, swap_pairs(v))));
  }
  for (; i < n; ++i) y[i] = alpha * x[i];
}

void axpy_avx2(cdouble* y, cdouble alpha, const cdouble* x, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  const double* xd = reinterpret_cast<const double*>(x);
  double* yd = reinterpret_cast<double*>(y);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(xd + 2 * i);
    const __m256d p = _mm256_fmaddsub_pd(ar, v, _mm256_mul_pd(ai, swap_pairs(v)));
    _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(_mm256_loadu_pd(yd + 2 * i), p));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void scale_avx2(cdouble* x, cdouble alpha, std::size_t n) {
  scaled_copy_avx2(x, alpha, x, n);
}

cdouble dotc_avx2(const cdouble* x, const cdouble* y, std::size_t n) {
  const double* xd = reinterpret_cast<const double*>(x);
  const double* yd = reinterpret_cast<const double*>(y);
  __m256d accr = _mm256_setzero_pd();
  __m256d acci = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    accr = _mm256_fmadd_pd(xv, yv, accr);                // xr*yr, xi*yi
    acci = _mm256_fmadd_pd(xv, swap_pairs(yv), acci);    // xr*yi, xi*yr
  }
  // im = sum(xr*yi - xi*yr): negate odd lanes before reducing
  const __m256d signs = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
  double re = hsum(accr);
  double im = hsum(_mm256_xor_pd(acci, signs));
  for (; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

double nrm2sq_avx2(const cdouble* x, std::size_t n) {
  const double* xd = reinterpret_cast<const double*>(x);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(xd + 2 * i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return s;
}

void rowwise_mul_avx2(cdouble* w, const cdouble* v, const cdouble* d,
                      std::size_t rows, std::size_t cols) {
  const double* vd = reinterpret_cast<const double*>(v);
  const double* dd = reinterpret_cast<const double*>(d);
  double* wd = reinterpret_cast<double*>(w);
  const std::size_t jblk = cols - cols % 2;
  for (std::size_t i = 0; i < rows; ++i) {
    const double* vrow = vd + 2 * i * cols;
    double* wrow = wd + 2 * i * cols;
    std::size_t j = 0;
    for (; j < jblk; j += 2) {
      const __m256d u = _mm256_loadu_pd(vrow + 2 * j);
      const __m256d dv = _mm256_loadu_pd(dd + 2 * j);
      const __m256d ure = _mm256_movedup_pd(u);        // (ur, ur) per pair
      const __m256d uim = _mm256_permute_pd(u, 0xF);   // (ui, ui) per pair
      _mm256_storeu_pd(wrow + 2 * j,
                       _mm256_fmaddsub_pd(ure, dv, _mm256_mul_pd(uim, swap_pairs(dv))));
    }
    for (; j < cols; ++j) w[i * cols + j] = v[i * cols + j] * d[j];
  }
}

double max_abs_body(const double* xd, const double* yd, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d dv = _mm256_loadu_pd(xd + 2 * i);
    if (yd) dv = _mm256_sub_pd(dv, _mm256_loadu_pd(yd + 2 * i));
    const __m256d sq = _mm256_mul_pd(dv, dv);
    acc = _mm256_max_pd(acc, _mm256_add_pd(sq, swap_pairs(sq)));  // r^2+i^2 per pair
  }
  double m = hmax(acc);
  for (; i < n; ++i) {
    double dr = xd[2 * i], di = xd[2 * i + 1];
    if (yd) {
      dr -= yd[2 * i];
      di -= yd[2 * i + 1];
    }
    const double a = dr * dr + di * di;
    if (a > m) m = a;
  }
  return std::sqrt(m);
}

double max_abs_avx2(const cdouble* x, std::size_t n) {
  return max_abs_body(reinterpret_cast<const double*>(x), nullptr, n);
}

double max_abs_diff_avx2(const cdouble* x, const cdouble* y, std::size_t n) {
  return max_abs_body(reinterpret_cast<const double*>(x),
                      reinterpret_cast<const double*>(y), n);
}

}  // namespace

const KernelTable avx2_table = {
    matmul_avx2, scaled_copy_avx2, axpy_avx2,    scale_avx2,
    dotc_avx2,   nrm2sq_avx2,      rowwise_mul_avx2,
    max_abs_avx2, max_abs_diff_avx2,
};

}  // namespace pmlab::kernels
