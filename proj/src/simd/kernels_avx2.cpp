// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include "rkhs/simd/kernels.hpp"

namespace rkhs::simd {
namespace {

// Complex arrays are interleaved (re, im); one __m256d holds two entries.
inline __m256d load2(const Complex* p) {
  return _mm256_loadu_pd(reinterpret_cast<const double*>(p));
}

inline void store2(Complex* p, __m256d v) {
  _mm256_storeu_pd(reinterpret_cast<double*>(p), v);
}

// [w0 w0 w1 w1]
inline __m256d load_weights2(const double* w) {
  const __m128d pair = _mm_loadu_pd(w);
  return _mm256_permute4x64_pd(_mm256_castpd128_pd256(pair), 0b01010000);
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

Complex dot_avx2(const double* w, const Complex* x, const Complex* y, std::size_t n) {
  __m256d acc_re0 = _mm256_setzero_pd(), acc_im0 = _mm256_setzero_pd();
  __m256d acc_re1 = _mm256_setzero_pd(), acc_im1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d x0 = load2(x + k), y0 = load2(y + k), w0 = load_weights2(w + k);
    const __m256d x1 = load2(x + k + 2), y1 = load2(y + k + 2), w1 = load_weights2(w + k + 2);
    // lanes: [xr*yr, xi*yi] and [xr*yi, xi*yr]
    acc_re0 = _mm256_fmadd_pd(w0, _mm256_mul_pd(x0, y0), acc_re0);
    acc_im0 = _mm256_fmadd_pd(w0, _mm256_mul_pd(x0, _mm256_permute_pd(y0, 0b0101)), acc_im0);
    acc_re1 = _mm256_fmadd_pd(w1, _mm256_mul_pd(x1, y1), acc_re1);
    acc_im1 = _mm256_fmadd_pd(w1, _mm256_mul_pd(x1, _mm256_permute_pd(y1, 0b0101)), acc_im1);
  }
  for (; k + 2 <= n; k += 2) {
    const __m256d x0 = load2(x + k), y0 = load2(y + k), w0 = load_weights2(w + k);
    acc_re0 = _mm256_fmadd_pd(w0, _mm256_mul_pd(x0, y0), acc_re0);
    acc_im0 = _mm256_fmadd_pd(w0, _mm256_mul_pd(x0, _mm256_permute_pd(y0, 0b0101)), acc_im0);
  }
  const __m256d acc_re = _mm256_add_pd(acc_re0, acc_re1);
  const __m256d acc_im = _mm256_add_pd(acc_im0, acc_im1);
  double re = hsum(acc_re);
  // imaginary part is xi*yr - xr*yi: odd lanes minus even lanes
  alignas(32) double im_lanes[4];
  _mm256_store_pd(im_lanes, acc_im);
  double im = (im_lanes[1] - im_lanes[0]) + (im_lanes[3] - im_lanes[2]);
  for (; k < n; ++k) {
    const double xr = x[k].real(), xi = x[k].imag();
    const double yr = y[k].real(), yi = y[k].imag();
    re += w[k] * (xr * yr + xi * yi);
    im += w[k] * (xi * yr - xr * yi);
  }
  return {re, im};
}

double norm2_avx2(const double* w, const Complex* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d x0 = load2(x + k), x1 = load2(x + k + 2);
    acc0 = _mm256_fmadd_pd(load_weights2(w + k), _mm256_mul_pd(x0, x0), acc0);
    acc1 = _mm256_fmadd_pd(load_weights2(w + k + 2), _mm256_mul_pd(x1, x1), acc1);
  }
  for (; k + 2 <= n; k += 2) {
    const __m256d x0 = load2(x + k);
    acc0 = _mm256_fmadd_pd(load_weights2(w + k), _mm256_mul_pd(x0, x0), acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; k < n; ++k) {
    s += w[k] * (x[k].real() * x[k].real() + x[k].imag() * x[k].imag());
  }
  return s;
}

void axpy_avx2(Complex alpha, const Complex* x, Complex* y, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d xv = load2(x + k);
    // even lanes: ar*xr - ai*xi, odd lanes: ar*xi + ai*xr
    const __m256d t = _mm256_mul_pd(ai, _mm256_permute_pd(xv, 0b0101));
    const __m256d prod = _mm256_fmaddsub_pd(ar, xv, t);
    store2(y + k, _mm256_add_pd(load2(y + k), prod));
  }
  for (; k < n; ++k) {
    const double xr = x[k].real(), xi = x[k].imag();
    y[k] = {y[k].real() + (alpha.real() * xr - alpha.imag() * xi),
            y[k].imag() + (alpha.real() * xi + alpha.imag() * xr)};
  }
}

// acc * z for two interleaved complex lanes; zre = [zr0 zr0 zr1 zr1], zim likewise.
inline __m256d cmul(__m256d acc, __m256d zre, __m256d zim) {
  return _mm256_fmaddsub_pd(acc, zre, _mm256_mul_pd(_mm256_permute_pd(acc, 0b0101), zim));
}

void horner_avx2(const Complex* c, std::size_t ncoeffs, const Complex* z, Complex* out,
                 std::size_t npoints) {
  if (ncoeffs == 0) {
    for (std::size_t j = 0; j < npoints; ++j) out[j] = 0.0;
    return;
  }
  const double* cd = reinterpret_cast<const double*>(c);
  std::size_t j = 0;
  // Four independent Horner chains (8 points) to cover FMA latency.
  for (; j + 8 <= npoints; j += 8) {
    __m256d zre[4], zim[4], acc[4];
    for (int q = 0; q < 4; ++q) {
      const __m256d zv = load2(z + j + 2 * q);
      zre[q] = _mm256_movedup_pd(zv);
      zim[q] = _mm256_permute_pd(zv, 0b1111);
      acc[q] = _mm256_broadcast_pd(reinterpret_cast<const __m128d*>(cd + 2 * (ncoeffs - 1)));
    }
    for (std::size_t k = ncoeffs - 1; k-- > 0;) {
      const __m256d ck = _mm256_broadcast_pd(reinterpret_cast<const __m128d*>(cd + 2 * k));
      for (int q = 0; q < 4; ++q) acc[q] = _mm256_add_pd(cmul(acc[q], zre[q], zim[q]), ck);
    }
    for (int q = 0; q < 4; ++q) store2(out + j + 2 * q, acc[q]);
  }
  for (; j + 2 <= npoints; j += 2) {
    const __m256d zv = load2(z + j);
    const __m256d zre = _mm256_movedup_pd(zv);
    const __m256d zim = _mm256_permute_pd(zv, 0b1111);
    __m256d acc = _mm256_broadcast_pd(reinterpret_cast<const __m128d*>(cd + 2 * (ncoeffs - 1)));
    for (std::size_t k = ncoeffs - 1; k-- > 0;) {
      const __m256d ck = _mm256_broadcast_pd(reinterpret_cast<const __m128d*>(cd + 2 * k));
      acc = _mm256_add_pd(cmul(acc, zre, zim), ck);
    }
    store2(out + j, acc);
  }
  if (j < npoints) scalar_table().horner_batch(c, ncoeffs, z + j, out + j, npoints - j);
}

}  // namespace

const KernelTable& avx2_table() noexcept {
  static const KernelTable t{dot_avx2, norm2_avx2, axpy_avx2, horner_avx2};
  return t;
}

}  // namespace rkhs::simd
