#pragma once

// Inner loops over truncated coefficient sequences. Every kernel has a scalar
// reference implementation; wider variants are picked at runtime and must
// agree with the reference to rounding (see tests/test_simd.cpp).
//
// Set RKHS_SIMD=scalar in the environment to force the reference path.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace rkhs::simd {

using Complex = std::complex<double>;

enum class Isa { scalar, avx2 };

struct KernelTable {
  /// sum_k w[k] * x[k] * conj(y[k])
  Complex (*weighted_dot)(const double* w, const Complex* x, const Complex* y,
                          std::size_t n);
  /// sum_k w[k] * |x[k]|^2
  double (*weighted_norm2)(const double* w, const Complex* x, std::size_t n);
  /// y[k] += alpha * x[k]
  void (*axpy)(Complex alpha, const Complex* x, Complex* y, std::size_t n);
  /// out[j] = sum_k c[k] * z[j]^k, Horner per point.
  void (*horner_batch)(const Complex* c, std::size_t ncoeffs, const Complex* z,
                       Complex* out, std::size_t npoints);
};

const KernelTable& scalar_table() noexcept;
#if defined(RKHS_BUILD_AVX2)
const KernelTable& avx2_table() noexcept;
#endif

bool isa_supported(Isa isa) noexcept;
std::string_view isa_name(Isa isa) noexcept;

/// The table currently used by the library.
Isa active_isa() noexcept;
/// Switches the active table; throws std::invalid_argument if unsupported.
void set_active_isa(Isa isa);
const KernelTable& table(Isa isa);
const KernelTable& active() noexcept;

inline Complex weighted_dot(std::span<const double> w, std::span<const Complex> x,
                            std::span<const Complex> y) {
  return active().weighted_dot(w.data(), x.data(), y.data(), x.size());
}

inline double weighted_norm2(std::span<const double> w, std::span<const Complex> x) {
  return active().weighted_norm2(w.data(), x.data(), x.size());
}

inline void axpy(Complex alpha, std::span<const Complex> x, std::span<Complex> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}

inline void horner_batch(std::span<const Complex> c, std::span<const Complex> z,
                         std::span<Complex> out) {
  active().horner_batch(c.data(), c.size(), z.data(), out.data(), z.size());
}

}  // namespace rkhs::simd
