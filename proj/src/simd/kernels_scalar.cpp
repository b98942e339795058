#include "rkhs/simd/kernels.hpp"

namespace rkhs::simd {
namespace {

Complex dot_scalar(const double* w, const Complex* x, const Complex* y, std::size_t n) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double xr = x[k].real(), xi = x[k].imag();
    const double yr = y[k].real(), yi = y[k].imag();
    re += w[k] * (xr * yr + xi * yi);
    im += w[k] * (xi * yr - xr * yi);
  }
  return {re, im};
}

double norm2_scalar(const double* w, const Complex* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    s += w[k] * (x[k].real() * x[k].real() + x[k].imag() * x[k].imag());
  }
  return s;
}

void axpy_scalar(Complex alpha, const Complex* x, Complex* y, std::size_t n) {
  const double ar = alpha.real(), ai = alpha.imag();
  for (std::size_t k = 0; k < n; ++k) {
    const double xr = x[k].real(), xi = x[k].imag();
    y[k] = {y[k].real() + (ar * xr - ai * xi), y[k].imag() + (ar * xi + ai * xr)};
  }
}

void horner_scalar(const Complex* c, std::size_t ncoeffs, const Complex* z, Complex* out,
                   std::size_t npoints) {
  for (std::size_t j = 0; j < npoints; ++j) {
    if (ncoeffs == 0) {
      out[j] = 0.0;
      continue;
    }
    const double zr = z[j].real(), zi = z[j].imag();
    double ar = c[ncoeffs - 1].real(), ai = c[ncoeffs - 1].imag();
    for (std::size_t k = ncoeffs - 1; k-- > 0;) {
      const double tr = ar * zr - ai * zi + c[k].real();
      const double ti = ar * zi + ai * zr + c[k].imag();
      ar = tr;
      ai = ti;
    }
    out[j] = {ar, ai};
  }
}

}  // namespace

const KernelTable& scalar_table() noexcept {
  static const KernelTable t{dot_scalar, norm2_scalar, axpy_scalar, horner_scalar};
  return t;
}

}  // namespace rkhs::simd
