#include <doctest.h>

#include <random>
#include <vector>

#include "rkhs/simd/kernels.hpp"

using rkhs::simd::Complex;
using rkhs::simd::Isa;

namespace {

struct Data {
  std::vector<double> w;
  std::vector<Complex> x, y;
};

Data make_data(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Data d;
  for (std::size_t k = 0; k < n; ++k) {
    d.w.push_back(std::abs(g(rng)) + 0.1);
    d.x.emplace_back(g(rng), g(rng));
    d.y.emplace_back(g(rng), g(rng));
  }
  return d;
}

// Scale-aware comparison: reductions reorder sums.
void close(Complex a, Complex b, double scale) { CHECK(std::abs(a - b) <= 1e-13 * scale); }

}  // namespace

TEST_CASE("scalar table matches naive loops") {
  const auto d = make_data(37, 1);
  const auto& t = rkhs::simd::scalar_table();
  Complex dot = 0.0;
  double n2 = 0.0, scale = 0.0;
  for (std::size_t k = 0; k < d.x.size(); ++k) {
    dot += d.w[k] * d.x[k] * std::conj(d.y[k]);
    n2 += d.w[k] * std::norm(d.x[k]);
    scale += d.w[k] * std::abs(d.x[k]) * std::abs(d.y[k]);
  }
  close(t.weighted_dot(d.w.data(), d.x.data(), d.y.data(), d.x.size()), dot, scale);
  CHECK(t.weighted_norm2(d.w.data(), d.x.data(), d.x.size()) == doctest::Approx(n2).epsilon(1e-14));

  const Complex z(0.3, -0.7);
  Complex out;
  t.horner_batch(d.x.data(), d.x.size(), &z, &out, 1);
  Complex p = 0.0, zk = 1.0;
  for (const auto c : d.x) {
    p += c * zk;
    zk *= z;
  }
  close(out, p, 10.0);
}

#if defined(RKHS_BUILD_AVX2)
TEST_CASE("avx2 kernels agree with the scalar reference") {
  if (!rkhs::simd::isa_supported(Isa::avx2)) {
    MESSAGE("AVX2 not available on this CPU; skipped");
    return;
  }
  const auto& s = rkhs::simd::table(Isa::scalar);
  const auto& v = rkhs::simd::table(Isa::avx2);
  for (const std::size_t n : {0u, 1u, 2u, 3u, 5u, 8u, 17u, 64u, 1025u}) {
    CAPTURE(n);
    const auto d = make_data(n, 100 + n);
    double scale = 1.0;
    for (std::size_t k = 0; k < n; ++k) scale += d.w[k] * std::abs(d.x[k]) * std::abs(d.y[k]);

    close(v.weighted_dot(d.w.data(), d.x.data(), d.y.data(), n),
          s.weighted_dot(d.w.data(), d.x.data(), d.y.data(), n), scale);
    close(v.weighted_norm2(d.w.data(), d.x.data(), n), s.weighted_norm2(d.w.data(), d.x.data(), n),
          scale);

    auto ys = d.y, yv = d.y;
    const Complex alpha(0.25, -1.5);
    s.axpy(alpha, d.x.data(), ys.data(), n);
    v.axpy(alpha, d.x.data(), yv.data(), n);
    for (std::size_t k = 0; k < n; ++k) close(yv[k], ys[k], 4.0);

    // points inside the disc, count not a multiple of the vector width
    std::vector<Complex> z;
    for (std::size_t j = 0; j < n % 13 + 1; ++j) z.push_back(std::polar(0.9, 0.7 * double(j)));
    std::vector<Complex> os(z.size()), ov(z.size());
    s.horner_batch(d.x.data(), n, z.data(), os.data(), z.size());
    v.horner_batch(d.x.data(), n, z.data(), ov.data(), z.size());
    for (std::size_t j = 0; j < z.size(); ++j) close(ov[j], os[j], 10.0 * (1.0 + double(n)));
  }
}
#endif

TEST_CASE("isa selection") {
  const auto before = rkhs::simd::active_isa();
  rkhs::simd::set_active_isa(Isa::scalar);
  CHECK(rkhs::simd::active_isa() == Isa::scalar);
  CHECK(rkhs::simd::isa_name(Isa::scalar) == "scalar");
  if (!rkhs::simd::isa_supported(Isa::avx2)) {
    CHECK_THROWS_AS(rkhs::simd::set_active_isa(Isa::avx2), std::invalid_argument);
  }
  rkhs::simd::set_active_isa(before);
}
