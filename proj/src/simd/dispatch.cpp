#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "rkhs/simd/kernels.hpp"

namespace rkhs::simd {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(RKHS_BUILD_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa initial_isa() noexcept {
  if (const char* env = std::getenv("RKHS_SIMD")) {
    if (std::string(env) == "scalar") return Isa::scalar;
  }
  return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& active_slot() noexcept {
  static std::atomic<Isa> slot{initial_isa()};
  return slot;
}

}  // namespace

bool isa_supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
      return cpu_has_avx2();
  }
  return false;
}

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

Isa active_isa() noexcept { return active_slot().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (!isa_supported(isa)) {
    throw std::invalid_argument("instruction set not available: " + std::string(isa_name(isa)));
  }
  active_slot().store(isa, std::memory_order_relaxed);
}

const KernelTable& table(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return scalar_table();
    case Isa::avx2:
#if defined(RKHS_BUILD_AVX2)
      if (cpu_has_avx2()) return avx2_table();
#endif
      break;
  }
  throw std::invalid_argument("instruction set not available: " + std::string(isa_name(isa)));
}

const KernelTable& active() noexcept {
#if defined(RKHS_BUILD_AVX2)
  if (active_isa() == Isa::avx2) return avx2_table();
#endif
  return scalar_table();
}

}  // namespace rkhs::simd
