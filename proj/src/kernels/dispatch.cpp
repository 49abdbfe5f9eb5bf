// SPDX-License-Identifier: Apache-2.0

#include <atomic>

#include "kernel_tables.hpp"

namespace gfnoma::kernels {
namespace {

bool cpu_has_avx2_fma() {
#if defined(GFNOMA_BUILD_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& initial_table() { return table(best_available()); }

std::atomic<const KernelTable*>& active_slot() {
  static std::atomic<const KernelTable*> slot{&initial_table()};
  return slot;
}

}  // namespace

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
      return cpu_has_avx2_fma();
    case Isa::neon:
#if defined(GFNOMA_BUILD_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa best_available() {
  if (isa_supported(Isa::avx2)) return Isa::avx2;
  if (isa_supported(Isa::neon)) return Isa::neon;
  return Isa::scalar;
}

const KernelTable& table(Isa isa) {
  if (!isa_supported(isa)) {
    throw InvalidInput("kernels: instruction set '" + std::string(isa_name(isa)) +
                       "' is not available on this build or CPU");
  }
  switch (isa) {
#if defined(GFNOMA_BUILD_AVX2)
    case Isa::avx2:
      return detail::avx2_table();
#endif
#if defined(GFNOMA_BUILD_NEON)
    case Isa::neon:
      return detail::neon_table();
#endif
    default:
      return detail::scalar_table();
  }
}

const KernelTable& active() { return *active_slot().load(std::memory_order_acquire); }

void select(Isa isa) { active_slot().store(&table(isa), std::memory_order_release); }

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
    case Isa::neon:
      return "neon";
  }
  return "unknown";
}

std::optional<Isa> parse_isa(std::string_view name) {
  if (name == "scalar") return Isa::scalar;
  if (name == "avx2") return Isa::avx2;
  if (name == "neon") return Isa::neon;
  return std::nullopt;
}

}  // namespace gfnoma::kernels
