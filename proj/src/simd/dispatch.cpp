#include <atomic>
#include <cstdlib>
#include <string>

#include "plasmon/errors.hpp"
#include "plasmon/simd/kernels.hpp"

namespace plasmon::simd {

#if defined(PLASMON_HAVE_AVX2)
const Kernels& avx2_kernel_table();
#endif

namespace {

bool cpu_has_avx2() {
#if defined(PLASMON_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const Kernels& table_for(Isa isa) {
    if (isa == Isa::avx2) {
        if (const Kernels* k = avx2_kernels()) return *k;
        throw ConfigError("AVX2 kernels are not available on this machine");
    }
    return scalar_kernels();
}

Isa initial_isa() {
    if (const char* env = std::getenv("PLASMON_SIMD")) {
        const std::string v(env);
        if (v == "scalar") return Isa::scalar;
        if (v == "avx2" && avx2_kernels()) return Isa::avx2;
    }
    return detect_isa();
}

std::atomic<const Kernels*>& current() {
    static std::atomic<const Kernels*> ptr{&table_for(initial_isa())};
    return ptr;
}

}  // namespace

const Kernels* avx2_kernels() {
#if defined(PLASMON_HAVE_AVX2)
    static const bool ok = cpu_has_avx2();
    return ok ? &avx2_kernel_table() : nullptr;
#else
    return nullptr;
#endif
}

Isa detect_isa() { return avx2_kernels() ? Isa::avx2 : Isa::scalar; }

const Kernels& active_kernels() { return *current().load(std::memory_order_acquire); }

void select_isa(Isa isa) { current().store(&table_for(isa), std::memory_order_release); }

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

}  // namespace plasmon::simd
