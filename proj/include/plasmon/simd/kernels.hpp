#pragma once

// Hot inner loops of the spectral and time-domain solvers. Every kernel has a
// scalar reference and, on x86-64, an AVX2/FMA variant chosen at runtime.
// Complex arrays are passed as separate real/imaginary planes.

#include <complex>
#include <cstddef>
#include <string_view>

namespace plasmon::simd {

enum class Isa { scalar, avx2 };

/// Upper bound on `n_weights` for phasor_accumulate.
inline constexpr std::size_t kMaxPhasorWeights = 8;

struct Kernels {
    Isa isa;

    /// sum_k a_k b_k
    std::complex<double> (*complex_dot)(const double* a_re, const double* a_im, const double* b_re,
                                        const double* b_im, std::size_t n);

    /// acc[w] += sum_k weights[w][k] p_k for each weight plane, then p_k *= s_k.
    void (*phasor_accumulate)(double* p_re, double* p_im, const double* s_re, const double* s_im,
                              const double* const* weights, std::size_t n_weights,
                              std::complex<double>* acc, std::size_t n);

    /// sum_k w_k / (x_k - shift)^power with power 1 or 2.
    double (*resolvent_sum)(const double* w, const double* x, double shift, int power,
                            std::size_t n);
};

const Kernels& scalar_kernels();

/// AVX2 table, or nullptr when not compiled in or not supported by the CPU.
const Kernels* avx2_kernels();

/// Best ISA the running CPU supports.
Isa detect_isa();

/// Kernels used by the library. Defaults to detect_isa(), overridable with the
/// PLASMON_SIMD environment variable (`scalar`, `avx2`) or select_isa().
const Kernels& active_kernels();

/// Forces an ISA; throws ConfigError if it is unavailable.
void select_isa(Isa isa);

std::string_view isa_name(Isa isa);

}  // namespace plasmon::simd
