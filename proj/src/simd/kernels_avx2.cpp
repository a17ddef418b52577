// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include "plasmon/simd/kernels.hpp"

namespace plasmon::simd {

namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

std::complex<double> complex_dot(const double* a_re, const double* a_im, const double* b_re,
                                 const double* b_im, std::size_t n) {
    __m256d re0 = _mm256_setzero_pd(), im0 = _mm256_setzero_pd();
    __m256d re1 = _mm256_setzero_pd(), im1 = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 8 <= n; k += 8) {
        const __m256d ar0 = _mm256_loadu_pd(a_re + k), ai0 = _mm256_loadu_pd(a_im + k);
        const __m256d br0 = _mm256_loadu_pd(b_re + k), bi0 = _mm256_loadu_pd(b_im + k);
        const __m256d ar1 = _mm256_loadu_pd(a_re + k + 4), ai1 = _mm256_loadu_pd(a_im + k + 4);
        const __m256d br1 = _mm256_loadu_pd(b_re + k + 4), bi1 = _mm256_loadu_pd(b_im + k + 4);
        re0 = _mm256_fmadd_pd(ar0, br0, re0);
        re0 = _mm256_fnmadd_pd(ai0, bi0, re0);
        im0 = _mm256_fmadd_pd(ar0, bi0, im0);
        im0 = _mm256_fmadd_pd(ai0, br0, im0);
        re1 = _mm256_fmadd_pd(ar1, br1, re1);
        re1 = _mm256_fnmadd_pd(ai1, bi1, re1);
        im1 = _mm256_fmadd_pd(ar1, bi1, im1);
        im1 = _mm256_fmadd_pd(ai1, br1, im1);
    }
    for (; k + 4 <= n; k += 4) {
        const __m256d ar = _mm256_loadu_pd(a_re + k), ai = _mm256_loadu_pd(a_im + k);
        const __m256d br = _mm256_loadu_pd(b_re + k), bi = _mm256_loadu_pd(b_im + k);
        re0 = _mm256_fmadd_pd(ar, br, re0);
        re0 = _mm256_fnmadd_pd(ai, bi, re0);
        im0 = _mm256_fmadd_pd(ar, bi, im0);
        im0 = _mm256_fmadd_pd(ai, br, im0);
    }
    double re = hsum(_mm256_add_pd(re0, re1));
    double im = hsum(_mm256_add_pd(im0, im1));
    for (; k < n; ++k) {
        re += a_re[k] * b_re[k] - a_im[k] * b_im[k];
        im += a_re[k] * b_im[k] + a_im[k] * b_re[k];
    }
    return {re, im};
}

void phasor_accumulate(double* p_re, double* p_im, const double* s_re, const double* s_im,
                       const double* const* weights, std::size_t n_weights,
                       std::complex<double>* acc, std::size_t n) {
    __m256d sum_re[kMaxPhasorWeights];
    __m256d sum_im[kMaxPhasorWeights];
    for (std::size_t w = 0; w < n_weights; ++w) {
        sum_re[w] = _mm256_setzero_pd();
        sum_im[w] = _mm256_setzero_pd();
    }
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d pr = _mm256_loadu_pd(p_re + k);
        const __m256d pi = _mm256_loadu_pd(p_im + k);
        for (std::size_t w = 0; w < n_weights; ++w) {
            const __m256d wt = _mm256_loadu_pd(weights[w] + k);
            sum_re[w] = _mm256_fmadd_pd(wt, pr, sum_re[w]);
            sum_im[w] = _mm256_fmadd_pd(wt, pi, sum_im[w]);
        }
        const __m256d sr = _mm256_loadu_pd(s_re + k);
        const __m256d si = _mm256_loadu_pd(s_im + k);
        _mm256_storeu_pd(p_re + k, _mm256_fmsub_pd(pr, sr, _mm256_mul_pd(pi, si)));
        _mm256_storeu_pd(p_im + k, _mm256_fmadd_pd(pr, si, _mm256_mul_pd(pi, sr)));
    }
    double tail_re[kMaxPhasorWeights] = {};
    double tail_im[kMaxPhasorWeights] = {};
    for (; k < n; ++k) {
        const double pr = p_re[k];
        const double pi = p_im[k];
        for (std::size_t w = 0; w < n_weights; ++w) {
            tail_re[w] += weights[w][k] * pr;
            tail_im[w] += weights[w][k] * pi;
        }
        p_re[k] = pr * s_re[k] - pi * s_im[k];
        p_im[k] = pr * s_im[k] + pi * s_re[k];
    }
    for (std::size_t w = 0; w < n_weights; ++w)
        acc[w] += std::complex<double>(hsum(sum_re[w]) + tail_re[w], hsum(sum_im[w]) + tail_im[w]);
}

double resolvent_sum(const double* w, const double* x, double shift, int power, std::size_t n) {
    const __m256d s = _mm256_set1_pd(shift);
    __m256d acc = _mm256_setzero_pd();
    std::size_t k = 0;
    if (power == 1) {
        for (; k + 4 <= n; k += 4) {
            const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + k), s);
            acc = _mm256_add_pd(acc, _mm256_div_pd(_mm256_loadu_pd(w + k), d));
        }
    } else {
        for (; k + 4 <= n; k += 4) {
            const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + k), s);
            acc = _mm256_add_pd(acc, _mm256_div_pd(_mm256_loadu_pd(w + k), _mm256_mul_pd(d, d)));
        }
    }
    double sum = hsum(acc);
    for (; k < n; ++k) {
        const double d = x[k] - shift;
        sum += power == 1 ? w[k] / d : w[k] / (d * d);
    }
    return sum;
}

}  // namespace

const Kernels& avx2_kernel_table() {
    static const Kernels table{Isa::avx2, &complex_dot, &phasor_accumulate, &resolvent_sum};
    return table;
}

}  // namespace plasmon::simd
