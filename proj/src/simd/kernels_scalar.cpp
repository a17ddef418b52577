#include "plasmon/simd/kernels.hpp"

namespace plasmon::simd {

namespace {

std::complex<double> complex_dot(const double* a_re, const double* a_im, const double* b_re,
                                 const double* b_im, std::size_t n) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        re += a_re[k] * b_re[k] - a_im[k] * b_im[k];
        im += a_re[k] * b_im[k] + a_im[k] * b_re[k];
    }
    return {re, im};
}

void phasor_accumulate(double* p_re, double* p_im, const double* s_re, const double* s_im,
                       const double* const* weights, std::size_t n_weights,
                       std::complex<double>* acc, std::size_t n) {
    double sum_re[kMaxPhasorWeights] = {};
    double sum_im[kMaxPhasorWeights] = {};
    for (std::size_t k = 0; k < n; ++k) {
        const double pr = p_re[k];
        const double pi = p_im[k];
        for (std::size_t w = 0; w < n_weights; ++w) {
            sum_re[w] += weights[w][k] * pr;
            sum_im[w] += weights[w][k] * pi;
        }
        p_re[k] = pr * s_re[k] - pi * s_im[k];
        p_im[k] = pr * s_im[k] + pi * s_re[k];
    }
    for (std::size_t w = 0; w < n_weights; ++w) acc[w] += std::complex<double>(sum_re[w], sum_im[w]);
}

double resolvent_sum(const double* w, const double* x, double shift, int power, std::size_t n) {
    double sum = 0.0;
    if (power == 1) {
        for (std::size_t k = 0; k < n; ++k) sum += w[k] / (x[k] - shift);
    } else {
        for (std::size_t k = 0; k < n; ++k) {
            const double d = x[k] - shift;
            sum += w[k] / (d * d);
        }
    }
    return sum;
}

}  // namespace

const Kernels& scalar_kernels() {
    static const Kernels table{Isa::scalar, &complex_dot, &phasor_accumulate, &resolvent_sum};
    return table;
}

}  // namespace plasmon::simd
