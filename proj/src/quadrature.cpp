#include "plasmon/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "plasmon/errors.hpp"
#include "plasmon/format.hpp"

namespace plasmon {

namespace {

// Kronrod abscissae on [0, 1) (symmetric half) with Kronrod and embedded Gauss weights.
constexpr std::array<double, 8> kXk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd Kronrod nodes (1, 3, 5) and the center.
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double kron = kWk[7] * fc;
    double gauss = kWg[3] * fc;
    for (int k = 0; k < 7; ++k) {
        const double dx = h * kXk[static_cast<std::size_t>(k)];
        const double s = f(c - dx) + f(c + dx);
        kron += kWk[static_cast<std::size_t>(k)] * s;
        if (k % 2 == 1) gauss += kWg[static_cast<std::size_t>(k / 2)] * s;
    }
    kron *= h;
    gauss *= h;
    return {a, b, kron, std::abs(kron - gauss)};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    std::span<const double> breaks, double rel_tol,
                                    double abs_tol, std::size_t max_panels) {
    QuadratureResult out;
    if (breaks.size() < 2) return out;
    std::priority_queue<Panel> heap;
    double total = 0.0;
    double total_err = 0.0;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        if (!(breaks[k + 1] > breaks[k])) continue;
        Panel p = gk15(f, breaks[k], breaks[k + 1]);
        out.evaluations += 15;
        total += p.value;
        total_err += p.error;
        heap.push(p);
    }
    auto converged = [&] { return total_err <= std::max(abs_tol, rel_tol * std::abs(total)); };
    while (!converged()) {
        if (heap.size() >= max_panels) {
            throw ConvergenceError("adaptive quadrature exceeded " + std::to_string(max_panels) +
                                       " panels (error estimate " + format_double(total_err) + ")",
                                   total_err);
        }
        const Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // Interval exhausted in floating point; accept it as is.
            heap.push({worst.a, worst.b, worst.value, 0.0});
            total_err -= worst.error;
            continue;
        }
        const Panel left = gk15(f, worst.a, mid);
        const Panel right = gk15(f, mid, worst.b);
        out.evaluations += 30;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to shed the drift of the running totals.
    total = 0.0;
    total_err = 0.0;
    out.panels = heap.size();
    while (!heap.empty()) {
        total += heap.top().value;
        total_err += heap.top().error;
        heap.pop();
    }
    out.value = total;
    out.error = total_err;
    return out;
}

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double rel_tol, double abs_tol, std::size_t max_panels) {
    const std::array<double, 2> breaks = {a, b};
    return integrate_adaptive(f, breaks, rel_tol, abs_tol, max_panels);
}

}  // namespace plasmon
