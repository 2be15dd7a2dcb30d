#ifndef FEQ_QUADRATURE_HPP
#define FEQ_QUADRATURE_HPP

#include <array>
#include <cmath>
#include <utility>

namespace feq {

// Nodes/weights of 20-point Gauss-Legendre on [-1,1], computed once by Newton
// iteration on the Legendre polynomial.
const std::array<double, 20>& gl20_nodes();
const std::array<double, 20>& gl20_weights();

template <class F>
auto gl20(F&& f, double a, double b) -> decltype(f(0.0)) {
    const auto& xs = gl20_nodes();
    const auto& ws = gl20_weights();
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    decltype(f(0.0)) acc = f(mid + half * xs[0]) * (ws[0] * half);
    for (int i = 1; i < 20; ++i) acc += f(mid + half * xs[i]) * (ws[i] * half);
    return acc;
}

namespace detail {

template <class F, class R>
void adaptive_rec(F& f, double a, double b, double tol, int depth, R whole, R& acc) {
    const double m = 0.5 * (a + b);
    R left = gl20(f, a, m);
    R right = gl20(f, m, b);
    R sum = left + right;
    if (depth <= 0 || std::abs(sum - whole) <= tol) {
        acc += sum;
        return;
    }
    adaptive_rec(f, a, m, tol * 0.5, depth - 1, left, acc);
    adaptive_rec(f, m, b, tol * 0.5, depth - 1, right, acc);
}

} // namespace detail

// Adaptive Gauss-Legendre; tol is an absolute tolerance on the panel sum.
template <class F>
auto integrate(F&& f, double a, double b, double tol = 1e-11, int depth = 24) -> decltype(f(0.0)) {
    using R = decltype(f(0.0));
    R whole = gl20(f, a, b);
    R acc{};
    detail::adaptive_rec(f, a, b, tol, depth, whole, acc);
    return acc;
}

// tanh-sinh rule on (a,b); robust for integrable endpoint behaviour.
template <class F>
auto tanh_sinh(F&& f, double a, double b, double tol = 1e-12) -> decltype(f(0.0)) {
    using R = decltype(f(0.0));
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    const double pi_half = 1.5707963267948966;
    double h = 1.0;
    R cur{}, prev{};
    for (int level = 0; level < 9; ++level) {
        R acc{};
        int kmax = (int)std::ceil(6.5 / h);
        for (int k = -kmax; k <= kmax; ++k) {
            double t = k * h;
            double s = std::sinh(t);
            double x = std::tanh(pi_half * s);
            double w = pi_half * std::cosh(t) / std::pow(std::cosh(pi_half * s), 2);
            double xx = mid + half * x;
            if (xx <= a || xx >= b) continue;
            acc += f(xx) * (w * half * h);
        }
        cur = acc;
        if (level >= 2 && std::abs(cur - prev) <= tol * (1.0 + std::abs(cur))) break;
        prev = cur;
        h *= 0.5;
    }
    return cur;
}

} // namespace feq

#endif
