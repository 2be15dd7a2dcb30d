#include "feq/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "feq/quadrature.hpp"
#include "json.hpp"

#if defined(__SIZEOF_FLOAT128__) && !defined(FEQ_NO_FLOAT128)
#include <quadmath.h>
#define FEQ_HAVE_FLOAT128 1
#endif

namespace feq {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr long double kPiL = 3.14159265358979323846264338328L;

double coth(double x) { return 1.0 / std::tanh(x); }

} // namespace

double evaluate_fhat(const TransformSpec& ts, double k) {
    switch (ts.kind) {
        case TransformKind::Coth: {
            double c = kPi / ts.a0;
            double x = c * k;
            if (std::abs(x) < 1e-4) {
                // pi k coth(pi k/a0) = a0 (1 + x^2/3 - x^4/45 + ...)
                return ts.a0 * (1.0 + x * x / 3.0 - x * x * x * x / 45.0);
            }
            return kPi * k * coth(x);
        }
        case TransformKind::Tanh:
            return kPi * k * std::tanh(k * ts.a2 / (2.0 * kPi));
        case TransformKind::AbsPlus: return kPi * std::abs(k);
        case TransformKind::AbsMinus: return -kPi * std::abs(k);
        case TransformKind::Const: return ts.a0;
        case TransformKind::Pair: {
            double al = ts.a2 / ts.a1;
            double x = al * k;
            double p = ts.pair_index == 1 ? 4.0 : 2.0;
            if (std::abs(x) < 1e-5) {
                // 6 a2 k e^{p x}/(e^{6x}-1) -> a1 (1 + (p-3) x + ...)
                return ts.a1 * (1.0 + (p - 3.0) * x);
            }
            if (x > 20.0) return 6.0 * ts.a2 * k * std::exp((p - 6.0) * x) / (1.0 - std::exp(-6.0 * x));
            return 6.0 * ts.a2 * k * std::exp(p * x) / std::expm1(6.0 * x);
        }
    }
    throw std::logic_error("evaluate_fhat: unhandled kind");
}

double evaluate_fhat_deriv(const TransformSpec& ts, double k) {
    switch (ts.kind) {
        case TransformKind::Coth: {
            double c = kPi / ts.a0;
            double x = c * k;
            if (std::abs(x) < 1e-4) {
                return ts.a0 * c * (2.0 * x / 3.0 - 4.0 * x * x * x / 45.0);
            }
            double s = std::sinh(x);
            return kPi * (coth(x) - x / (s * s));
        }
        case TransformKind::Tanh: {
            double c = ts.a2 / (2.0 * kPi);
            double t = std::tanh(c * k);
            return kPi * t + kPi * k * c * (1.0 - t * t);
        }
        case TransformKind::AbsPlus: return k >= 0 ? kPi : -kPi;
        case TransformKind::AbsMinus: return k >= 0 ? -kPi : kPi;
        case TransformKind::Const: return 0.0;
        case TransformKind::Pair: {
            double h = 1e-6 * std::max(1.0, std::abs(k));
            return (evaluate_fhat(ts, k + h) - evaluate_fhat(ts, k - h)) / (2.0 * h);
        }
    }
    throw std::logic_error("evaluate_fhat_deriv: unhandled kind");
}

double pair_f1(const TransformSpec& ts, double k) {
    double al = ts.a2 / ts.a1;
    double x = al * k;
    if (std::abs(x) < 1e-3) {
        double x2 = x * x;
        return ts.a1 * (1.0 - x2 + (13.0 / 15.0) * x2 * x2);
    }
    return 3.0 * ts.a2 * k * std::cosh(x) / std::sinh(3.0 * x);
}

double pair_f2(const TransformSpec& ts, double k) {
    double x = ts.a2 / ts.a1 * k;
    return 3.0 * ts.a2 / (2.0 * std::cosh(2.0 * x) + 1.0);
}

double pair_f1_deriv(const TransformSpec& ts, double k) {
    double al = ts.a2 / ts.a1;
    double x = al * k;
    if (std::abs(x) < 1e-3) {
        return ts.a1 * al * (-2.0 * x + 4.0 * (13.0 / 15.0) * x * x * x);
    }
    double s3 = std::sinh(3.0 * x);
    double val = 3.0 * ts.a2 * (std::cosh(x) / s3 +
                                x * (std::sinh(x) * s3 - 3.0 * std::cosh(x) * std::cosh(3.0 * x)) / (s3 * s3));
    return val;
}

double pair_f2_deriv(const TransformSpec& ts, double k) {
    double al = ts.a2 / ts.a1;
    double x = al * k;
    double den = 2.0 * std::cosh(2.0 * x) + 1.0;
    return -12.0 * ts.a2 * al * std::sinh(2.0 * x) / (den * den);
}

namespace {

// fhat(k) +- pi k in long double, in cancellation-free form per kind:
//   coth(x) + 1 = e^x / sinh x,  coth(x) - 1 = e^{-x}/sinh x
//   tanh(x) + 1 = e^x / cosh x,  tanh(x) - 1 = -e^{-x}/cosh x
long double fhat_pm(const TransformSpec& ts, long double k, int sign) {
    switch (ts.kind) {
        case TransformKind::Coth: {
            long double x = kPiL * k / (long double)ts.a0;
            if (std::abs((double)x) < 1e-6) {
                long double a0 = (long double)ts.a0;
                // a0 + x a0 sign + x^2 a0/3 + ...
                return a0 * (1.0L + (long double)sign * x + x * x / 3.0L);
            }
            return kPiL * k * std::exp((long double)sign * x) / std::sinh(x);
        }
        case TransformKind::Tanh: {
            long double x = (long double)ts.a2 * k / (2.0L * kPiL);
            return (long double)sign * kPiL * k * std::exp((long double)sign * x) / std::cosh(x);
        }
        case TransformKind::AbsPlus:
            return kPiL * (std::abs(k) + (long double)sign * k);
        case TransformKind::AbsMinus:
            return kPiL * ((long double)sign * k - std::abs(k));
        case TransformKind::Const:
            return (long double)ts.a0 + (long double)sign * kPiL * k;
        case TransformKind::Pair:
            return (long double)evaluate_fhat(ts, (double)k) + (long double)sign * kPiL * k;
    }
    throw std::logic_error("fhat_pm: unhandled kind");
}

} // namespace

#ifdef FEQ_HAVE_FLOAT128
namespace {

// fhat(k) +- pi k in quad precision for the normalized functional
__float128 fhat_pm_q(const TransformSpec& ts, __float128 k, int sign) {
    const __float128 piq = M_PIq;
    switch (ts.kind) {
        case TransformKind::Coth: {
            __float128 x = piq * k / (__float128)ts.a0;
            if (fabsq(x) < 1e-8Q) {
                return (__float128)ts.a0 * (1.0Q + (__float128)sign * x + x * x / 3.0Q);
            }
            return piq * k * expq((__float128)sign * x) / sinhq(x);
        }
        case TransformKind::Tanh: {
            __float128 x = (__float128)ts.a2 * k / (2.0Q * piq);
            return (__float128)sign * piq * k * expq((__float128)sign * x) / coshq(x);
        }
        case TransformKind::AbsPlus: return piq * (fabsq(k) + (__float128)sign * k);
        case TransformKind::AbsMinus: return piq * ((__float128)sign * k - fabsq(k));
        case TransformKind::Const: return (__float128)ts.a0 + (__float128)sign * piq * k;
        case TransformKind::Pair:
            return (__float128)evaluate_fhat(ts, (double)k) + (__float128)sign * piq * k;
    }
    return 0;
}

} // namespace
#endif

double s_hat_n(const TransformSpec& ts, const std::vector<double>& k) {
    const int n = (int)k.size();
#ifdef FEQ_HAVE_FLOAT128
    __float128 K = 0;
    for (double v : k) K += (__float128)v;
    if (fabsq(K) < 1e-12Q) throw std::domain_error("s_hat_n: total wavenumber too small");
    std::vector<__float128> plus((size_t)n), minus((size_t)n);
    for (int i = 0; i < n; ++i) {
        plus[(size_t)i] = fhat_pm_q(ts, k[(size_t)i], +1);
        minus[(size_t)i] = fhat_pm_q(ts, k[(size_t)i], -1);
        if (plus[(size_t)i] == 0.0Q) throw std::domain_error("s_hat_n: vanishing denominator");
    }
    __float128 acc = 0.0Q, suffix = 1.0Q;
    for (int j = n - 1; j >= 0; --j) {
        acc += (__float128)k[(size_t)j] / plus[(size_t)j] * suffix;
        suffix *= minus[(size_t)j] / plus[(size_t)j];
    }
    __float128 tail = fhat_pm_q(ts, K, +1) / K;
    return (double)(acc * tail - 1.0Q);
#else
    long double K = 0;
    for (double v : k) K += (long double)v;
    if (std::abs((double)K) < 1e-12) throw std::domain_error("s_hat_n: total wavenumber too small");
    std::vector<long double> plus((size_t)n), minus((size_t)n);
    for (int i = 0; i < n; ++i) {
        plus[(size_t)i] = fhat_pm(ts, k[(size_t)i], +1);
        minus[(size_t)i] = fhat_pm(ts, k[(size_t)i], -1);
        if (plus[(size_t)i] == 0.0L) throw std::domain_error("s_hat_n: vanishing denominator");
    }
    long double acc = 0.0L, suffix = 1.0L;
    for (int j = n - 1; j >= 0; --j) {
        acc += (long double)k[(size_t)j] / plus[(size_t)j] * suffix;
        suffix *= minus[(size_t)j] / plus[(size_t)j];
    }
    long double tail = fhat_pm(ts, K, +1) / K;
    return (double)(acc * tail - 1.0L);
#endif
}

double s_n_form(const TransformSpec& ts, const std::vector<double>& k) {
    const int n = (int)k.size();
    long double K = 0;
    for (double v : k) K += (long double)v;
    std::vector<long double> plus((size_t)n), minus((size_t)n);
    for (int i = 0; i < n; ++i) {
        plus[(size_t)i] = fhat_pm(ts, k[(size_t)i], +1);
        minus[(size_t)i] = fhat_pm(ts, k[(size_t)i], -1);
    }
    long double sum = 0.0L;
    for (int j = 0; j < n; ++j) {
        long double term = (long double)k[(size_t)j];
        for (int q = 0; q < j; ++q) term *= plus[(size_t)q];
        for (int q = j + 1; q < n; ++q) term *= minus[(size_t)q];
        sum += term;
    }
    long double head = sum * fhat_pm(ts, K, +1);
    long double prod = 1.0L;
    for (int q = 0; q < n; ++q) prod *= plus[(size_t)q];
    return (double)(head - K * prod);
}

ReductionChecks s_n_reduction_checks(const TransformSpec& ts, int n, const std::vector<double>& k) {
    if ((int)k.size() < n + 2) throw std::invalid_argument("s_n_reduction_checks: need n+2 sample wavenumbers");
    ReductionChecks out;
    std::vector<double> base(k.begin(), k.begin() + n);
    double sn = s_n_form(ts, base);
    {
        std::vector<double> ext = base;
        ext.push_back(k[(size_t)n]);
        ext.push_back(-k[(size_t)n]);
        double lhs = s_n_form(ts, ext);
        double f = evaluate_fhat(ts, k[(size_t)n]);
        double fac = f * f - kPi * kPi * k[(size_t)n] * k[(size_t)n];
        double scale = std::max({1.0, std::abs(lhs), std::abs(fac * sn)});
        out.lemma1 = std::abs(lhs - fac * sn) / scale;
    }
    {
        std::vector<double> ext = base;
        ext.push_back(0.0);
        double lhs = s_n_form(ts, ext);
        double f0 = evaluate_fhat(ts, 0.0);
        double scale = std::max({1.0, std::abs(lhs), std::abs(f0 * sn)});
        out.lemma2 = std::abs(lhs - f0 * sn) / scale;
    }
    return out;
}

TransformOde ode_residual_transform(const TransformSpec& ts, double k, double pair_c) {
    TransformOde out;
    if (ts.even()) {
        double f = evaluate_fhat(ts, k);
        double fp = evaluate_fhat_deriv(ts, k);
        double a0 = evaluate_fhat(ts, 0.0);
        double t1 = a0 * k * fp, t2 = -a0 * f, t3 = f * f, t4 = -kPi * kPi * k * k;
        double scale = std::max({std::abs(t1), std::abs(t2), std::abs(t3), std::abs(t4), 1e-300});
        out.r58 = std::abs(t1 + t2 + t3 + t4) / scale;
        return out;
    }
    double a1 = ts.a1, a2 = ts.a2;
    double f1, f2, f1p, f2p;
    if (pair_c == -4.0) {
        // cot-type branch: f2 == a2, f1 = sqrt(3) a2 k cot(sqrt(3) a2 k/a1)
        double c = std::sqrt(3.0) * a2 / a1;
        double x = c * k;
        f2 = a2;
        f2p = 0.0;
        if (std::abs(x) < 1e-4) {
            f1 = a1 * (1.0 - x * x / 3.0);
            f1p = a1 * c * (-2.0 * x / 3.0);
        } else {
            f1 = std::sqrt(3.0) * a2 * k / std::tan(x);
            f1p = std::sqrt(3.0) * a2 * (1.0 / std::tan(x) - x / (std::sin(x) * std::sin(x)));
        }
    } else {
        f1 = pair_f1(ts, k);
        f2 = pair_f2(ts, k);
        f1p = pair_f1_deriv(ts, k);
        f2p = pair_f2_deriv(ts, k);
    }
    {
        double t1 = 2.0 * (f2 - a2) * f1, t2 = -k * a1 * f2p;
        double scale = std::max({std::abs(t1), std::abs(t2), 1e-300});
        out.r48 = std::abs(t1 + t2) / std::max(scale, 1.0);
    }
    {
        double t[5] = {k * a1 * f1p, f1 * f1, k * k * f2 * f2, -f1 * a1, 2.0 * k * k * a2 * f2};
        double sum = 0, scale = 1e-300;
        for (double v : t) {
            sum += v;
            scale = std::max(scale, std::abs(v));
        }
        out.r49 = std::abs(sum) / scale;
    }
    {
        double t1 = 3.0 * a1 * a1 * f2p * f2p;
        double t2 = -4.0 * (a2 - f2) * (pair_c * a2 * a2 * a2 + f2 * f2 * f2 + 3.0 * a2 * f2 * f2);
        double scale = std::max({std::abs(t1), std::abs(t2), 1e-300});
        out.r412 = std::abs(t1 + t2) / std::max(scale, 1.0);
    }
    return out;
}

// ------------------------------------------------------------ discrete solvers

namespace {

Rational rat_get(const std::map<long, Rational>& m, long K) {
    auto it = m.find(K);
    if (it == m.end()) throw std::runtime_error("discrete solve: missing coefficient");
    return it->second;
}

bool rational_sqrt(const Rational& v, Rational& r) {
    if (v.sign() < 0) return false;
    auto isqrt = [](const BigInt& x, BigInt& out) {
        if (x.sign() < 0) return false;
        if (x == BigInt(0) || x == BigInt(1)) {
            out = x;
            return true;
        }
        BigInt lo(1), hi = x, two(2);
        BigInt y = (hi + BigInt(1)) / two, prev = hi;
        while (y < prev) {
            prev = y;
            y = (y + x / y) / two;
        }
        out = prev;
        return prev * prev == x;
    };
    BigInt n, d;
    if (!isqrt(v.num_big(), n) || !isqrt(v.den_big(), d)) return false;
    r = Rational(n, d);
    return true;
}

} // namespace

DiscreteSolveResult discrete_solve_general(const std::map<long, Rational>& seeds, int N) {
    DiscreteSolveResult out;
    std::map<long, Rational> a;
    for (long K : {-2L, -1L, 1L}) a[K] = rat_get(seeds, K);
    // shell N: the pair (a_{M}, a_{-M}) follows from ((M-1,1),(1,M-1)) linearly
    for (long M = 2; M <= N; ++M) {
        if (M == 2) {
            // (1,1): a_{-1} a_{-2} + a_1 a_2 - 2 a_{-1} a_1 = 0
            if (a[1].is_zero()) {
                out.conflict = true;
                out.witness_K = 1;
                out.witness_L = 1;
                return out;
            }
            a[2] = (Rational(2) * a[-1] * a[1] - a[-1] * a[-2]) / a[1];
            continue;
        }
        // (M-1, 1): (M-1) a_{-1} a_{-M} + a_{M-1} a_M - M a_{-(M-1)} a_1 = 0
        // (1, M-1): a_{-(M-1)} a_{-M} + (M-1) a_1 a_M - M a_{-1} a_{M-1} = 0
        Rational A11 = a[M - 1], A12 = Rational(M - 1) * a[-1];
        Rational A21 = Rational(M - 1) * a[1], A22 = a[-(M - 1)];
        Rational b1 = Rational(M) * a[-(M - 1)] * a[1];
        Rational b2 = Rational(M) * a[-1] * a[M - 1];
        Rational det = A11 * A22 - A12 * A21;
        if (det.is_zero()) {
            out.conflict = true;
            out.witness_K = M - 1;
            out.witness_L = 1;
            return out;
        }
        a[M] = (b1 * A22 - A12 * b2) / det;
        a[-M] = (A11 * b2 - b1 * A21) / det;
    }
    // full verification over the solved window
    for (long K = -N; K <= N; ++K) {
        for (long L = -N; L <= N; ++L) {
            if (K == 0 || L == 0 || K + L == 0) continue;
            if (std::abs(K + L) > N) continue;
            Rational r = Rational(K) * a[-L] * a[-K - L] + Rational(L) * a[K] * a[K + L] -
                         Rational(K + L) * a[-K] * a[L];
            if (!r.is_zero()) {
                out.conflict = true;
                out.witness_K = K;
                out.witness_L = L;
                return out;
            }
        }
    }
    FourierSeq seq;
    seq.even = false;
    seq.a0_free = true;
    for (const auto& [K, v] : a) {
        seq.exact[K] = v;
        seq.a[K] = cplx(v.to_double(), 0.0);
    }
    out.branches.push_back(std::move(seq));
    return out;
}

DiscreteSolveResult discrete_solve_even_pole(const Rational& beta, int N) {
    DiscreteSolveResult out;
    // a_K = pi K b_K, (b_K + b_L) b_{K+L} = b_K b_L + 1, b_1 = (beta+1)/(1-beta)
    std::map<long, Rational> b;
    b[1] = (beta + Rational(1)) / (Rational(1) - beta);
    for (long K = 1; K + 1 <= N; ++K) {
        Rational den = b[K] + b[1];
        if (den.is_zero()) {
            out.conflict = true;
            out.witness_K = K;
            out.witness_L = 1;
            return out;
        }
        b[K + 1] = (b[K] * b[1] + Rational(1)) / den;
    }
    for (long K = 1; K <= N; ++K) {
        for (long L = K; L <= N && K + L <= N; ++L) {
            Rational r = (b[K] + b[L]) * b[K + L] - b[K] * b[L] - Rational(1);
            if (!r.is_zero()) {
                out.conflict = true;
                out.witness_K = K;
                out.witness_L = L;
                return out;
            }
        }
    }
    FourierSeq seq;
    seq.even = true;
    seq.a0_free = true;
    seq.pole_slope = 1.0;
    for (long K = 1; K <= N; ++K) {
        seq.exact[K] = b[K];
        double aK = kPi * (double)K * b[K].to_double();
        seq.a[K] = aK;
        seq.a[-K] = aK;
        seq.exact[-K] = b[K];
    }
    out.branches.push_back(std::move(seq));
    return out;
}

namespace {

// the three-index even recurrence of the transform functional, in b-units
// (a_K = pi K b_K): E(N1,N2,N3) =
//   (b2-1)(b3-1)(bS+1) + (b1+1)(b3-1)(bS+1) + (b1+1)(b2+1)(bS+1) - (b1+1)(b2+1)(b3+1)
Rational s3_b_residual(const std::map<long, Rational>& b, long N1, long N2, long N3) {
    auto g = [&](long K) { return rat_get(b, std::labs(K)); };
    Rational b1 = g(N1), b2 = g(N2), b3 = g(N3), bS = g(N1 + N2 + N3);
    Rational one(1);
    return (b2 - one) * (b3 - one) * (bS + one) + (b1 + one) * (b3 - one) * (bS + one) +
           (b1 + one) * (b2 + one) * (bS + one) - (b1 + one) * (b2 + one) * (b3 + one);
}

} // namespace

DiscreteSolveResult discrete_solve_a0zero(const Rational& beta, int N) {
    DiscreteSolveResult out;
    Rational one(1);
    Rational b1 = (beta + one) / (one - beta);
    Rational p = b1 + one, m = b1 - one;

    std::map<long, Rational> b;
    b[1] = b1;
    // E(1,1,1): (m^2 + p m + p^2)(b3 + 1) = p^3
    {
        Rational quad = m * m + p * m + p * p;
        if (quad.is_zero()) {
            out.conflict = true;
            out.witness_K = 1;
            out.witness_L = 1;
            return out;
        }
        b[3] = p * p * p / quad - one;
    }
    // odd coefficients cascade from E(1,1,M-2), which is linear in b_M:
    //   [m (bk - 1) + p (bk - 1) + p^2] (b_M + 1) = p^2 (bk + 1),  bk = b_{M-2}
    auto next_from_11 = [&](const Rational& bk, Rational& bM) {
        Rational coef = m * (bk - one) + p * (bk - one) + p * p;
        if (coef.is_zero()) return false;
        bM = p * p * (bk + one) / coef - one;
        return true;
    };
    {
        Rational b5;
        if (!next_from_11(b[3], b5)) {
            out.conflict = true;
            out.witness_K = 1;
            out.witness_L = 3;
            return out;
        }
        b[5] = b5;
    }
    // The permutations of (1,1,2) coincide, so the even seed comes from E(1,2,2),
    // a genuine quadratic in b2 once b5 is known:
    //   (Q - p) x^2 + 2 (p Q - Q - p) x + (Q - p) = 0 with Q = b5 + 1
    Rational Q = b[5] + one;
    Rational A = Q - p, B = Rational(2) * (p * Q - Q - p), C = Q - p;
    std::vector<Rational> roots;
    if (A.is_zero()) {
        if (!B.is_zero()) roots.push_back(-C / B);
    } else {
        Rational disc = B * B - Rational(4) * A * C;
        Rational sq;
        if (!rational_sqrt(disc, sq)) {
            out.conflict = true;
            out.witness_K = 1;
            out.witness_L = 2;
            return out;
        }
        roots.push_back((-B + sq) / (Rational(2) * A));
        roots.push_back((-B - sq) / (Rational(2) * A));
    }
    std::sort(roots.begin(), roots.end(), [](const Rational& x, const Rational& y) { return y < x; });

    // exact arithmetic up to a cost cap; the recurrence has an attracting fixed
    // point, so the floating-point continuation beyond it is stable
    const long exact_cap = std::min<long>(N, 64);
    for (const Rational& b2 : roots) {
        std::map<long, Rational> bb = b;
        bb[2] = b2;
        bool ok = true;
        for (long M = 4; M <= exact_cap && ok; ++M) {
            if (bb.count(M)) continue;
            Rational bM;
            ok = next_from_11(bb[M - 2], bM);
            if (ok) bb[M] = bM;
        }
        if (!ok) continue;
        std::map<long, double> bd;
        for (const auto& [K, v] : bb) bd[K] = v.to_double();
        {
            double pd = p.to_double(), md = m.to_double();
            for (long M = exact_cap + 1; M <= N; ++M) {
                if (bd.count(M)) continue;
                double bk = bd[M - 2];
                double coef = md * (bk - 1.0) + pd * (bk - 1.0) + pd * pd;
                bd[M] = pd * pd * (bk + 1.0) / coef - 1.0;
            }
        }
        // verify the full three-index system on a cost-capped exact window
        const long NV = std::min<long>(N, 30);
        for (long N1 = 1; N1 <= NV; ++N1) {
            for (long N2 = N1; N2 <= NV; ++N2) {
                for (long N3 = N2; N3 <= NV && N1 + N2 + N3 <= NV; ++N3) {
                    if (!s3_b_residual(bb, N1, N2, N3).is_zero()) {
                        out.conflict = true;
                        out.witness_K = N1;
                        out.witness_L = N3;
                        return out;
                    }
                }
            }
        }
        FourierSeq seq;
        seq.even = true;
        seq.a0_free = false;
        seq.a[0] = 0.0;
        seq.pole_slope = 1.0;
        for (long K = 1; K <= N; ++K) {
            if (bb.count(K)) {
                seq.exact[K] = bb[K];
                seq.exact[-K] = bb[K];
            }
            double aK = kPi * (double)K * bd[K];
            seq.a[K] = aK;
            seq.a[-K] = aK;
        }
        out.branches.push_back(std::move(seq));
        out.a2_choices.push_back(b2);
    }
    return out;
}

FourierSeq shift_family(const FourierSeq& seq, int m) {
    if (m < 1 || m > 2) throw std::invalid_argument("shift_family: m must be 1 or 2");
    FourierSeq out = seq;
    out.exact.clear();
    out.even = false;
    out.phase = seq.phase + 2.0 * kPi * m / 3.0;
    for (auto& [K, v] : out.a) {
        double th = 2.0 * kPi * (double)K * m / 3.0;
        v = seq.a.at(K) * std::polar(1.0, th);
    }
    return out;
}

double discrete_residual(const FourierSeq& seq, int N) {
    auto get = [&](long K) -> cplx {
        auto it = seq.a.find(K);
        if (it != seq.a.end()) return it->second;
        if (seq.even) {
            it = seq.a.find(-K);
            if (it != seq.a.end()) return it->second;
        }
        throw std::out_of_range("discrete_residual: coefficient window too small");
    };
    double worst = 0.0;
    for (long K = -N; K <= N; ++K) {
        for (long L = -N; L <= N; ++L) {
            if (K == 0 || L == 0 || K + L == 0) continue;
            if (std::labs(K + L) > N) continue;
            cplx t1 = (double)K * get(-L) * get(-K - L);
            cplx t2 = (double)L * get(K) * get(K + L);
            cplx t3 = -(double)(K + L) * get(-K) * get(L);
            double scale = std::max({std::abs(t1), std::abs(t2), std::abs(t3), 1e-300});
            worst = std::max(worst, std::abs(t1 + t2 + t3) / scale);
        }
    }
    return worst;
}

double discrete_residual_even_pole(const FourierSeq& seq, int N) {
    auto get = [&](long K) -> double {
        long idx = std::labs(K);
        auto it = seq.a.find(idx);
        if (it == seq.a.end()) throw std::out_of_range("discrete_residual_even_pole: window too small");
        return it->second.real();
    };
    double worst = 0.0;
    for (long K = 1; K <= N; ++K) {
        for (long L = 1; L + K <= N; ++L) {
            double t1 = ((double)K * get(L) + (double)L * get(K)) * get(K + L);
            double t2 = -(double)(K + L) * get(K) * get(L);
            double t3 = -kPi * kPi * (double)(K * L * (K + L));
            double scale = std::max({std::abs(t1), std::abs(t2), std::abs(t3)});
            worst = std::max(worst, std::abs(t1 + t2 + t3) / scale);
        }
    }
    return worst;
}

cplx resum(const FourierSeq& seq, double x, int cutoff) {
    cplx acc = 0.0;
    if (seq.a.count(0)) acc += seq.a.at(0);
    const double s = seq.pole_slope;
    for (long K = 1; K <= cutoff; ++K) {
        for (long sgn : {1L, -1L}) {
            long idx = sgn * K;
            auto it = seq.a.find(idx);
            if (it == seq.a.end() && seq.even) it = seq.a.find(-idx);
            if (it == seq.a.end()) break;
            cplx aK = it->second;
            if (s != 0.0) aK -= s * kPi * (double)K * std::polar(1.0, seq.phase * (double)idx);
            acc += aK * std::polar(1.0, x * (double)idx);
        }
    }
    acc /= 2.0 * kPi;
    if (s != 0.0) {
        double half = 0.5 * (x + seq.phase);
        double sn = std::sin(half);
        if (std::abs(sn) < 1e-9) throw pole_error("resum: lattice point");
        acc += -s / (4.0 * sn * sn);
    }
    return acc;
}

// ------------------------------------------------------------ generalized transform

namespace {

// oscillation-aware panels of f(x) e^{-ikx} on [a, b]; panels shrink near the
// origin where the pole families are steep
cplx integrate_segment(const SolutionSpec& spec, double k, double a, double b) {
    const double h_osc = std::min(0.8, kPi / (4.0 * std::max(1.0, std::abs(k))));
    cplx acc = 0.0;
    double x = a;
    while (x < b) {
        double dist = std::min(std::abs(x), std::abs(b));
        if (x < 0.0 && b > 0.0) dist = std::abs(x);
        double w = std::max(1e-4, std::min(h_osc, 0.9 * std::max(dist, 2e-3)));
        double hi = std::min(b, x + w);
        acc += gl20([&](double t) { return evaluate(spec, cplx(t, 0.0)) * std::polar(1.0, -k * t); }, x, hi);
        x = hi;
    }
    return acc;
}

cplx semicircle(const SolutionSpec& spec, double k, double r, bool above) {
    // z = r e^{i th}, th from pi to 0 (above) or pi to 2 pi (below)
    double t0 = kPi, t1 = above ? 0.0 : 2.0 * kPi;
    return gl20(
        [&](double th) {
            cplx z = std::polar(r, th);
            cplx dz = cplx(0.0, 1.0) * z;
            return evaluate(spec, z) * std::exp(cplx(0.0, -k) * z) * dz;
        },
        t0, t1);
}

bool decays_exponentially(const SolutionSpec& spec) {
    switch (spec.family) {
        case Family::Hyperbolic:
        case Family::SinhShift: return true;
        default: return false;
    }
}

// tail of the two-sided integral beyond |x| = X for slowly decaying f
cplx algebraic_tail(const SolutionSpec& spec, double k, double X) {
    auto both_sides = [&](double lo, double hi) {
        return integrate_segment(spec, k, lo, hi) + integrate_segment(spec, k, -hi, -lo);
    };
    if (k == 0.0) {
        // f ~ c/x^2 tail: consecutive dyadic blocks fall geometrically
        cplx g1 = both_sides(X, 2.0 * X), g2 = both_sides(2.0 * X, 4.0 * X);
        cplx ratio = g2 / g1;
        return g1 / (1.0 - ratio);
    }
    // alternating half-period blocks; average the partial sums repeatedly
    // (van Wijngaarden condensation of the oscillatory tail)
    double hp = kPi / std::abs(k);
    const int M = 24;
    std::vector<cplx> partial((size_t)M);
    cplx run = 0.0;
    for (int m = 0; m < M; ++m) {
        double lo = X + m * hp, hi = lo + hp;
        run += both_sides(lo, hi);
        partial[(size_t)m] = run;
    }
    while (partial.size() > 1) {
        std::vector<cplx> nxt(partial.size() - 1);
        for (size_t i = 0; i + 1 < partial.size(); ++i) nxt[i] = 0.5 * (partial[i] + partial[i + 1]);
        partial = std::move(nxt);
    }
    return partial[0];
}

} // namespace

GeneralizedFT generalized_ft(const SolutionSpec& spec, double k) {
    cplx v = generalized_ft_complex(spec, k);
    GeneralizedFT out;
    out.value = v.real();
    // residue gap recomputed cheaply
    const double r = 1e-3;
    cplx below = semicircle(spec, k, r, false);
    cplx above = semicircle(spec, k, r, true);
    out.residue_gap = (below - above).real();
    return out;
}

cplx generalized_ft_complex(const SolutionSpec& spec, double k) {
    if (spec.real_period() > 0.0) {
        throw std::domain_error("generalized_ft: periodic families are not supported");
    }
    const double r = 1e-3;
    const double X = 40.0;
    cplx straight = integrate_segment(spec, k, r, X) + integrate_segment(spec, k, -X, -r);
    cplx above = semicircle(spec, k, r, true);
    cplx below = semicircle(spec, k, r, false);
    cplx tail = 0.0;
    if (!decays_exponentially(spec)) {
        tail = algebraic_tail(spec, k, X);
    }
    return straight + 0.5 * (above + below) + tail;
}

std::string FourierSeq::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [K, v] : a) {
        nlohmann::json e;
        e["K"] = K;
        e["a"] = v.real();
        if (v.imag() != 0.0) e["im"] = v.imag();
        arr.push_back(e);
    }
    return arr.dump();
}

} // namespace feq
