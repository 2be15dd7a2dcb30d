#ifndef FEQ_JET_HPP
#define FEQ_JET_HPP

#include <array>
#include <cmath>
#include <complex>

namespace feq {

// Truncated Taylor jet: c[k] is the k-th Taylor coefficient f^{(k)}(z0)/k!.
// Order 5 is enough for every differential identity in this project.
template <class S, int N = 6>
struct Jet {
    std::array<S, N> c{};

    static Jet constant(S v) {
        Jet j;
        j.c[0] = v;
        return j;
    }
    static Jet variable(S x0) {
        Jet j;
        j.c[0] = x0;
        j.c[1] = S(1);
        return j;
    }

    S deriv(int m) const {
        double f = 1;
        for (int i = 2; i <= m; ++i) f *= i;
        return c[m] * S(f);
    }

    Jet operator-() const {
        Jet r;
        for (int i = 0; i < N; ++i) r.c[i] = -c[i];
        return r;
    }
    friend Jet operator+(const Jet& a, const Jet& b) {
        Jet r;
        for (int i = 0; i < N; ++i) r.c[i] = a.c[i] + b.c[i];
        return r;
    }
    friend Jet operator-(const Jet& a, const Jet& b) {
        Jet r;
        for (int i = 0; i < N; ++i) r.c[i] = a.c[i] - b.c[i];
        return r;
    }
    friend Jet operator*(const Jet& a, const Jet& b) {
        Jet r;
        for (int i = 0; i < N; ++i) {
            S acc{};
            for (int j = 0; j <= i; ++j) acc += a.c[j] * b.c[i - j];
            r.c[i] = acc;
        }
        return r;
    }
    friend Jet operator*(const S& s, const Jet& a) {
        Jet r;
        for (int i = 0; i < N; ++i) r.c[i] = s * a.c[i];
        return r;
    }
    friend Jet operator/(const Jet& a, const Jet& b) {
        Jet r;
        for (int i = 0; i < N; ++i) {
            S acc = a.c[i];
            for (int j = 0; j < i; ++j) acc -= r.c[j] * b.c[i - j];
            r.c[i] = acc / b.c[0];
        }
        return r;
    }

    // square root with prescribed principal value s0 (fixes the branch)
    static Jet sqrt_with_value(const Jet& g, S s0) {
        Jet r;
        r.c[0] = s0;
        for (int i = 1; i < N; ++i) {
            S acc = g.c[i];
            for (int j = 1; j < i; ++j) acc -= r.c[j] * r.c[i - j];
            r.c[i] = acc / (S(2) * s0);
        }
        return r;
    }
};

// jets of elementary functions of a + b*dz (linear inner argument)
template <class S, int N = 6>
Jet<S, N> jet_exp_linear(S f0, S b) {
    // c_k = f0 * b^k / k! for f(z) = f0 * exp(b dz)
    Jet<S, N> r;
    S bk = S(1);
    double kf = 1;
    for (int k = 0; k < N; ++k) {
        if (k > 0) {
            bk *= b;
            kf *= k;
        }
        r.c[k] = f0 * bk / S(kf);
    }
    return r;
}

template <class S, int N = 6>
void jet_sincos_linear(S arg, S b, Jet<S, N>& sj, Jet<S, N>& cj) {
    S s = std::sin(arg), c = std::cos(arg);
    S bk = S(1);
    double kf = 1;
    for (int k = 0; k < N; ++k) {
        if (k > 0) {
            bk *= b;
            kf *= k;
        }
        S w = bk / S(kf);
        switch (k % 4) {
            case 0: sj.c[k] = s * w; cj.c[k] = c * w; break;
            case 1: sj.c[k] = c * w; cj.c[k] = -s * w; break;
            case 2: sj.c[k] = -s * w; cj.c[k] = -c * w; break;
            default: sj.c[k] = -c * w; cj.c[k] = s * w; break;
        }
    }
}

template <class S, int N = 6>
void jet_sinhcosh_linear(S arg, S b, Jet<S, N>& sj, Jet<S, N>& cj) {
    S s = std::sinh(arg), c = std::cosh(arg);
    S bk = S(1);
    double kf = 1;
    for (int k = 0; k < N; ++k) {
        if (k > 0) {
            bk *= b;
            kf *= k;
        }
        S w = bk / S(kf);
        if (k % 2 == 0) {
            sj.c[k] = s * w;
            cj.c[k] = c * w;
        } else {
            sj.c[k] = c * w;
            cj.c[k] = s * w;
        }
    }
}

} // namespace feq

#endif
