#include "feq/solution.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace feq {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kPoleGuard = 1e-9;

// even power series helpers over exact rationals: v[m] is the u^{2m} coefficient
using ESeries = std::vector<Rational>;

ESeries es_mul(const ESeries& a, const ESeries& b, size_t n) {
    ESeries r(n);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; i + j < n && j < b.size(); ++j) {
            if (i < a.size()) r[i + j] += a[i] * b[j];
        }
    }
    return r;
}

ESeries es_inv(const ESeries& a, size_t n) {
    ESeries r(n);
    r[0] = a[0].inv();
    for (size_t m = 1; m < n; ++m) {
        Rational acc;
        for (size_t j = 1; j <= m; ++j) {
            if (j < a.size()) acc += a[j] * r[m - j];
        }
        r[m] = -acc / a[0];
    }
    return r;
}

ESeries es_sqrt_monic(const ESeries& a, size_t n) {
    // a[0] must be 1
    ESeries r(n);
    r[0] = Rational(1);
    for (size_t m = 1; m < n; ++m) {
        Rational acc = m < a.size() ? a[m] : Rational();
        for (size_t j = 1; j < m; ++j) acc -= r[j] * r[m - j];
        r[m] = acc / Rational(2);
    }
    return r;
}

// Laurent coefficients c_m of p(z) = z^-2 + sum_{m>=2} c_m z^{2m-2}
std::vector<Rational> wp_series(const Rational& g2, const Rational& g3, int M) {
    std::vector<Rational> c(M + 1);
    if (M >= 2) c[2] = g2 / Rational(20);
    if (M >= 3) c[3] = g3 / Rational(28);
    for (int m = 4; m <= M; ++m) {
        Rational acc;
        for (int p = 2; p <= m - 2; ++p) acc += c[p] * c[m - p];
        c[m] = acc * Rational(3) / Rational((long long)(2 * m + 1) * (m - 3));
    }
    return c;
}

Rational rising_factorial_2jm2(int j) {
    // (2j-2)! with the c_{2j-2} convention (c_j = 1 for j < 0)
    if (j <= 1) return Rational(1);
    return Rational::factorial((unsigned)(2 * j - 2));
}

} // namespace

const char* family_name(Family f) {
    switch (f) {
        case Family::Linear: return "linear";
        case Family::Exponential: return "exponential";
        case Family::Weierstrass: return "weierstrass";
        case Family::H1: return "h1";
        case Family::H2: return "h2";
        case Family::H3: return "h3";
        case Family::Hyperbolic: return "hyperbolic";
        case Family::Trigonometric: return "trigonometric";
        case Family::InverseSquare: return "inverse_square";
        case Family::SinhShift: return "sinh_shift";
    }
    return "?";
}

Family family_from_name(const std::string& s) {
    for (Family f : {Family::Linear, Family::Exponential, Family::Weierstrass, Family::H1, Family::H2,
                     Family::H3, Family::Hyperbolic, Family::Trigonometric, Family::InverseSquare,
                     Family::SinhShift}) {
        if (s == family_name(f)) return f;
    }
    throw std::invalid_argument("unknown family: " + s);
}

double SolutionSpec::pd(const std::string& key, double def) const {
    auto it = params.find(key);
    return it == params.end() ? def : it->second.to_double();
}

Rational SolutionSpec::pq(const std::string& key) const {
    auto it = params.find(key);
    if (it == params.end()) throw std::invalid_argument(std::string("missing parameter ") + key);
    return it->second;
}

SolutionSpec SolutionSpec::linear(const Rational& a, const Rational& b) {
    return {Family::Linear, {{"a", a}, {"b", b}}};
}
SolutionSpec SolutionSpec::exponential(const Rational& a, const Rational& b, const Rational& c) {
    return {Family::Exponential, {{"a", a}, {"b", b}, {"c", c}}};
}
SolutionSpec SolutionSpec::weierstrass(const Rational& a, const Rational& b, const Rational& g2,
                                       const Rational& g3, double d) {
    return {Family::Weierstrass,
            {{"a", a}, {"b", b}, {"g2", g2}, {"g3", g3}, {"d", Rational::from_double(d)}}};
}
SolutionSpec SolutionSpec::h_family(int index, double modulus) {
    Family f = index == 1 ? Family::H1 : (index == 2 ? Family::H2 : Family::H3);
    Rational k = Rational::from_double(modulus);
    return {f, {{"k2", k * k}}};
}
SolutionSpec SolutionSpec::h_family_roots(int index, const Rational& e1, const Rational& e2,
                                          const Rational& e3) {
    Family f = index == 1 ? Family::H1 : (index == 2 ? Family::H2 : Family::H3);
    return {f, {{"e1", e1}, {"e2", e2}, {"e3", e3}}};
}
SolutionSpec SolutionSpec::hyperbolic(const Rational& beta, const Rational& alpha2) {
    return {Family::Hyperbolic, {{"beta", beta}, {"alpha2", alpha2}}};
}
SolutionSpec SolutionSpec::trigonometric(const Rational& b0, const Rational& b1) {
    return {Family::Trigonometric, {{"b0", b0}, {"b1", b1}}};
}
SolutionSpec SolutionSpec::inverse_square(const Rational& b0) {
    return {Family::InverseSquare, {{"b0", b0}}};
}
SolutionSpec SolutionSpec::sinh_shift(const Rational& amp, const Rational& alpha, int shift_thirds) {
    return {Family::SinhShift,
            {{"amp", amp}, {"alpha", alpha}, {"shift", Rational((long long)shift_thirds)}}};
}

bool SolutionSpec::is_even() const {
    switch (family) {
        case Family::Linear: return pd("b") == 0.0;
        case Family::Exponential: return pd("b") == 0.0 || pd("c") == 0.0;
        case Family::Weierstrass: return pd("d") == 0.0;
        case Family::SinhShift: return pd("shift") == 0.0;
        default: return true;
    }
}

bool SolutionSpec::has_double_pole() const {
    switch (family) {
        case Family::Linear:
        case Family::Exponential: return false;
        case Family::Weierstrass: return pd("d") == 0.0;
        default: return true;
    }
}

EllipticParams SolutionSpec::elliptic() const {
    if (family == Family::Weierstrass) return EllipticParams::from_invariants(pd("g2"), pd("g3"));
    if (family == Family::H1 || family == Family::H2 || family == Family::H3) {
        if (params.count("e1")) {
            double e1 = pd("e1"), e2 = pd("e2"), e3 = pd("e3");
            double g2 = -4.0 * (e1 * e2 + e1 * e3 + e2 * e3);
            double g3 = 4.0 * e1 * e2 * e3;
            return EllipticParams::from_invariants(g2, g3);
        }
        if (params.count("k2")) return EllipticParams::from_modulus(std::sqrt(pd("k2")));
        return EllipticParams::from_modulus(pd("k"));
    }
    throw std::domain_error("elliptic(): family carries no lattice");
}

double SolutionSpec::real_period() const {
    switch (family) {
        case Family::Weierstrass:
        case Family::H1:
        case Family::H2:
        case Family::H3: {
            EllipticParams p = elliptic();
            return p.omega_finite() ? 2.0 * p.omega : 0.0;
        }
        case Family::Trigonometric: {
            double c2 = 3.0 * pd("b1") / pd("b0");
            return kPi / std::sqrt(c2);
        }
        default: return 0.0;
    }
}

double pole_distance(const SolutionSpec& spec, cplx z) {
    auto strip_dist = [](cplx w, double spacing) {
        // distance of w from the points i*spacing*m
        double im = w.imag() - spacing * std::floor(w.imag() / spacing + 0.5);
        return std::hypot(w.real(), im);
    };
    switch (spec.family) {
        case Family::Linear:
        case Family::Exponential: return std::numeric_limits<double>::infinity();
        case Family::Weierstrass: return lattice_distance(z + spec.pd("d"), spec.elliptic());
        case Family::H1:
        case Family::H2:
        case Family::H3: return lattice_distance(z, spec.elliptic());
        case Family::Hyperbolic: {
            double a = std::sqrt(spec.pd("alpha2"));
            return strip_dist(a * z, kPi) / a;
        }
        case Family::Trigonometric: {
            double c = std::sqrt(3.0 * spec.pd("b1") / spec.pd("b0"));
            cplx w = c * z;
            double re = w.real() - kPi * std::floor(w.real() / kPi + 0.5);
            return std::hypot(re, w.imag()) / c;
        }
        case Family::InverseSquare: return std::abs(z);
        case Family::SinhShift: {
            double a = spec.pd("alpha");
            cplx w = a * z - cplx(0.0, spec.pd("shift") * kPi / 3.0);
            return strip_dist(w, kPi) / a;
        }
    }
    return std::numeric_limits<double>::infinity();
}

namespace {

CJet wp_jet(cplx z, const EllipticParams& p) {
    cplx P, Pp;
    weierstrass_p_pair(z, p, P, Pp);
    CJet j;
    j.c[0] = P;
    j.c[1] = Pp;
    for (int k = 0; k + 2 < 6; ++k) {
        cplx conv{};
        for (int i = 0; i <= k; ++i) conv += j.c[i] * j.c[k - i];
        cplx rhs = 6.0 * conv;
        if (k == 0) rhs -= 0.5 * p.g2;
        j.c[k + 2] = rhs / (double)((k + 1) * (k + 2));
    }
    return j;
}

CJet h_jet(const SolutionSpec& spec, cplx z) {
    EllipticParams p = spec.elliptic();
    int ia, ib;
    switch (spec.family) {
        case Family::H1: ia = 2; ib = 3; break;
        case Family::H2: ia = 1; ib = 3; break;
        default: ia = 1; ib = 2; break;
    }
    CJet P = wp_jet(z, p);
    double ea = ia == 1 ? p.e1 : (ia == 2 ? p.e2 : p.e3);
    double eb = ib == 2 ? p.e2 : p.e3;
    CJet qa = P - CJet::constant(ea);
    CJet qb = P - CJet::constant(eb);
    cplx s0 = wp_root_factor(z, p, ia) * wp_root_factor(z, p, ib);
    return CJet::sqrt_with_value(qa * qb, s0);
}

} // namespace

CJet evaluate_jet(const SolutionSpec& spec, cplx z) {
    if (pole_distance(spec, z) < kPoleGuard) {
        throw pole_error(std::string(family_name(spec.family)) + ": evaluation at a pole");
    }
    switch (spec.family) {
        case Family::Linear: {
            CJet j = CJet::constant(cplx(spec.pd("a"), 0) + spec.pd("b") * z);
            j.c[1] = spec.pd("b");
            return j;
        }
        case Family::Exponential: {
            double a = spec.pd("a"), b = spec.pd("b"), c = spec.pd("c");
            CJet j = jet_exp_linear<cplx>(b * std::exp(c * z), cplx(c, 0));
            j.c[0] += a;
            return j;
        }
        case Family::Weierstrass: {
            EllipticParams p = spec.elliptic();
            CJet j = wp_jet(z + spec.pd("d"), p);
            double a = spec.pd("a"), b = spec.pd("b");
            CJet r = CJet::constant(cplx(a, 0)) + cplx(b, 0) * j;
            return r;
        }
        case Family::H1:
        case Family::H2:
        case Family::H3: return h_jet(spec, z);
        case Family::Hyperbolic: {
            double al = std::sqrt(spec.pd("alpha2")), be = spec.pd("beta");
            CJet s, c;
            jet_sinhcosh_linear<cplx>(al * z, cplx(al, 0), s, c);
            return cplx(be, 0) * (c / (s * s));
        }
        case Family::Trigonometric: {
            double b0 = spec.pd("b0"), b1 = spec.pd("b1");
            double cc = std::sqrt(3.0 * b1 / b0);
            CJet s, c;
            jet_sincos_linear<cplx>(cc * z, cplx(cc, 0), s, c);
            return cplx(3.0 * b1, 0) * (CJet::constant(1.0) / (s * s));
        }
        case Family::InverseSquare: {
            double b0 = spec.pd("b0");
            CJet j;
            cplx zp = z * z; // z^{k+2} built up iteratively
            for (int k = 0; k < 6; ++k) {
                double sgn = (k % 2) ? -1.0 : 1.0;
                j.c[k] = b0 * sgn * (double)(k + 1) / zp;
                zp *= z;
            }
            return j;
        }
        case Family::SinhShift: {
            double a = spec.pd("alpha"), amp = spec.pd("amp");
            cplx arg = a * z - cplx(0.0, spec.pd("shift") * kPi / 3.0);
            CJet s, c;
            jet_sinhcosh_linear<cplx>(arg, cplx(a, 0), s, c);
            return cplx(amp, 0) * (CJet::constant(1.0) / (s * s));
        }
    }
    throw std::logic_error("evaluate_jet: unhandled family");
}

cplx evaluate(const SolutionSpec& spec, cplx z) { return evaluate_jet(spec, z).c[0]; }

std::vector<cplx> derivatives(const SolutionSpec& spec, cplx z, int order) {
    if (order < 0 || order > 5) throw std::invalid_argument("derivatives: order must be 0..5");
    CJet j = evaluate_jet(spec, z);
    std::vector<cplx> r((size_t)order + 1);
    for (int m = 0; m <= order; ++m) r[(size_t)m] = j.deriv(m);
    return r;
}

LaurentCoeffs laurent_coefficients(const SolutionSpec& spec, int J) {
    if (!spec.has_double_pole()) {
        throw std::domain_error("laurent_coefficients: family has no double pole at the origin");
    }
    if (J > 20) throw std::invalid_argument("laurent_coefficients: J must be <= 20");
    LaurentCoeffs out;
    out.a.assign((size_t)J + 1, Rational());
    size_t n = (size_t)J + 1;
    switch (spec.family) {
        case Family::InverseSquare: {
            out.a[0] = spec.pq("b0");
            break;
        }
        case Family::Weierstrass: {
            Rational b = spec.pq("b"), a = spec.pq("a");
            auto c = wp_series(spec.pq("g2"), spec.pq("g3"), J);
            out.a[0] = b;
            if (J >= 1) out.a[1] = a;
            for (int j = 2; j <= J; ++j) out.a[(size_t)j] = rising_factorial_2jm2(j) * b * c[(size_t)j];
            break;
        }
        case Family::Hyperbolic: {
            Rational be = spec.pq("beta"), a2 = spec.pq("alpha2");
            // cosh u / sinh^2 u = u^{-2} C(u) T(u)^{-1}
            ESeries C(n), T(n);
            for (size_t m = 0; m < n; ++m) {
                C[m] = Rational::factorial(2 * (unsigned)m).inv();
                T[m] = Rational(BigInt::pow(BigInt(2), 2 * (unsigned)m + 1), BigInt(1)) /
                       Rational::factorial(2 * (unsigned)m + 2);
            }
            ESeries G = es_mul(C, es_inv(T, n), n);
            for (int j = 0; j <= J; ++j) {
                out.a[(size_t)j] = rising_factorial_2jm2(j) * be * a2.pow(j - 1) * G[(size_t)j];
            }
            break;
        }
        case Family::Trigonometric: {
            Rational b0 = spec.pq("b0"), b1 = spec.pq("b1");
            Rational c2 = Rational(3) * b1 / b0;
            ESeries T(n);
            for (size_t m = 0; m < n; ++m) {
                Rational v = Rational(BigInt::pow(BigInt(2), 2 * (unsigned)m + 1), BigInt(1)) /
                             Rational::factorial(2 * (unsigned)m + 2);
                T[m] = (m % 2) ? -v : v;
            }
            ESeries G = es_inv(T, n);
            for (int j = 0; j <= J; ++j) {
                out.a[(size_t)j] = rising_factorial_2jm2(j) * Rational(3) * b1 * c2.pow(j - 1) * G[(size_t)j];
            }
            break;
        }
        case Family::H1:
        case Family::H2:
        case Family::H3: {
            if (!spec.params.count("e1")) {
                if (!spec.params.count("k2"))
                    throw std::domain_error("laurent_coefficients: h-family needs exact roots or k2");
                Rational m = spec.pq("k2");
                SolutionSpec s2 = spec;
                s2.params["e1"] = (Rational(2) - m) / Rational(3);
                s2.params["e2"] = (Rational(2) * m - Rational(1)) / Rational(3);
                s2.params["e3"] = -(Rational(1) + m) / Rational(3);
                return laurent_coefficients(s2, J);
            }
            Rational e1 = spec.pq("e1"), e2 = spec.pq("e2"), e3 = spec.pq("e3");
            Rational g2 = Rational(-4) * (e1 * e2 + e1 * e3 + e2 * e3);
            Rational g3 = Rational(4) * e1 * e2 * e3;
            auto c = wp_series(g2, g3, J + 1);
            Rational ea, eb;
            switch (spec.family) {
                case Family::H1: ea = e2; eb = e3; break;
                case Family::H2: ea = e1; eb = e3; break;
                default: ea = e1; eb = e2; break;
            }
            // p - e = z^{-2} (1 - e w + sum_{m>=2} c_m w^m), w = z^2
            ESeries Pa(n), Pb(n);
            Pa[0] = Rational(1);
            Pb[0] = Rational(1);
            if (n > 1) {
                Pa[1] = -ea;
                Pb[1] = -eb;
            }
            for (size_t m = 2; m < n; ++m) {
                Pa[m] = c[m];
                Pb[m] = c[m];
            }
            ESeries S = es_sqrt_monic(es_mul(Pa, Pb, n), n);
            for (int j = 0; j <= J; ++j) out.a[(size_t)j] = rising_factorial_2jm2(j) * S[(size_t)j];
            break;
        }
        default:
            throw std::domain_error("laurent_coefficients: unsupported family");
    }
    return out;
}

double representation_chain_check(int h_index, double z, const EllipticParams& p) {
    int ia, ib;        // root-factor indices
    int ta, tb;        // theta indices of the quotient display
    switch (h_index) {
        case 1: ia = 2; ib = 3; ta = 3; tb = 4; break;
        case 2: ia = 1; ib = 3; ta = 2; tb = 4; break;
        case 3: ia = 1; ib = 2; ta = 2; tb = 3; break;
        default: throw std::invalid_argument("representation_chain_check: index must be 1..3");
    }
    double b = p.e1 - p.e3;
    double u = std::sqrt(b) * z;
    auto scd = jacobi_sn_cn_dn(u, p.k);
    double jac;
    switch (h_index) {
        case 1: jac = b * scd.dn / (scd.sn * scd.sn); break;
        case 2: jac = b * scd.cn / (scd.sn * scd.sn); break;
        default: jac = b * scd.cn * scd.dn / (scd.sn * scd.sn); break;
    }

    double ea = ia == 1 ? p.e1 : p.e2;
    double eb = ib == 2 ? p.e2 : p.e3;
    double P = weierstrass_p(cplx(z, 0.0), p).real();
    double rad = (P - ea) * (P - eb);
    double wp_form = std::copysign(std::sqrt(std::abs(rad)), jac);

    // sigma quotient through the defining formula
    cplx w1(p.omega, 0.0), w3(0.0, p.omega_prime);
    cplx w2 = -w1 - w3;
    auto sig = [&](int alpha) {
        cplx wa = alpha == 1 ? w1 : (alpha == 2 ? w2 : w3);
        return weierstrass_sigma(z + wa, p) / weierstrass_sigma(wa, p) *
               std::exp(-z * weierstrass_zeta(wa, p));
    };
    cplx s0 = weierstrass_sigma(cplx(z, 0.0), p);
    double sig_form = (sig(ia) * sig(ib) / (s0 * s0)).real();

    // theta quotient with its explicit normalization
    double v = kPi * z / (2.0 * p.omega);
    double t1p0 = kPi * theta1_prime0(p.q);
    double t1 = theta(1, v, p.q);
    double theta_form = theta(ta, v, p.q) * theta(tb, v, p.q) / (t1 * t1) * (t1p0 * t1p0) /
                        (4.0 * p.omega * p.omega * theta(ta, 0.0, p.q) * theta(tb, 0.0, p.q));

    double forms[4] = {wp_form, sig_form, theta_form, jac};
    double worst = 0.0;
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) worst = std::max(worst, std::abs(forms[i] - forms[j]));
    }
    return worst;
}

EllipticParams quadratic_in_p_params(double b0, double b1, double b2) {
    double g2 = -20.0 * (b0 * b2 - 3.0 * b1 * b1) / (3.0 * b0 * b0);
    double g3 = 8.0 * b1 * (5.0 * b0 * b2 - 3.0 * b1 * b1) / (3.0 * b0 * b0 * b0);
    return EllipticParams::from_invariants(g2, g3);
}

double quadratic_in_p_form(double b0, double b1, double b2, double z) {
    EllipticParams p = quadratic_in_p_params(b0, b1, b2);
    double W = weierstrass_p(cplx(z, 0.0), p).real();
    double rad = b0 * b0 * W * W + 2.0 * b0 * b1 * W - b1 * b1 + (5.0 / 3.0) * b0 * b2;
    if (rad < 0.0) throw std::domain_error("quadratic_in_p_form: negative radicand (complex window)");
    return std::sqrt(rad);
}

std::string SolutionSpec::to_json() const {
    nlohmann::json j;
    j["family"] = family_name(family);
    nlohmann::json pj = nlohmann::json::object();
    for (const auto& [k, v] : params) pj[k] = v.to_double();
    j["params"] = pj;
    return j.dump();
}

SolutionSpec SolutionSpec::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    SolutionSpec s;
    s.family = family_from_name(j.at("family").get<std::string>());
    if (j.count("params")) {
        for (auto it = j["params"].begin(); it != j["params"].end(); ++it) {
            if (it.value().is_string()) {
                s.params[it.key()] = Rational::from_string(it.value().get<std::string>());
            } else {
                s.params[it.key()] = Rational::from_double(it.value().get<double>());
            }
        }
    }
    return s;
}

} // namespace feq
