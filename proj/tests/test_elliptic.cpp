#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>

#include "feq/elliptic.hpp"
#include "feq/quadrature.hpp"

using namespace feq;

namespace {

constexpr double kPi = 3.14159265358979323846;

// random real-lattice invariants via a random descending root triple
EllipticParams random_lattice(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.1, 2.0);
    double a = u(rng), b = u(rng) * 0.9;
    double e1 = a, e2 = a - b;             // keep e1 > e2 > e3 with sum 0
    double e3 = -(e1 + e2);
    while (!(e2 > e3)) {
        e2 = e2 + 0.3;
        e3 = -(e1 + e2);
    }
    double g2 = -4.0 * (e1 * e2 + e1 * e3 + e2 * e3);
    double g3 = 4.0 * e1 * e2 * e3;
    return EllipticParams::from_invariants(g2, g3);
}

// independent oracle: invert u = int_0^phi dt/sqrt(1-m sin^2 t) by bisection
JacobiSCD jacobi_oracle(double u, double k) {
    double m = k * k;
    auto len = [&](double phi) {
        return integrate([&](double t) { return 1.0 / std::sqrt(1.0 - m * std::sin(t) * std::sin(t)); }, 0.0,
                         phi, 1e-13);
    };
    double lo = 0.0, hi = kPi / 2.0;
    REQUIRE(u >= 0.0);
    REQUIRE(u <= len(hi));
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (len(mid) < u ? lo : hi) = mid;
    }
    double phi = 0.5 * (lo + hi);
    return {std::sin(phi), std::cos(phi), std::sqrt(1.0 - m * std::sin(phi) * std::sin(phi))};
}

} // namespace

TEST_CASE("weierstrass cubic roots") {
    auto e = weierstrass_roots(12.0, 8.0);
    CHECK(e[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(e[1] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(e[2] == doctest::Approx(-1.0).epsilon(1e-12));

    auto z = weierstrass_roots(0.0, 0.0);
    CHECK(z[0] == 0.0);

    auto s = weierstrass_roots(4.0, 0.0);
    CHECK(s[0] == doctest::Approx(1.0));
    CHECK(s[1] == doctest::Approx(0.0));
    CHECK(s[2] == doctest::Approx(-1.0));

    CHECK_THROWS_AS(weierstrass_roots(1.0, 5.0), std::domain_error);
}

TEST_CASE("elliptic params invariants") {
    std::mt19937_64 rng(42);
    for (int i = 0; i < 50; ++i) {
        EllipticParams p = random_lattice(rng);
        double scale = std::max({1.0, std::abs(p.g2), std::abs(p.g3)});
        for (double e : {p.e1, p.e2, p.e3}) {
            CHECK(std::abs(4 * e * e * e - p.g2 * e - p.g3) < 1e-12 * scale);
        }
        CHECK(std::abs(p.e1 + p.e2 + p.e3) < 1e-12);
        CHECK(p.g2 * p.g2 * p.g2 - 27 * p.g3 * p.g3 >= -1e-10 * scale * scale * scale);
        double m = p.k * p.k;
        CHECK(m == doctest::Approx((p.e2 - p.e3) / (p.e1 - p.e3)).epsilon(1e-12));
        CHECK(m >= 0.0);
        CHECK(m <= 1.0);
    }
}

TEST_CASE("weierstrass p: differential equation on random lattices") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ur(-0.95, 0.95);
    int tested = 0;
    while (tested < 1000) {
        EllipticParams p = random_lattice(rng);
        cplx z(ur(rng) * p.omega, ur(rng) * p.omega_prime);
        if (lattice_distance(z, p) < 0.05) continue;
        cplx P, Pp;
        weierstrass_p_pair(z, p, P, Pp);
        cplx lhs = Pp * Pp;
        cplx rhs = 4.0 * P * P * P - p.g2 * P - p.g3;
        double denom = 1.0 + std::abs(P * P * P);
        CHECK(std::abs(lhs - rhs) / denom < 1e-10);
        ++tested;
    }
}

TEST_CASE("weierstrass p: scaling law, half-period value, trigonometric case, pole normalization") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uc(0.5, 1.7), ur(0.05, 0.9);
    for (int i = 0; i < 50; ++i) {
        EllipticParams p = random_lattice(rng);
        double c = uc(rng);
        EllipticParams ps = EllipticParams::from_invariants(std::pow(c, 4) * p.g2, std::pow(c, 6) * p.g3);
        cplx u(ur(rng) * p.omega, 0.4 * ur(rng) * p.omega_prime);
        // scaling law: p(cu, g2, g3) = c^-2 p(u, c^4 g2, c^6 g3)
        cplx lhs = weierstrass_p(c * u, p) * (c * c);
        cplx rhs = weierstrass_p(u, ps);
        CHECK(std::abs(lhs - rhs) / std::abs(rhs) < 1e-10);
    }

    EllipticParams p = random_lattice(rng);
    CHECK(std::abs(weierstrass_p(cplx(p.omega, 0), p) - cplx(p.e1, 0)) < 1e-10 * (1 + std::abs(p.e1)));

    // p(z;12,8) = 3/sin^2(sqrt3 z) - 1
    EllipticParams trig = EllipticParams::from_invariants(12.0, 8.0);
    double z = 0.3;
    double expect = 3.0 / std::pow(std::sin(std::sqrt(3.0) * z), 2) - 1.0;
    CHECK(std::abs(weierstrass_p(cplx(z, 0), trig).real() - expect) < 1e-10 * std::abs(expect));

    for (double zz : {1e-3, 1e-4}) {
        cplx val = weierstrass_p(cplx(zz, 0), p);
        CHECK(std::abs(val * (zz * zz) - 1.0) < 1e-4);
    }

    CHECK_THROWS_AS(weierstrass_p(cplx(0, 0), p), pole_error);
}

TEST_CASE("jacobi sn cn dn: degenerations, identities, oracle") {
    for (double u : {-1.3, 0.2, 2.7}) {
        auto j0 = jacobi_sn_cn_dn(u, 0.0);
        CHECK(j0.sn == doctest::Approx(std::sin(u)).epsilon(1e-14));
        CHECK(j0.cn == doctest::Approx(std::cos(u)).epsilon(1e-14));
        CHECK(j0.dn == doctest::Approx(1.0));
        auto j1 = jacobi_sn_cn_dn(u, 1.0);
        CHECK(j1.sn == doctest::Approx(std::tanh(u)).epsilon(1e-14));
        CHECK(j1.cn == doctest::Approx(1.0 / std::cosh(u)).epsilon(1e-14));
        CHECK(j1.dn == doctest::Approx(1.0 / std::cosh(u)).epsilon(1e-14));
    }

    auto j = jacobi_sn_cn_dn(0.7, 0.5);
    auto o = jacobi_oracle(0.7, 0.5);
    CHECK(std::abs(j.sn - o.sn) < 1e-12);
    CHECK(std::abs(j.cn - o.cn) < 1e-12);
    CHECK(std::abs(j.dn - o.dn) < 1e-12);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uu(-8.0, 8.0), uk(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        double u = uu(rng), k = uk(rng);
        auto s = jacobi_sn_cn_dn(u, k);
        CHECK(std::abs(s.sn * s.sn + s.cn * s.cn - 1.0) < 1e-12);
        CHECK(std::abs(s.dn * s.dn + k * k * s.sn * s.sn - 1.0) < 1e-12);
    }

    // real transformation consistency: sn(u,k) = sn(ku,1/k)/k evaluated through the k>1 path
    auto big = jacobi_sn_cn_dn(0.4, 1.6);
    auto ref = jacobi_sn_cn_dn(0.4 * 1.6, 1.0 / 1.6);
    CHECK(big.sn == doctest::Approx(ref.sn / 1.6).epsilon(1e-12));
    CHECK(big.cn == doctest::Approx(ref.dn).epsilon(1e-12));
    CHECK(big.dn == doctest::Approx(ref.cn).epsilon(1e-12));
}

TEST_CASE("theta functions") {
    double q = 0.21;
    CHECK(theta(1, 0.0, q) == 0.0);
    CHECK(std::abs(theta1_prime0(q) - theta(2, 0, q) * theta(3, 0, q) * theta(4, 0, q)) < 1e-12);
    // direct series differentiation cross-check
    double h = 1e-6;
    double fd = (theta(1, h, q) - theta(1, -h, q)) / (2 * h);
    CHECK(theta1_prime0(q) == doctest::Approx(fd).epsilon(1e-9));
    CHECK(theta(3, 0.37, 1e-14) == doctest::Approx(1.0).epsilon(1e-12));
    // parity
    for (double v : {0.3, 1.1}) {
        CHECK(theta(1, v, q) == doctest::Approx(-theta(1, -v, q)).epsilon(1e-14));
        for (int j = 2; j <= 4; ++j) CHECK(theta(j, v, q) == doctest::Approx(theta(j, -v, q)).epsilon(1e-14));
    }
    CHECK_THROWS_AS(theta(3, 0.1, 1.0), std::domain_error);
}

TEST_CASE("sigma functions and classical identities") {
    std::mt19937_64 rng(17);
    EllipticParams p = random_lattice(rng);

    double z0 = 1e-4;
    CHECK(std::abs(sigma_family(z0, 0, p) / z0 - 1.0) < 1e-7);
    CHECK(sigma_family(0.0, 1, p) == doctest::Approx(1.0));
    CHECK(sigma_family(0.0, 2, p) == doctest::Approx(1.0));
    CHECK(sigma_family(0.0, 3, p) == doctest::Approx(1.0));

    std::uniform_real_distribution<double> ur(0.1, 0.9);
    for (int i = 0; i < 25; ++i) {
        EllipticParams pp = random_lattice(rng);
        double z = ur(rng) * 2.0 * pp.omega;
        if (lattice_distance(cplx(z, 0), pp) < 0.05) continue;
        double P = weierstrass_p(cplx(z, 0), pp).real();
        double s0 = sigma_family(z, 0, pp);
        double s1 = sigma_family(z, 1, pp);
        CHECK(std::abs((P - pp.e1) - (s1 * s1) / (s0 * s0)) < 1e-10 * (1.0 + std::abs(P)));
    }

    // defining formula sigma_a(z) = sigma(z+w_a)/sigma(w_a) e^{-z zeta(w_a)}, incl. a complex half-period
    EllipticParams pp = EllipticParams::from_modulus(0.6);
    double z = 0.57 * pp.omega;
    cplx w1(pp.omega, 0.0);
    cplx w3(0.0, pp.omega_prime);
    cplx w2 = -w1 - w3;
    cplx defs[4] = {0.0, w1, w2, w3};
    for (int a = 1; a <= 3; ++a) {
        cplx wa = defs[a];
        cplx lhs = sigma_family_c(cplx(z, 0.0), a, pp);
        cplx rhs = weierstrass_sigma(z + wa, pp) / weierstrass_sigma(wa, pp) *
                   std::exp(-z * weierstrass_zeta(wa, pp));
        CHECK(std::abs(lhs - rhs) < 1e-9 * (1.0 + std::abs(rhs)));
    }

    // Legendre relation eta1 w' - eta2 w = i pi / 2
    cplx eta1 = weierstrass_zeta(w1, pp);
    cplx eta2 = weierstrass_zeta(w3, pp);
    cplx leg = eta1 * w3 - eta2 * w1;
    CHECK(std::abs(leg - cplx(0.0, kPi / 2.0)) < 1e-10);
}

TEST_CASE("half periods and nome") {
    // self-dual modulus
    double k = 1.0 / std::sqrt(2.0);
    double K = ellint_K(k), Kp = ellint_K(std::sqrt(1 - k * k));
    CHECK(K == doctest::Approx(Kp).epsilon(1e-14));
    CHECK(nome_from_modulus(k) == doctest::Approx(std::exp(-kPi)).epsilon(1e-13));

    // k -> 0 gives q -> 0
    CHECK(nome_from_modulus(1e-5) < 1e-9);
    CHECK(nome_from_modulus(0.0) == 0.0);

    // root triple (1,0,-1) has modulus^2 = 1/2
    EllipticParams p = EllipticParams::from_invariants(4.0, 0.0);
    CHECK(p.k * p.k == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p.omega == doctest::Approx(ellint_K(p.k) / std::sqrt(p.e1 - p.e3)).epsilon(1e-13));

    // degeneration markers
    EllipticParams ptrig = EllipticParams::from_invariants(12.0, 8.0); // k = 0
    CHECK(ptrig.k == 0.0);
    CHECK(!ptrig.omega_prime_finite());
    CHECK(ptrig.omega_finite());
    CHECK(ptrig.q == 0.0);

    EllipticParams phyp = EllipticParams::from_modulus(1.0); // k = 1
    CHECK(!phyp.omega_finite());

    // nome round trip
    for (double kk : {0.3, 0.5, 0.9}) {
        CHECK(modulus_from_nome(nome_from_modulus(kk)) == doctest::Approx(kk).epsilon(1e-12));
    }
}
