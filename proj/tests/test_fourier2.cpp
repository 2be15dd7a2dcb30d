#include "doctest.h"

#include <cmath>

#include "feq/fourier.hpp"

using namespace feq;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("generalized transform of the inverse square") {
    auto inv = SolutionSpec::inverse_square(Rational(1));
    for (double k : {0.0, 0.5, -1.0, 2.7}) {
        auto r = generalized_ft(inv, k);
        CHECK(std::abs(r.value + kPi * std::abs(k)) < 1e-6);
        CHECK(std::abs(r.residue_gap - 2 * kPi * k) < 1e-6);
    }
    // scaled pole: b0 = -1 gives +pi|k|
    auto neg = SolutionSpec::inverse_square(Rational(-1));
    auto r = generalized_ft(neg, 1.3);
    CHECK(std::abs(r.value - kPi * 1.3) < 1e-6);
}

TEST_CASE("transform pairs: reciprocal sinh-squared and hyperbolic-tanh") {
    double a0 = 1.3;
    auto f510 = SolutionSpec::sinh_shift(Rational::from_double(-a0 * a0 / 4), Rational::from_double(a0 / 2), 0);
    for (double k : {0.4, 1.5, -3.0}) {
        double expect = kPi * k / std::tanh(kPi * k / a0);
        CHECK(std::abs(generalized_ft(f510, k).value - expect) < 1e-6);
    }

    double al = 0.8, be = 1.0;
    auto hyp = SolutionSpec::hyperbolic(Rational::from_double(be), Rational::from_double(al * al));
    for (double k : {0.5, 2.0, -4.4}) {
        double expect = -(be / (al * al)) * kPi * k * std::tanh(kPi * k / (2 * al));
        CHECK(std::abs(generalized_ft(hyp, k).value - expect) < 1e-6);
    }

    // shifted-pole normalization: 1/sinh^2(x - i pi/3) has transform
    // 6 a2 k e^{4 a k}/(e^{6 a k}-1) with a1 = -2, 6 a2 = pi a1
    auto ss = SolutionSpec::sinh_shift(Rational(1), Rational(1), -1);
    TransformSpec pair{TransformKind::Pair};
    pair.a1 = -2.0;
    pair.a2 = -kPi / 3.0;
    for (double k : {0.7, -1.3, 2.2}) {
        cplx v = generalized_ft_complex(ss, k);
        CHECK(std::abs(v - cplx(evaluate_fhat(pair, k), 0.0)) < 1e-8);
    }

    // periodic families are rejected
    CHECK_THROWS_AS(generalized_ft(SolutionSpec::h_family(1, 0.4), 1.0), std::domain_error);
}

TEST_CASE("discrete and continuous transforms agree at integers") {
    Rational beta(3, 10);
    auto seq = discrete_solve_even_pole(beta, 20).branches[0];
    double a0 = -2.0 * kPi / std::log(beta.to_double());
    TransformSpec coth{TransformKind::Coth};
    coth.a0 = a0;
    for (long K = 1; K <= 20; ++K) {
        CHECK(std::abs(seq.a.at(K).real() - evaluate_fhat(coth, (double)K)) < 1e-10 * (1 + std::abs(seq.a.at(K))));
    }
}

TEST_CASE("resum: even-pole sequence against the elliptic member") {
    Rational beta(3, 10);
    int N = 200;
    auto seq = discrete_solve_even_pole(beta, N).branches[0];
    double q = std::sqrt(beta.to_double());
    EllipticParams p = EllipticParams::from_nome_period(q, kPi);

    // difference to -p(x) must be x-independent
    std::vector<double> xs = {0.7, 1.3, 2.0, 2.9, 4.1};
    double c0 = 0;
    bool first = true;
    for (double x : xs) {
        double member = -weierstrass_p(cplx(x, 0.0), p).real();
        double val = resum(seq, x, N).real();
        double diff = val - member;
        if (first) {
            c0 = diff;
            first = false;
        }
        CHECK(std::abs(diff - c0) < 1e-6 * (1.0 + std::abs(c0)));
    }
}

TEST_CASE("resum: a0-zero branch against the h-family") {
    Rational beta(-3, 10); // the tanh-type unified form has beta tilde = 3/10
    int N = 200;
    auto res = discrete_solve_a0zero(beta, N);
    REQUIRE(res.branches.size() == 2);
    // pick the branch with a_K = pi|K| (1 - bt^K)/(1 + bt^K)
    Rational bt(3, 10);
    const FourierSeq* branch = nullptr;
    for (const auto& s : res.branches) {
        if (s.exact.at(2) == (Rational(1) - bt * bt) / (Rational(1) + bt * bt)) branch = &s;
    }
    REQUIRE(branch);
    for (long K = 1; K <= 10; ++K) {
        Rational expect = (Rational(1) - bt.pow((int)K)) / (Rational(1) + bt.pow((int)K));
        CHECK(branch->exact.at(K) == expect);
    }

    double q = std::sqrt(bt.to_double());
    EllipticParams p = EllipticParams::from_nome_period(q, kPi);
    std::vector<double> xs = {0.8, 1.4, 2.2, 3.0};
    double c0 = 0;
    bool first = true;
    for (double x : xs) {
        double h1 = (wp_root_factor(cplx(x, 0.0), p, 2) * wp_root_factor(cplx(x, 0.0), p, 3)).real();
        double val = resum(*branch, x, N).real();
        double diff = val + h1; // resummed poles are -1/x^2, h has +1/x^2
        if (first) {
            c0 = diff;
            first = false;
        }
        CHECK(std::abs(diff - c0) < 1e-6 * (1.0 + std::abs(c0)));
    }
}

TEST_CASE("resum: small-beta limit approaches the periodicized inverse square") {
    Rational beta(1, 1000000);
    auto seq = discrete_solve_even_pole(beta, 64).branches[0];
    for (double x : {0.9, 2.3, 4.0}) {
        // sum_p -1/(x - 2 pi p)^2 == -1/(4 sin^2(x/2)); windowed sum plus integral tail
        double windowed = 0;
        int P = 4000;
        for (int pidx = -P; pidx <= P; ++pidx) windowed -= 1.0 / std::pow(x - 2 * kPi * pidx, 2);
        windowed -= 1.0 / (2.0 * kPi * kPi * (P + 0.5)); // integral tail of the two wings
        double closed = -1.0 / (4 * std::pow(std::sin(x / 2), 2));
        CHECK(std::abs(windowed - closed) < 1e-6 * (1 + std::abs(closed)));
        double val = resum(seq, x, 64).real();
        CHECK(std::abs(val - closed) < 1e-4 * (1 + std::abs(closed)));
    }
}
