#include "doctest.h"

#include <cmath>
#include <complex>

#include "feq/fourier.hpp"
#include "feq/parallel.hpp"

using namespace feq;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("closed-form transforms and removable singularities") {
    TransformSpec coth{TransformKind::Coth};
    coth.a0 = 1.7;
    CHECK(evaluate_fhat(coth, 0.0) == doctest::Approx(1.7));
    CHECK(evaluate_fhat(coth, 1e-9) == doctest::Approx(1.7).epsilon(1e-12));
    CHECK(evaluate_fhat(coth, 2.0) ==
          doctest::Approx(kPi * 2.0 / std::tanh(kPi * 2.0 / 1.7)).epsilon(1e-14));

    TransformSpec tanh_ts{TransformKind::Tanh};
    tanh_ts.a2 = 3.0;
    for (double k : {0.3, -1.7}) {
        CHECK(evaluate_fhat(tanh_ts, k) ==
              doctest::Approx(kPi * k * std::tanh(k * 3.0 / (2 * kPi))).epsilon(1e-14));
    }

    TransformSpec pair{TransformKind::Pair};
    pair.a1 = -2.0;
    pair.a2 = -kPi / 3.0; // the normalization 6 a2 = pi a1
    double al = pair.a2 / pair.a1;
    for (double k : {0.4, -1.2, 3.0}) {
        double expect = 6 * pair.a2 * k * std::exp(4 * al * k) / (std::exp(6 * al * k) - 1.0);
        CHECK(evaluate_fhat(pair, k) == doctest::Approx(expect).epsilon(1e-12));
        // decomposition fhat = f1 + k f2 and the second combination f1 - k f2
        CHECK(pair_f1(pair, k) + k * pair_f2(pair, k) == doctest::Approx(expect).epsilon(1e-11));
        TransformSpec p2 = pair;
        p2.pair_index = 2;
        CHECK(pair_f1(pair, k) - k * pair_f2(pair, k) ==
              doctest::Approx(evaluate_fhat(p2, k)).epsilon(1e-11));
    }
    CHECK(evaluate_fhat(pair, 0.0) == doctest::Approx(-2.0));
}

TEST_CASE("transform-side functional: tanh dichotomy and coth annihilation") {
    TransformSpec tanh_ts{TransformKind::Tanh};
    tanh_ts.a2 = 2 * kPi * 0.8; // a = 0.8
    double a = 0.8;
    TransformSpec coth{TransformKind::Coth};
    coth.a0 = 1.3;

    SplitMix rng(2024);
    for (int n = 2; n <= 5; ++n) {
        for (int rep = 0; rep < 250; ++rep) {
            std::vector<double> k((size_t)n);
            double sum = 0;
            for (auto& v : k) {
                v = rng.uniform(-2.5, 2.5);
                sum += v;
            }
            if (std::abs(sum) < 0.05) continue;
            double expect = (((n % 2) ? 1.0 : -1.0) - 1.0) / (std::exp(2 * a * sum) + 1.0);
            CHECK(std::abs(s_hat_n(tanh_ts, k) - expect) < 1e-12);
            if (n <= 6) CHECK(std::abs(s_hat_n(coth, k)) < 1e-12);
        }
    }
}

TEST_CASE("reduction lemmas hold for every even transform kind") {
    std::vector<TransformSpec> kinds;
    kinds.push_back({TransformKind::Coth});
    kinds.back().a0 = 0.9;
    kinds.push_back({TransformKind::Tanh});
    kinds.back().a2 = 4.0;
    kinds.push_back({TransformKind::AbsMinus});
    kinds.push_back({TransformKind::AbsPlus});
    kinds.push_back({TransformKind::Const});
    kinds.back().a0 = 2.2;

    SplitMix rng(7);
    for (const auto& ts : kinds) {
        for (int n = 2; n <= 3; ++n) {
            for (int rep = 0; rep < 40; ++rep) {
                std::vector<double> k((size_t)n + 2);
                for (auto& v : k) v = rng.uniform(-2.0, 2.0);
                auto rc = s_n_reduction_checks(ts, n, k);
                CHECK(rc.lemma1 < 1e-10);
                CHECK(rc.lemma2 < 1e-10);
            }
        }
    }
}

TEST_CASE("t pi |k| multiples: admissible t values") {
    // S_n with fhat = t pi |k| vanishes iff (1+t)^n (t-1) = (t-1)^n (1+t)
    auto sn_t = [](std::complex<double> t, const std::vector<double>& k) {
        int n = (int)k.size();
        double K = 0;
        for (double v : k) K += v;
        auto fh = [&](double q) { return t * kPi * std::abs(q); };
        std::complex<double> sum = 0;
        for (int j = 0; j < n; ++j) {
            std::complex<double> term = k[(size_t)j];
            for (int q = 0; q < j; ++q) term *= fh(k[(size_t)q]) + kPi * k[(size_t)q];
            for (int q = j + 1; q < n; ++q) term *= fh(k[(size_t)q]) - kPi * k[(size_t)q];
            sum += term;
        }
        std::complex<double> head = sum * (fh(K) + kPi * K);
        std::complex<double> prod = 1.0;
        for (int q = 0; q < n; ++q) prod *= fh(k[(size_t)q]) + kPi * k[(size_t)q];
        return head - K * prod;
    };
    SplitMix rng(5);
    for (int n = 3; n <= 5; ++n) {
        std::vector<std::complex<double>> roots = {1.0, -1.0};
        for (int j = 1; j <= n - 2; ++j) {
            roots.push_back(std::complex<double>(0.0, 1.0 / std::tan(j * kPi / (n - 1))));
        }
        for (const auto& t : roots) {
            // root property
            std::complex<double> lhs = std::pow(1.0 + t, n) * (t - 1.0);
            std::complex<double> rhs = std::pow(t - 1.0, n) * (1.0 + t);
            CHECK(std::abs(lhs - rhs) < 1e-10 * (1.0 + std::abs(lhs)));
            for (int rep = 0; rep < 10; ++rep) {
                std::vector<double> k((size_t)n);
                for (auto& v : k) v = rng.uniform(0.2, 2.0); // positive orthant as in the derivation
                double scale = std::pow(4.0 * kPi, n + 1);
                CHECK(std::abs(sn_t(t, k)) < 1e-9 * scale);
            }
        }
        // a non-root t fails
        std::complex<double> bad(0.7, 0.0);
        std::vector<double> k((size_t)n, 1.0);
        k[0] = 0.7;
        CHECK(std::abs(sn_t(bad, k)) > 1e-6);
    }
}

TEST_CASE("sign flip closure of the even source equation") {
    // (k f(l) + l f(k)) f(k+l) - (k+l) f(k) f(l) - pi^2 k l (k+l) is invariant
    // under f -> -f; verified for the coth and abs solutions
    auto resid = [](double sgn, const TransformSpec& ts, double k, double l) {
        auto f = [&](double q) { return sgn * evaluate_fhat(ts, q); };
        return (k * f(l) + l * f(k)) * f(k + l) - (k + l) * f(k) * f(l) - kPi * kPi * k * l * (k + l);
    };
    TransformSpec coth{TransformKind::Coth};
    coth.a0 = 1.1;
    TransformSpec absm{TransformKind::AbsMinus};
    SplitMix rng(11);
    for (int rep = 0; rep < 200; ++rep) {
        double k = rng.uniform(-2, 2), l = rng.uniform(-2, 2);
        double scale = std::pow(kPi * (std::abs(k) + std::abs(l) + 1), 3);
        CHECK(std::abs(resid(+1, coth, k, l)) < 1e-11 * scale);
        CHECK(std::abs(resid(-1, coth, k, l)) < 1e-11 * scale);
        CHECK(std::abs(resid(+1, absm, k, l)) < 1e-11 * scale);
        CHECK(std::abs(resid(-1, absm, k, l)) < 1e-11 * scale);
    }
}

TEST_CASE("transform-side odes") {
    TransformSpec coth{TransformKind::Coth};
    coth.a0 = 1.4;
    for (double k : {0.3, 1.1, -2.6}) CHECK(ode_residual_transform(coth, k).r58 < 1e-10);

    TransformSpec pair{TransformKind::Pair};
    pair.a1 = 1.5;
    pair.a2 = 0.7;
    for (double k : {0.2, 0.9, -1.4}) {
        auto r = ode_residual_transform(pair, k, 0.0);
        CHECK(r.r48 < 1e-10);
        CHECK(r.r49 < 1e-10);
        CHECK(r.r412 < 1e-10);
    }
    // cot-type branch: f2 == a2 makes the first equation vanish identically
    for (double k : {0.2, 0.7}) {
        auto r = ode_residual_transform(pair, k, -4.0);
        CHECK(r.r48 == 0.0);
        CHECK(r.r49 < 1e-10);
    }
}

TEST_CASE("discrete recurrences: closed forms, exactly") {
    for (const char* bs : {"1/5", "-1/5", "7/10", "-7/10"}) {
        Rational beta = Rational::from_string(bs);
        auto res = discrete_solve_even_pole(beta, 50);
        REQUIRE(!res.conflict);
        REQUIRE(res.branches.size() == 1);
        const auto& seq = res.branches[0];
        for (long K = 1; K <= 50; ++K) {
            Rational bK = (Rational(1) + beta.pow((int)K)) / (Rational(1) - beta.pow((int)K));
            CHECK(seq.exact.at(K) == bK);
            double aK = kPi * (double)K * bK.to_double();
            CHECK(std::abs(seq.a.at(K).real() - aK) <= 1e-13 * std::abs(aK));
        }
        CHECK(discrete_residual_even_pole(seq, 25) < 1e-12);
    }
}

TEST_CASE("a0 = 0 sequences: branch detection and both closed forms") {
    for (const char* bs : {"3/10", "-3/10", "7/10"}) {
        Rational beta = Rational::from_string(bs);
        auto res = discrete_solve_a0zero(beta, 40);
        REQUIRE(!res.conflict);
        REQUIRE(res.branches.size() == 2);
        REQUIRE(res.a2_choices.size() == 2);
        Rational b2_first = (Rational(1) + beta * beta) / (Rational(1) - beta * beta);
        Rational b2_second = (Rational(1) - beta * beta) / (Rational(1) + beta * beta);
        CHECK(((res.a2_choices[0] == b2_first && res.a2_choices[1] == b2_second) ||
               (res.a2_choices[0] == b2_second && res.a2_choices[1] == b2_first)));
        for (const auto& seq : res.branches) {
            bool first = seq.exact.at(2) == b2_first;
            for (long K = 1; K <= 40; ++K) {
                Rational expect;
                if (K % 2) {
                    expect = (Rational(1) + beta.pow((int)K)) / (Rational(1) - beta.pow((int)K));
                } else if (first) {
                    expect = (Rational(1) + beta.pow((int)K)) / (Rational(1) - beta.pow((int)K));
                } else {
                    expect = (Rational(1) - beta.pow((int)K)) / (Rational(1) + beta.pow((int)K));
                }
                CHECK(seq.exact.at(K) == expect);
            }
        }
    }
}

TEST_CASE("general three-seed recurrence reproduces the closed form") {
    Rational alpha(2), beta(3);
    auto pw = [&](int e) { return alpha.pow(e); };
    std::map<long, Rational> seeds;
    seeds[-1] = beta * pw(2) / (pw(6) - Rational(1));
    seeds[1] = beta * pw(4) / (pw(6) - Rational(1));
    seeds[-2] = Rational(2) * beta * pw(4) / (pw(12) - Rational(1));
    auto res = discrete_solve_general(seeds, 12);
    REQUIRE(!res.conflict);
    const auto& seq = res.branches[0];
    for (long K = -12; K <= 12; ++K) {
        if (K == 0) continue;
        Rational expect = beta * Rational(K) * alpha.pow(4 * (int)K) / (alpha.pow(6 * (int)K) - Rational(1));
        CHECK(seq.exact.at(K) == expect);
    }
    CHECK(discrete_residual(seq, 12) < 1e-12);

    // a different a_{-2} is the legitimate third parameter: still consistent,
    // but the decay of the closed form is lost
    seeds[-2] = seeds[-2] + Rational(1, 7);
    auto other = discrete_solve_general(seeds, 12);
    CHECK(!other.conflict);
    CHECK(discrete_residual(other.branches[0], 12) < 1e-10);
    double closed12 = std::abs((beta * Rational(12) * alpha.pow(48) / (alpha.pow(72) - Rational(1))).to_double());
    CHECK(std::abs(other.branches[0].a.at(12)) > 10.0 * closed12);

    // degenerate seeds are reported with a witness
    std::map<long, Rational> degen = {{-2L, Rational(1)}, {-1L, Rational(1)}, {1L, Rational(0)}};
    auto bad = discrete_solve_general(degen, 8);
    CHECK(bad.conflict);
    CHECK((bad.witness_K != 0 || bad.witness_L != 0));
}

TEST_CASE("gamma^3K = 1 shift family") {
    Rational alpha(2), beta(3);
    std::map<long, Rational> seeds;
    seeds[-1] = beta * alpha.pow(2) / (alpha.pow(6) - Rational(1));
    seeds[1] = beta * alpha.pow(4) / (alpha.pow(6) - Rational(1));
    seeds[-2] = Rational(2) * beta * alpha.pow(4) / (alpha.pow(12) - Rational(1));
    auto base = discrete_solve_general(seeds, 20).branches[0];

    auto s1 = shift_family(base, 1);
    CHECK(discrete_residual(s1, 20) < 1e-12);
    auto s2 = shift_family(base, 2);
    auto s11 = shift_family(s1, 1);
    for (const auto& [K, v] : s2.a) CHECK(std::abs(v - s11.a.at(K)) < 1e-12 * (1.0 + std::abs(v)));

    // shifted series resums to the original at x + 2 pi/3
    for (double x : {0.9, 2.0}) {
        cplx a = resum(s1, x, 20);
        cplx b = resum(base, x + 2.0 * kPi / 3.0, 20);
        CHECK(std::abs(a - b) < 1e-10 * (1.0 + std::abs(b)));
    }
}
