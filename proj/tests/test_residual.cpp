#include "doctest.h"

#include <cmath>

#include "feq/parallel.hpp"
#include "feq/residual.hpp"

using namespace feq;

namespace {
SolutionSpec wp_spec() {
    return SolutionSpec::weierstrass(Rational(1, 4), Rational(2), Rational(3), Rational(1, 4));
}
} // namespace

TEST_CASE("pde residual: classical and new families") {
    auto wsp = wp_spec();
    SplitMix rng(99);
    for (int n = 2; n <= 5; ++n) {
        for (int rep = 0; rep < 20; ++rep) {
            std::vector<double> x((size_t)n + 1);
            double period = wsp.real_period();
            bool ok = true;
            for (auto& v : x) v = rng.uniform(0.0, period);
            for (size_t i = 0; i < x.size(); ++i) {
                for (size_t j = i + 1; j < x.size(); ++j) {
                    double s = x[i] - x[j];
                    s -= period * std::floor(s / period + 0.5);
                    if (std::abs(s) < 0.05 * period) ok = false;
                }
            }
            if (!ok) continue;
            CHECK(pde_residual_normalized(wsp, n, x) < 1e-9);
        }
    }

    // constants solve exactly
    auto cst = SolutionSpec::linear(Rational(5, 3), Rational(0));
    CHECK(pde_residual(cst, 3, {0.1, 0.9, 2.2, -1.4}) == cplx(0, 0));

    // h2 solves n=3 and fails n=2
    auto h2 = SolutionSpec::h_family(2, 0.6);
    double w = h2.real_period() / 2;
    std::vector<double> x4 = {0.13 * w, 0.71 * w, 1.02 * w, 1.55 * w};
    CHECK(pde_residual_normalized(h2, 3, x4) < 1e-9);
    std::vector<double> x3 = {0.13 * w, 0.71 * w, 1.52 * w};
    CHECK(pde_residual_normalized(h2, 2, x3) > 1e-2);
}

TEST_CASE("pde residual invariances") {
    auto h1 = SolutionSpec::h_family(1, 0.45);
    double w = h1.real_period() / 2;
    std::vector<double> x = {0.21 * w, 0.77 * w, 1.13 * w, 1.64 * w};

    double base = std::abs(pde_residual(h1, 3, x));
    double scale = 0;
    for (double xi : x) scale = std::max(scale, std::abs(xi));

    // translation invariance
    for (double c : {0.37, -1.1}) {
        std::vector<double> xs = x;
        for (auto& v : xs) v += c;
        CHECK(std::abs(std::abs(pde_residual(h1, 3, xs)) - base) < 1e-12 * std::max(1.0, base / 1e-12));
        CHECK(std::abs(pde_residual_normalized(h1, 3, xs) - pde_residual_normalized(h1, 3, x)) < 1e-12);
    }

    // permutation invariance of the magnitude
    std::vector<double> xp = {x[2], x[0], x[3], x[1]};
    CHECK(std::abs(std::abs(pde_residual(h1, 3, xp)) - base) < 1e-12);

    // evenness reduction: plain and cyclically rewritten 3-particle forms agree
    auto wsp = wp_spec();
    std::array<double, 3> tri = {0.15, 0.62, 1.37};
    cplx a = pde_residual(wsp, 2, {tri[0], tri[1], tri[2]});
    cplx b = pde_residual_cyclic3(wsp, tri);
    CHECK(std::abs(a - b) < 1e-12 * std::max(1.0, std::abs(a)));
}

TEST_CASE("determinant residual") {
    auto expo = SolutionSpec::exponential(Rational(1), Rational(1, 2), Rational(2, 3));
    SplitMix rng(5);
    for (int i = 0; i < 50; ++i) {
        double u = rng.uniform(-2.0, 2.0), v = rng.uniform(-2.0, 2.0);
        CHECK(determinant_residual_normalized(expo, u, v) < 1e-10);
    }

    CHECK(determinant_residual(expo, 0.7, 0.7) == 0.0);

    // linear also solves the determinant form
    auto lin = SolutionSpec::linear(Rational(2), Rational(-3, 2));
    CHECK(determinant_residual_normalized(lin, 0.3, 1.1) < 1e-12);

    // one-third-period shift of the weierstrass family
    auto base = wp_spec();
    EllipticParams p = base.elliptic();
    auto shifted = SolutionSpec::weierstrass(Rational(1, 4), Rational(2), Rational(3), Rational(1, 4),
                                             2.0 * p.omega / 3.0);
    int checked = 0;
    for (int i = 0; checked < 25 && i < 500; ++i) {
        double u = rng.uniform(0.05, 0.5) * p.omega, v = rng.uniform(0.05, 0.5) * p.omega;
        double w = -u - v;
        if (pole_distance(shifted, cplx(u, 0)) < 0.05 || pole_distance(shifted, cplx(v, 0)) < 0.05 ||
            pole_distance(shifted, cplx(w, 0)) < 0.05) {
            continue;
        }
        CHECK(determinant_residual_normalized(shifted, u, v) < 1e-9);
        ++checked;
    }
    CHECK(checked >= 25);

    // a generic shift does not solve it
    auto bad = SolutionSpec::weierstrass(Rational(1, 4), Rational(2), Rational(3), Rational(1, 4),
                                         0.41 * p.omega);
    CHECK(determinant_residual_normalized(bad, 0.31 * p.omega, 0.47 * p.omega) > 1e-3);
}

TEST_CASE("ode residuals: exponential-class and elliptic-class equations") {
    auto expo = SolutionSpec::exponential(Rational(2), Rational(3), Rational(-1, 2));
    for (double z : {0.3, 1.7, -2.2}) {
        CHECK(ode_residuals(expo, z).r16 < 1e-10);
    }

    auto wsp = wp_spec();
    for (double z : {0.35, 0.8}) {
        auto r = ode_residuals(wsp, z);
        CHECK(r.r18 < 1e-9);
        CHECK(r.r16 > 1e-3); // generically nonzero for the elliptic family
    }

    // the new families fail the fifth-order equation; test at generic points away from
    // the pole, where the residual is not masked by the shared 1/z^2 asymptotics
    auto h2 = SolutionSpec::h_family(2, 0.7);
    double wh = h2.real_period() / 2;
    for (double t : {0.7, 1.0, 1.3}) {
        CHECK(ode_residuals(h2, t * wh).r18 > 1e-2);
    }
}

TEST_CASE("cubic first integral fit") {
    auto wsp = wp_spec();
    std::vector<double> zs;
    for (int i = 0; i < 12; ++i) zs.push_back(0.25 + 0.08 * i);
    auto fit = fit_first_integral(wsp, zs);
    CHECK(!fit.degenerate);
    CHECK(fit.validation_residual < 1e-8);

    auto lin = SolutionSpec::linear(Rational(1), Rational(2));
    auto lf = fit_first_integral(lin, zs);
    CHECK(!lf.degenerate);
    CHECK(std::abs(lf.A) < 1e-10);
    CHECK(std::abs(lf.B) < 1e-10);
    CHECK(lf.validation_residual < 1e-10);

    auto h1 = SolutionSpec::h_family(1, 0.9);
    double wh = h1.real_period() / 2;
    std::vector<double> zh;
    for (int i = 0; i < 14; ++i) zh.push_back(wh * (0.12 + 0.88 / 13.0 * i));
    auto hf = fit_first_integral(h1, zh);
    CHECK((hf.degenerate || hf.validation_residual > 1e-3));

    auto cst = SolutionSpec::linear(Rational(4), Rational(0));
    CHECK(fit_first_integral(cst, zs).degenerate);
}

TEST_CASE("five-term and thirteen-term companion equations") {
    auto wsp = wp_spec();
    auto L = laurent_coefficients(wsp, 3);
    std::array<double, 4> a = {L.a[0].to_double(), L.a[1].to_double(), L.a[2].to_double(),
                               L.a[3].to_double()};
    for (double z : {0.3, 0.75, 1.2}) {
        auto r = odeA1_residuals(wsp, z, a);
        CHECK(r.r11 < 1e-8);
        CHECK(r.r12 < 1e-8);
    }

    // the h-families satisfy the same n=3 expansion equations with their own constants
    auto h1 = SolutionSpec::h_family(1, 0.55);
    auto Lh = laurent_coefficients(h1, 3);
    std::array<double, 4> ah = {Lh.a[0].to_double(), Lh.a[1].to_double(), Lh.a[2].to_double(),
                                Lh.a[3].to_double()};
    for (double z : {0.4, 0.8}) {
        auto r = odeA1_residuals(h1, z, ah);
        CHECK(r.r11 < 1e-8);
        CHECK(r.r12 < 1e-8);
    }

    // constants give an exact zero
    auto cst = SolutionSpec::linear(Rational(3), Rational(0));
    auto rc = odeA1_residuals(cst, 0.9, {0, 3, 0, 0});
    CHECK(rc.r11 == 0.0);
    CHECK(rc.r12 == 0.0);

    // a non-solution is flagged: hyperbolic fails the pair at n=3 scale?  the pair is the
    // n=3 system, which hyperbolic *does* satisfy; use an off-family perturbation instead
    auto bad = SolutionSpec::exponential(Rational(0), Rational(1), Rational(1));
    auto rb = odeA1_residuals(bad, 0.6, {1.0, 0.5, 0.25, 0.125});
    CHECK(rb.r12 > 1e-3);
}

TEST_CASE("classify dichotomy and determinism") {
    SamplePlan plan;
    plan.count = 40;
    plan.delta = 0.05;
    plan.seed = 7;

    auto h3 = SolutionSpec::h_family(3, 0.5);
    plan.n = 5;
    CHECK(classify(h3, 5, plan).solves);
    plan.n = 4;
    auto v4 = classify(h3, 4, plan);
    CHECK(!v4.solves);
    CHECK(v4.normalized > 1e-2);

    auto hyp = SolutionSpec::hyperbolic(Rational(1), Rational(1));
    auto vh = classify(hyp, 3, plan);
    CHECK(vh.solves);

    // deterministic output given (seed, plan) regardless of thread count
    SamplePlan p1 = plan;
    p1.n = 3;
    p1.threads = 1;
    SamplePlan p4 = p1;
    p4.threads = 4;
    auto a = classify(h3, 3, p1);
    auto b = classify(h3, 3, p4);
    CHECK(verdict_to_json(a, h3, 3) == verdict_to_json(b, h3, 3));
}
