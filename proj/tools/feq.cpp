#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "feq/dynamics.hpp"
#include "feq/finite_part.hpp"
#include "feq/fourier.hpp"
#include "feq/parallel.hpp"
#include "feq/residual.hpp"
#include "feq/series.hpp"
#include "feq/solution.hpp"

using namespace feq;

namespace {

void write_out(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text << "\n";
        return;
    }
    std::ofstream f(path);
    f << text << "\n";
}

SolutionSpec spec_from_options(const std::string& family, const std::string& spec_json, double k) {
    if (!spec_json.empty()) {
        if (!spec_json.empty() && spec_json[0] != '{') {
            std::ifstream f(spec_json);
            std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
            return SolutionSpec::from_json(text);
        }
        return SolutionSpec::from_json(spec_json);
    }
    if (family == "h1") return SolutionSpec::h_family(1, k);
    if (family == "h2") return SolutionSpec::h_family(2, k);
    if (family == "h3") return SolutionSpec::h_family(3, k);
    if (family == "hyperbolic") return SolutionSpec::hyperbolic(Rational(1), Rational(1));
    if (family == "trigonometric") return SolutionSpec::trigonometric(Rational(1), Rational(1, 2));
    if (family == "inverse_square") return SolutionSpec::inverse_square(Rational(1));
    if (family == "weierstrass") {
        return SolutionSpec::weierstrass(Rational(1, 4), Rational(2), Rational(3), Rational(1, 4));
    }
    if (family == "exponential") return SolutionSpec::exponential(Rational(1), Rational(1, 2), Rational(2, 3));
    if (family == "linear") return SolutionSpec::linear(Rational(1), Rational(2));
    throw CLI::ValidationError("--family", "unknown family " + family);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"verification toolkit for the n-particle product functional equation"};
    app.require_subcommand(1);
    app.fallthrough();
    int threads = 0;
    app.add_option("--threads", threads, "worker cap (default: FE_THREADS or hardware)");

    // ---------------- verify
    auto* verify = app.add_subcommand("verify", "sample the equation residual and classify");
    std::string v_family = "weierstrass", v_spec, v_expect, v_out;
    int v_n = 2, v_count = 200;
    double v_k = 0.5, v_delta = 0.0, v_tol = 1e-8;
    uint64_t v_seed = 1;
    verify->add_option("--family", v_family, "named family");
    verify->add_option("--spec", v_spec, "inline spec JSON or a file path");
    verify->add_option("--n", v_n, "equation index (n+1 particles)")->check(CLI::Range(2, 5));
    verify->add_option("--k", v_k, "modulus for the h families");
    verify->add_option("--count", v_count, "samples");
    verify->add_option("--delta", v_delta, "separation guard (default period-scaled)");
    verify->add_option("--seed", v_seed, "sampling seed");
    verify->add_option("--tolerance", v_tol, "solves threshold");
    verify->add_option("--expect", v_expect, "solves|fails: exit 1 on mismatch");
    verify->add_option("--out", v_out, "write the verdict JSON here");

    // ---------------- series
    auto* series = app.add_subcommand("series", "exact coefficient recurrences of the small-separation expansion");
    int s_n = 2, s_J = 10;
    bool s_taylor = false;
    std::string s_out;
    series->add_option("--n", s_n)->check(CLI::Range(2, 4));
    series->add_option("--J", s_J, "highest coefficient index");
    series->add_flag("--taylor", s_taylor, "three-particle Taylor branch (a0=a1=0)");
    series->add_option("--out", s_out);

    // ---------------- fourier
    auto* fourier = app.add_subcommand("fourier", "discrete transform-side recurrences");
    std::string f_kind = "even_pole", f_beta = "3/10", f_out;
    int f_N = 50;
    fourier->add_option("--kind", f_kind, "general|even_pole|a0zero");
    fourier->add_option("--beta", f_beta, "rational seed parameter");
    fourier->add_option("--N", f_N, "coefficient window");
    fourier->add_option("--out", f_out);

    // ---------------- dynamics
    auto* dynamics = app.add_subcommand("dynamics", "integrate the relativistic chain and report drift");
    std::string d_family = "hyperbolic", d_spec, d_csv, d_out;
    int d_n = 3, d_steps = 10000;
    double d_dt = 1e-3, d_k = 0.5;
    uint64_t d_seed = 1;
    dynamics->add_option("--family", d_family);
    dynamics->add_option("--spec", d_spec);
    dynamics->add_option("--n", d_n)->check(CLI::Range(2, 5));
    dynamics->add_option("--k", d_k);
    dynamics->add_option("--steps", d_steps);
    dynamics->add_option("--dt", d_dt);
    dynamics->add_option("--seed", d_seed);
    dynamics->add_option("--csv", d_csv, "trajectory CSV path");
    dynamics->add_option("--out", d_out);

    // ---------------- finitepart
    auto* finitepart = app.add_subcommand("finitepart", "planar finite-part distribution check");
    std::string p_phi = "x2y_gauss", p_out;
    finitepart->add_option("--phi", p_phi, "test function name");
    finitepart->add_option("--out", p_out);

    // ---------------- chain-check
    auto* chain = app.add_subcommand("chain-check", "agreement of the four h representations");
    std::string c_out;
    std::vector<double> c_ks = {0.3, 0.5, 0.9};
    int c_points = 100;
    uint64_t c_seed = 1;
    chain->add_option("--k", c_ks, "moduli to sweep");
    chain->add_option("--points", c_points);
    chain->add_option("--seed", c_seed);
    chain->add_option("--out", c_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*verify) {
            SolutionSpec spec;
            try {
                spec = spec_from_options(v_family, v_spec, v_k);
            } catch (const std::exception& e) {
                std::fprintf(stderr, "spec error: %s\n", e.what());
                return 2;
            }
            SamplePlan plan;
            plan.n = v_n;
            plan.count = v_count;
            plan.seed = v_seed;
            plan.threads = threads;
            double period = spec.real_period();
            plan.delta = v_delta > 0 ? v_delta : (period > 0 ? 0.01 * period : 0.05);
            Verdict verdict = classify(spec, v_n, plan);
            verdict.solves = verdict.normalized < v_tol;
            std::string json = verdict_to_json(verdict, spec, v_n);
            write_out(v_out, json);
            std::fprintf(stderr, "%s n=%d: normalized=%.3e -> %s\n", family_name(spec.family), v_n,
                         verdict.normalized, verdict.solves ? "solves" : "fails");
            if (!v_expect.empty()) {
                bool want = v_expect == "solves";
                if (want != verdict.solves) return 1;
            }
            return 0;
        }
        if (*series) {
            ExpandOptions opt;
            if (s_taylor) {
                opt.even = false;
                opt.taylor = true;
            }
            auto ex = expand_pde(s_n, s_J, opt);
            auto states = solve_recurrence(s_n, s_J, opt);
            write_out(s_out, recurrence_to_json(ex, states));
            std::fprintf(stderr, "n=%d J=%d: %zu constraints, %zu terminal state(s)\n", s_n, s_J,
                         ex.constraints.size(), states.size());
            return 0;
        }
        if (*fourier) {
            Rational beta = Rational::from_string(f_beta);
            DiscreteSolveResult res;
            if (f_kind == "even_pole") {
                res = discrete_solve_even_pole(beta, f_N);
            } else if (f_kind == "a0zero") {
                res = discrete_solve_a0zero(beta, f_N);
            } else if (f_kind == "general") {
                Rational alpha(2);
                std::map<long, Rational> seeds;
                seeds[-1] = beta * alpha.pow(2) / (alpha.pow(6) - Rational(1));
                seeds[1] = beta * alpha.pow(4) / (alpha.pow(6) - Rational(1));
                seeds[-2] = Rational(2) * beta * alpha.pow(4) / (alpha.pow(12) - Rational(1));
                res = discrete_solve_general(seeds, f_N);
            } else {
                throw CLI::ValidationError("--kind", "unknown kind " + f_kind);
            }
            nlohmann::json j;
            j["conflict"] = res.conflict;
            if (res.conflict) {
                j["witness"] = {res.witness_K, res.witness_L};
            }
            nlohmann::json branches = nlohmann::json::array();
            for (const auto& b : res.branches) branches.push_back(nlohmann::json::parse(b.to_json()));
            j["branches"] = branches;
            write_out(f_out, j.dump());
            std::fprintf(stderr, "%s beta=%s N=%d: %zu branch(es)\n", f_kind.c_str(), f_beta.c_str(), f_N,
                         res.branches.size());
            return res.conflict ? 1 : 0;
        }
        if (*dynamics) {
            SolutionSpec spec = spec_from_options(d_family, d_spec, d_k);
            auto obs = rs_observables(spec);
            SplitMix rng(d_seed);
            double period = spec.real_period();
            double span = period > 0 ? 0.4 * period : 3.5;
            PhaseState init;
            init.x.resize((size_t)d_n + 1);
            init.p.resize((size_t)d_n + 1);
            double base = 0;
            for (int i = 0; i <= d_n; ++i) {
                base += span / (d_n + 1) * (0.6 + 0.4 * rng.uniform());
                init.x[(size_t)i] = base;
            }
            for (auto& v : init.p) v = rng.uniform(-0.3, 0.3);
            auto rep = integrate(init, obs.H, obs.P, d_dt, d_steps, &spec);
            if (!d_csv.empty()) write_out(d_csv, trajectory_csv(rep));
            write_out(d_out, drift_json(rep));
            std::fprintf(stderr, "%s n=%d: dH=%.3e dP=%.3e%s\n", family_name(spec.family), d_n, rep.max_dH,
                         rep.max_dP, rep.truncated ? " (truncated)" : "");
            return 0;
        }
        if (*finitepart) {
            auto phi = TestFunction::named(p_phi);
            auto fp = finite_part_double(phi);
            auto c = distribution_identity_check(phi);
            write_out(p_out, distribution_check_json(c, fp));
            std::fprintf(stderr, "%s: lhs=%.6f rhs=%.6f rel_err=%.2e\n", p_phi.c_str(), c.lhs, c.rhs,
                         c.rel_err);
            return 0;
        }
        if (*chain) {
            SplitMix rng(c_seed);
            nlohmann::json j = nlohmann::json::array();
            double worst_all = 0;
            for (double k : c_ks) {
                EllipticParams p = EllipticParams::from_modulus(k);
                double worst = 0;
                int done = 0;
                while (done < c_points) {
                    double z = rng.uniform(0.02, 1.98) * p.omega;
                    if (lattice_distance(cplx(z, 0), p) < 0.02 * p.omega) continue;
                    for (int h = 1; h <= 3; ++h) {
                        worst = std::max(worst, representation_chain_check(h, z, p));
                    }
                    ++done;
                }
                nlohmann::json e;
                e["k"] = k;
                e["max_discrepancy"] = worst;
                j.push_back(e);
                worst_all = std::max(worst_all, worst);
            }
            write_out(c_out, j.dump());
            std::fprintf(stderr, "chain-check worst discrepancy: %.3e\n", worst_all);
            return worst_all < 1e-9 ? 0 : 1;
        }
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
