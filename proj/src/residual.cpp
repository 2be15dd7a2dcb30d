#include "feq/residual.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include "feq/parallel.hpp"
#include "json.hpp"

namespace feq {

namespace {

struct PairData {
    std::vector<cplx> f, fp; // f and f' at x_i - x_j, flattened (n+1)x(n+1)
    int m = 0;
    cplx& F(int i, int j) { return f[(size_t)(i * m + j)]; }
    cplx& Fp(int i, int j) { return fp[(size_t)(i * m + j)]; }
};

PairData pair_values(const SolutionSpec& spec, const std::vector<double>& x) {
    PairData d;
    d.m = (int)x.size();
    d.f.assign((size_t)d.m * d.m, 0.0);
    d.fp.assign((size_t)d.m * d.m, 0.0);
    for (int i = 0; i < d.m; ++i) {
        for (int j = 0; j < d.m; ++j) {
            if (i == j) continue;
            CJet jet = evaluate_jet(spec, cplx(x[(size_t)i] - x[(size_t)j], 0.0));
            d.F(i, j) = jet.c[0];
            d.Fp(i, j) = jet.c[1];
        }
    }
    return d;
}

// derivative terms T_i = d/dx_i prod_{j != i} f(x_i - x_j)
std::vector<cplx> derivative_terms(const SolutionSpec& spec, int n, const std::vector<double>& x) {
    if ((int)x.size() != n + 1) throw std::invalid_argument("pde_residual: need n+1 coordinates");
    PairData d = pair_values(spec, x);
    std::vector<cplx> terms((size_t)n + 1, 0.0);
    for (int i = 0; i <= n; ++i) {
        cplx acc = 0.0;
        for (int j = 0; j <= n; ++j) {
            if (j == i) continue;
            cplx prod = d.Fp(i, j);
            for (int l = 0; l <= n; ++l) {
                if (l == i || l == j) continue;
                prod *= d.F(i, l);
            }
            acc += prod;
        }
        terms[(size_t)i] = acc;
    }
    return terms;
}

double safe_ratio(double num, double den) {
    if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return num / den;
}

} // namespace

cplx pde_residual(const SolutionSpec& spec, int n, const std::vector<double>& x) {
    auto terms = derivative_terms(spec, n, x);
    cplx acc = 0.0;
    for (const cplx& t : terms) acc += t;
    return acc;
}

double pde_residual_normalized(const SolutionSpec& spec, int n, const std::vector<double>& x) {
    auto terms = derivative_terms(spec, n, x);
    cplx acc = 0.0;
    double scale = 0.0;
    for (const cplx& t : terms) {
        acc += t;
        scale = std::max(scale, std::abs(t));
    }
    return safe_ratio(std::abs(acc), scale);
}

cplx pde_residual_cyclic3(const SolutionSpec& spec, const std::array<double, 3>& x) {
    // d1[f(x1-x2) f(x3-x1)] + d2[f(x2-x3) f(x1-x2)] + d3[f(x3-x1) f(x2-x3)]
    auto jet = [&](double u) { return evaluate_jet(spec, cplx(u, 0.0)); };
    CJet f12 = jet(x[0] - x[1]), f23 = jet(x[1] - x[2]), f31 = jet(x[2] - x[0]);
    cplx t1 = f12.c[1] * f31.c[0] - f12.c[0] * f31.c[1]; // d/dx1
    cplx t2 = f23.c[1] * f12.c[0] - f23.c[0] * f12.c[1]; // d/dx2
    cplx t3 = f31.c[1] * f23.c[0] - f31.c[0] * f23.c[1]; // d/dx3
    return t1 + t2 + t3;
}

namespace {

void det_terms(const SolutionSpec& spec, double u, double v, cplx& det, double& scale) {
    double w = -u - v;
    CJet fu = evaluate_jet(spec, cplx(u, 0.0));
    CJet fv = evaluate_jet(spec, cplx(v, 0.0));
    CJet fw = evaluate_jet(spec, cplx(w, 0.0));
    cplx p1 = fv.c[0] * fw.c[1], p2 = fw.c[0] * fv.c[1];
    cplx p3 = fu.c[0] * fw.c[1], p4 = fw.c[0] * fu.c[1];
    cplx p5 = fu.c[0] * fv.c[1], p6 = fv.c[0] * fu.c[1];
    det = (p1 - p2) - (p3 - p4) + (p5 - p6);
    scale = 0.0;
    for (const cplx& p : {p1, p2, p3, p4, p5, p6}) scale = std::max(scale, std::abs(p));
}

} // namespace

double determinant_residual(const SolutionSpec& spec, double u, double v) {
    cplx det;
    double scale;
    det_terms(spec, u, v, det, scale);
    return std::abs(det);
}

double determinant_residual_normalized(const SolutionSpec& spec, double u, double v) {
    cplx det;
    double scale;
    det_terms(spec, u, v, det, scale);
    return safe_ratio(std::abs(det), scale);
}

OdeResiduals ode_residuals(const SolutionSpec& spec, double z) {
    CJet j = evaluate_jet(spec, cplx(z, 0.0));
    cplx f1 = j.deriv(1), f2 = j.deriv(2), f3 = j.deriv(3), f4 = j.deriv(4), f5 = j.deriv(5);
    OdeResiduals r;
    {
        cplx t1 = f1 * f3, t2 = f2 * f2;
        r.r16 = safe_ratio(std::abs(t1 - t2), std::max(std::abs(t1), std::abs(t2)));
    }
    {
        cplx t1 = f1 * f1 * f5, t2 = -3.0 * f1 * f2 * f4, t3 = 3.0 * f2 * f2 * f3, t4 = -f1 * f3 * f3;
        double scale = 0.0;
        for (const cplx& t : {t1, t2, t3, t4}) scale = std::max(scale, std::abs(t));
        r.r18 = safe_ratio(std::abs(t1 + t2 + t3 + t4), scale);
    }
    return r;
}

FirstIntegralFit fit_first_integral(const SolutionSpec& spec, const std::vector<double>& zs) {
    if (zs.size() < 4) throw std::invalid_argument("fit_first_integral: need at least 4 samples");
    // normal equations in long double for the 4-parameter least squares
    long double M[4][4] = {};
    long double rhs[4] = {};
    for (double z : zs) {
        CJet j = evaluate_jet(spec, cplx(z, 0.0));
        long double f = j.c[0].real();
        long double fp2 = std::pow((long double)j.c[1].real(), 2.0L);
        long double row[4] = {f * f * f, f * f, f, 1.0L};
        // equilibrate rows so near-pole samples do not drown the generic ones
        long double w = std::max({std::abs(row[0]), std::abs(row[1]), std::abs(row[2]), 1.0L,
                                  std::abs(fp2)});
        for (int a = 0; a < 4; ++a) row[a] /= w;
        long double target = -fp2 / w;
        for (int a = 0; a < 4; ++a) {
            for (int b = 0; b < 4; ++b) M[a][b] += row[a] * row[b];
            rhs[a] += row[a] * target;
        }
    }
    // Gaussian elimination with partial pivoting
    int piv[4] = {0, 1, 2, 3};
    long double A[4][5];
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) A[i][j] = M[i][j];
        A[i][4] = rhs[i];
    }
    FirstIntegralFit out;
    long double norm = 0;
    for (int i = 0; i < 4; ++i) norm = std::max(norm, std::abs(A[i][i]));
    for (int c = 0; c < 4; ++c) {
        int best = c;
        for (int r2 = c + 1; r2 < 4; ++r2) {
            if (std::abs(A[r2][c]) > std::abs(A[best][c])) best = r2;
        }
        std::swap(A[c], A[best]);
        std::swap(piv[c], piv[best]);
        if (std::abs(A[c][c]) < 1e-13L * std::max((long double)1.0L, norm)) {
            out.degenerate = true;
            return out;
        }
        for (int r2 = c + 1; r2 < 4; ++r2) {
            long double fac = A[r2][c] / A[c][c];
            for (int k = c; k < 5; ++k) A[r2][k] -= fac * A[c][k];
        }
    }
    long double sol[4];
    for (int i = 3; i >= 0; --i) {
        long double acc = A[i][4];
        for (int k = i + 1; k < 4; ++k) acc -= A[i][k] * sol[k];
        sol[i] = acc / A[i][i];
    }
    out.A = (double)sol[0];
    out.B = (double)sol[1];
    out.C = (double)sol[2];
    out.D = (double)sol[3];

    // validation on midpoints of consecutive sample z's
    double worst = 0.0;
    for (size_t i = 0; i + 1 < zs.size(); ++i) {
        double z = 0.5 * (zs[i] + zs[i + 1]);
        CJet j = evaluate_jet(spec, cplx(z, 0.0));
        double f = j.c[0].real();
        double fp2 = j.c[1].real() * j.c[1].real();
        double terms[5] = {fp2, out.A * f * f * f, out.B * f * f, out.C * f, out.D};
        double scale = 0, sum = 0;
        for (double t : terms) {
            sum += t;
            scale = std::max(scale, std::abs(t));
        }
        worst = std::max(worst, safe_ratio(std::abs(sum), std::max(scale, 1e-300)));
    }
    out.validation_residual = worst;
    return out;
}

OdeA1Residuals odeA1_residuals(const SolutionSpec& spec, double z, const std::array<double, 4>& a) {
    CJet j = evaluate_jet(spec, cplx(z, 0.0));
    cplx f = j.c[0], f1 = j.deriv(1), f2 = j.deriv(2), f3 = j.deriv(3), f4 = j.deriv(4), f5 = j.deriv(5);
    double a0 = a[0], a1 = a[1], a2 = a[2], a3 = a[3];
    OdeA1Residuals out;
    {
        cplx t[4] = {120.0 * a2 * f1 * f, 5.0 * a0 * f3 * f2, 60.0 * f2 * f1 * a1, -a0 * f5 * f};
        cplx sum = 0;
        double scale = 0;
        for (const cplx& v : t) {
            sum += v;
            scale = std::max(scale, std::abs(v));
        }
        out.r11 = safe_ratio(std::abs(sum), scale);
    }
    {
        cplx t[13] = {
            504.0 * a3 * f1 * f * f,
            1080.0 * f1 * a2 * f2 * f,
            36.0 * f4 * f1 * a1 * f,
            15.0 * f1 * a0 * f3 * f3,
            180.0 * f1 * f2 * f2 * a1,
            180.0 * f3 * f1 * f1 * a1,
            -3.0 * a0 * f5 * f1 * f1,
            360.0 * f1 * f1 * f1 * a2,
            15.0 * f1 * a0 * f4 * f2,
            -60.0 * f2 * a1 * f3 * f,
            -12.0 * a0 * f4 * f3 * f,
            240.0 * f3 * a2 * f * f,
            a0 * f5 * f2 * f,
        };
        cplx sum = 0;
        double scale = 0;
        for (const cplx& v : t) {
            sum += v;
            scale = std::max(scale, std::abs(v));
        }
        out.r12 = safe_ratio(std::abs(sum), scale);
    }
    return out;
}

namespace {

// separation distance from the singular set, mod period when periodic
double separation_gap(double s, double period) {
    if (period > 0) {
        double r = s - period * std::floor(s / period + 0.5);
        return std::abs(r);
    }
    return std::abs(s);
}

std::vector<double> draw_sample(const SolutionSpec& spec, int n, const SamplePlan& plan, SplitMix& rng) {
    double period = spec.real_period();
    double lo = plan.box_lo, hi = plan.box_hi;
    if (period > 0) {
        lo = 0.0;
        hi = period;
    }
    for (int attempt = 0; attempt < 100; ++attempt) {
        std::vector<double> x((size_t)n + 1);
        for (auto& v : x) v = rng.uniform(lo, hi);
        bool ok = true;
        for (int i = 0; i <= n && ok; ++i) {
            for (int j = i + 1; j <= n && ok; ++j) {
                if (separation_gap(x[(size_t)i] - x[(size_t)j], period) <= plan.delta) ok = false;
            }
        }
        if (ok) return x;
    }
    throw std::runtime_error("classify: sample rejection limit reached");
}

} // namespace

Verdict classify(const SolutionSpec& spec, int n, const SamplePlan& plan) {
    if (plan.count < 1 || plan.delta <= 0) throw std::invalid_argument("classify: invalid plan");
    std::vector<double> normalized((size_t)plan.count, 0.0);
    std::vector<double> raw((size_t)plan.count, 0.0);
    std::vector<std::vector<double>> samples((size_t)plan.count);
    parallel_for(
        plan.count,
        [&](int i) {
            SplitMix rng(plan.seed * 0x9e3779b97f4a7c15ULL + (uint64_t)i * 0xd1342543de82ef95ULL + 1);
            std::vector<double> x = draw_sample(spec, n, plan, rng);
            auto terms = derivative_terms(spec, n, x);
            cplx acc = 0.0;
            double scale = 0.0;
            for (const cplx& t : terms) {
                acc += t;
                scale = std::max(scale, std::abs(t));
            }
            raw[(size_t)i] = std::abs(acc);
            normalized[(size_t)i] = safe_ratio(std::abs(acc), scale);
            samples[(size_t)i] = std::move(x);
        },
        plan.threads);

    Verdict v;
    for (int i = 0; i < plan.count; ++i) {
        v.max_abs_residual = std::max(v.max_abs_residual, raw[(size_t)i]);
        v.normalized = std::max(v.normalized, normalized[(size_t)i]);
    }
    v.solves = v.normalized < 1e-8;
    v.indeterminate = !v.solves && v.normalized <= 1e-2;
    // keep the three worst samples
    std::vector<int> idx(normalized.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = (int)i;
    std::partial_sort(idx.begin(), idx.begin() + std::min<size_t>(3, idx.size()), idx.end(),
                      [&](int a, int b) { return normalized[(size_t)a] > normalized[(size_t)b]; });
    for (size_t i = 0; i < std::min<size_t>(3, idx.size()); ++i) {
        v.failures.push_back({samples[(size_t)idx[i]], normalized[(size_t)idx[i]]});
    }
    return v;
}

std::string verdict_to_json(const Verdict& v, const SolutionSpec& spec, int n) {
    nlohmann::json j;
    j["family"] = family_name(spec.family);
    j["n"] = n;
    j["max_abs_residual"] = v.max_abs_residual;
    j["normalized"] = v.normalized;
    j["solves"] = v.solves;
    if (v.indeterminate) j["indeterminate"] = true;
    nlohmann::json fails = nlohmann::json::array();
    for (const auto& w : v.failures) {
        nlohmann::json e;
        e["x"] = w.x;
        e["normalized"] = w.normalized;
        fails.push_back(e);
    }
    j["worst"] = fails;
    return j.dump();
}

} // namespace feq
