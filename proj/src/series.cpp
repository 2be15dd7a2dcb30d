#include "feq/series.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace feq {

namespace {

// Laurent series in t with MultiPoly coefficients, truncated above max_pow.
struct TSeries {
    std::map<int, MultiPoly> c;

    void add(int p, const MultiPoly& m) {
        auto it = c.find(p);
        if (it == c.end()) {
            if (!m.is_zero()) c.emplace(p, m);
        } else {
            it->second += m;
            if (it->second.is_zero()) c.erase(it);
        }
    }
};

TSeries ts_mul(const TSeries& a, const TSeries& b, int max_pow) {
    TSeries r;
    for (const auto& [pa, ma] : a.c) {
        for (const auto& [pb, mb] : b.c) {
            int p = pa + pb;
            if (p > max_pow) continue;
            r.add(p, ma * mb);
        }
    }
    return r;
}

// series normalization constants: 1 for j < 0, 1/j! otherwise
Rational conv_c(int j) {
    if (j < 0) return Rational(1);
    return Rational::factorial((unsigned)j).inv();
}

struct ExpandContext {
    int n;           // equation index, n+1 particles
    int J;           // highest coefficient index
    bool even;
    bool taylor;
    int nzeta;       // zeta variables kept (zeta_{n+1} eliminated)
    int nv;          // total variables: nzeta + (J+1)
    int avar(int m) const { return nzeta + m; }

    // zeta_i - zeta_j as a polynomial, 1-based particles, zeta_{n+1} = 0
    MultiPoly diff(int i, int j) const {
        MultiPoly r(nv);
        if (i <= n) r += MultiPoly::var(nv, i - 1);
        if (j <= n) r -= MultiPoly::var(nv, j - 1);
        return r;
    }
};

// G(i,j) = sum_m a_m c_* t^{e(m)} (zeta_i - zeta_j)^{e(m)} with the pole factor
// t^-2 (zeta_i - zeta_j)^-2 stripped; e(m) = 2m (even ansatz) or m (general)
TSeries pair_series(const ExpandContext& cx, int i, int j, int max_pow) {
    TSeries g;
    MultiPoly d = cx.diff(i, j);
    MultiPoly dpow = MultiPoly::constant(cx.nv, Rational(1));
    int step = cx.even ? 2 : 1;
    int prev = 0;
    for (int m = 0; m <= cx.J; ++m) {
        if (cx.taylor && m < 2) continue;
        int e = cx.even ? 2 * m : m;
        if (e > max_pow) break;
        for (; prev < e; ++prev) dpow = dpow * d;
        Rational cj = conv_c(e - 2);
        MultiPoly term = dpow.scaled(cj) * MultiPoly::var(cx.nv, cx.avar(m));
        g.add(e, term);
    }
    (void)step;
    return g;
}

} // namespace

ExpandResult expand_pde(int n, int J, const ExpandOptions& opt) {
    if (n < 2 || n > 4) throw std::invalid_argument("expand_pde: n must be 2..4");
    if ((n <= 3 && J > 12) || (n == 4 && J > 6)) throw std::invalid_argument("expand_pde: J over cost guard");
    if (J < 4) throw std::invalid_argument("expand_pde: J too small");
    if (!opt.even && !opt.taylor) {
        throw std::invalid_argument("expand_pde: the general ansatz is only supported as the Taylor branch");
    }
    if (opt.taylor && n != 2) throw std::invalid_argument("expand_pde: Taylor branch is the 3-particle case");

    ExpandContext cx;
    cx.n = n;
    cx.J = J;
    cx.even = opt.even;
    cx.taylor = opt.taylor;
    cx.nzeta = n;
    cx.nv = n + (J + 1);

    // truncation of the stripped-series products: the constraint pinning a_J sits
    // at stripped power 2J (even ansatz) or at most J + 4 (Taylor branch)
    const int max_pow = opt.even ? 2 * J : J + 2;

    // D = prod_{i<j} (zeta_i - zeta_j)^2 with zeta_{n+1} = 0
    MultiPoly D = MultiPoly::constant(cx.nv, Rational(1));
    for (int i = 1; i <= n + 1; ++i) {
        for (int j = i + 1; j <= n + 1; ++j) D = D * cx.diff(i, j) * cx.diff(i, j);
    }

    // Numerators N_i of the derivative terms over the common denominator D.
    // Even ansatz: T_i = d_i prod_{j != i} f(x_i - x_j)  (the symmetric form).
    // Taylor branch: the three-particle cyclic form
    //   T_1 = d_1[f(x1-x2) f(x3-x1)], T_2 = d_2[f(x2-x3) f(x1-x2)],
    //   T_3 = d_3[f(x3-x1) f(x2-x3)].
    std::vector<TSeries> N((size_t)n + 2);
    if (opt.even) {
        for (int i = 1; i <= n + 1; ++i) {
            TSeries acc;
            acc.add(0, MultiPoly::constant(cx.nv, Rational(1)));
            for (int j = 1; j <= n + 1; ++j) {
                if (j == i) continue;
                acc = ts_mul(acc, pair_series(cx, i, j, max_pow), max_pow);
            }
            MultiPoly extra = MultiPoly::constant(cx.nv, Rational(1));
            for (int k = 1; k <= n + 1; ++k) {
                for (int l = k + 1; l <= n + 1; ++l) {
                    if (k == i || l == i) continue;
                    extra = extra * cx.diff(k, l) * cx.diff(k, l);
                }
            }
            TSeries scaled;
            for (const auto& [p, m] : acc.c) scaled.add(p, m * extra);
            N[(size_t)i] = std::move(scaled);
        }
    } else {
        TSeries f12 = pair_series(cx, 1, 2, max_pow);
        TSeries f23 = pair_series(cx, 2, 3, max_pow);
        TSeries f31 = pair_series(cx, 3, 1, max_pow);
        auto times_sq = [&](const TSeries& s, int a, int b) {
            MultiPoly d2 = cx.diff(a, b) * cx.diff(a, b);
            TSeries r;
            for (const auto& [p, m] : s.c) r.add(p, m * d2);
            return r;
        };
        N[1] = times_sq(ts_mul(f12, f31, max_pow), 2, 3);
        N[2] = times_sq(ts_mul(f23, f12, max_pow), 3, 1);
        N[3] = times_sq(ts_mul(f31, f23, max_pow), 1, 2);
    }

    // R = sum_i d/dzeta_i [N_i/D]; translation invariance converts the
    // d/dzeta_{n+1} term into -sum_{i<=n} d/dzeta_i N_{n+1}/D, so only the kept
    // variables are differentiated:
    //   R * D^2 = sum_{i=1..n} [ d_i(N_i - N_{n+1}) D - (N_i - N_{n+1}) d_i D ]
    TSeries residual;
    for (int i = 1; i <= n; ++i) {
        MultiPoly dD = D.derivative(i - 1);
        TSeries diffN;
        for (const auto& [p, m] : N[(size_t)i].c) diffN.add(p, m);
        for (const auto& [p, m] : N[(size_t)n + 1].c) diffN.add(p, -m);
        for (const auto& [p, m] : diffN.c) {
            residual.add(p, m.derivative(i - 1) * D - m * dD);
        }
    }

    ExpandResult out;
    out.n = n;
    out.J = J;
    for (int m = 0; m <= J; ++m) out.names.push_back("a" + std::to_string(m));

    // split each t-coefficient into zeta-monomial classes and reduce
    for (const auto& [p, poly] : residual.c) {
        if (poly.is_zero()) continue;
        // group: zeta-part -> a-polynomial
        std::map<Expo, MultiPoly> classes;
        for (const auto& [e, coef] : poly.terms()) {
            Expo zpart(e.begin(), e.begin() + cx.nzeta);
            Expo apart((size_t)J + 1, 0);
            for (int m = 0; m <= J; ++m) apart[(size_t)m] = e[(size_t)cx.avar(m)];
            auto it = classes.find(zpart);
            if (it == classes.end()) it = classes.emplace(zpart, MultiPoly(J + 1)).first;
            it->second.add_term(apart, coef);
        }
        // proportionality classes of the a-polynomials
        std::vector<MultiPoly> reps;
        for (auto& [z, ap] : classes) {
            MultiPoly prim = ap.primitive_part();
            bool found = false;
            for (const auto& r : reps) {
                if (r == prim) {
                    found = true;
                    break;
                }
            }
            if (!found) reps.push_back(std::move(prim));
        }
        bool clean = reps.size() <= 1;
        int true_power = p - 2 * n; // undo the stripped pole offset
        for (auto& r : reps) {
            out.constraints.push_back({true_power, std::move(r), clean});
        }
    }
    std::stable_sort(out.constraints.begin(), out.constraints.end(),
                     [](const SeriesConstraint& a, const SeriesConstraint& b) { return a.t_power < b.t_power; });
    return out;
}

namespace {

// substitute known fractions into an a-polynomial
PolyFraction substitute_known(const MultiPoly& p, const std::map<int, PolyFraction>& known) {
    const int nv = p.nvars();
    PolyFraction acc = PolyFraction(MultiPoly(nv));
    for (const auto& [e, c] : p.terms()) {
        PolyFraction term = PolyFraction(MultiPoly::constant(nv, c));
        Expo rest(nv, 0);
        for (int v = 0; v < nv; ++v) {
            if (!e[(size_t)v]) continue;
            auto it = known.find(v);
            if (it == known.end()) {
                rest[(size_t)v] = e[(size_t)v];
            } else {
                for (int k = 0; k < e[(size_t)v]; ++k) term = term * it->second;
            }
        }
        MultiPoly mono(nv);
        mono.add_term(rest, Rational(1));
        acc = acc + term * PolyFraction(mono);
    }
    return acc;
}

// strip monomial variable factors (assumes the stripped symbols are nonzero)
MultiPoly strip_monomial(const MultiPoly& p) {
    if (p.is_zero()) return p;
    const int nv = p.nvars();
    Expo mn(nv, 0xffff);
    for (const auto& [e, c] : p.terms()) {
        for (int i = 0; i < nv; ++i) mn[(size_t)i] = std::min(mn[(size_t)i], e[(size_t)i]);
    }
    MultiPoly r(nv);
    Expo e2(nv, 0);
    for (const auto& [e, c] : p.terms()) {
        for (int i = 0; i < nv; ++i) e2[(size_t)i] = (uint16_t)(e[(size_t)i] - mn[(size_t)i]);
        r.add_term(e2, c);
    }
    return r.primitive_part();
}

// exact square root of a polynomial, if one exists
bool poly_sqrt(const MultiPoly& d, MultiPoly& root) {
    if (d.is_zero()) {
        root = d;
        return true;
    }
    // leading monomial must be a perfect square
    auto lead = *d.terms().rbegin();
    Expo e = lead.first;
    for (auto& x : e) {
        if (x % 2) return false;
        x = (uint16_t)(x / 2);
    }
    Rational c = lead.second;
    if (c.sign() < 0) return false;
    BigInt num = c.num_big(), den = c.den_big();
    auto isqrt = [](const BigInt& v, BigInt& r) {
        if (v.sign() < 0) return false;
        // Newton iteration on integers
        BigInt x = v, prev;
        if (v == BigInt(0) || v == BigInt(1)) {
            r = v;
            return true;
        }
        BigInt two(2);
        BigInt y = (x + BigInt(1)) / two;
        while (y < x) {
            x = y;
            y = (x + v / x) / two;
        }
        r = x;
        return x * x == v;
    };
    BigInt rn, rd;
    if (!isqrt(num, rn) || !isqrt(den, rd)) return false;
    MultiPoly s(d.nvars());
    s.add_term(e, Rational(rn, rd));
    MultiPoly twos0 = s.scaled(Rational(2));
    // descend: subtract and divide the residual's leading term by 2*s0
    MultiPoly r = d - s * s;
    int guard = (int)d.n_terms() * 4 + 16;
    while (!r.is_zero() && guard-- > 0) {
        auto rl = *r.terms().rbegin();
        Expo te = rl.first;
        const Expo& se = twos0.terms().begin()->first;
        for (int i = 0; i < d.nvars(); ++i) {
            if (te[(size_t)i] < se[(size_t)i]) return false;
            te[(size_t)i] = (uint16_t)(te[(size_t)i] - se[(size_t)i]);
        }
        MultiPoly t(d.nvars());
        t.add_term(te, rl.second / twos0.terms().begin()->second);
        s += t;
        r = d - s * s;
    }
    if (!r.is_zero()) return false;
    root = s;
    return true;
}

// split P into pairwise products of variable-linear factors where possible
std::vector<MultiPoly> split_factors(const MultiPoly& p) {
    MultiPoly q = strip_monomial(p);
    std::vector<int> lin;
    for (int v = 0; v < q.nvars(); ++v) {
        if (q.degree(v) == 1) lin.push_back(v);
    }
    for (size_t x = 0; x < lin.size(); ++x) {
        for (size_t y = 0; y < lin.size(); ++y) {
            if (x == y) continue;
            int v1 = lin[x], v2 = lin[y];
            // q = A v1 v2 + B v1 + C v2 + E factors as (A v1 + C)(...) when AE = BC
            auto in_v1 = q.coeffs_in_var(v1);
            MultiPoly hi = in_v1.count(1) ? in_v1[1] : MultiPoly(q.nvars());
            MultiPoly lo = in_v1.count(0) ? in_v1[0] : MultiPoly(q.nvars());
            auto hi2 = hi.coeffs_in_var(v2);
            auto lo2 = lo.coeffs_in_var(v2);
            MultiPoly A = hi2.count(1) ? hi2[1] : MultiPoly(q.nvars());
            MultiPoly B = hi2.count(0) ? hi2[0] : MultiPoly(q.nvars());
            MultiPoly C = lo2.count(1) ? lo2[1] : MultiPoly(q.nvars());
            MultiPoly E = lo2.count(0) ? lo2[0] : MultiPoly(q.nvars());
            if (A.is_zero() || C.is_zero()) continue;
            if (!(A * E == B * C)) continue;
            MultiPoly f1 = strip_monomial((MultiPoly::var(q.nvars(), v1) * A + C).primitive_part());
            MultiPoly f2(q.nvars());
            if (!MultiPoly::try_exact_divide(q, f1, f2)) continue;
            auto rest = split_factors(f2.primitive_part());
            std::vector<MultiPoly> out = {f1};
            out.insert(out.end(), rest.begin(), rest.end());
            return out;
        }
    }
    // quadratic in a single variable with a perfect-square discriminant
    for (int v = 0; v < q.nvars(); ++v) {
        if (q.degree(v) != 2) continue;
        auto grouped = q.coeffs_in_var(v);
        MultiPoly al = grouped.count(2) ? grouped[2] : MultiPoly(q.nvars());
        MultiPoly be = grouped.count(1) ? grouped[1] : MultiPoly(q.nvars());
        MultiPoly ga = grouped.count(0) ? grouped[0] : MultiPoly(q.nvars());
        if (al.is_zero()) continue;
        MultiPoly disc = be * be - al * ga.scaled(Rational(4));
        MultiPoly sig(q.nvars());
        if (!poly_sqrt(disc, sig)) continue;
        MultiPoly f1 =
            strip_monomial((al.scaled(Rational(2)) * MultiPoly::var(q.nvars(), v) + be - sig).primitive_part());
        MultiPoly f2(q.nvars());
        if (!MultiPoly::try_exact_divide(q, f1, f2)) continue;
        auto rest = split_factors(f2.primitive_part());
        std::vector<MultiPoly> out = {f1};
        out.insert(out.end(), rest.begin(), rest.end());
        return out;
    }
    return {q};
}

int highest_linear_var(const MultiPoly& p, const std::vector<bool>& eligible) {
    int best = -1;
    for (int v = 0; v < p.nvars(); ++v) {
        if (!eligible[(size_t)v]) continue;
        if (p.degree(v) == 1) best = v;
    }
    return best;
}

// is the coefficient of the candidate variable a pure monomial (generically nonzero)?
bool monomial_coefficient(const MultiPoly& f, int v) {
    auto grouped = f.coeffs_in_var(v);
    auto it = grouped.find(1);
    return it != grouped.end() && it->second.n_terms() == 1;
}

struct Level {
    int t_power;
    std::vector<const MultiPoly*> polys;
};

// impose factor = 0 on the state by solving for its highest linear variable
void impose_factor(RecurrenceState& st, const MultiPoly& f, int t_power,
                   const std::vector<MultiPoly>& factors, int chosen) {
    const int nv = f.nvars();
    st.events.push_back({t_power, factors, chosen});
    std::vector<bool> elig(nv, false);
    for (int v = 0; v < nv; ++v) elig[(size_t)v] = f.depends_on(v) && !st.known.count(v);
    int v = highest_linear_var(f, elig);
    if (v < 0) {
        st.consistent = false;
        st.offending_index = t_power;
        return;
    }
    auto grouped = f.coeffs_in_var(v);
    PolyFraction num = substitute_known(-grouped[0], st.known);
    PolyFraction den = substitute_known(grouped[1], st.known);
    st.known[v] = num / den;
    st.free_symbols.erase(std::remove(st.free_symbols.begin(), st.free_symbols.end(), v),
                          st.free_symbols.end());
    for (auto& [idx, kf] : st.known) {
        if (idx == v) continue;
        kf = substitute_known(kf.num(), st.known) / substitute_known(kf.den(), st.known);
    }
}

} // namespace

std::vector<RecurrenceState> solve_recurrence(int n, int J, const ExpandOptions& opt) {
    ExpandResult ex = expand_pde(n, J, opt);
    const int nv = J + 1;

    std::vector<Level> levels;
    for (const auto& c : ex.constraints) {
        if (levels.empty() || levels.back().t_power != c.t_power) levels.push_back({c.t_power, {}});
        levels.back().polys.push_back(&c.poly);
    }

    RecurrenceState init;
    init.names = ex.names;
    if (opt.taylor) {
        init.free_symbols = {2, 3, 4, 5, 6};
        init.known[0] = PolyFraction(MultiPoly(nv));
        init.known[1] = PolyFraction(MultiPoly(nv));
    } else {
        init.free_symbols = {0, 1, 2, 3};
    }

    std::vector<RecurrenceState> done;
    std::vector<std::pair<RecurrenceState, size_t>> work;
    work.push_back({init, 0});

    while (!work.empty()) {
        auto [st, at] = work.back();
        work.pop_back();
        bool forked = false;
        for (size_t li = at; li < levels.size() && st.consistent && !forked; ++li) {
            const Level& lv = levels[li];
            std::vector<MultiPoly> conditions;
            for (const MultiPoly* cp : lv.polys) {
                if (!st.consistent) break;
                PolyFraction sub = substitute_known(*cp, st.known);
                MultiPoly num = sub.num();
                if (num.is_zero()) continue;
                num = strip_monomial(num);

                std::vector<bool> unknown(nv, false), free_sym(nv, false);
                for (int f : st.free_symbols) free_sym[(size_t)f] = true;
                bool has_unknown = false;
                for (int v = 0; v < nv; ++v) {
                    unknown[(size_t)v] = num.depends_on(v) && !free_sym[(size_t)v] && !st.known.count(v);
                    has_unknown = has_unknown || unknown[(size_t)v];
                }
                if (has_unknown) {
                    int v = highest_linear_var(num, unknown);
                    if (v >= 0 && monomial_coefficient(num, v)) {
                        auto grouped = num.coeffs_in_var(v);
                        st.known[v] = PolyFraction(-grouped[0], grouped[1]);
                        continue;
                    }
                }
                conditions.push_back(std::move(num));
            }
            if (!st.consistent || conditions.empty()) continue;

            // the genuine relation is the common factor of every condition at the level
            MultiPoly G = conditions[0];
            for (size_t k = 1; k < conditions.size() && G.total_degree() > 0; ++k) {
                G = MultiPoly::gcd(G, conditions[k]);
            }
            G = strip_monomial(G);
            if (G.total_degree() <= 0) {
                st.consistent = false;
                st.offending_index = lv.t_power;
                break;
            }
            auto factors = split_factors(G);
            if (factors.size() == 1) {
                impose_factor(st, factors[0], lv.t_power, factors, 0);
                continue;
            }
            for (size_t fi = 0; fi < factors.size(); ++fi) {
                RecurrenceState branch = st;
                impose_factor(branch, factors[(size_t)fi], lv.t_power, factors, (int)fi);
                work.push_back({std::move(branch), li + 1});
            }
            forked = true;
        }
        if (!forked) done.push_back(std::move(st));
    }
    return done;
}

TaylorReport taylor_branch(int J) {
    ExpandOptions opt;
    opt.even = false;
    opt.taylor = true;
    auto states = solve_recurrence(2, J, opt);
    TaylorReport rep;
    // the forced condition appears as the first event among the free symbols
    const int nv = J + 1;
    MultiPoly expect = MultiPoly::var(nv, 3) * MultiPoly::var(nv, 5) - MultiPoly::var(nv, 4).pow(2);
    expect = expect.primitive_part();
    for (const auto& st : states) {
        for (const auto& ev : st.events) {
            MultiPoly cond = ev.factors[(size_t)std::max(ev.chosen, 0)];
            if (rep.condition.is_zero() || cond == expect) rep.condition = cond;
            if (cond == expect) {
                rep.condition_is_a3a5_a4sq = true;
                rep.state = st;
                return rep;
            }
        }
        rep.state = st;
    }
    return rep;
}

double verify_method2_eq(const SolutionSpec& spec, double z) {
    double a0 = 0.0, a1 = 0.0;
    if (spec.has_double_pole()) {
        auto L = laurent_coefficients(spec, 1);
        a0 = L.a[0].to_double();
        a1 = L.a[1].to_double();
    } else {
        a1 = evaluate(spec, cplx(0.0, 0.0)).real(); // pole-free: a0 = 0, a1 = f(0)
    }
    CJet j = evaluate_jet(spec, cplx(z, 0.0));
    cplx f = j.c[0], f1 = j.deriv(1), f3 = j.deriv(3);
    cplx t1 = a0 * f3, t2 = 12.0 * a1 * f1, t3 = -12.0 * f * f1;
    double scale = std::max({std::abs(t1), std::abs(t2), std::abs(t3)});
    if (scale == 0.0) return 0.0;
    return std::abs(t1 + t2 + t3) / scale;
}

std::string recurrence_to_json(const ExpandResult& ex, const std::vector<RecurrenceState>& states) {
    nlohmann::json out;
    out["n"] = ex.n;
    out["J"] = ex.J;
    nlohmann::json cj = nlohmann::json::array();
    for (const auto& c : ex.constraints) {
        nlohmann::json e;
        e["t_power"] = c.t_power;
        e["constraint"] = c.poly.to_string(ex.names);
        e["factor_clean"] = c.factor_clean;
        cj.push_back(e);
    }
    out["constraints"] = cj;
    nlohmann::json sj = nlohmann::json::array();
    for (const auto& st : states) {
        nlohmann::json s;
        s["consistent"] = st.consistent;
        nlohmann::json frees = nlohmann::json::array();
        for (int f : st.free_symbols) frees.push_back(st.names[(size_t)f]);
        s["free"] = frees;
        nlohmann::json kn = nlohmann::json::object();
        for (const auto& [idx, val] : st.known) kn[st.names[(size_t)idx]] = val.to_string(st.names);
        s["solved"] = kn;
        nlohmann::json evs = nlohmann::json::array();
        for (const auto& ev : st.events) {
            nlohmann::json e;
            e["t_power"] = ev.t_power;
            nlohmann::json fs = nlohmann::json::array();
            for (const auto& f : ev.factors) fs.push_back(f.to_string(st.names));
            e["factors"] = fs;
            e["chosen"] = ev.chosen;
            evs.push_back(e);
        }
        s["events"] = evs;
        sj.push_back(s);
    }
    out["states"] = sj;
    return out.dump(2);
}

} // namespace feq
