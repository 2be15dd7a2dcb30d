#include "feq/dynamics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace feq {

namespace {

struct PairF {
    double F;   // sqrt(f)
    double L;   // F'/F = f'/(2f)
};

// F and its logarithmic derivative on every ordered pair
std::vector<PairF> pair_sqrt(const SolutionSpec& spec, const std::vector<double>& x) {
    const int m = (int)x.size();
    std::vector<PairF> out((size_t)m * m);
    for (int j = 0; j < m; ++j) {
        for (int k = 0; k < m; ++k) {
            if (j == k) continue;
            CJet jet = evaluate_jet(spec, cplx(x[(size_t)j] - x[(size_t)k], 0.0));
            double f = jet.c[0].real(), fp = jet.c[1].real();
            if (!(f > 0.0)) {
                throw std::domain_error("rs_observables: f not positive on a separation (square-root window)");
            }
            out[(size_t)(j * m + k)] = {std::sqrt(f), fp / (2.0 * f)};
        }
    }
    return out;
}

ObservableEval rs_eval(const SolutionSpec& spec, const PhaseState& s, bool use_cosh) {
    const int m = (int)s.x.size();
    auto pf = pair_sqrt(spec, s.x);
    std::vector<double> W((size_t)m, 1.0);
    for (int j = 0; j < m; ++j) {
        for (int k = 0; k < m; ++k) {
            if (k != j) W[(size_t)j] *= pf[(size_t)(j * m + k)].F;
        }
    }
    ObservableEval e;
    e.dx.assign((size_t)m, 0.0);
    e.dp.assign((size_t)m, 0.0);
    for (int j = 0; j < m; ++j) {
        double cj = use_cosh ? std::cosh(s.p[(size_t)j]) : std::sinh(s.p[(size_t)j]);
        double sj = use_cosh ? std::sinh(s.p[(size_t)j]) : std::cosh(s.p[(size_t)j]);
        e.value += cj * W[(size_t)j];
        e.dp[(size_t)j] = sj * W[(size_t)j];
    }
    for (int m_idx = 0; m_idx < m; ++m_idx) {
        double acc = 0.0;
        // own product: d/dx_m W_m = W_m sum_k L(x_m - x_k)
        double cm = use_cosh ? std::cosh(s.p[(size_t)m_idx]) : std::sinh(s.p[(size_t)m_idx]);
        double own = 0.0;
        for (int k = 0; k < m; ++k) {
            if (k != m_idx) own += pf[(size_t)(m_idx * m + k)].L;
        }
        acc += cm * W[(size_t)m_idx] * own;
        // foreign products: d/dx_m W_j = -W_j L(x_j - x_m)
        for (int j = 0; j < m; ++j) {
            if (j == m_idx) continue;
            double cjv = use_cosh ? std::cosh(s.p[(size_t)j]) : std::sinh(s.p[(size_t)j]);
            acc -= cjv * W[(size_t)j] * pf[(size_t)(j * m + m_idx)].L;
        }
        e.dx[(size_t)m_idx] = acc;
    }
    return e;
}

} // namespace

RSObservables rs_observables(const SolutionSpec& spec) {
    RSObservables obs;
    obs.H = [spec](const PhaseState& s) { return rs_eval(spec, s, true); };
    obs.P = [spec](const PhaseState& s) { return rs_eval(spec, s, false); };
    obs.B = [](const PhaseState& s) {
        ObservableEval e;
        const size_t m = s.x.size();
        e.dx.assign(m, -1.0);
        e.dp.assign(m, 0.0);
        for (double xi : s.x) e.value -= xi;
        return e;
    };
    return obs;
}

Observable cm_hamiltonian(const EllipticParams& params) {
    return [params](const PhaseState& s) {
        const int m = (int)s.x.size();
        ObservableEval e;
        e.dx.assign((size_t)m, 0.0);
        e.dp.assign((size_t)m, 0.0);
        for (int i = 0; i < m; ++i) {
            e.value += 0.5 * s.p[(size_t)i] * s.p[(size_t)i];
            e.dp[(size_t)i] = s.p[(size_t)i];
        }
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                if (i == j) continue;
                cplx P, Pp;
                weierstrass_p_pair(cplx(s.x[(size_t)i] - s.x[(size_t)j], 0.0), params, P, Pp);
                e.value += P.real() / 6.0;
                e.dx[(size_t)i] += Pp.real() / 6.0;
                e.dx[(size_t)j] -= Pp.real() / 6.0;
            }
        }
        return e;
    };
}

Observable total_momentum() {
    return [](const PhaseState& s) {
        ObservableEval e;
        const size_t m = s.x.size();
        e.dx.assign(m, 0.0);
        e.dp.assign(m, 1.0);
        for (double pi : s.p) e.value += pi;
        return e;
    };
}

Observable coordinate(int idx) {
    return [idx](const PhaseState& s) {
        ObservableEval e;
        e.dx.assign(s.x.size(), 0.0);
        e.dp.assign(s.x.size(), 0.0);
        e.value = s.x[(size_t)idx];
        e.dx[(size_t)idx] = 1.0;
        return e;
    };
}

Observable momentum(int idx) {
    return [idx](const PhaseState& s) {
        ObservableEval e;
        e.dx.assign(s.x.size(), 0.0);
        e.dp.assign(s.x.size(), 0.0);
        e.value = s.p[(size_t)idx];
        e.dp[(size_t)idx] = 1.0;
        return e;
    };
}

double poisson_bracket(const Observable& A, const Observable& B, const PhaseState& s) {
    ObservableEval a = A(s), b = B(s);
    double acc = 0.0;
    for (size_t j = 0; j < s.x.size(); ++j) {
        acc += a.dx[j] * b.dp[j] - a.dp[j] * b.dx[j];
    }
    return acc;
}

double poisson_bracket_normalized(const Observable& A, const Observable& B, const PhaseState& s) {
    ObservableEval a = A(s), b = B(s);
    double acc = 0.0, scale = 0.0;
    for (size_t j = 0; j < s.x.size(); ++j) {
        double t1 = a.dx[j] * b.dp[j], t2 = a.dp[j] * b.dx[j];
        acc += t1 - t2;
        scale = std::max({scale, std::abs(t1), std::abs(t2)});
    }
    return scale > 0.0 ? std::abs(acc) / scale : 0.0;
}

DriftReport integrate(const PhaseState& init, const Observable& H, const Observable& P, double dt,
                      int steps, const SolutionSpec* pole_guard, double guard, int sample_every) {
    const size_t m = init.x.size();
    DriftReport rep;
    PhaseState s = init;

    auto rhs = [&](const PhaseState& st, std::vector<double>& kx, std::vector<double>& kp) {
        ObservableEval e = H(st);
        kx = e.dp;
        kp.assign(m, 0.0);
        for (size_t i = 0; i < m; ++i) kp[i] = -e.dx[i];
    };
    auto guarded = [&](const PhaseState& st) {
        if (!pole_guard) return true;
        double period = pole_guard->real_period();
        for (size_t i = 0; i < m; ++i) {
            for (size_t j = i + 1; j < m; ++j) {
                double sep = st.x[i] - st.x[j];
                if (period > 0) sep -= period * std::floor(sep / period + 0.5);
                if (std::abs(sep) < guard) return false;
            }
        }
        return true;
    };

    double H0 = H(s).value, P0 = P(s).value;
    rep.samples.push_back({0.0, s, H0, P0});
    std::vector<double> kx1, kp1, kx2, kp2, kx3, kp3, kx4, kp4;
    PhaseState tmp = s;
    for (int step = 1; step <= steps; ++step) {
        try {
        rhs(s, kx1, kp1);
        for (size_t i = 0; i < m; ++i) {
            tmp.x[i] = s.x[i] + 0.5 * dt * kx1[i];
            tmp.p[i] = s.p[i] + 0.5 * dt * kp1[i];
        }
        rhs(tmp, kx2, kp2);
        for (size_t i = 0; i < m; ++i) {
            tmp.x[i] = s.x[i] + 0.5 * dt * kx2[i];
            tmp.p[i] = s.p[i] + 0.5 * dt * kp2[i];
        }
        rhs(tmp, kx3, kp3);
        for (size_t i = 0; i < m; ++i) {
            tmp.x[i] = s.x[i] + dt * kx3[i];
            tmp.p[i] = s.p[i] + dt * kp3[i];
        }
        rhs(tmp, kx4, kp4);
        for (size_t i = 0; i < m; ++i) {
            s.x[i] += dt / 6.0 * (kx1[i] + 2 * kx2[i] + 2 * kx3[i] + kx4[i]);
            s.p[i] += dt / 6.0 * (kp1[i] + 2 * kp2[i] + 2 * kp3[i] + kp4[i]);
        }
        } catch (const std::exception&) {
            // pole or square-root-window exit mid-step
            rep.truncated = true;
            rep.t_end = step * dt;
            break;
        }
        if (!guarded(s)) {
            rep.truncated = true;
            rep.t_end = step * dt;
            break;
        }
        double Hc, Pc;
        try {
            Hc = H(s).value;
            Pc = P(s).value;
        } catch (const std::exception&) {
            rep.truncated = true;
            rep.t_end = step * dt;
            break;
        }
        rep.max_dH = std::max(rep.max_dH, std::abs(Hc - H0));
        rep.max_dP = std::max(rep.max_dP, std::abs(Pc - P0));
        if (step % sample_every == 0 || step == steps) {
            rep.samples.push_back({step * dt, s, Hc, Pc});
        }
        rep.t_end = step * dt;
    }
    return rep;
}

std::string trajectory_csv(const DriftReport& r) {
    std::ostringstream os;
    os.precision(17);
    os << "t";
    if (!r.samples.empty()) {
        for (size_t i = 0; i < r.samples[0].state.x.size(); ++i) os << ",x" << i;
        for (size_t i = 0; i < r.samples[0].state.p.size(); ++i) os << ",p" << i;
    }
    os << ",H,P\n";
    for (const auto& s : r.samples) {
        os << s.t;
        for (double v : s.state.x) os << "," << v;
        for (double v : s.state.p) os << "," << v;
        os << "," << s.H << "," << s.P << "\n";
    }
    return os.str();
}

std::string drift_json(const DriftReport& r) {
    nlohmann::json j;
    j["max_dH"] = r.max_dH;
    j["max_dP"] = r.max_dP;
    j["truncated"] = r.truncated;
    j["t_end"] = r.t_end;
    j["samples"] = r.samples.size();
    return j.dump();
}

} // namespace feq
