#ifndef FEQ_DYNAMICS_HPP
#define FEQ_DYNAMICS_HPP

#include <functional>
#include <string>
#include <vector>

#include "feq/elliptic.hpp"
#include "feq/solution.hpp"

namespace feq {

struct PhaseState {
    std::vector<double> x; // positions of the n+1 particles
    std::vector<double> p; // conjugate momenta
};

struct ObservableEval {
    double value = 0;
    std::vector<double> dx, dp;
};

// value-and-gradient functional on phase space
using Observable = std::function<ObservableEval(const PhaseState&)>;

// Relativistic-chain observables with F = sqrt(f): H = sum cosh(p_j) prod F,
// P = sum sinh(p_j) prod F, B = -sum x_j. Throws std::domain_error outside the
// window where f > 0 on every separation.
struct RSObservables {
    Observable H, P, B;
};
RSObservables rs_observables(const SolutionSpec& spec);

// H = 1/2 sum p^2 + 1/6 sum_{i != j} p(q_i - q_j)
Observable cm_hamiltonian(const EllipticParams& params);
Observable total_momentum();
Observable coordinate(int idx);
Observable momentum(int idx);

double poisson_bracket(const Observable& A, const Observable& B, const PhaseState& s);
// |{A,B}| scaled by the sum of the term magnitudes
double poisson_bracket_normalized(const Observable& A, const Observable& B, const PhaseState& s);

struct TrajectorySample {
    double t = 0;
    PhaseState state;
    double H = 0, P = 0;
};

struct DriftReport {
    std::vector<TrajectorySample> samples;
    double max_dH = 0, max_dP = 0;
    bool truncated = false;
    double t_end = 0;
};

// classical RK4 on Hamilton's equations; monitors H and P, truncates when any
// pairwise separation approaches a pole of the guard family
DriftReport integrate(const PhaseState& init, const Observable& H, const Observable& P, double dt,
                      int steps, const SolutionSpec* pole_guard = nullptr, double guard = 1e-3,
                      int sample_every = 100);

std::string trajectory_csv(const DriftReport& r);
std::string drift_json(const DriftReport& r);

} // namespace feq

#endif
