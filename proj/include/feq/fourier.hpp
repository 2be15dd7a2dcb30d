#ifndef FEQ_FOURIER_HPP
#define FEQ_FOURIER_HPP

#include <map>
#include <string>
#include <vector>

#include "feq/rational.hpp"
#include "feq/solution.hpp"

namespace feq {

// Closed-form transform-side solutions.
enum class TransformKind {
    Coth,     // pi k coth(pi k / a0)
    Tanh,     // pi k tanh(k a2 / (2 pi))
    AbsPlus,  // +pi |k|
    AbsMinus, // -pi |k|
    Const,    // a0
    Pair,     // f1 +- k f2 with f1hat(k) = 6 a2 k e^{4 a k}/(e^{6 a k}-1), a = a2/a1
};

struct TransformSpec {
    TransformKind kind = TransformKind::Coth;
    double a0 = 1.0;      // Coth / Const parameter
    double a1 = -2.0;     // Pair: f1(0)
    double a2 = 1.0;      // Tanh / Pair parameter
    int pair_index = 1;   // Pair: which of the two combinations

    bool even() const { return kind != TransformKind::Pair; }
};

double evaluate_fhat(const TransformSpec& ts, double k);
double evaluate_fhat_deriv(const TransformSpec& ts, double k);
// the even/odd parts of the Pair kind
double pair_f1(const TransformSpec& ts, double k);
double pair_f2(const TransformSpec& ts, double k);
double pair_f1_deriv(const TransformSpec& ts, double k);
double pair_f2_deriv(const TransformSpec& ts, double k);

// normalized transform-side functional for even transforms
double s_hat_n(const TransformSpec& ts, const std::vector<double>& k);
// the unnormalized multilinear form S_n
double s_n_form(const TransformSpec& ts, const std::vector<double>& k);

struct ReductionChecks {
    double lemma1 = 0; // |S_{n+2}|k_{n+2}=-k_{n+1}| - (fhat^2 - pi^2 k^2) S_n|
    double lemma2 = 0; // |S_{n+1}|k_{n+1}=0| - fhat(0) S_n|
};
ReductionChecks s_n_reduction_checks(const TransformSpec& ts, int n, const std::vector<double>& k);

struct TransformOde {
    double r58 = 0;  // a0 k fhat' - a0 fhat + fhat^2 - pi^2 k^2
    double r48 = 0;  // 2 (f2 - a2) f1 - k a1 f2'
    double r49 = 0;  // k a1 f1' + f1^2 + k^2 f2^2 - f1 a1 + 2 k^2 a2 f2
    double r412 = 0; // 3 a1^2 f2'^2 - 4 (a2 - f2)(c a2^3 + f2^3 + 3 a2 f2^2)
};
// pair_c: the integration constant c of (the once-integrated equation); 0 for the
// decaying pair, -4 for the cot-type branch with f2 == a2
TransformOde ode_residual_transform(const TransformSpec& ts, double k, double pair_c = 0.0);

// Discrete coefficient sequences a_K.
enum class DiscreteKind { General, EvenPole, EvenPoleA0Zero };

struct FourierSeq {
    std::map<long, cplx> a;       // K -> coefficient (a_0 stored only if pinned)
    bool even = false;
    bool a0_free = true;
    // resummation metadata: a_K ~ pole_slope * pi |K| e^{i K phase} + decaying
    double pole_slope = 0.0;
    double phase = 0.0;
    std::map<long, Rational> exact; // exact values when the solve was rational (b_K units of pi K)
    std::string to_json() const;
};

struct DiscreteSolveResult {
    std::vector<FourierSeq> branches;   // one per a2 alternative (EvenPoleA0Zero), else one
    std::vector<Rational> a2_choices;   // detected branch values of a2/(2 pi)
    bool conflict = false;
    long witness_K = 0, witness_L = 0;  // an offending equation if conflict
};

// seeds: General needs {-2,-1,1}; EvenPole/EvenPoleA0Zero need beta (rational)
DiscreteSolveResult discrete_solve_general(const std::map<long, Rational>& seeds, int N);
DiscreteSolveResult discrete_solve_even_pole(const Rational& beta, int N);
DiscreteSolveResult discrete_solve_a0zero(const Rational& beta, int N);

// multiply by e^{2 pi i K m / 3}; verifies the result against the general recurrence
FourierSeq shift_family(const FourierSeq& seq, int m);
// largest residual of the general recurrence over |K|,|L| <= N
double discrete_residual(const FourierSeq& seq, int N);
// largest residual of the even recurrence with the pi^2 K L (K+L) source term
double discrete_residual_even_pole(const FourierSeq& seq, int N);

// (1/2pi) sum a_K e^{iKx}; the linear-growth part is resummed in closed form
cplx resum(const FourierSeq& seq, double x, int cutoff);

// generalized Fourier transform via indented contours
struct GeneralizedFT {
    double value = 0;       // (fhat_U + fhat_L)/2
    double residue_gap = 0; // fhat_L - fhat_U, should be 2 pi k * (double-pole coefficient)
};
GeneralizedFT generalized_ft(const SolutionSpec& spec, double k);
cplx generalized_ft_complex(const SolutionSpec& spec, double k); // for complex-valued f

} // namespace feq

#endif
