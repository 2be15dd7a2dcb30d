#ifndef FEQ_RESIDUAL_HPP
#define FEQ_RESIDUAL_HPP

#include <array>
#include <string>
#include <vector>

#include "feq/solution.hpp"

namespace feq {

struct SamplePlan {
    int n = 2;            // equation index: n+1 particles
    int count = 100;
    double delta = 1e-3;  // guard distance from singular hyperplanes (mod period)
    double box_lo = -5.0; // sampling interval for aperiodic families
    double box_hi = 5.0;
    uint64_t seed = 1;
    int threads = 0;      // 0: FE_THREADS / hardware default
};

struct WorstSample {
    std::vector<double> x;
    double normalized = 0;
};

struct Verdict {
    double max_abs_residual = 0;
    double normalized = 0; // worst normalized residual over the plan
    bool solves = false;
    bool indeterminate = false;
    std::vector<WorstSample> failures;
};

std::string verdict_to_json(const Verdict& v, const SolutionSpec& spec, int n);

// raw residual of the functional equation at x[0..n], analytic product rule
cplx pde_residual(const SolutionSpec& spec, int n, const std::vector<double>& x);
// residual scaled by the largest derivative-term magnitude
double pde_residual_normalized(const SolutionSpec& spec, int n, const std::vector<double>& x);
// the evenness-rearranged three-particle form
cplx pde_residual_cyclic3(const SolutionSpec& spec, const std::array<double, 3>& x);

// 3x3 determinant form at (u, v, -u-v); raw magnitude and term-scaled value
double determinant_residual(const SolutionSpec& spec, double u, double v);
double determinant_residual_normalized(const SolutionSpec& spec, double u, double v);

struct OdeResiduals {
    double r16 = 0; // f' f''' - f''^2, term-normalized
    double r18 = 0; // f'^2 f^v - 3 f' f'' f^iv + 3 f''^2 f''' - f' f'''^2, term-normalized
};
OdeResiduals ode_residuals(const SolutionSpec& spec, double z);

struct FirstIntegralFit {
    double A = 0, B = 0, C = 0, D = 0;
    double validation_residual = 0;
    bool degenerate = false;
};
// least-squares (A,B,C,D) in f'^2 + A f^3 + B f^2 + C f + D = 0 over sample_zs,
// validated on midpoints of the sample list
FirstIntegralFit fit_first_integral(const SolutionSpec& spec, const std::vector<double>& sample_zs);

struct OdeA1Residuals {
    double r11 = 0; // 120 a2 f' f + 5 a0 f''' f'' + 60 f'' f' a1 - a0 f^v f
    double r12 = 0; // the thirteen-term companion equation
};
OdeA1Residuals odeA1_residuals(const SolutionSpec& spec, double z, const std::array<double, 4>& a);

Verdict classify(const SolutionSpec& spec, int n, const SamplePlan& plan);

} // namespace feq

#endif
