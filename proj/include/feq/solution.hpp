#ifndef FEQ_SOLUTION_HPP
#define FEQ_SOLUTION_HPP

#include <map>
#include <string>
#include <vector>

#include "feq/elliptic.hpp"
#include "feq/jet.hpp"
#include "feq/rational.hpp"

namespace feq {

enum class Family {
    Linear,        // a + b z
    Exponential,   // a + b e^{c z}
    Weierstrass,   // a + b p(z + d; g2, g3)
    H1,            // sqrt((p-e2)(p-e3)) = b dn(u)/sn^2(u)
    H2,            // sqrt((p-e1)(p-e3)) = b cn(u)/sn^2(u)
    H3,            // sqrt((p-e1)(p-e2)) = b cn(u)dn(u)/sn^2(u)
    Hyperbolic,    // beta cosh(alpha z)/sinh^2(alpha z)
    Trigonometric, // 3 b1 / sin^2(sqrt(3 b1/b0) z)
    InverseSquare, // b0 / z^2
    SinhShift,     // amp / sinh^2(alpha z - i shift pi/3), shift in {-1,0,1}
};

const char* family_name(Family f);
Family family_from_name(const std::string& s);

// A tagged solution family with exact rational parameters (exact values feed the
// Laurent oracles; evaluation uses their double views).
struct SolutionSpec {
    Family family = Family::InverseSquare;
    std::map<std::string, Rational> params;

    double pd(const std::string& key, double def = 0.0) const;
    Rational pq(const std::string& key) const; // throws if missing

    static SolutionSpec linear(const Rational& a, const Rational& b);
    static SolutionSpec exponential(const Rational& a, const Rational& b, const Rational& c);
    static SolutionSpec weierstrass(const Rational& a, const Rational& b, const Rational& g2, const Rational& g3,
                                    double d = 0.0);
    static SolutionSpec h_family(int index, double modulus);
    static SolutionSpec h_family_roots(int index, const Rational& e1, const Rational& e2, const Rational& e3);
    static SolutionSpec hyperbolic(const Rational& beta, const Rational& alpha2);
    static SolutionSpec trigonometric(const Rational& b0, const Rational& b1);
    static SolutionSpec inverse_square(const Rational& b0);
    static SolutionSpec sinh_shift(const Rational& amp, const Rational& alpha, int shift_thirds);

    bool is_even() const;
    bool has_double_pole() const;
    double real_period() const; // 0 for aperiodic families
    EllipticParams elliptic() const;

    std::string to_json() const;
    static SolutionSpec from_json(const std::string& text);
};

using CJet = Jet<cplx, 6>;

// value and derivatives; throws pole_error near a pole of the family
cplx evaluate(const SolutionSpec& spec, cplx z);
CJet evaluate_jet(const SolutionSpec& spec, cplx z);
std::vector<cplx> derivatives(const SolutionSpec& spec, cplx z, int order);

double pole_distance(const SolutionSpec& spec, cplx z);

// Exact Laurent data a_j in the c_{2j-2} convention: f = sum a_j c_{2j-2} z^{2j-2}.
struct LaurentCoeffs {
    int start_power = -2;
    std::vector<Rational> a; // a[j], j = 0..J
};
LaurentCoeffs laurent_coefficients(const SolutionSpec& spec, int J);

// Largest pairwise discrepancy between the four h representations at z.
double representation_chain_check(int h_index, double z, const EllipticParams& p);

// f1(z) = sqrt(b0^2 W^2 + 2 b0 b1 W - b1^2 + (5/3) b0 b2), W the Weierstrass
// function with the invariants induced by (b0,b1,b2). Throws std::domain_error
// outside the real window.
double quadratic_in_p_form(double b0, double b1, double b2, double z);
EllipticParams quadratic_in_p_params(double b0, double b1, double b2);

} // namespace feq

#endif
