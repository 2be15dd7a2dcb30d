#ifndef FEQ_ELLIPTIC_HPP
#define FEQ_ELLIPTIC_HPP

#include <array>
#include <complex>
#include <stdexcept>

namespace feq {

using cplx = std::complex<double>;

struct pole_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Real-lattice Weierstrass data: invariants, roots, half-periods, modulus, nome.
// omega is the real half-period, omega_prime the (positive) imaginary part of the
// second half-period. Degenerate lattices carry an infinity in the corresponding slot.
struct EllipticParams {
    double g2 = 0, g3 = 0;
    double e1 = 0, e2 = 0, e3 = 0;
    double omega = 0;
    double omega_prime = 0;
    double k = 0;
    double q = 0;

    static EllipticParams from_invariants(double g2, double g3);
    static EllipticParams from_modulus(double k);                        // normalized to e1 - e3 = 1
    static EllipticParams from_modulus_period(double k, double omega);   // scaled to the given half-period
    static EllipticParams from_nome_period(double q, double omega);

    bool omega_finite() const { return std::isfinite(omega); }
    bool omega_prime_finite() const { return std::isfinite(omega_prime); }
    bool degenerate() const { return !omega_finite() || !omega_prime_finite(); }
};

// Descending real roots of 4e^3 - g2 e - g3 = 0. Throws std::domain_error when
// the discriminant g2^3 - 27 g3^2 is negative (complex root pair).
std::array<double, 3> weierstrass_roots(double g2, double g3);

double agm(double a, double b);
double ellint_K(double k);            // complete elliptic integral of the first kind
double nome_from_modulus(double k);   // exp(-pi K'/K); 0 at k=0, 1 at k=1
double modulus_from_nome(double q);   // theta2^2/theta3^2 at v=0

// Jacobi theta functions, series convention
//   theta1(x,q) = 2 sum (-1)^n q^{(n+1/2)^2} sin((2n+1)x)
//   theta2(x,q) = 2 sum q^{(n+1/2)^2} cos((2n+1)x)
//   theta3(x,q) = 1 + 2 sum q^{n^2} cos(2nx)
//   theta4(x,q) = 1 + 2 sum (-1)^n q^{n^2} cos(2nx)
double theta(int j, double x, double q);
cplx theta_c(int j, cplx x, double q);
double theta_deriv(int j, double x, double q, int order);
double theta1_prime0(double q);

// Weierstrass functions. p / p' reduce z into the fundamental cell first and throw
// pole_error within 1e-9 of a lattice point; sigma / zeta evaluate unreduced.
cplx weierstrass_p(cplx z, const EllipticParams& p);
void weierstrass_p_pair(cplx z, const EllipticParams& p, cplx& P, cplx& Pprime);
cplx weierstrass_sigma(cplx z, const EllipticParams& p);
cplx weierstrass_zeta(cplx z, const EllipticParams& p);

// sigma_alpha(z) = sigma(z + w_a)/sigma(w_a) exp(-z zeta(w_a)); alpha = 0 is sigma itself.
double sigma_family(double z, int alpha, const EllipticParams& p);
cplx sigma_family_c(cplx z, int alpha, const EllipticParams& p);

// sqrt(p(z) - e_which), which in {1,2,3}, via the theta quotients; single-valued
// meromorphic branch, positive on (0, omega).
cplx wp_root_factor(cplx z, const EllipticParams& p, int which);

struct JacobiSCD {
    double sn, cn, dn;
};
// Handles k < 0 via |k| and k > 1 via Jacobi's real transformation.
JacobiSCD jacobi_sn_cn_dn(double u, double k);

// distance from z to the nearest lattice point of p (rectangular real lattice)
double lattice_distance(cplx z, const EllipticParams& p);

} // namespace feq

#endif
