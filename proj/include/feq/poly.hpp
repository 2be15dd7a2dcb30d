#ifndef FEQ_POLY_HPP
#define FEQ_POLY_HPP

#include <map>
#include <string>
#include <vector>

#include "feq/rational.hpp"

namespace feq {

// Exponent vector, one slot per variable.
using Expo = std::vector<uint16_t>;

// Sparse multivariate polynomial with exact rational coefficients.
// Terms are kept in lexicographic exponent order; zero coefficients are never stored.
class MultiPoly {
public:
    explicit MultiPoly(int nvars = 0) : nvars_(nvars) {}

    static MultiPoly constant(int nvars, const Rational& c);
    static MultiPoly var(int nvars, int idx, unsigned power = 1, const Rational& c = Rational(1));

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    size_t n_terms() const { return terms_.size(); }
    const std::map<Expo, Rational>& terms() const { return terms_; }

    void add_term(const Expo& e, const Rational& c);

    MultiPoly operator-() const;
    friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b);
    friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b);
    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
    MultiPoly& operator+=(const MultiPoly& o);
    MultiPoly& operator-=(const MultiPoly& o);
    MultiPoly scaled(const Rational& c) const;
    MultiPoly pow(unsigned e) const;
    friend bool operator==(const MultiPoly& a, const MultiPoly& b);

    MultiPoly derivative(int var) const;

    // q with a == q*b exactly; false if b does not divide a.
    static bool try_exact_divide(const MultiPoly& a, const MultiPoly& b, MultiPoly& q);
    MultiPoly exact_divide(const MultiPoly& b) const; // throws on failure, message carries remainder lead

    // gcd of |coefficients| (0 for the zero polynomial)
    Rational content() const;
    // this / (sign * content), so the leading coefficient is positive
    MultiPoly primitive_part() const;
    // true if other == ratio * this for a single rational ratio
    bool proportional(const MultiPoly& other, Rational* ratio = nullptr) const;

    MultiPoly substitute(int var, const MultiPoly& value) const;
    MultiPoly set_var_zero(int var) const;
    Rational eval(const std::vector<Rational>& point) const;

    // pseudo-remainder of a by b in variable v (b's leading v-coefficient powers absorbed)
    static MultiPoly prem(const MultiPoly& a, const MultiPoly& b, int v);
    // multivariate gcd via the primitive Euclidean sequence; result is primitive
    static MultiPoly gcd(const MultiPoly& a, const MultiPoly& b);

    int total_degree() const;
    int degree(int var) const;
    bool depends_on(int var) const;
    bool is_homogeneous() const;

    // coefficient polynomials of powers of one variable: result[k] has that var's exponent removed
    std::map<int, MultiPoly> coeffs_in_var(int var) const;

    std::string to_string(const std::vector<std::string>& names) const;

private:
    int nvars_;
    std::map<Expo, Rational> terms_;
};

// Quotient of two polynomials. Kept lightly normalized: contents pulled out,
// common monomial factors cancelled, denominator attempted as exact divisor.
class PolyFraction {
public:
    PolyFraction() = default;
    explicit PolyFraction(MultiPoly n);
    PolyFraction(MultiPoly n, MultiPoly d);

    static PolyFraction constant(int nvars, const Rational& c);

    const MultiPoly& num() const { return num_; }
    const MultiPoly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    PolyFraction operator-() const;
    friend PolyFraction operator+(const PolyFraction& a, const PolyFraction& b);
    friend PolyFraction operator-(const PolyFraction& a, const PolyFraction& b);
    friend PolyFraction operator*(const PolyFraction& a, const PolyFraction& b);
    friend PolyFraction operator/(const PolyFraction& a, const PolyFraction& b);

    // exact equality via cross-multiplication
    friend bool operator==(const PolyFraction& a, const PolyFraction& b);

    Rational eval(const std::vector<Rational>& point) const;
    std::string to_string(const std::vector<std::string>& names) const;

private:
    MultiPoly num_{0};
    MultiPoly den_{0};
    void normalize();
};

} // namespace feq

#endif
