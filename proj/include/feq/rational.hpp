#ifndef FEQ_RATIONAL_HPP
#define FEQ_RATIONAL_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace feq {

// Arbitrary-precision signed integer, sign-magnitude over base-2^32 limbs.
// Only the operations needed by the exact series engine are provided.
class BigInt {
public:
    BigInt() = default;
    BigInt(long long v);

    static BigInt from_string(const std::string& s);

    bool is_zero() const { return sign_ == 0; }
    int sign() const { return sign_; }
    bool fits_i64() const;
    long long to_i64() const; // requires fits_i64()
    double to_double() const;
    std::string to_string() const;

    BigInt operator-() const;
    BigInt abs() const;

    friend BigInt operator+(const BigInt& a, const BigInt& b);
    friend BigInt operator-(const BigInt& a, const BigInt& b);
    friend BigInt operator*(const BigInt& a, const BigInt& b);
    // Truncated division (quotient rounds toward zero).
    static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r);
    friend BigInt operator/(const BigInt& a, const BigInt& b);
    friend BigInt operator%(const BigInt& a, const BigInt& b);

    friend bool operator==(const BigInt& a, const BigInt& b);
    friend bool operator<(const BigInt& a, const BigInt& b);

    static BigInt gcd(BigInt a, BigInt b);
    static BigInt pow(const BigInt& base, unsigned e);

private:
    int sign_ = 0;                 // -1, 0, +1
    std::vector<uint32_t> mag_;    // little-endian, no leading zero limbs; empty iff sign_==0

    void trim();
    static int cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
    static std::vector<uint32_t> add_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
    // requires |a| >= |b|
    static std::vector<uint32_t> sub_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
    static std::vector<uint32_t> mul_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
};

inline bool operator!=(const BigInt& a, const BigInt& b) { return !(a == b); }
inline bool operator>(const BigInt& a, const BigInt& b) { return b < a; }
inline bool operator<=(const BigInt& a, const BigInt& b) { return !(b < a); }
inline bool operator>=(const BigInt& a, const BigInt& b) { return !(a < b); }

// Exact rational with an int64 fast path; promotes to BigInt arithmetic on overflow.
// Always stored reduced with positive denominator.
class Rational {
public:
    Rational() : n_(0), d_(1) {}
    Rational(long long n) : n_(n), d_(1) {}
    Rational(long long n, long long d);
    Rational(const BigInt& n, const BigInt& d);

    Rational(const Rational& o);
    Rational(Rational&&) noexcept = default;
    Rational& operator=(const Rational& o);
    Rational& operator=(Rational&&) noexcept = default;

    // exact parse of "p/q", integer, or decimal literals like "-0.25"
    static Rational from_string(const std::string& s);
    // exact dyadic value of the double (mantissa * 2^exp)
    static Rational from_double(double v);
    static Rational factorial(unsigned n);

    bool is_zero() const;
    int sign() const;
    bool is_one() const;
    bool is_integer() const;
    double to_double() const;
    std::string to_string() const;

    BigInt num_big() const;
    BigInt den_big() const;

    Rational operator-() const;
    Rational inv() const;

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    Rational& operator+=(const Rational& o) { *this = *this + o; return *this; }
    Rational& operator-=(const Rational& o) { *this = *this - o; return *this; }
    Rational& operator*=(const Rational& o) { *this = *this * o; return *this; }
    Rational& operator/=(const Rational& o) { *this = *this / o; return *this; }

    friend bool operator==(const Rational& a, const Rational& b);
    friend bool operator<(const Rational& a, const Rational& b);

    Rational pow(int e) const;

    // gcd of |a|,|b| as nonneg rational: gcd(p/q, r/s) = gcd(p*s, r*q)/(q*s)
    static Rational gcd(const Rational& a, const Rational& b);

private:
    struct Big {
        BigInt n, d;
    };
    long long n_, d_;            // fast path when big_ == nullptr; d_ > 0, gcd(n_,d_)=1
    std::unique_ptr<Big> big_;   // slow path, reduced, d > 0

    bool small() const { return !big_; }
    void make_big();
    void normalize_big();
    void demote_if_possible();
    static Rational from_big(BigInt n, BigInt d);
};

inline bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
inline bool operator>(const Rational& a, const Rational& b) { return b < a; }
inline bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
inline bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

} // namespace feq

#endif
