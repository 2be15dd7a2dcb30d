#include "feq/rational.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace feq {

// ---------------------------------------------------------------- BigInt

BigInt::BigInt(long long v) {
    if (v == 0) return;
    sign_ = v > 0 ? 1 : -1;
    unsigned long long m = v > 0 ? (unsigned long long)v : 0ULL - (unsigned long long)v;
    while (m) {
        mag_.push_back((uint32_t)(m & 0xffffffffu));
        m >>= 32;
    }
}

void BigInt::trim() {
    while (!mag_.empty() && mag_.back() == 0) mag_.pop_back();
    if (mag_.empty()) sign_ = 0;
}

int BigInt::cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (size_t i = a.size(); i-- > 0;) {
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    }
    return 0;
}

std::vector<uint32_t> BigInt::add_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    const auto& x = a.size() >= b.size() ? a : b;
    const auto& y = a.size() >= b.size() ? b : a;
    std::vector<uint32_t> r(x.size() + 1, 0);
    uint64_t carry = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        uint64_t s = (uint64_t)x[i] + (i < y.size() ? y[i] : 0) + carry;
        r[i] = (uint32_t)s;
        carry = s >> 32;
    }
    r[x.size()] = (uint32_t)carry;
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

std::vector<uint32_t> BigInt::sub_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    std::vector<uint32_t> r(a.size(), 0);
    int64_t borrow = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        int64_t s = (int64_t)a[i] - (i < b.size() ? (int64_t)b[i] : 0) - borrow;
        if (s < 0) {
            s += ((int64_t)1 << 32);
            borrow = 1;
        } else {
            borrow = 0;
        }
        r[i] = (uint32_t)s;
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

std::vector<uint32_t> BigInt::mul_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<uint32_t> r(a.size() + b.size(), 0);
    for (size_t i = 0; i < a.size(); ++i) {
        uint64_t carry = 0;
        for (size_t j = 0; j < b.size(); ++j) {
            uint64_t s = (uint64_t)a[i] * b[j] + r[i + j] + carry;
            r[i + j] = (uint32_t)s;
            carry = s >> 32;
        }
        size_t k = i + b.size();
        while (carry) {
            uint64_t s = (uint64_t)r[k] + carry;
            r[k] = (uint32_t)s;
            carry = s >> 32;
            ++k;
        }
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

BigInt BigInt::operator-() const {
    BigInt r = *this;
    r.sign_ = -r.sign_;
    return r;
}

BigInt BigInt::abs() const {
    BigInt r = *this;
    if (r.sign_ < 0) r.sign_ = 1;
    return r;
}

BigInt operator+(const BigInt& a, const BigInt& b) {
    if (a.sign_ == 0) return b;
    if (b.sign_ == 0) return a;
    BigInt r;
    if (a.sign_ == b.sign_) {
        r.sign_ = a.sign_;
        r.mag_ = BigInt::add_mag(a.mag_, b.mag_);
    } else {
        int c = BigInt::cmp_mag(a.mag_, b.mag_);
        if (c == 0) return BigInt();
        if (c > 0) {
            r.sign_ = a.sign_;
            r.mag_ = BigInt::sub_mag(a.mag_, b.mag_);
        } else {
            r.sign_ = b.sign_;
            r.mag_ = BigInt::sub_mag(b.mag_, a.mag_);
        }
    }
    r.trim();
    return r;
}

BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

BigInt operator*(const BigInt& a, const BigInt& b) {
    BigInt r;
    if (a.sign_ == 0 || b.sign_ == 0) return r;
    r.sign_ = a.sign_ * b.sign_;
    r.mag_ = BigInt::mul_mag(a.mag_, b.mag_);
    r.trim();
    return r;
}

// Knuth-style long division with 32-bit limbs via 64-bit partial quotients.
void BigInt::divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
    if (b.sign_ == 0) throw std::domain_error("BigInt: division by zero");
    int c = cmp_mag(a.mag_, b.mag_);
    if (a.sign_ == 0 || c < 0) {
        q = BigInt();
        r = a;
        return;
    }
    // magnitude division: schoolbook base 2^32
    const auto& u = a.mag_;
    const auto& v = b.mag_;
    if (v.size() == 1) {
        uint64_t d = v[0], rem = 0;
        std::vector<uint32_t> qq(u.size(), 0);
        for (size_t i = u.size(); i-- > 0;) {
            uint64_t cur = (rem << 32) | u[i];
            qq[i] = (uint32_t)(cur / d);
            rem = cur % d;
        }
        q = BigInt();
        q.mag_ = std::move(qq);
        q.sign_ = 1;
        q.trim();
        r = BigInt((long long)rem);
    } else {
        // normalized Knuth algorithm D
        int sh = 0;
        uint32_t top = v.back();
        while (!(top & 0x80000000u)) { top <<= 1; ++sh; }
        auto shl = [&](const std::vector<uint32_t>& x) {
            std::vector<uint32_t> y(x.begin(), x.end());
            y.push_back(0);
            if (sh) {
                for (size_t i = y.size(); i-- > 0;) {
                    uint32_t lo = i > 0 ? (uint32_t)((uint64_t)x[i - 1] >> (32 - sh)) : 0;
                    y[i] = ((i < x.size() ? x[i] << sh : 0u)) | lo;
                }
            }
            return y;
        };
        std::vector<uint32_t> un = shl(u);
        std::vector<uint32_t> vn = shl(v);
        while (vn.size() > v.size()) vn.pop_back();
        size_t n = vn.size(), m = un.size() - n;
        std::vector<uint32_t> qq(m, 0);
        for (size_t j = m; j-- > 0;) {
            uint64_t num = ((uint64_t)un[j + n] << 32) | un[j + n - 1];
            uint64_t qhat = num / vn[n - 1];
            uint64_t rhat = num % vn[n - 1];
            while (qhat >= ((uint64_t)1 << 32) ||
                   (n >= 2 && qhat * vn[n - 2] > ((rhat << 32) | un[j + n - 2]))) {
                --qhat;
                rhat += vn[n - 1];
                if (rhat >= ((uint64_t)1 << 32)) break;
            }
            // multiply-subtract
            int64_t borrow = 0;
            uint64_t carry = 0;
            for (size_t i = 0; i < n; ++i) {
                uint64_t p = qhat * vn[i] + carry;
                carry = p >> 32;
                int64_t t = (int64_t)un[i + j] - (int64_t)(uint32_t)p - borrow;
                if (t < 0) {
                    t += (int64_t)1 << 32;
                    borrow = 1;
                } else {
                    borrow = 0;
                }
                un[i + j] = (uint32_t)t;
            }
            int64_t t = (int64_t)un[j + n] - (int64_t)carry - borrow;
            if (t < 0) {
                // qhat was one too large
                --qhat;
                uint64_t c2 = 0;
                for (size_t i = 0; i < n; ++i) {
                    uint64_t s = (uint64_t)un[i + j] + vn[i] + c2;
                    un[i + j] = (uint32_t)s;
                    c2 = s >> 32;
                }
                t += (int64_t)c2;
            }
            un[j + n] = (uint32_t)t;
            qq[j] = (uint32_t)qhat;
        }
        q = BigInt();
        q.mag_ = std::move(qq);
        q.sign_ = 1;
        q.trim();
        // remainder = (first n limbs of un) >> sh
        std::vector<uint32_t> rm(un.begin(), un.begin() + n);
        if (sh) {
            uint32_t carry = 0;
            for (size_t i = rm.size(); i-- > 0;) {
                uint32_t cur = rm[i];
                rm[i] = (cur >> sh) | ((uint64_t)carry << (32 - sh));
                carry = cur & ((1u << sh) - 1);
            }
        }
        r = BigInt();
        r.mag_ = std::move(rm);
        r.sign_ = 1;
        r.trim();
    }
    // attach signs: truncated toward zero
    if (q.sign_ != 0) q.sign_ = a.sign_ * b.sign_;
    if (r.sign_ != 0) r.sign_ = a.sign_;
}

BigInt operator/(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    BigInt::divmod(a, b, q, r);
    return q;
}

BigInt operator%(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    BigInt::divmod(a, b, q, r);
    return r;
}

bool operator==(const BigInt& a, const BigInt& b) {
    return a.sign_ == b.sign_ && a.mag_ == b.mag_;
}

bool operator<(const BigInt& a, const BigInt& b) {
    if (a.sign_ != b.sign_) return a.sign_ < b.sign_;
    int c = BigInt::cmp_mag(a.mag_, b.mag_);
    return a.sign_ >= 0 ? c < 0 : c > 0;
}

BigInt BigInt::gcd(BigInt a, BigInt b) {
    a = a.abs();
    b = b.abs();
    while (!b.is_zero()) {
        BigInt q, r;
        divmod(a, b, q, r);
        a = b;
        b = r;
    }
    return a;
}

BigInt BigInt::pow(const BigInt& base, unsigned e) {
    BigInt r(1), b = base;
    while (e) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

bool BigInt::fits_i64() const {
    if (mag_.size() > 2) return false;
    unsigned long long m = 0;
    if (mag_.size() >= 1) m = mag_[0];
    if (mag_.size() == 2) m |= (unsigned long long)mag_[1] << 32;
    if (sign_ >= 0) return m <= 0x7fffffffffffffffULL;
    return m <= 0x8000000000000000ULL;
}

long long BigInt::to_i64() const {
    unsigned long long m = 0;
    if (mag_.size() >= 1) m = mag_[0];
    if (mag_.size() >= 2) m |= (unsigned long long)mag_[1] << 32;
    return sign_ >= 0 ? (long long)m : -(long long)m;
}

double BigInt::to_double() const {
    // top limbs with a tracked binary exponent; avoids overflow for huge values
    double r = 0;
    size_t n = mag_.size();
    size_t top = n > 3 ? n - 3 : 0;
    for (size_t i = n; i-- > top;) r = r * 4294967296.0 + mag_[i];
    if (top > 0) r = std::ldexp(r, (int)(32 * top));
    return sign_ < 0 ? -r : r;
}

std::string BigInt::to_string() const {
    if (sign_ == 0) return "0";
    BigInt t = this->abs(), base(1000000000LL);
    std::string out;
    while (!t.is_zero()) {
        BigInt q, r;
        divmod(t, base, q, r);
        long long chunk = r.is_zero() ? 0 : r.to_i64();
        std::string s = std::to_string(chunk);
        if (!q.is_zero()) s = std::string(9 - s.size(), '0') + s;
        out = s + out;
        t = q;
    }
    return (sign_ < 0 ? "-" : "") + out;
}

BigInt BigInt::from_string(const std::string& s) {
    BigInt r;
    size_t i = 0;
    int sgn = 1;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        if (s[i] == '-') sgn = -1;
        ++i;
    }
    if (i >= s.size()) throw std::invalid_argument("BigInt: empty literal");
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("BigInt: bad digit");
        r = r * BigInt(10) + BigInt(s[i] - '0');
    }
    if (sgn < 0) r = -r;
    return r;
}

// ---------------------------------------------------------------- Rational

namespace {

long long llgcd(long long a, long long b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) {
        long long t = a % b;
        a = b;
        b = t;
    }
    return a;
}

bool fits64(__int128 v) {
    return v >= -(__int128)0x7fffffffffffffffLL - 1 && v <= (__int128)0x7fffffffffffffffLL;
}

BigInt big_from_i128(__int128 v) {
    bool neg = v < 0;
    unsigned __int128 m = neg ? (unsigned __int128)(-v) : (unsigned __int128)v;
    BigInt r(0), base(1LL << 32);
    for (int shift = 96; shift >= 0; shift -= 32) {
        r = r * base + BigInt((long long)(uint32_t)(m >> shift));
    }
    return neg ? -r : r;
}

} // namespace

Rational::Rational(long long n, long long d) : n_(n), d_(d) {
    if (d_ == 0) throw std::domain_error("Rational: zero denominator");
    if (d_ < 0) {
        n_ = -n_;
        d_ = -d_;
    }
    long long g = llgcd(n_, d_);
    if (g > 1) {
        n_ /= g;
        d_ /= g;
    }
    if (n_ == 0) d_ = 1;
}

Rational::Rational(const BigInt& n, const BigInt& d) : n_(0), d_(1) {
    *this = from_big(n, d);
}

Rational::Rational(const Rational& o) : n_(o.n_), d_(o.d_) {
    if (o.big_) big_ = std::make_unique<Big>(*o.big_);
}

Rational& Rational::operator=(const Rational& o) {
    n_ = o.n_;
    d_ = o.d_;
    big_ = o.big_ ? std::make_unique<Big>(*o.big_) : nullptr;
    return *this;
}

Rational Rational::from_big(BigInt n, BigInt d) {
    if (d.is_zero()) throw std::domain_error("Rational: zero denominator");
    if (d.sign() < 0) {
        n = -n;
        d = -d;
    }
    BigInt g = BigInt::gcd(n, d);
    if (!(g == BigInt(1)) && !g.is_zero()) {
        n = n / g;
        d = d / g;
    }
    Rational r;
    if (n.is_zero()) return r;
    if (n.fits_i64() && d.fits_i64()) {
        r.n_ = n.to_i64();
        r.d_ = d.to_i64();
    } else {
        r.big_ = std::make_unique<Big>(Big{std::move(n), std::move(d)});
    }
    return r;
}

void Rational::make_big() {
    if (!big_) big_ = std::make_unique<Big>(Big{BigInt(n_), BigInt(d_)});
}

bool Rational::is_zero() const { return small() ? n_ == 0 : big_->n.is_zero(); }
int Rational::sign() const {
    if (small()) return n_ > 0 ? 1 : (n_ < 0 ? -1 : 0);
    return big_->n.sign();
}
bool Rational::is_one() const { return small() && n_ == 1 && d_ == 1; }
bool Rational::is_integer() const { return small() ? d_ == 1 : big_->d == BigInt(1); }

double Rational::to_double() const {
    if (small()) return (double)n_ / (double)d_;
    double n = big_->n.to_double(), d = big_->d.to_double();
    if (std::isfinite(n) && std::isfinite(d)) return n / d;
    // enormous magnitude on one or both sides: leading decimal digits + lengths
    std::string ns = big_->n.to_string(), ds = big_->d.to_string();
    bool neg = !ns.empty() && ns[0] == '-';
    if (neg) ns = ns.substr(1);
    size_t tn = std::min<size_t>(ns.size(), 17), td = std::min<size_t>(ds.size(), 17);
    double lead_n = std::stod(ns.substr(0, tn));
    double lead_d = std::stod(ds.substr(0, td));
    double exp10 = (double)(ns.size() - tn) - (double)(ds.size() - td);
    double v = lead_n / lead_d * std::pow(10.0, exp10);
    return neg ? -v : v;
}

std::string Rational::to_string() const {
    if (small()) {
        if (d_ == 1) return std::to_string(n_);
        return std::to_string(n_) + "/" + std::to_string(d_);
    }
    if (big_->d == BigInt(1)) return big_->n.to_string();
    return big_->n.to_string() + "/" + big_->d.to_string();
}

BigInt Rational::num_big() const { return small() ? BigInt(n_) : big_->n; }
BigInt Rational::den_big() const { return small() ? BigInt(d_) : big_->d; }

Rational Rational::operator-() const {
    Rational r(*this);
    if (r.small()) {
        r.n_ = -r.n_;
    } else {
        r.big_->n = -r.big_->n;
    }
    return r;
}

Rational Rational::inv() const {
    if (is_zero()) throw std::domain_error("Rational: inverse of zero");
    if (small()) {
        Rational r;
        long long n = d_, d = n_;
        if (d < 0) {
            n = -n;
            d = -d;
        }
        r.n_ = n;
        r.d_ = d;
        return r;
    }
    return from_big(big_->d, big_->n);
}

Rational operator+(const Rational& a, const Rational& b) {
    if (a.small() && b.small()) {
        __int128 n = (__int128)a.n_ * b.d_ + (__int128)b.n_ * a.d_;
        __int128 d = (__int128)a.d_ * b.d_;
        if (n == 0) return Rational();
        __int128 x = n < 0 ? -n : n, y = d;
        while (y) {
            __int128 t = x % y;
            x = y;
            y = t;
        }
        n /= x;
        d /= x;
        if (fits64(n) && fits64(d)) return Rational((long long)n, (long long)d);
        return Rational(big_from_i128(n), big_from_i128(d));
    }
    return Rational(a.num_big() * b.den_big() + b.num_big() * a.den_big(), a.den_big() * b.den_big());
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
    if (a.is_zero() || b.is_zero()) return Rational();
    if (a.small() && b.small()) {
        // cross-reduce first to keep intermediates small
        long long g1 = llgcd(a.n_, b.d_), g2 = llgcd(b.n_, a.d_);
        __int128 n = (__int128)(a.n_ / g1) * (b.n_ / g2);
        __int128 d = (__int128)(a.d_ / g2) * (b.d_ / g1);
        if (fits64(n) && fits64(d)) return Rational((long long)n, (long long)d);
        return Rational(big_from_i128(n), big_from_i128(d));
    }
    return Rational(a.num_big() * b.num_big(), a.den_big() * b.den_big());
}

Rational operator/(const Rational& a, const Rational& b) { return a * b.inv(); }

bool operator==(const Rational& a, const Rational& b) {
    if (a.small() && b.small()) return a.n_ == b.n_ && a.d_ == b.d_;
    return a.num_big() == b.num_big() && a.den_big() == b.den_big();
}

bool operator<(const Rational& a, const Rational& b) {
    if (a.small() && b.small()) return (__int128)a.n_ * b.d_ < (__int128)b.n_ * a.d_;
    return a.num_big() * b.den_big() < b.num_big() * a.den_big();
}

Rational Rational::pow(int e) const {
    if (e == 0) return Rational(1);
    Rational base = e > 0 ? *this : inv();
    unsigned k = e > 0 ? (unsigned)e : (unsigned)(-(long long)e);
    Rational r(1);
    while (k) {
        if (k & 1) r = r * base;
        base = base * base;
        k >>= 1;
    }
    return r;
}

Rational Rational::gcd(const Rational& a, const Rational& b) {
    if (a.is_zero()) return b.sign() < 0 ? -b : b;
    if (b.is_zero()) return a.sign() < 0 ? -a : a;
    BigInt n = BigInt::gcd(a.num_big() * b.den_big(), b.num_big() * a.den_big());
    BigInt d = a.den_big() * b.den_big();
    return Rational(n, d);
}

Rational Rational::factorial(unsigned n) {
    BigInt r(1);
    for (unsigned i = 2; i <= n; ++i) r = r * BigInt((long long)i);
    return Rational(r, BigInt(1));
}

Rational Rational::from_double(double v) {
    if (!std::isfinite(v)) throw std::domain_error("Rational: non-finite double");
    if (v == 0.0) return Rational();
    int e = 0;
    double m = std::frexp(v, &e); // v = m * 2^e, |m| in [0.5, 1)
    long long mant = (long long)std::ldexp(m, 53);
    e -= 53;
    BigInt n(mant), d(1);
    if (e >= 0) {
        n = n * BigInt::pow(BigInt(2), (unsigned)e);
    } else {
        d = BigInt::pow(BigInt(2), (unsigned)(-e));
    }
    return Rational(n, d);
}

Rational Rational::from_string(const std::string& s) {
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        return Rational(BigInt::from_string(s.substr(0, slash)), BigInt::from_string(s.substr(slash + 1)));
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rational(BigInt::from_string(s), BigInt(1));
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    size_t frac_len = s.size() - dot - 1;
    return Rational(BigInt::from_string(digits), BigInt::pow(BigInt(10), (unsigned)frac_len));
}

} // namespace feq
