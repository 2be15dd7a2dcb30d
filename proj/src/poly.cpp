#include "feq/poly.hpp"

#include <algorithm>
#include <stdexcept>

namespace feq {

MultiPoly MultiPoly::constant(int nvars, const Rational& c) {
    MultiPoly p(nvars);
    if (!c.is_zero()) p.terms_[Expo(nvars, 0)] = c;
    return p;
}

MultiPoly MultiPoly::var(int nvars, int idx, unsigned power, const Rational& c) {
    MultiPoly p(nvars);
    if (c.is_zero()) return p;
    Expo e(nvars, 0);
    e[idx] = (uint16_t)power;
    p.terms_[e] = c;
    return p;
}

void MultiPoly::add_term(const Expo& e, const Rational& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

MultiPoly MultiPoly::operator-() const {
    MultiPoly r(nvars_);
    for (const auto& [e, c] : terms_) r.terms_[e] = -c;
    return r;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
    MultiPoly r = a;
    r += b;
    return r;
}

MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) {
    MultiPoly r = a;
    r -= b;
    return r;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    MultiPoly r(a.nvars_);
    if (a.is_zero() || b.is_zero()) return r;
    Expo e(a.nvars_, 0);
    for (const auto& [ea, ca] : a.terms_) {
        for (const auto& [eb, cb] : b.terms_) {
            for (int i = 0; i < a.nvars_; ++i) e[i] = (uint16_t)(ea[i] + eb[i]);
            r.add_term(e, ca * cb);
        }
    }
    return r;
}

bool operator==(const MultiPoly& a, const MultiPoly& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
}

MultiPoly MultiPoly::scaled(const Rational& c) const {
    MultiPoly r(nvars_);
    if (c.is_zero()) return r;
    for (const auto& [e, v] : terms_) r.terms_[e] = v * c;
    return r;
}

MultiPoly MultiPoly::pow(unsigned e) const {
    MultiPoly r = constant(nvars_, Rational(1));
    MultiPoly b = *this;
    while (e) {
        if (e & 1) r = r * b;
        if (e >>= 1) b = b * b;
    }
    return r;
}

MultiPoly MultiPoly::derivative(int var) const {
    MultiPoly r(nvars_);
    for (const auto& [e, c] : terms_) {
        if (e[var] == 0) continue;
        Expo d = e;
        d[var] -= 1;
        r.add_term(d, c * Rational((long long)e[var]));
    }
    return r;
}

bool MultiPoly::try_exact_divide(const MultiPoly& a, const MultiPoly& b, MultiPoly& q) {
    if (b.is_zero()) throw std::domain_error("MultiPoly: division by zero polynomial");
    q = MultiPoly(a.nvars_);
    MultiPoly p = a;
    const auto& bl = *b.terms_.rbegin(); // leading term in lex order
    while (!p.is_zero()) {
        const auto& pl = *p.terms_.rbegin();
        Expo e(p.nvars_, 0);
        for (int i = 0; i < p.nvars_; ++i) {
            if (pl.first[i] < bl.first[i]) return false;
            e[i] = (uint16_t)(pl.first[i] - bl.first[i]);
        }
        Rational c = pl.second / bl.second;
        MultiPoly t(p.nvars_);
        t.terms_[e] = c;
        q += t;
        p -= t * b;
    }
    return true;
}

MultiPoly MultiPoly::exact_divide(const MultiPoly& b) const {
    MultiPoly q(nvars_);
    if (!try_exact_divide(*this, b, q)) throw std::runtime_error("MultiPoly: exact_divide has nonzero remainder");
    return q;
}

Rational MultiPoly::content() const {
    Rational g;
    for (const auto& [e, c] : terms_) g = Rational::gcd(g, c);
    return g;
}

MultiPoly MultiPoly::primitive_part() const {
    if (is_zero()) return *this;
    Rational c = content();
    if (terms_.rbegin()->second.sign() < 0) c = -c;
    return scaled(c.inv());
}

bool MultiPoly::proportional(const MultiPoly& other, Rational* ratio) const {
    if (is_zero() || other.is_zero()) return false;
    if (terms_.size() != other.terms_.size()) return false;
    auto it = terms_.begin();
    auto jt = other.terms_.begin();
    Rational r;
    bool have_r = false;
    for (; it != terms_.end(); ++it, ++jt) {
        if (it->first != jt->first) return false;
        if (!have_r) {
            r = jt->second / it->second;
            have_r = true;
        } else if (jt->second != it->second * r) {
            return false;
        }
    }
    if (ratio) *ratio = r;
    return true;
}

MultiPoly MultiPoly::substitute(int var, const MultiPoly& value) const {
    // group by power of var, then Horner in that variable
    std::map<int, MultiPoly> groups = coeffs_in_var(var);
    MultiPoly r(nvars_);
    int prev = -1;
    for (auto it = groups.rbegin(); it != groups.rend(); ++it) {
        if (prev < 0) {
            r = it->second;
        } else {
            for (int k = 0; k < prev - it->first; ++k) r = r * value;
            r += it->second;
        }
        prev = it->first;
    }
    if (prev > 0) {
        for (int k = 0; k < prev; ++k) r = r * value;
    }
    return r;
}

MultiPoly MultiPoly::set_var_zero(int var) const {
    MultiPoly r(nvars_);
    for (const auto& [e, c] : terms_) {
        if (e[var] == 0) r.add_term(e, c);
    }
    return r;
}

Rational MultiPoly::eval(const std::vector<Rational>& point) const {
    Rational acc;
    for (const auto& [e, c] : terms_) {
        Rational t = c;
        for (int i = 0; i < nvars_; ++i) {
            if (e[i]) t *= point[i].pow(e[i]);
        }
        acc += t;
    }
    return acc;
}

int MultiPoly::total_degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) {
        int s = 0;
        for (auto x : e) s += x;
        d = std::max(d, s);
    }
    return d;
}

int MultiPoly::degree(int var) const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, (int)e[var]);
    return d;
}

bool MultiPoly::depends_on(int var) const {
    for (const auto& [e, c] : terms_) {
        if (e[var]) return true;
    }
    return false;
}

bool MultiPoly::is_homogeneous() const {
    int d = -1;
    for (const auto& [e, c] : terms_) {
        int s = 0;
        for (auto x : e) s += x;
        if (d < 0) d = s;
        if (s != d) return false;
    }
    return true;
}

std::map<int, MultiPoly> MultiPoly::coeffs_in_var(int var) const {
    std::map<int, MultiPoly> r;
    for (const auto& [e, c] : terms_) {
        Expo rest = e;
        int p = e[var];
        rest[var] = 0;
        auto it = r.find(p);
        if (it == r.end()) it = r.emplace(p, MultiPoly(nvars_)).first;
        it->second.add_term(rest, c);
    }
    return r;
}

MultiPoly MultiPoly::prem(const MultiPoly& a, const MultiPoly& b, int v) {
    int db = b.degree(v);
    if (db < 0) throw std::domain_error("prem: zero divisor");
    auto bc = b.coeffs_in_var(v);
    const MultiPoly& lead = bc.rbegin()->second;
    MultiPoly r = a;
    int guard = a.degree(v) - db + 1;
    while (!r.is_zero() && r.degree(v) >= db && guard-- > 0) {
        auto rc = r.coeffs_in_var(v);
        int dr = rc.rbegin()->first;
        MultiPoly top = rc.rbegin()->second;
        MultiPoly shift = MultiPoly::var(r.nvars(), v, (unsigned)(dr - db));
        r = r * lead - top * shift * b;
    }
    return r;
}

namespace {

MultiPoly content_in_var(const MultiPoly& p, int v) {
    auto groups = p.coeffs_in_var(v);
    MultiPoly g(p.nvars());
    for (const auto& [pw, coef] : groups) g = MultiPoly::gcd(g, coef);
    return g;
}

} // namespace

MultiPoly MultiPoly::gcd(const MultiPoly& a, const MultiPoly& b) {
    if (a.is_zero()) return b.is_zero() ? b : b.primitive_part();
    if (b.is_zero()) return a.primitive_part();
    int v = -1;
    for (int i = a.nvars() - 1; i >= 0; --i) {
        if (a.degree(i) > 0 || b.degree(i) > 0) {
            v = i;
            break;
        }
    }
    if (v < 0) return constant(a.nvars(), Rational(1)); // both constants
    int da = a.degree(v), db = b.degree(v);
    if (da == 0) return gcd(a, content_in_var(b, v));
    if (db == 0) return gcd(content_in_var(a, v), b);
    MultiPoly ca = content_in_var(a, v), cb = content_in_var(b, v);
    MultiPoly pa = a.exact_divide(ca), pb = b.exact_divide(cb);
    MultiPoly gc = gcd(ca, cb);
    // primitive Euclid in v
    if (pa.degree(v) < pb.degree(v)) std::swap(pa, pb);
    while (!pb.is_zero()) {
        MultiPoly r = prem(pa, pb, v);
        pa = pb;
        if (r.is_zero()) {
            pb = r;
        } else {
            pb = r.exact_divide(content_in_var(r, v)).primitive_part();
        }
    }
    MultiPoly gp = pa.exact_divide(content_in_var(pa, v)).primitive_part();
    return (gc * gp).primitive_part();
}

std::string MultiPoly::to_string(const std::vector<std::string>& names) const {
    if (is_zero()) return "0";
    std::string out;
    bool first = true;
    // print highest terms first
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const Rational& c = it->second;
        std::string mono;
        for (int i = 0; i < nvars_; ++i) {
            if (it->first[i] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += names[i];
            if (it->first[i] > 1) mono += "^" + std::to_string(it->first[i]);
        }
        std::string cs = c.to_string();
        bool neg = cs.size() && cs[0] == '-';
        if (neg) cs = cs.substr(1);
        if (first) {
            out += neg ? "-" : "";
        } else {
            out += neg ? " - " : " + ";
        }
        if (mono.empty()) {
            out += cs;
        } else if (cs == "1") {
            out += mono;
        } else {
            out += cs + "*" + mono;
        }
        first = false;
    }
    return out;
}

// ---------------------------------------------------------------- PolyFraction

PolyFraction::PolyFraction(MultiPoly n) : num_(std::move(n)), den_(MultiPoly::constant(num_.nvars(), Rational(1))) {}

PolyFraction::PolyFraction(MultiPoly n, MultiPoly d) : num_(std::move(n)), den_(std::move(d)) {
    normalize();
}

PolyFraction PolyFraction::constant(int nvars, const Rational& c) {
    return PolyFraction(MultiPoly::constant(nvars, c));
}

void PolyFraction::normalize() {
    if (den_.is_zero()) throw std::domain_error("PolyFraction: zero denominator");
    if (num_.is_zero()) {
        den_ = MultiPoly::constant(num_.nvars(), Rational(1));
        return;
    }
    // cancel common monomial factor
    const int nv = num_.nvars();
    Expo mn(nv, 0xffff);
    auto scan = [&](const MultiPoly& p) {
        for (const auto& [e, c] : p.terms()) {
            for (int i = 0; i < nv; ++i) mn[i] = std::min(mn[i], e[i]);
        }
    };
    scan(num_);
    scan(den_);
    bool any = false;
    for (int i = 0; i < nv; ++i) any = any || mn[i] > 0;
    if (any) {
        auto strip = [&](const MultiPoly& p) {
            MultiPoly r(nv);
            Expo e2(nv, 0);
            for (const auto& [e, c] : p.terms()) {
                for (int i = 0; i < nv; ++i) e2[i] = (uint16_t)(e[i] - mn[i]);
                r.add_term(e2, c);
            }
            return r;
        };
        num_ = strip(num_);
        den_ = strip(den_);
    }
    // cancel the full polynomial gcd
    MultiPoly g = MultiPoly::gcd(num_, den_);
    if (g.total_degree() > 0) {
        num_ = num_.exact_divide(g);
        den_ = den_.exact_divide(g);
    }
    MultiPoly q(nv);
    if (MultiPoly::try_exact_divide(num_, den_, q)) {
        num_ = q;
        den_ = MultiPoly::constant(nv, Rational(1));
    }
    // make the denominator primitive with positive leading coefficient
    Rational cd = den_.content();
    if (den_.terms().rbegin()->second.sign() < 0) cd = -cd;
    num_ = num_.scaled(cd.inv());
    den_ = den_.scaled(cd.inv());
}

PolyFraction PolyFraction::operator-() const {
    PolyFraction r = *this;
    r.num_ = -r.num_;
    return r;
}

PolyFraction operator+(const PolyFraction& a, const PolyFraction& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.den_ == b.den_) return PolyFraction(a.num_ + b.num_, a.den_);
    return PolyFraction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

PolyFraction operator-(const PolyFraction& a, const PolyFraction& b) { return a + (-b); }

PolyFraction operator*(const PolyFraction& a, const PolyFraction& b) {
    return PolyFraction(a.num_ * b.num_, a.den_ * b.den_);
}

PolyFraction operator/(const PolyFraction& a, const PolyFraction& b) {
    if (b.is_zero()) throw std::domain_error("PolyFraction: division by zero");
    return PolyFraction(a.num_ * b.den_, a.den_ * b.num_);
}

bool operator==(const PolyFraction& a, const PolyFraction& b) {
    return a.num_ * b.den_ == b.num_ * a.den_;
}

Rational PolyFraction::eval(const std::vector<Rational>& point) const {
    return num_.eval(point) / den_.eval(point);
}

std::string PolyFraction::to_string(const std::vector<std::string>& names) const {
    std::string n = num_.to_string(names);
    if (den_ == MultiPoly::constant(den_.nvars(), Rational(1))) return n;
    return "(" + n + ")/(" + den_.to_string(names) + ")";
}

} // namespace feq
