#pragma once

// Coefficient rings.
//
// ExactScalar is an element of Q(zeta)(pi): pi^e * P(pi) / D(pi) with P, D
// polynomials over the cyclotomics, P(0) != 0, and D either 1 or monic with
// D(0) != 0 and gcd(P, D) = 1. With pi transcendental this form is canonical.
//
// ExactField / NumericField are the policies the algorithms are written
// against; both expose the same small vocabulary.

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "latsum/cyclotomic.hpp"
#include "latsum/rational.hpp"
#include "latsum/real.hpp"

namespace latsum {

class ExactScalar {
public:
    using Poly = std::vector<Cyclo>;

    ExactScalar() = default;
    ExactScalar(const Q& q) : ExactScalar(Cyclo(q)) {}  // NOLINT
    ExactScalar(long n) : ExactScalar(Q(n)) {}          // NOLINT
    ExactScalar(const Cyclo& c) {                        // NOLINT
        if (!c.is_zero()) num_.push_back(c);
    }

    // c * pi^k
    static ExactScalar monomial(const Cyclo& c, int k) {
        ExactScalar r(c);
        if (!r.is_zero()) r.e_ = k;
        return r;
    }
    static ExactScalar pi_pow(int k) { return monomial(Cyclo(1), k); }

    bool is_zero() const { return num_.empty(); }
    bool is_laurent() const { return den_.empty(); }
    bool is_monomial() const { return den_.empty() && num_.size() == 1; }
    int pi_shift() const { return e_; }
    const Poly& numerator() const { return num_; }
    const Poly& denominator() const { return den_; }

    // Coefficient of pi^k (Laurent elements only).
    Cyclo coeff(int k) const {
        if (!is_laurent()) throw std::domain_error("not a Laurent polynomial in pi");
        int i = k - e_;
        if (i < 0 || i >= static_cast<int>(num_.size())) return {};
        return num_[i];
    }
    int min_pi_degree() const { return e_; }
    int max_pi_degree() const { return e_ + static_cast<int>(num_.size()) - 1; }

    bool is_rational() const { return is_monomial() && e_ == 0 && num_[0].is_rational(); }
    Q rational() const {
        if (is_zero()) return 0;
        if (!is_rational()) throw std::domain_error("not rational");
        return num_[0].rational();
    }

    u32 cyclotomic_order() const {
        u32 n = 1;
        for (auto& c : num_) n = lcm_u32(n, c.N());
        for (auto& c : den_) n = lcm_u32(n, c.N());
        return n;
    }

    friend ExactScalar operator+(const ExactScalar& a, const ExactScalar& b) { return add(a, b, false); }
    friend ExactScalar operator-(const ExactScalar& a, const ExactScalar& b) { return add(a, b, true); }
    friend ExactScalar operator-(ExactScalar a) {
        for (auto& c : a.num_) c = -c;
        return a;
    }
    friend ExactScalar operator*(const ExactScalar& a, const ExactScalar& b) {
        if (a.is_zero() || b.is_zero()) return {};
        ExactScalar r;
        r.e_ = a.e_ + b.e_;
        if (a.is_monomial() && a.num_[0].is_rational()) {
            Q s = a.num_[0].rational();
            r.num_ = b.num_;
            for (auto& c : r.num_) c = c.scaled(s);
            r.den_ = b.den_;
            return r;
        }
        if (b.is_monomial() && b.num_[0].is_rational()) {
            Q s = b.num_[0].rational();
            r.num_ = a.num_;
            for (auto& c : r.num_) c = c.scaled(s);
            r.den_ = a.den_;
            return r;
        }
        r.num_ = pmul(a.num_, b.num_);
        if (a.den_.empty() && b.den_.empty()) {
            r.normalize();
            return r;
        }
        r.den_ = pmul(a.den_.empty() ? Poly{Cyclo(1)} : a.den_, b.den_.empty() ? Poly{Cyclo(1)} : b.den_);
        r.reduce();
        return r;
    }
    friend ExactScalar operator/(const ExactScalar& a, const ExactScalar& b) { return a * b.inverse(); }
    ExactScalar& operator+=(const ExactScalar& b) { return *this = *this + b; }
    ExactScalar& operator-=(const ExactScalar& b) { return *this = *this - b; }
    ExactScalar& operator*=(const ExactScalar& b) { return *this = *this * b; }
    ExactScalar& operator/=(const ExactScalar& b) { return *this = *this / b; }

    ExactScalar inverse() const {
        if (is_zero()) throw std::domain_error("division by zero");
        if (is_monomial()) return monomial(num_[0].inverse(), -e_);
        ExactScalar r;
        r.e_ = -e_;
        Cyclo lead_inv = num_.back().inverse();
        r.num_ = den_.empty() ? Poly{Cyclo(1)} : den_;
        for (auto& c : r.num_) c *= lead_inv;
        r.den_ = num_;
        for (auto& c : r.den_) c *= lead_inv;
        r.reduce();
        return r;
    }

    friend bool operator==(const ExactScalar& a, const ExactScalar& b) {
        if (a.e_ != b.e_ || a.num_.size() != b.num_.size() || a.den_.size() != b.den_.size()) return false;
        for (std::size_t i = 0; i < a.num_.size(); ++i)
            if (a.num_[i] != b.num_[i]) return false;
        for (std::size_t i = 0; i < a.den_.size(); ++i)
            if (a.den_[i] != b.den_[i]) return false;
        return true;
    }
    friend bool operator!=(const ExactScalar& a, const ExactScalar& b) { return !(a == b); }

    ExactScalar conj() const {
        ExactScalar r = *this;
        for (auto& c : r.num_) c = c.conj();
        for (auto& c : r.den_) c = c.conj();
        return r;
    }

    Complex embed(mpfr_prec_t prec) const {
        const mpfr_prec_t wp = prec + 32;
        if (is_zero()) return Complex(prec);
        Real pi = Real::pi(wp);
        auto horner = [&](const Poly& p) {
            Complex acc(wp);
            for (std::size_t i = p.size(); i-- > 0;) {
                acc *= pi;
                acc += p[i].embed(wp);
            }
            return acc;
        };
        Complex v = horner(num_);
        if (!den_.empty()) v /= horner(den_);
        Real scale(1, wp);
        for (int i = 0; i < std::abs(e_); ++i) scale *= pi;
        if (e_ >= 0)
            v *= scale;
        else
            v /= Complex(scale, Real(wp));
        return v;
    }

    double magnitude() const { return abs(embed(64)).to_double(); }

    // Descending powers of pi, e.g. "pi^2/2 - 39/8".
    std::string str() const {
        if (is_zero()) return "0";
        std::string n = poly_str(num_, e_);
        if (den_.empty()) return n;
        return "(" + n + ")/(" + poly_str(den_, 0) + ")";
    }

private:
    static std::string term_str(const Cyclo& c, int k, bool first) {
        std::string pk = k == 0 ? "" : (k == 1 ? "pi" : "pi^" + std::to_string(k));
        std::string s;
        if (c.is_rational()) {
            Q q = c.rational();
            bool neg = q < 0;
            if (neg) q = -q;
            s = first ? (neg ? "-" : "") : (neg ? " - " : " + ");
            if (k == 0) return s + q.get_str();
            if (q.get_num() != 1) s += q.get_num().get_str() + "*";
            s += pk;
            if (q.get_den() != 1) s += "/" + q.get_den().get_str();
            return s;
        }
        s = first ? "" : " + ";
        s += "(" + c.str("zeta" + std::to_string(c.N())) + ")";
        if (k != 0) s += "*" + pk;
        return s;
    }

    static std::string poly_str(const Poly& p, int shift) {
        std::string s;
        bool first = true;
        for (std::size_t i = p.size(); i-- > 0;) {
            if (p[i].is_zero()) continue;
            s += term_str(p[i], static_cast<int>(i) + shift, first);
            first = false;
        }
        return s;
    }

    static void trim(Poly& p) {
        while (!p.empty() && p.back().is_zero()) p.pop_back();
    }

    static Poly pmul(const Poly& a, const Poly& b) {
        if (a.empty() || b.empty()) return {};
        Poly c(a.size() + b.size() - 1);
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i].is_zero()) continue;
            for (std::size_t j = 0; j < b.size(); ++j)
                if (!b[j].is_zero()) c[i + j] += a[i] * b[j];
        }
        trim(c);
        return c;
    }

    static Poly padd(const Poly& a, const Poly& b, bool sub) {
        Poly c(std::max(a.size(), b.size()));
        for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i];
        for (std::size_t i = 0; i < b.size(); ++i) c[i] = sub ? c[i] - b[i] : c[i] + b[i];
        trim(c);
        return c;
    }

    static Poly shifted(const Poly& p, int k) {
        Poly r(k, Cyclo());
        r.insert(r.end(), p.begin(), p.end());
        return r;
    }

    // quotient and remainder, b != 0
    static std::pair<Poly, Poly> pdivmod(Poly a, const Poly& b) {
        trim(a);
        Cyclo inv = b.back().inverse();
        const std::size_t db = b.size() - 1;
        Poly q(a.size() > db ? a.size() - db : 0);
        while (a.size() > db && !a.empty()) {
            Cyclo lead = a.back() * inv;
            std::size_t sh = a.size() - 1 - db;
            q[sh] = lead;
            for (std::size_t i = 0; i <= db; ++i) a[sh + i] -= lead * b[i];
            a.pop_back();
            trim(a);
        }
        return {q, a};
    }

    static Poly pgcd(Poly a, Poly b) {
        trim(a);
        trim(b);
        while (!b.empty()) {
            auto r = pdivmod(a, b).second;
            a = std::move(b);
            b = std::move(r);
        }
        if (!a.empty()) {
            Cyclo inv = a.back().inverse();
            for (auto& c : a) c *= inv;
        }
        return a;
    }

    static ExactScalar add(const ExactScalar& a, const ExactScalar& b, bool sub) {
        if (b.is_zero()) return a;
        if (a.is_zero()) return sub ? -b : b;
        ExactScalar r;
        r.e_ = std::min(a.e_, b.e_);
        Poly na = shifted(a.num_, a.e_ - r.e_);
        Poly nb = shifted(b.num_, b.e_ - r.e_);
        if (a.den_.empty() && b.den_.empty()) {
            r.num_ = padd(na, nb, sub);
            r.normalize();
            return r;
        }
        bool same = a.den_.size() == b.den_.size();
        for (std::size_t i = 0; same && i < a.den_.size(); ++i) same = a.den_[i] == b.den_[i];
        if (same) {
            r.num_ = padd(na, nb, sub);
            r.den_ = a.den_;
        } else {
            Poly da = a.den_.empty() ? Poly{Cyclo(1)} : a.den_;
            Poly db = b.den_.empty() ? Poly{Cyclo(1)} : b.den_;
            r.num_ = padd(pmul(na, db), pmul(nb, da), sub);
            r.den_ = pmul(da, db);
        }
        r.reduce();
        return r;
    }

    // strip pi factors from the numerator into e_
    void normalize() {
        trim(num_);
        if (num_.empty()) {
            den_.clear();
            e_ = 0;
            return;
        }
        std::size_t z = 0;
        while (num_[z].is_zero()) ++z;
        if (z) {
            num_.erase(num_.begin(), num_.begin() + z);
            e_ += static_cast<int>(z);
        }
    }

    void reduce() {
        trim(num_);
        trim(den_);
        if (num_.empty()) {
            *this = ExactScalar();
            return;
        }
        if (!den_.empty()) {
            std::size_t z = 0;
            while (den_[z].is_zero()) ++z;
            if (z) {
                den_.erase(den_.begin(), den_.begin() + z);
                e_ -= static_cast<int>(z);
            }
            Poly g = pgcd(num_, den_);
            if (g.size() > 1) {
                num_ = pdivmod(num_, g).first;
                den_ = pdivmod(den_, g).first;
            }
            Cyclo inv = den_.back().inverse();
            for (auto& c : num_) c *= inv;
            for (auto& c : den_) c *= inv;
            if (den_.size() == 1) den_.clear();
        }
        normalize();
    }

    int e_ = 0;
    Poly num_;
    Poly den_;
};

inline std::ostream& operator<<(std::ostream& os, const ExactScalar& s) { return os << s.str(); }
inline std::ostream& operator<<(std::ostream& os, const Cyclo& c) { return os << c.str(); }

struct ExactField {
    using Scalar = ExactScalar;
    static constexpr bool exact = true;
    u32 N = 4;  // preferred cyclotomic order; results may live in a larger field

    Scalar zero() const { return {}; }
    Scalar one() const { return Scalar(1); }
    Scalar from_q(const Q& q) const { return Scalar(q); }
    Scalar from_gauss(const GaussQ& g) const {
        if (g.im == 0) return Scalar(g.re);
        return Scalar(Cyclo(g.re) + Cyclo::root(lcm_u32(N, 4), lcm_u32(N, 4) / 4, g.im));
    }
    Scalar i() const { return Scalar(Cyclo::root(lcm_u32(N, 4), lcm_u32(N, 4) / 4)); }
    Scalar pi() const { return Scalar::pi_pow(1); }
    // 2 pi i c
    Scalar two_pi_i(const GaussQ& c) const {
        u32 M = lcm_u32(N, 4);
        Cyclo v = Cyclo::root(M, M / 4, Q(2 * c.re)) + Cyclo(Q(-2 * c.im));
        return Scalar::monomial(v, 1);
    }
    // e^{2 pi i q}; exact mode needs q real
    Scalar exp2pii(const GaussQ& q) const {
        if (q.im != 0) throw std::domain_error("exact mode cannot represent e^{2 pi i q} for non-real q");
        Q f = frac_q(q.re);
        u32 d = static_cast<u32>(f.get_den().get_ui());
        long long n = f.get_num().get_si();
        if (N % d == 0) return Scalar(Cyclo::root(N, n * (N / d)));
        return Scalar(Cyclo::root(d, n));
    }
    bool is_zero(const Scalar& s) const { return s.is_zero(); }
    bool equal(const Scalar& a, const Scalar& b) const { return a == b; }
    double magnitude(const Scalar& s) const { return s.magnitude(); }
    Scalar inv(const Scalar& s) const { return s.inverse(); }
    std::string str(const Scalar& s) const { return s.str(); }
    Complex embed(const Scalar& s, mpfr_prec_t prec) const { return s.embed(prec); }
};

struct NumericField {
    using Scalar = Complex;
    static constexpr bool exact = false;
    mpfr_prec_t prec = 128;

    Scalar zero() const { return Complex(prec); }
    Scalar one() const { return Complex(Q(1), Q(0), prec); }
    Scalar from_q(const Q& q) const { return Complex(q, Q(0), prec); }
    Scalar from_gauss(const GaussQ& g) const { return Complex(g.re, g.im, prec); }
    Scalar i() const { return Complex(Q(0), Q(1), prec); }
    Scalar pi() const { return Complex(Real::pi(prec), Real(prec)); }
    Scalar two_pi_i(const GaussQ& c) const {
        Real tp = Real::pi(prec) * Real(2, prec);
        return Complex(tp * Real(Q(-c.im), prec), tp * Real(c.re, prec));
    }
    Scalar exp2pii(const GaussQ& q) const {
        Real tp = Real::pi(prec) * Real(2, prec);
        Complex z = Complex::cis(tp * Real(frac_q(q.re), prec));
        if (q.im != 0) z *= exp(-(tp * Real(q.im, prec)));
        return z;
    }
    bool is_zero(const Scalar& s) const { return s.is_zero(); }
    bool equal(const Scalar& a, const Scalar& b) const {
        Real d = abs(a - b);
        Real m = abs(a) + abs(b) + Real(1, prec);
        Real tol(Q(1), prec);
        for (mpfr_prec_t k = 0; k < prec / 2; ++k) tol /= Real(2, prec);
        return d <= tol * m;
    }
    double magnitude(const Scalar& s) const { return abs(s).to_double(); }
    Scalar inv(const Scalar& s) const {
        if (s.is_zero()) throw std::domain_error("division by zero");
        return one() / s;
    }
    std::string str(const Scalar& s) const { return s.str(); }
    Complex embed(const Scalar& s, mpfr_prec_t) const { return s; }
};

}  // namespace latsum

namespace latsum {

inline bool is_zero(const ExactScalar& s) { return s.is_zero(); }
inline bool is_zero(const Complex& s) { return s.is_zero(); }
inline double magnitude(const ExactScalar& s) { return s.magnitude(); }
inline double magnitude(const Complex& s) { return abs(s).to_double(); }
inline ExactScalar inverse(const ExactScalar& s) { return s.inverse(); }
inline Complex inverse(const Complex& s) {
    if (s.is_zero()) throw std::domain_error("division by zero");
    return Complex(Q(1), Q(0), s.prec()) / s;
}
inline std::string to_string(const ExactScalar& s) { return s.str(); }
// q in the ring of `like`
inline ExactScalar lift_q(const ExactScalar&, const Q& q) { return ExactScalar(q); }
inline Complex lift_q(const Complex& like, const Q& q) { return Complex(q, Q(0), like.prec()); }
inline std::string to_string(const Complex& s) { return s.str(); }

}  // namespace latsum
