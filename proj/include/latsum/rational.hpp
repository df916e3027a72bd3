#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace latsum {

using Q = mpq_class;
using Z = mpz_class;

inline Q make_q(long n, long d = 1) {
    Q q(n, d);
    q.canonicalize();
    return q;
}

inline Z floor_q(const Q& q) {
    Z r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

// Fractional part in [0,1).
inline Q frac_q(const Q& q) { return q - Q(floor_q(q)); }

inline bool is_integer(const Q& q) { return q.get_den() == 1; }

inline Z lcm_z(const Z& a, const Z& b) {
    Z r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline Z gcd_z(const Z& a, const Z& b) {
    Z r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline std::string to_string(const Q& q) { return q.get_str(); }

// Parses "p/q", "-7", "0.125", "1e-3", "+3/4".
inline Q parse_q(const std::string& raw) {
    std::string s;
    for (char c : raw)
        if (c != ' ' && c != '\t') s.push_back(c);
    if (s.empty()) throw std::invalid_argument("empty rational");
    if (s[0] == '+') s.erase(0, 1);
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        Q a = parse_q(s.substr(0, slash));
        Q b = parse_q(s.substr(slash + 1));
        if (b == 0) throw std::invalid_argument("zero denominator in '" + raw + "'");
        Q r = a / b;
        return r;
    }
    bool neg = false;
    std::size_t i = 0;
    if (s[0] == '-') {
        neg = true;
        i = 1;
    }
    std::string mant, expo;
    auto epos = s.find_first_of("eE", i);
    mant = s.substr(i, epos == std::string::npos ? std::string::npos : epos - i);
    if (epos != std::string::npos) expo = s.substr(epos + 1);
    if (mant.empty()) throw std::invalid_argument("bad rational '" + raw + "'");
    std::string digits;
    long scale = 0;
    bool seen_dot = false;
    for (char c : mant) {
        if (c == '.') {
            if (seen_dot) throw std::invalid_argument("bad rational '" + raw + "'");
            seen_dot = true;
        } else if (c >= '0' && c <= '9') {
            digits.push_back(c);
            if (seen_dot) ++scale;
        } else {
            throw std::invalid_argument("bad rational '" + raw + "'");
        }
    }
    if (digits.empty()) throw std::invalid_argument("bad rational '" + raw + "'");
    long e = 0;
    if (!expo.empty()) e = std::stol(expo);
    e -= scale;
    Z num(digits, 10);
    Q r(num);
    Z ten = 10;
    Z p;
    mpz_pow_ui(p.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(e < 0 ? -e : e));
    if (e >= 0)
        r *= Q(p);
    else
        r /= Q(p);
    r.canonicalize();
    return neg ? Q(-r) : r;
}

// Exact rational value of a finite double.
inline Q q_from_double(double x) {
    Q r(x);
    r.canonicalize();
    return r;
}

// Gaussian rational re + i*im.
struct GaussQ {
    Q re, im;
    GaussQ() = default;
    GaussQ(Q r, Q i = 0) : re(std::move(r)), im(std::move(i)) {}
    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }
    friend GaussQ operator+(const GaussQ& a, const GaussQ& b) { return {a.re + b.re, a.im + b.im}; }
    friend GaussQ operator-(const GaussQ& a, const GaussQ& b) { return {a.re - b.re, a.im - b.im}; }
    friend GaussQ operator*(const Q& s, const GaussQ& a) { return {s * a.re, s * a.im}; }
    friend bool operator==(const GaussQ& a, const GaussQ& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const GaussQ& a, const GaussQ& b) { return !(a == b); }
};

inline std::string to_string(const GaussQ& g) {
    if (g.im == 0) return to_string(g.re);
    return "(" + to_string(g.re) + (g.im < 0 ? " - " : " + ") + to_string(abs(g.im)) + "*i)";
}

using QVec = std::vector<Q>;
using ZVec = std::vector<Z>;

inline Q dot(const QVec& a, const QVec& b) {
    Q s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Q dot(const ZVec& a, const QVec& b) {
    Q s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += Q(a[i]) * b[i];
    return s;
}

inline QVec to_qvec(const ZVec& v) { return QVec(v.begin(), v.end()); }

}  // namespace latsum
