#pragma once

// Sparse arithmetic in Q(zeta_N).
//
// Elements are stored on the tensor product of the prime-power power bases:
// via CRT, Z/N = prod Z/q over prime powers q = p^e || N, and the exponent n
// is canonical iff (n mod q) < phi(q) for every q. Reducing a root of unity
// uses Phi_q(x) = sum_{k<p} x^{k p^(e-1)}, which keeps rationals and most
// roots single-term no matter how large N grows.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "latsum/rational.hpp"
#include "latsum/real.hpp"

namespace latsum {

using u32 = std::uint32_t;
using u64 = std::uint64_t;

struct CycloRing {
    struct Component {
        u32 p, q, s, phi;       // q = p^e, s = p^(e-1), phi = (p-1)s
        std::vector<u32> lift;  // lift[c] = exponent mod N of the CRT element with component c
    };
    u32 N = 1;
    u32 degree = 1;
    std::vector<Component> comps;

    explicit CycloRing(u32 n) : N(n) {
        u32 m = n;
        for (u32 p = 2; p * p <= m || m > 1; ++p) {
            if (p * p > m) p = m;
            if (m % p) continue;
            Component c{p, 1, 1, 0, {}};
            while (m % p == 0) m /= p, c.q *= p;
            c.s = c.q / p;
            c.phi = c.q - c.s;
            // idempotent: e = 1 mod q, 0 mod N/q
            u64 rest = n / c.q;
            u64 inv = 0;
            for (u64 t = 0; t < c.q; ++t)
                if ((rest * t) % c.q == 1 % c.q) {
                    inv = t;
                    break;
                }
            u64 idem = (rest * inv) % n;
            c.lift.resize(c.q);
            for (u64 k = 0; k < c.q; ++k) c.lift[k] = static_cast<u32>((k * idem) % n);
            comps.push_back(std::move(c));
        }
        for (auto& c : comps) degree *= c.phi;
    }

    bool canonical(u32 n) const {
        for (auto& c : comps)
            if (n % c.q >= c.phi) return false;
        return true;
    }

    // Calls f(exponent, sign) for the canonical expansion of zeta^n.
    template <class F>
    void expand(u32 n, F&& f) const {
        if (canonical(n)) {
            f(n, 1);
            return;
        }
        expand_rec(n, 0, 0, 1, f);
    }

private:
    template <class F>
    void expand_rec(u32 n, std::size_t i, u64 acc, int sign, F& f) const {
        if (i == comps.size()) {
            f(static_cast<u32>(acc % N), sign);
            return;
        }
        const auto& c = comps[i];
        u32 v = n % c.q;
        if (v < c.phi) {
            expand_rec(n, i + 1, acc + c.lift[v], sign, f);
        } else {
            u32 j = v - c.phi;
            for (u32 k = 0; k + 1 < c.p; ++k) expand_rec(n, i + 1, acc + c.lift[j + k * c.s], -sign, f);
        }
    }
};

inline const CycloRing* cyclo_ring(u32 N) {
    static std::mutex mu;
    static std::map<u32, std::unique_ptr<CycloRing>> rings;
    if (N == 0) throw std::invalid_argument("cyclotomic order must be positive");
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = rings[N];
    if (!slot) slot = std::make_unique<CycloRing>(N);
    return slot.get();
}

inline u32 lcm_u32(u32 a, u32 b) {
    u64 l = static_cast<u64>(a) / std::gcd(a, b) * b;
    if (l > 0xffffffffu) throw std::overflow_error("cyclotomic order overflow");
    return static_cast<u32>(l);
}

// Integer polynomial helpers (coefficient i = x^i).
namespace detail {

using QPoly = std::vector<Q>;

inline void trim(QPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline QPoly poly_mod(QPoly a, const QPoly& m) {
    trim(a);
    const std::size_t dm = m.size() - 1;
    while (a.size() > dm) {
        Q lead = a.back() / m.back();
        std::size_t shift = a.size() - 1 - dm;
        for (std::size_t i = 0; i <= dm; ++i) a[shift + i] -= lead * m[i];
        a.pop_back();
        trim(a);
    }
    return a;
}

inline std::pair<QPoly, QPoly> poly_divmod(QPoly a, const QPoly& m) {
    trim(a);
    const std::size_t dm = m.size() - 1;
    QPoly quot(a.size() > dm ? a.size() - dm : 0, Q(0));
    while (a.size() > dm) {
        Q lead = a.back() / m.back();
        std::size_t shift = a.size() - 1 - dm;
        quot[shift] = lead;
        for (std::size_t i = 0; i <= dm; ++i) a[shift + i] -= lead * m[i];
        a.pop_back();
        trim(a);
    }
    return {quot, a};
}

inline QPoly poly_mul(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty()) return {};
    QPoly c(a.size() + b.size() - 1, Q(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0)
            for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    trim(c);
    return c;
}

inline QPoly poly_sub(QPoly a, const QPoly& b) {
    if (a.size() < b.size()) a.resize(b.size(), Q(0));
    for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    trim(a);
    return a;
}

// Phi_n via x^n - 1 = prod_{d | n} Phi_d.
inline QPoly cyclotomic_poly(u32 n) {
    static std::mutex mu;
    static std::map<u32, QPoly> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(n);
        if (it != cache.end()) return it->second;
    }
    QPoly r(n + 1, Q(0));
    r[0] = -1;
    r[n] = 1;
    for (u32 d = 1; d < n; ++d)
        if (n % d == 0) r = poly_divmod(r, cyclotomic_poly(d)).first;
    std::lock_guard<std::mutex> lock(mu);
    cache[n] = r;
    return r;
}

// s with s*a = 1 mod m (m irreducible, a != 0 mod m).
inline QPoly poly_inverse_mod(const QPoly& a, const QPoly& m) {
    QPoly r0 = m, r1 = poly_mod(a, m);
    QPoly s0, s1{Q(1)};
    while (!(r1.size() == 1)) {
        if (r1.empty()) throw std::domain_error("non-invertible cyclotomic element");
        auto [q, r] = poly_divmod(r0, r1);
        QPoly s = poly_sub(s0, poly_mul(q, s1));
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s);
    }
    Q c = 1 / r1[0];
    for (auto& x : s1) x *= c;
    return poly_mod(s1, m);
}

}  // namespace detail

class Cyclo {
public:
    using Term = std::pair<u32, Q>;

    Cyclo() = default;
    Cyclo(const Q& q) {  // NOLINT implicit: rationals embed everywhere
        if (q != 0) t_.push_back({0, q});
    }
    Cyclo(long n) : Cyclo(Q(n)) {}

    // c * zeta_N^n
    static Cyclo root(u32 N, long long n, const Q& c = Q(1)) {
        Cyclo r;
        if (c == 0) return r;
        long long m = n % static_cast<long long>(N);
        if (m < 0) m += N;
        if (N == 1 || m == 0) return Cyclo(c);
        r.ring_ = cyclo_ring(N);
        r.ring_->expand(static_cast<u32>(m), [&](u32 e, int sg) { r.t_.push_back({e, sg > 0 ? c : Q(-c)}); });
        r.normalize();
        return r;
    }

    // e^{2 pi i q}
    static Cyclo exp2pii(const Q& q) {
        Q f = frac_q(q);
        return root(static_cast<u32>(f.get_den().get_ui()), static_cast<long long>(f.get_num().get_si()));
    }

    static Cyclo i_unit() { return root(4, 1); }

    u32 N() const { return ring_ ? ring_->N : 1; }
    const CycloRing* ring() const { return ring_; }
    const std::vector<Term>& terms() const { return t_; }

    bool is_zero() const { return t_.empty(); }
    bool is_rational() const { return t_.empty() || (t_.size() == 1 && t_[0].first == 0); }
    Q rational() const {
        if (!is_rational()) throw std::domain_error("not rational");
        return t_.empty() ? Q(0) : t_[0].second;
    }
    std::size_t size() const { return t_.size(); }

    // Same element in Q(zeta_L), N | L.
    Cyclo lifted(u32 L) const {
        if (L == N() || is_rational()) {
            Cyclo r = *this;
            if (!is_rational()) r.ring_ = cyclo_ring(L);
            return r;
        }
        if (L % N() != 0) throw std::invalid_argument("lift target not a multiple");
        const CycloRing* R = cyclo_ring(L);
        u64 f = L / N();
        std::vector<Term> out;
        out.reserve(t_.size());
        for (auto& [e, c] : t_) {
            R->expand(static_cast<u32>((e * f) % L), [&](u32 x, int sg) { out.push_back({x, sg > 0 ? c : Q(-c)}); });
        }
        Cyclo r;
        r.ring_ = R;
        r.t_ = std::move(out);
        r.normalize();
        return r;
    }

    friend Cyclo operator+(const Cyclo& a, const Cyclo& b) { return combine(a, b, false); }
    friend Cyclo operator-(const Cyclo& a, const Cyclo& b) { return combine(a, b, true); }
    friend Cyclo operator-(Cyclo a) {
        for (auto& t : a.t_) t.second = -t.second;
        return a;
    }
    Cyclo& operator+=(const Cyclo& b) { return *this = *this + b; }
    Cyclo& operator-=(const Cyclo& b) { return *this = *this - b; }
    Cyclo& operator*=(const Cyclo& b) { return *this = *this * b; }

    friend Cyclo operator*(const Cyclo& a, const Cyclo& b) {
        if (a.is_zero() || b.is_zero()) return {};
        if (a.is_rational()) return b.scaled(a.t_[0].second);
        if (b.is_rational()) return a.scaled(b.t_[0].second);
        if (a.N() != b.N()) {
            u32 L = lcm_u32(a.N(), b.N());
            return a.lifted(L) * b.lifted(L);
        }
        const CycloRing* R = a.ring_;
        const u32 N = R->N;
        static thread_local std::vector<Term> out;
        out.clear();
        Q prod;
        for (auto& [ea, ca] : a.t_)
            for (auto& [eb, cb] : b.t_) {
                prod = ca * cb;
                u32 e = ea + eb;
                if (e >= N) e -= N;
                R->expand(e, [&](u32 x, int sg) { out.push_back({x, sg > 0 ? prod : Q(-prod)}); });
            }
        Cyclo r;
        r.ring_ = R;
        r.t_.assign(out.begin(), out.end());
        r.normalize();
        return r;
    }

    Cyclo scaled(const Q& s) const {
        if (s == 0) return {};
        Cyclo r = *this;
        for (auto& t : r.t_) t.second *= s;
        return r;
    }

    Cyclo inverse() const {
        if (is_zero()) throw std::domain_error("inverse of zero");
        if (t_.size() == 1) {
            const auto& [e, c] = t_[0];
            return root(N(), -static_cast<long long>(e), Q(1 / c));
        }
        // move to the smallest subfield Q(zeta_m) holding the element
        u32 g = N();
        for (auto& t : t_) g = std::gcd(g, t.first);
        u32 m = N() / g;
        Cyclo sub;
        sub.ring_ = cyclo_ring(m);
        for (auto& [e, c] : t_) {
            sub.ring_->expand(e / g, [&](u32 x, int sg) { sub.t_.push_back({x, sg > 0 ? c : Q(-c)}); });
        }
        sub.normalize();
        auto phi = detail::cyclotomic_poly(m);
        detail::QPoly a(m, Q(0));
        for (auto& [e, c] : sub.t_) a[e] += c;
        auto s = detail::poly_inverse_mod(a, phi);
        Cyclo inv;
        for (std::size_t j = 0; j < s.size(); ++j)
            if (s[j] != 0) inv += root(m, static_cast<long long>(j), s[j]);
        return inv.lifted(lcm_u32(inv.N(), N()));
    }

    friend bool operator==(const Cyclo& a, const Cyclo& b) { return (a - b).is_zero(); }
    friend bool operator!=(const Cyclo& a, const Cyclo& b) { return !(a == b); }

    // Complex conjugate: zeta^n -> zeta^-n.
    Cyclo conj() const {
        Cyclo r;
        for (auto& [e, c] : t_) r += root(N(), -static_cast<long long>(e), c);
        return r.N() == N() || is_rational() ? r : r.lifted(N());
    }

    Complex embed(mpfr_prec_t prec) const {
        Complex s(prec);
        if (t_.empty()) return s;
        Real two_pi_over_n = Real::pi(prec + 16) * Real(2, prec + 16) / Real(static_cast<long>(N()), prec + 16);
        for (auto& [e, c] : t_) {
            Complex z = e == 0 ? Complex(Real(1, prec + 16), Real(prec + 16))
                               : Complex::cis(two_pi_over_n * Real(static_cast<long>(e), prec + 16));
            z *= Real(c, prec + 16);
            s += z;
        }
        return s;
    }

    double magnitude() const {
        if (is_rational()) return std::abs(rational().get_d());
        return abs(embed(64)).to_double();
    }

    // "3/2 - 1/4*z^5 + z^7" in the canonical basis of Q(zeta_N).
    std::string str(const std::string& var = "z") const {
        if (t_.empty()) return "0";
        std::string s;
        bool first = true;
        for (auto& [e, c] : t_) {
            bool neg = c < 0;
            Q a = neg ? Q(-c) : c;
            if (first)
                s += neg ? "-" : "";
            else
                s += neg ? " - " : " + ";
            first = false;
            if (e == 0) {
                s += a.get_str();
                continue;
            }
            if (a != 1) {
                if (a.get_num() != 1) s += a.get_num().get_str() + "*";
            }
            s += var + (e == 1 ? "" : "^" + std::to_string(e));
            if (a.get_den() != 1) s += "/" + a.get_den().get_str();
        }
        return s;
    }

    // Total order on the canonical representation (for deterministic sorting).
    friend bool repr_less(const Cyclo& a, const Cyclo& b) {
        if (a.N() != b.N()) return a.N() < b.N();
        if (a.t_.size() != b.t_.size()) return a.t_.size() < b.t_.size();
        for (std::size_t i = 0; i < a.t_.size(); ++i) {
            if (a.t_[i].first != b.t_[i].first) return a.t_[i].first < b.t_[i].first;
            if (a.t_[i].second != b.t_[i].second) return a.t_[i].second < b.t_[i].second;
        }
        return false;
    }

private:
    static Cyclo combine(const Cyclo& a, const Cyclo& b, bool sub) {
        if (b.is_zero()) return a;
        if (a.is_zero()) return sub ? -b : b;
        if (a.N() != b.N() && !a.is_rational() && !b.is_rational()) {
            u32 L = lcm_u32(a.N(), b.N());
            return combine(a.lifted(L), b.lifted(L), sub);
        }
        Cyclo r;
        r.ring_ = a.is_rational() ? b.ring_ : a.ring_;
        r.t_.reserve(a.t_.size() + b.t_.size());
        std::size_t i = 0, j = 0;
        while (i < a.t_.size() || j < b.t_.size()) {
            if (j == b.t_.size() || (i < a.t_.size() && a.t_[i].first < b.t_[j].first)) {
                r.t_.push_back(a.t_[i++]);
            } else if (i == a.t_.size() || b.t_[j].first < a.t_[i].first) {
                r.t_.push_back({b.t_[j].first, sub ? Q(-b.t_[j].second) : b.t_[j].second});
                ++j;
            } else {
                Q c = sub ? Q(a.t_[i].second - b.t_[j].second) : Q(a.t_[i].second + b.t_[j].second);
                if (c != 0) r.t_.push_back({a.t_[i].first, c});
                ++i, ++j;
            }
        }
        if (r.is_rational()) r.ring_ = nullptr;
        return r;
    }

    void normalize() {
        std::sort(t_.begin(), t_.end(), [](const Term& x, const Term& y) { return x.first < y.first; });
        normalize_sorted();
    }
    void normalize_sorted() {
        std::size_t w = 0;
        for (std::size_t i = 0; i < t_.size();) {
            u32 e = t_[i].first;
            Q c = t_[i].second;
            std::size_t j = i + 1;
            for (; j < t_.size() && t_[j].first == e; ++j) c += t_[j].second;
            if (c != 0) t_[w++] = {e, c};
            i = j;
        }
        t_.resize(w);
        if (is_rational()) ring_ = nullptr;
    }

    const CycloRing* ring_ = nullptr;
    std::vector<Term> t_;
};

}  // namespace latsum
