#pragma once

// Truncated multivariate power series, linear forms, rational forms with
// constant-free linear denominators, and exact division by such forms.
//
// A Series of order K knows every coefficient of total degree <= K; terms
// above K are never stored. Exact polynomials carry order kExact.

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <type_traits>
#include <unordered_map>
#include <utility>
#include <vector>

#include "latsum/errors.hpp"
#include "latsum/scalar.hpp"

namespace latsum {

using Mono = std::uint64_t;  // 6 bits per variable, variable 0 in the top field

constexpr int kMaxVars = 10;
constexpr int kBits = 6;
constexpr int kMaxDeg = (1 << kBits) - 1;

inline int mono_shift(int nvars, int i) { return kBits * (nvars - 1 - i); }

inline Mono mono_pack(const std::vector<int>& e) {
    Mono m = 0;
    const int n = static_cast<int>(e.size());
    for (int i = 0; i < n; ++i) {
        if (e[i] < 0 || e[i] > kMaxDeg) throw std::out_of_range("exponent out of range");
        m |= static_cast<Mono>(e[i]) << mono_shift(n, i);
    }
    return m;
}

inline std::vector<int> mono_unpack(Mono m, int nvars) {
    std::vector<int> e(nvars);
    for (int i = 0; i < nvars; ++i) e[i] = static_cast<int>((m >> mono_shift(nvars, i)) & kMaxDeg);
    return e;
}

inline int mono_exp(Mono m, int nvars, int i) { return static_cast<int>((m >> mono_shift(nvars, i)) & kMaxDeg); }

inline int mono_degree(Mono m) {
    int d = 0;
    while (m) {
        d += static_cast<int>(m & kMaxDeg);
        m >>= kBits;
    }
    return d;
}

inline Mono mono_var(int nvars, int i, int power = 1) { return static_cast<Mono>(power) << mono_shift(nvars, i); }

template <class S>
constexpr bool scalar_exact = std::is_same_v<S, ExactScalar>;

template <class S>
class Series {
public:
    static constexpr int kExact = 1 << 20;
    using Terms = std::map<Mono, S>;

    Series() = default;
    Series(int nvars, int order) : n_(nvars), K_(order) {
        if (nvars > kMaxVars) throw std::invalid_argument("too many series variables");
    }

    static Series constant(int nvars, int order, const S& c) {
        Series s(nvars, order);
        s.add(0, c);
        return s;
    }
    static Series variable(int nvars, int order, int i, const S& coeff) {
        Series s(nvars, order);
        s.add(mono_var(nvars, i), coeff);
        return s;
    }

    int nvars() const { return n_; }
    int order() const { return K_; }
    bool exact_poly() const { return K_ >= kExact; }
    const Terms& terms() const { return t_; }
    bool empty() const { return t_.empty(); }
    std::size_t size() const { return t_.size(); }

    S coeff(Mono m) const {
        auto it = t_.find(m);
        return it == t_.end() ? S() : it->second;
    }
    S coeff(const std::vector<int>& e) const { return coeff(mono_pack(e)); }

    // Lowest total degree present (kExact for the zero series).
    int valuation() const {
        int v = kExact;
        for (auto& [m, c] : t_) v = std::min(v, mono_degree(m));
        return v;
    }

    void add(Mono m, const S& c) {
        if (mono_degree(m) > K_ || is_zero(c)) return;
        auto [it, fresh] = t_.try_emplace(m, c);
        if (!fresh) {
            it->second += c;
            if (is_zero(it->second)) t_.erase(it);
        }
    }

    Series truncated(int K) const {
        Series r(n_, std::min(K, K_));
        for (auto& [m, c] : t_)
            if (mono_degree(m) <= r.K_) r.t_.emplace(m, c);
        return r;
    }

    Series& operator+=(const Series& b) {
        check(b);
        int K = std::min(K_, b.K_);
        if (K < K_) *this = truncated(K);
        for (auto& [m, c] : b.t_) add(m, c);
        return *this;
    }
    Series& operator-=(const Series& b) {
        check(b);
        int K = std::min(K_, b.K_);
        if (K < K_) *this = truncated(K);
        for (auto& [m, c] : b.t_) add(m, -c);
        return *this;
    }
    friend Series operator+(Series a, const Series& b) { return a += b; }
    friend Series operator-(Series a, const Series& b) { return a -= b; }
    friend Series operator-(Series a) {
        for (auto& [m, c] : a.t_) c = -c;
        return a;
    }

    Series scaled(const S& s) const {
        Series r(n_, K_);
        if (is_zero(s)) return r;
        for (auto& [m, c] : t_) r.add(m, c * s);
        return r;
    }

    friend Series operator*(const Series& a, const Series& b) {
        a.check(b);
        // valuation-aware: a known to Ka, b to Kb => product known to min(Ka+vb, Kb+va)
        int va = a.valuation(), vb = b.valuation();
        long long Ka = a.K_, Kb = b.K_;
        long long K = std::min({Ka + vb, Kb + va, static_cast<long long>(kExact)});
        Series r(a.n_, static_cast<int>(K));
        std::vector<std::pair<Mono, int>> bk;
        bk.reserve(b.t_.size());
        for (auto& [m, c] : b.t_) bk.push_back({m, mono_degree(m)});
        std::vector<const S*> bc;
        for (auto& [m, c] : b.t_) bc.push_back(&c);
        std::unordered_map<Mono, S> acc;
        for (auto& [ma, ca] : a.t_) {
            int da = mono_degree(ma);
            for (std::size_t j = 0; j < bk.size(); ++j) {
                if (da + bk[j].second > K) continue;
                Mono m = ma + bk[j].first;
                auto it = acc.find(m);
                if (it == acc.end())
                    acc.emplace(m, ca * *bc[j]);
                else
                    it->second += ca * *bc[j];
            }
        }
        for (auto& [m, c] : acc)
            if (!is_zero(c)) r.t_.emplace(m, std::move(c));
        return r;
    }
    Series& operator*=(const Series& b) { return *this = *this * b; }

    // Homogeneous component of degree d.
    Series homogeneous(int d) const {
        Series r(n_, K_);
        for (auto& [m, c] : t_)
            if (mono_degree(m) == d) r.t_.emplace(m, c);
        return r;
    }

    // Multiplies by x_i^k (exact shift); order grows by k.
    Series times_var(int i, int k = 1) const {
        Series r(n_, K_ >= kExact ? kExact : K_ + k);
        for (auto& [m, c] : t_) {
            if (mono_exp(m, n_, i) + k > kMaxDeg) throw std::out_of_range("exponent overflow");
            r.t_.emplace(m + mono_var(n_, i, k), c);
        }
        return r;
    }

    // Lines "(e1,...,en) : scalar", lexicographic in the exponent tuple.
    std::string dump() const {
        std::ostringstream os;
        std::vector<std::pair<std::vector<int>, const S*>> rows;
        for (auto& [m, c] : t_) rows.push_back({mono_unpack(m, n_), &c});
        std::sort(rows.begin(), rows.end(), [](auto& x, auto& y) { return x.first < y.first; });
        for (auto& [e, c] : rows) {
            os << "(";
            for (std::size_t i = 0; i < e.size(); ++i) os << (i ? "," : "") << e[i];
            os << ") : " << to_string(*c) << "\n";
        }
        return os.str();
    }

    void check(const Series& b) const {
        if (n_ != b.n_) throw std::invalid_argument("series variable sets differ");
    }

    Terms& mutable_terms() { return t_; }
    void set_order(int K) { K_ = K; }

private:
    int n_ = 0;
    int K_ = 0;
    Terms t_;
};

template <class S>
struct LinearForm {
    std::vector<S> coeffs;
    S constant;

    int nvars() const { return static_cast<int>(coeffs.size()); }
    bool constant_free() const { return is_zero(constant); }
    bool linear_zero() const {
        for (auto& c : coeffs)
            if (!is_zero(c)) return false;
        return true;
    }

    Series<S> to_series(int order = Series<S>::kExact) const {
        Series<S> s(nvars(), order);
        s.add(0, constant);
        for (int i = 0; i < nvars(); ++i) s.add(mono_var(nvars(), i), coeffs[i]);
        return s;
    }

    // Scales so the first nonzero coefficient is 1; returns the factor removed.
    S normalize() {
        for (auto& c : coeffs)
            if (!is_zero(c)) {
                S lead = c;
                S inv = inverse(lead);
                for (auto& d : coeffs) d = d * inv;
                constant = constant * inv;
                return lead;
            }
        throw std::domain_error("zero linear form");
    }

    std::string str() const {
        std::string s;
        for (int i = 0; i < nvars(); ++i)
            if (!is_zero(coeffs[i])) s += (s.empty() ? "" : " + ") + ("(" + to_string(coeffs[i]) + ")*t" + std::to_string(i));
        if (!is_zero(constant)) s += (s.empty() ? "" : " + ") + ("(" + to_string(constant) + ")");
        return s.empty() ? "0" : s;
    }
};

template <class S>
bool same_form(const LinearForm<S>& a, const LinearForm<S>& b) {
    if (a.nvars() != b.nvars()) return false;
    for (int i = 0; i < a.nvars(); ++i)
        if constexpr (scalar_exact<S>) {
            if (!(a.coeffs[i] == b.coeffs[i])) return false;
        } else {
            if (magnitude(a.coeffs[i] - b.coeffs[i]) > 1e-25 * (1 + magnitude(a.coeffs[i]))) return false;
        }
    return true;
}

// Inverse of a series with nonzero constant term.
template <class S>
Series<S> invert_unit(const Series<S>& s) {
    S c0 = s.coeff(Mono(0));
    if (is_zero(c0)) throw std::domain_error("invert_unit: zero constant term");
    const int K = std::min(s.order(), Series<S>::kExact - 1);
    if (K >= Series<S>::kExact / 2) throw std::domain_error("invert_unit needs a finite order");
    S inv0 = inverse(c0);
    std::vector<std::vector<std::pair<Mono, S>>> sh(K + 1);
    for (auto& [m, c] : s.terms()) {
        int d = mono_degree(m);
        if (d >= 1 && d <= K) sh[d].push_back({m, c});
    }
    std::vector<std::unordered_map<Mono, S>> rh(K + 1);
    rh[0].emplace(Mono(0), inv0);
    for (int d = 1; d <= K; ++d) {
        std::unordered_map<Mono, S>& cur = rh[d];
        for (int j = 1; j <= d; ++j)
            for (auto& [ms, cs] : sh[j])
                for (auto& [mr, cr] : rh[d - j]) {
                    auto it = cur.find(ms + mr);
                    if (it == cur.end())
                        cur.emplace(ms + mr, cs * cr);
                    else
                        it->second += cs * cr;
                }
        S f = -inv0;
        for (auto& [m, c] : cur) c = c * f;
    }
    Series<S> r(s.nvars(), K);
    for (auto& h : rh)
        for (auto& [m, c] : h)
            if (!is_zero(c)) r.mutable_terms().emplace(m, c);
    return r;
}

inline Q factorial_inv(int j) {
    Z f = 1;
    for (int i = 2; i <= j; ++i) f *= i;
    return Q(1) / Q(f);
}

// exp(s) for s with zero constant term.
template <class S>
Series<S> exp_series(const Series<S>& s, const S& one) {
    if (!is_zero(s.coeff(Mono(0)))) throw std::domain_error("exp_series: nonzero constant term");
    const int K = s.order();
    if (K >= Series<S>::kExact / 2) throw std::domain_error("exp_series needs a finite order");
    Series<S> r = Series<S>::constant(s.nvars(), K, one);
    Series<S> p = r;
    for (int j = 1; j <= K; ++j) {
        p = (p * s).truncated(K);
        if (p.empty()) break;
        r += p.scaled(lift_q(one, factorial_inv(j)));
    }
    return r;
}

// Replace variable p by the series L (linear substitution keeps degrees).
template <class S>
Series<S> substitute_var(const Series<S>& s, int p, const Series<S>& L) {
    const int n = s.nvars();
    const int K = s.order();
    std::map<int, Series<S>> groups;  // t_p power -> remaining polynomial
    for (auto& [m, c] : s.terms()) {
        int e = mono_exp(m, n, p);
        auto it = groups.find(e);
        if (it == groups.end()) it = groups.emplace(e, Series<S>(n, K)).first;
        it->second.mutable_terms().emplace(m - mono_var(n, p, e), c);
    }
    Series<S> out(n, K);
    if (groups.empty()) return out;
    int maxe = groups.rbegin()->first;
    Series<S> pw = Series<S>::constant(n, K, lift_q(s.terms().begin()->second, Q(1)));
    for (int e = 0; e <= maxe; ++e) {
        auto it = groups.find(e);
        if (it != groups.end()) out += (pw * it->second).truncated(K);
        if (e < maxe) pw = (pw * L).truncated(K);
    }
    out.set_order(K);
    return out;
}

template <class S>
int pivot_index(const LinearForm<S>& l) {
    int p = -1;
    double best = -1;
    for (int i = 0; i < l.nvars(); ++i) {
        if (is_zero(l.coeffs[i])) continue;
        double m = magnitude(l.coeffs[i]);
        if (m > best * (1 + 1e-12)) best = m, p = i;
    }
    if (p < 0) throw std::domain_error("zero linear form");
    return p;
}

struct DivisionStats {
    double residual = 0;  // numeric mode only
};

// q with q*l = s (mod truncation); l has zero constant term.
template <class S>
Series<S> divide_exact(const Series<S>& s, const LinearForm<S>& l, DivisionStats* stats = nullptr) {
    if (!l.constant_free()) throw std::domain_error("divide_exact: linear form has a constant term");
    const int n = s.nvars();
    const int p = pivot_index(l);
    const S ap = l.coeffs[p];
    const S inv_ap = inverse(ap);
    // forward: t_p = (u - sum_{i != p} a_i t_i) / a_p, u stored in slot p
    LinearForm<S> fwd;
    fwd.coeffs.assign(n, S());
    fwd.constant = S();
    for (int i = 0; i < n; ++i) fwd.coeffs[i] = i == p ? inv_ap : -(l.coeffs[i] * inv_ap);
    Series<S> su = substitute_var(s, p, fwd.to_series());
    const int K = s.order();
    Series<S> qu(n, K >= Series<S>::kExact ? K : K - 1);
    std::vector<std::pair<Mono, S>> rest;
    for (auto& [m, c] : su.terms()) {
        if (mono_exp(m, n, p) == 0)
            rest.push_back({m, c});
        else
            qu.mutable_terms().emplace(m - mono_var(n, p), c);
    }
    if (!rest.empty()) {
        if constexpr (scalar_exact<S>) {
            std::ostringstream os;
            for (auto& [m, c] : rest) {
                auto e = mono_unpack(m, n);
                os << "(";
                for (int i = 0; i < n; ++i) os << (i ? "," : "") << e[i];
                os << ") : " << to_string(c) << "\n";
            }
            throw NonDivisible("series is not divisible by " + l.str(), os.str());
        } else {
            double res = 0, norm = 0;
            for (auto& [m, c] : rest) res = std::max(res, magnitude(c));
            for (auto& [m, c] : s.terms()) norm = std::max(norm, magnitude(c));
            mpfr_prec_t prec = s.empty() ? 128 : s.terms().begin()->second.prec();
            double tol = std::ldexp(1.0, -static_cast<int>(prec / 2)) * std::max(norm, 1.0);
            if (res > tol) throw NonDivisible("numeric residual above tolerance for " + l.str(), std::to_string(res));
            if (stats) stats->residual = std::max(stats->residual, res);
        }
    }
    return substitute_var(qu, p, l.to_series());
}

template <class S>
struct RationalForm {
    Series<S> numerator;
    std::vector<LinearForm<S>> denominators;  // each constant-free
};

// Sum of rational forms; the total must be holomorphic.
template <class S>
Series<S> sum_rational_forms(std::vector<RationalForm<S>> forms, DivisionStats* stats = nullptr,
                             int* divisions = nullptr) {
    if (forms.empty()) throw std::invalid_argument("no forms");
    const int n = forms[0].numerator.nvars();
    std::vector<LinearForm<S>> distinct;
    std::vector<int> mult;
    for (auto& f : forms) {
        std::vector<int> local;
        for (auto& l : f.denominators) {
            if (!l.constant_free() || l.linear_zero()) throw std::invalid_argument("bad denominator");
            LinearForm<S> nl = l;
            S lead = nl.normalize();
            f.numerator = f.numerator.scaled(inverse(lead));
            std::size_t k = 0;
            while (k < distinct.size() && !same_form(distinct[k], nl)) ++k;
            if (k == distinct.size()) {
                distinct.push_back(nl);
                mult.push_back(0);
            }
            local.push_back(static_cast<int>(k));
        }
        f.denominators.clear();
        for (int k : local) f.denominators.push_back(distinct[k]);
        std::vector<int> cnt(distinct.size(), 0);
        for (int k : local) ++cnt[k];
        for (std::size_t k = 0; k < cnt.size(); ++k) mult[k] = std::max(mult[k], cnt[k]);
    }
    // canonical order of the distinct forms so the division sequence does not
    // depend on the input order
    std::vector<std::size_t> ord(distinct.size());
    for (std::size_t i = 0; i < ord.size(); ++i) ord[i] = i;
    if constexpr (scalar_exact<S>) {
        std::sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t b) {
            return distinct[a].str() < distinct[b].str();
        });
    }
    Series<S> total;
    bool first = true;
    for (auto& f : forms) {
        std::vector<int> cnt(distinct.size(), 0);
        for (auto& l : f.denominators)
            for (std::size_t k = 0; k < distinct.size(); ++k)
                if (same_form(distinct[k], l)) {
                    ++cnt[k];
                    break;
                }
        Series<S> num = f.numerator;
        for (std::size_t k = 0; k < distinct.size(); ++k)
            for (int j = cnt[k]; j < mult[k]; ++j) num = num * distinct[k].to_series();
        if (first) {
            total = num;
            first = false;
        } else {
            total += num;
        }
    }
    if (total.nvars() != n) throw std::logic_error("variable mismatch");
    for (std::size_t k : ord)
        for (int j = 0; j < mult[k]; ++j) {
            total = divide_exact(total, distinct[k], stats);
            if (divisions) ++*divisions;
        }
    return total;
}

}  // namespace latsum
