#pragma once

// The generating function F(t,y;Lambda) as a sum over bases, its Taylor
// coefficients C(k,y;Lambda), and the special values
// S(k,y;Lambda) = prod_f (-(2 pi i)^{k_f} / k_f!) C(k,y;Lambda).
//
// Two routes to C:
//   series      - the whole truncated series, degenerate summands resolved by
//                 exact division (sum_rational_forms);
//   directional - a single coefficient via t = s v + x: each basis summand is
//                 expanded as a Laurent series in s with polynomial
//                 coefficients in x, and [s^0 x^k] is read off. The sum over
//                 bases is holomorphic, so the sum of these coefficients is
//                 the Taylor coefficient. Cost scales with the weight box
//                 instead of the full monomial count.

#include <atomic>
#include <chrono>
#include <mutex>
#include <numeric>
#include <functional>
#include <optional>
#include <thread>
#include <unordered_map>
#include <vector>

#include "latsum/kernel.hpp"
#include "latsum/lattice.hpp"
#include "latsum/series.hpp"

namespace latsum {

using Weights = std::vector<int>;

// Per-basis data shared by both routes.
struct BasisTerm {
    const Basis* basis = nullptr;
    std::vector<int> others;             // g not in B, increasing
    std::vector<QVec> pairing;           // pairing[j][i] = <g_j, f_i^B>
    std::vector<GaussQ> kappa;           // c_g - sum_f c_f <g, f^B>
    std::vector<std::vector<Q>> fracs;   // fracs[w][i] = {y + w}_{B, f_i}
    int degenerate() const {
        int d = 0;
        for (auto& k : kappa) d += k.is_zero();
        return d;
    }
};

inline std::vector<BasisTerm> basis_terms(const Arrangement& a, const QVec& y, const ZVec& phi) {
    std::vector<BasisTerm> out;
    for (auto& B : a.bases()) {
        BasisTerm T;
        T.basis = &B;
        for (int g = 0; g < a.size(); ++g) {
            if (B.contains(g)) continue;
            T.others.push_back(g);
            QVec p(B.members.size());
            GaussQ kap = a[g].constant;
            for (std::size_t i = 0; i < B.members.size(); ++i) {
                p[i] = dot(a[g].direction, B.dual[i]);
                kap = kap - p[i] * a[B.members[i]].constant;
            }
            T.pairing.push_back(p);
            T.kappa.push_back(kap);
        }
        for (auto& w : B.cosets) {
            std::vector<Q> fr;
            for (std::size_t i = 0; i < B.members.size(); ++i) fr.push_back(frac_part(y, w, B, static_cast<int>(i), phi));
            T.fracs.push_back(fr);
        }
        out.push_back(std::move(T));
    }
    return out;
}

// Smallest N (a multiple of 4) with every exponential of the computation in
// Q(zeta_N): e^{-2 pi i c_f} and e^{-2 pi i c_f {y+w}_{B,f}}.
inline u32 cyclotomic_order(const Arrangement& a, const QVec& y) {
    Z N = 4;
    for (auto& f : a.functionals()) {
        if (f.constant.im != 0) throw InvalidInput("exact mode needs real rational constants");
        N = lcm_z(N, f.constant.re.get_den());
    }
    ZVec phi = choose_phi(a);
    for (auto& B : a.bases())
        for (auto& w : B.cosets)
            for (std::size_t i = 0; i < B.members.size(); ++i) {
                Q fr = frac_part(y, w, B, static_cast<int>(i), phi);
                N = lcm_z(N, fr.get_den());
                N = lcm_z(N, Q(fr * a[B.members[i]].constant.re).get_den());
            }
    if (N > Z(1u << 30)) throw InvalidInput("cyclotomic order too large");
    return static_cast<u32>(N.get_ui());
}

struct GenfunOptions {
    std::optional<ZVec> phi;                        // default: choose_phi
    std::optional<std::vector<int>> exclusion;      // default: all indispensable functionals
    int threads = 1;
};

inline void check_excluded(const Arrangement& a, const QVec& y, const std::vector<int>& subset) {
    int bad = -1;
    if (on_excluded_hyperplanes(y, a, subset, &bad)) {
        const Basis& B = a.bases().front();
        int pos = B.position(bad);
        std::string n;
        for (std::size_t i = 0; i < B.dual[pos].size(); ++i) n += (i ? "," : "") + B.dual[pos][i].get_str();
        throw ExcludedPoint("y lies on a translate of the hyperplane <v,(" + n + ")> = 0 excluded for functional " +
                            a[bad].name);
    }
}

template <class F>
ZVec resolve_phi(const Arrangement& a, const GenfunOptions& opt) {
    ZVec phi = opt.phi ? *opt.phi : choose_phi(a);
    if (!phi_valid(a, phi)) throw InvalidInput("phi is not generic for this arrangement");
    return phi;
}

template <class Fn>
void parallel_for(int n, int threads, Fn&& fn) {
    if (threads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    std::exception_ptr err;
    std::mutex mu;
    for (int t = 0; t < std::min(threads, n); ++t)
        pool.emplace_back([&] {
            for (int i; (i = next++) < n;) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(mu);
                    if (!err) err = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

// ---------------------------------------------------------------- series route

template <class F>
RationalForm<typename F::Scalar> basis_summand(const F& fd, const Arrangement& a, const BasisTerm& T, int K) {
    using S = typename F::Scalar;
    const int n = a.size();
    const Basis& B = *T.basis;
    const int Kn = K + T.degenerate();
    RationalForm<S> form;
    // coset average of kernel products
    Series<S> avg(n, Kn);
    for (auto& fr : T.fracs) {
        Series<S> prod = Series<S>::constant(n, Kn, fd.one());
        for (std::size_t i = 0; i < B.members.size(); ++i) {
            int f = B.members[i];
            prod = (prod * kernel_series(fd, a[f].constant, fr[i], Kn, n, f)).truncated(Kn);
        }
        avg += prod;
    }
    form.numerator = avg.scaled(fd.from_q(Q(1) / Q(B.index)));
    for (std::size_t j = 0; j < T.others.size(); ++j) {
        int g = T.others[j];
        LinearForm<S> l;
        l.coeffs.assign(n, fd.zero());
        l.coeffs[g] = fd.one();
        for (std::size_t i = 0; i < B.members.size(); ++i)
            if (T.pairing[j][i] != 0) l.coeffs[B.members[i]] = fd.from_q(-T.pairing[j][i]);
        Series<S> tg = Series<S>::variable(n, Series<S>::kExact, g, fd.one());
        if (T.kappa[j].is_zero()) {
            l.constant = fd.zero();
            form.denominators.push_back(l);
            form.numerator = form.numerator * tg;
        } else {
            l.constant = -fd.two_pi_i(T.kappa[j]);
            Series<S> inv = invert_unit(l.to_series(Kn));
            form.numerator = (form.numerator * tg * inv).truncated(Kn + 1);
        }
    }
    return form;
}

struct SeriesReport {
    int bases = 0;
    int degenerate_divisions = 0;
    double residual = 0;
};

// F(t,y;Lambda) through total degree K.
template <class F>
Series<typename F::Scalar> generating_function(const F& fd, const Arrangement& a, const QVec& y, int K,
                                               const GenfunOptions& opt = {}, SeriesReport* rep = nullptr) {
    using S = typename F::Scalar;
    if (static_cast<int>(y.size()) != a.rank()) throw InvalidInput("y has the wrong length");
    check_excluded(a, y, opt.exclusion ? *opt.exclusion : a.indispensable());
    ZVec phi = resolve_phi<F>(a, opt);
    auto terms = basis_terms(a, y, phi);
    std::vector<RationalForm<S>> forms(terms.size());
    parallel_for(static_cast<int>(terms.size()), opt.threads,
                 [&](int i) { forms[i] = basis_summand(fd, a, terms[i], K); });
    DivisionStats st;
    int divs = 0;
    Series<S> total = sum_rational_forms(std::move(forms), &st, &divs);
    if (rep) {
        rep->bases = static_cast<int>(terms.size());
        rep->degenerate_divisions = divs;
        rep->residual = st.residual;
    }
    return total.truncated(K);
}

// ------------------------------------------------------------ directional route

// Sparse series in s (any sign of exponent) and x_B (box-bounded), truncated
// by total degree (s exponent + x degree) <= cap.
template <class S>
class SXSeries {
public:
    struct Term {
        int s;
        Mono x;
        int xdeg;
        S c;
    };

    SXSeries(int nb, const std::vector<int>* box, int cap) : nb_(nb), box_(box), cap_(cap) {}

    int cap() const { return cap_; }
    std::vector<Term>& terms() { return t_; }
    const std::vector<Term>& terms() const { return t_; }

    bool admissible(int s, Mono x, int xdeg) const {
        if (s + xdeg > cap_) return false;
        for (int i = 0; i < nb_; ++i)
            if (mono_exp(x, nb_, i) > (*box_)[i]) return false;
        return true;
    }

    void push(int s, Mono x, const S& c) {
        int d = mono_degree(x);
        if (!is_zero(c) && admissible(s, x, d)) t_.push_back({s, x, d, c});
    }

    void compact() {
        std::unordered_map<std::uint64_t, std::size_t> pos;
        std::vector<Term> out;
        for (auto& t : t_) {
            std::uint64_t key = (static_cast<std::uint64_t>(t.s + 4096) << 48) | t.x;
            auto it = pos.find(key);
            if (it == pos.end()) {
                pos.emplace(key, out.size());
                out.push_back(t);
            } else {
                out[it->second].c += t.c;
            }
        }
        t_.clear();
        for (auto& t : out)
            if (!is_zero(t.c)) t_.push_back(std::move(t));
    }

    SXSeries mul(const SXSeries& b, int cap) const {
        SXSeries r(nb_, box_, cap);
        std::unordered_map<std::uint64_t, S> acc;
        for (auto& ta : t_)
            for (auto& tb : b.t_) {
                int s = ta.s + tb.s;
                int xd = ta.xdeg + tb.xdeg;
                if (s + xd > cap) continue;
                Mono x = ta.x + tb.x;
                bool ok = true;
                for (int i = 0; i < nb_ && ok; ++i)
                    if (mono_exp(x, nb_, i) > (*box_)[i]) ok = false;
                if (!ok) continue;
                std::uint64_t key = (static_cast<std::uint64_t>(s + 4096) << 48) | x;
                auto it = acc.find(key);
                if (it == acc.end())
                    acc.emplace(key, ta.c * tb.c);
                else
                    it->second += ta.c * tb.c;
            }
        for (auto& [key, c] : acc) {
            if (is_zero(c)) continue;
            int s = static_cast<int>(key >> 48) - 4096;
            Mono x = key & ((std::uint64_t(1) << 48) - 1);
            r.t_.push_back({s, x, mono_degree(x), c});
        }
        return r;
    }

    SXSeries add(const SXSeries& b) const {
        SXSeries r(nb_, box_, std::min(cap_, b.cap_));
        for (auto& t : t_)
            if (t.s + t.xdeg <= r.cap_) r.t_.push_back(t);
        for (auto& t : b.t_)
            if (t.s + t.xdeg <= r.cap_) r.t_.push_back(t);
        r.compact();
        return r;
    }

    SXSeries scaled(const S& c) const {
        SXSeries r(nb_, box_, cap_);
        for (auto& t : t_) r.t_.push_back({t.s, t.x, t.xdeg, t.c * c});
        return r;
    }

    S coeff(int s, Mono x) const {
        S r{};
        for (auto& t : t_)
            if (t.s == s && t.x == x) r += t.c;
        return r;
    }

private:
    int nb_;
    const std::vector<int>* box_;
    int cap_;
    std::vector<Term> t_;
};

inline Q binom_q(long n, long k) {
    if (k < 0) return 0;
    Q r = 1;
    for (long i = 0; i < k; ++i) r = r * Q(n - i) / Q(i + 1);
    return r;
}

// v with l_{B,g}(v) = v_g - sum_f v_f <g, f^B> nonzero for every basis term.
inline std::vector<Z> direction_vector(const Arrangement& a, const std::vector<BasisTerm>& terms) {
    for (long M = 2;; ++M) {
        std::vector<Z> v(a.size());
        Z p = 1;
        for (int i = 0; i < a.size(); ++i) {
            v[i] = p;
            p *= M;
        }
        bool ok = true;
        for (auto& T : terms) {
            for (std::size_t j = 0; j < T.others.size() && ok; ++j) {
                Q mu = Q(v[T.others[j]]);
                for (std::size_t i = 0; i < T.basis->members.size(); ++i)
                    mu -= T.pairing[j][i] * Q(v[T.basis->members[i]]);
                if (mu == 0) ok = false;
            }
            if (!ok) break;
        }
        if (ok) return v;
    }
}

struct DirectionalReport {
    int bases = 0;
    int degenerate_factors = 0;
};

// [s^0 x^k] of the B-summand of F(s v + x).
template <class F>
typename F::Scalar directional_summand(const F& fd, const Arrangement& a, const BasisTerm& T, const Weights& k,
                                       const std::vector<Z>& v) {
    using S = typename F::Scalar;
    using SX = SXSeries<S>;
    const Basis& B = *T.basis;
    const int nb = static_cast<int>(B.members.size());
    std::vector<int> box(nb);
    int ktot = 0;
    for (int f = 0; f < a.size(); ++f) ktot += k[f];
    for (int i = 0; i < nb; ++i) box[i] = k[B.members[i]];
    const int kB = std::accumulate(box.begin(), box.end(), 0);

    // lowest total degree of each non-basis factor
    std::vector<int> low(T.others.size());
    int lowsum = 0;
    for (std::size_t j = 0; j < T.others.size(); ++j) {
        low[j] = T.kappa[j].is_zero() ? -k[T.others[j]] : 0;
        lowsum += low[j];
    }
    // everything must be known up to total degree ktot in (s, x)
    auto cap_for = [&](int lo) { return ktot - (lowsum - lo); };

    // A^{-n} for A = a0 + s mu - sum_i x_i c_i
    auto inv_power = [&](std::size_t j, int npow, int cap) {
        int g = T.others[j];
        Q mu = Q(v[g]);
        for (int i = 0; i < nb; ++i) mu -= T.pairing[j][i] * Q(v[B.members[i]]);
        SX r(nb, &box, cap);
        if (npow == 0) {
            r.push(0, 0, fd.one());
            return r;
        }
        if (T.kappa[j].is_zero()) {
            // (s mu)^{-n} sum_m binom(n+m-1, m) w^m, w = sum x_i c_i / (s mu)
            S inv_mu = fd.from_q(Q(1) / mu);
            S lead = fd.one();
            for (int i = 0; i < npow; ++i) lead = lead * inv_mu;
            SX w(nb, &box, cap + npow + kB);
            for (int i = 0; i < nb; ++i)
                if (T.pairing[j][i] != 0) w.push(-1, mono_var(nb, i), fd.from_q(T.pairing[j][i] / mu));
            SX pw(nb, &box, cap + npow + kB);
            pw.push(0, 0, fd.one());
            SX acc(nb, &box, cap + npow + kB);
            for (int m = 0; m <= kB; ++m) {
                if (m) pw = pw.mul(w, cap + npow + kB);
                if (pw.terms().empty()) break;
                for (auto& t : pw.terms()) acc.terms().push_back({t.s, t.x, t.xdeg, t.c * fd.from_q(binom_q(npow + m - 1, m))});
            }
            SX out(nb, &box, cap);
            for (auto& t : acc.terms()) out.push(t.s - npow, t.x, t.c * lead);
            out.compact();
            return out;
        }
        // a0^{-n} (1 + z)^{-n}, z = (s mu - sum x_i c_i) / a0
        S a0 = -fd.two_pi_i(T.kappa[j]);
        S ia0 = fd.inv(a0);
        S lead = fd.one();
        for (int i = 0; i < npow; ++i) lead = lead * ia0;
        SX z(nb, &box, cap);
        z.push(1, 0, fd.from_q(mu) * ia0);
        for (int i = 0; i < nb; ++i)
            if (T.pairing[j][i] != 0) z.push(0, mono_var(nb, i), fd.from_q(-T.pairing[j][i]) * ia0);
        SX pw(nb, &box, cap);
        pw.push(0, 0, fd.one());
        SX acc(nb, &box, cap);
        for (int m = 0; m <= std::max(cap, 0); ++m) {
            if (m) pw = pw.mul(z, cap);
            if (pw.terms().empty()) break;
            S c = fd.from_q(binom_q(-npow, m)) * lead;
            for (auto& t : pw.terms()) acc.terms().push_back({t.s, t.x, t.xdeg, t.c * c});
        }
        acc.compact();
        return acc;
    };

    // kernel factor: coset average of prod_f K_f(x_f + s v_f)
    const int capK = cap_for(0);
    SX kern(nb, &box, capK);
    {
        for (auto& fr : T.fracs) {
            SX prod(nb, &box, capK);
            prod.push(0, 0, fd.one());
            for (int i = 0; i < nb; ++i) {
                int f = B.members[i];
                int deg = std::max(capK, 0) + box[i];
                auto kt = kernel_taylor(fd, a[f].constant, fr[i], deg);
                SX one(nb, &box, capK);
                S vf = fd.from_q(Q(v[f]));
                std::vector<S> vpow{fd.one()};
                for (int e = 1; e <= deg; ++e) vpow.push_back(vpow.back() * vf);
                for (int ax = 0; ax <= box[i]; ++ax)
                    for (int bs = 0; ax + bs <= deg && bs <= capK; ++bs)
                        one.push(bs, mono_var(nb, i, ax), kt[ax + bs] * fd.from_q(binom_q(ax + bs, ax)) * vpow[bs]);
                prod = prod.mul(one, capK);
            }
            kern = kern.add(prod);
        }
        kern = kern.scaled(fd.from_q(Q(1) / Q(B.index)));
    }
    // running product; the budget for factor j is cap_for(low[j])
    SX acc = kern;
    int remaining_low = lowsum;
    for (std::size_t j = 0; j < T.others.size(); ++j) {
        int g = T.others[j];
        int m = k[g];
        int cap = cap_for(low[j]);
        Q vg = Q(v[g]);
        SX fac(nb, &box, cap);
        if (m >= 1) {
            SX p = inv_power(j, m, cap);
            S sg = (m - 1) % 2 ? -fd.one() : fd.one();
            for (auto& t : p.terms()) fac.terms().push_back({t.s, t.x, t.xdeg, t.c * sg});
        }
        {
            SX p = inv_power(j, m + 1, cap - 1);
            S sg = m % 2 ? fd.from_q(-vg) : fd.from_q(vg);
            for (auto& t : p.terms()) fac.push(t.s + 1, t.x, t.c * sg);
        }
        fac.compact();
        remaining_low -= low[j];
        acc = acc.mul(fac, ktot - remaining_low);
    }
    Mono target = 0;
    for (int i = 0; i < nb; ++i) target += mono_var(nb, i, box[i]);
    return acc.coeff(0, target);
}

// [t^k] F(t,y;Lambda) (not yet multiplied by k!).
template <class F>
typename F::Scalar directional_coefficient(const F& fd, const Arrangement& a, const QVec& y, const Weights& k,
                                           const GenfunOptions& opt = {}, DirectionalReport* rep = nullptr,
                                           const std::vector<Z>* vdir = nullptr) {
    using S = typename F::Scalar;
    ZVec phi = resolve_phi<F>(a, opt);
    auto terms = basis_terms(a, y, phi);
    std::vector<Z> v = vdir ? *vdir : direction_vector(a, terms);
    std::vector<S> parts(terms.size(), fd.zero());
    parallel_for(static_cast<int>(terms.size()), opt.threads,
                 [&](int i) { parts[i] = directional_summand(fd, a, terms[i], k, v); });
    S total = fd.zero();
    for (auto& p : parts) total = total + p;
    if (rep) {
        rep->bases = static_cast<int>(terms.size());
        rep->degenerate_factors = 0;
        for (auto& T : terms) rep->degenerate_factors += T.degenerate();
    }
    return total;
}

// ---------------------------------------------------------------- public API

enum class Route { Directional, Series };

struct EvaluationReport {
    int series_order = 0;
    int basis_count = 0;
    int degenerate_divisions = 0;
    bool exact = true;
    u32 cyclotomic = 0;
    double elapsed_ms = 0;
};

inline void check_weights(const Arrangement& a, const Weights& k) {
    if (static_cast<int>(k.size()) != a.size()) throw InvalidInput("weight vector length differs from #functionals");
    for (int x : k)
        if (x < 0) throw InvalidInput("weights must be nonnegative");
}

inline std::vector<int> indispensable_weight_one(const Arrangement& a, const Weights& k) {
    std::vector<int> out;
    for (int f : a.indispensable())
        if (k[f] == 1) out.push_back(f);
    return out;
}

// C(k,y;Lambda)
template <class F>
typename F::Scalar coefficient(const F& fd, const Arrangement& a, const QVec& y, const Weights& k,
                               Route route = Route::Directional, GenfunOptions opt = {},
                               EvaluationReport* rep = nullptr) {
    using S = typename F::Scalar;
    check_weights(a, k);
    if (static_cast<int>(y.size()) != a.rank()) throw InvalidInput("y has the wrong length");
    std::vector<int> excl = opt.exclusion ? *opt.exclusion : indispensable_weight_one(a, k);
    check_excluded(a, y, excl);
    opt.exclusion = excl;
    auto t0 = std::chrono::steady_clock::now();
    int ktot = 0;
    Q kfact = 1;
    for (int x : k) {
        ktot += x;
        for (int i = 2; i <= x; ++i) kfact *= i;
    }
    S raw;
    if (route == Route::Series) {
        SeriesReport sr;
        auto F_ = generating_function(fd, a, y, ktot, opt, &sr);
        raw = F_.coeff(mono_pack(k));
        if (rep) rep->basis_count = sr.bases, rep->degenerate_divisions = sr.degenerate_divisions;
    } else {
        DirectionalReport dr;
        raw = directional_coefficient(fd, a, y, k, opt, &dr);
        if (rep) rep->basis_count = dr.bases, rep->degenerate_divisions = dr.degenerate_factors;
    }
    if (rep) {
        rep->series_order = ktot;
        rep->exact = F::exact;
        rep->elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    }
    return raw * fd.from_q(kfact);
}

// prod_f (-(2 pi i)^{k_f} / k_f!)
template <class F>
typename F::Scalar special_value_factor(const F& fd, const Weights& k) {
    auto r = fd.one();
    auto tpi = fd.two_pi_i(GaussQ(Q(1)));
    for (int x : k) {
        Q fact = 1;
        for (int i = 2; i <= x; ++i) fact *= i;
        auto p = fd.one();
        for (int i = 0; i < x; ++i) p = p * tpi;
        r = r * (-(p * fd.from_q(Q(1) / fact)));
    }
    return r;
}

template <class F>
typename F::Scalar lattice_sum_value(const F& fd, const Arrangement& a, const QVec& y, const Weights& k,
                                     Route route = Route::Directional, const GenfunOptions& opt = {},
                                     EvaluationReport* rep = nullptr, typename F::Scalar* C_out = nullptr) {
    auto C = coefficient(fd, a, y, k, route, opt, rep);
    if (C_out) *C_out = C;
    return special_value_factor(fd, k) * C;
}

// Exact field sized for (a, y).
inline ExactField exact_field_for(const Arrangement& a, const QVec& y) { return ExactField{cyclotomic_order(a, y)}; }

// ---------------------------------------------------------- symmetric families

// Factor relating S to the zeta value for the documented families, or 0.
inline int documented_symmetry_factor(const Arrangement& a, const Weights& k) {
    if (k.empty() || k.size() != static_cast<std::size_t>(a.size())) return 0;
    for (int x : k)
        if (x != k[0] || x <= 0 || x % 2) return 0;
    auto dir = [&](int i, std::vector<long> d) {
        for (std::size_t j = 0; j < d.size(); ++j)
            if (a[i].direction[j] != d[j]) return false;
        return true;
    };
    auto cst = [&](int i) { return a[i].constant; };
    if (a.rank() == 1 && a.size() == 3) {
        // {(-1, al), (1, 0), (1, al)}, al a nonzero real
        GaussQ al = cst(2);
        if (dir(0, {-1}) && dir(1, {1}) && dir(2, {1}) && cst(0) == al && cst(1).is_zero() && al.im == 0 &&
            al.re != 0)
            return 2;
        return 0;
    }
    if (a.rank() == 2 && a.size() == 3) {
        if (dir(0, {1, 0}) && dir(1, {0, 1}) && dir(2, {1, 1}) && cst(0).is_zero() && cst(1).is_zero() &&
            cst(2).is_zero())
            return 6;
        return 0;
    }
    if (a.rank() == 2 && a.size() == 9) {
        std::vector<std::vector<long>> d{{-1, 0}, {1, 0}, {1, 0}, {0, -1}, {0, 1}, {0, 1}, {-1, -1}, {1, 1}, {1, 1}};
        GaussQ al = cst(0);
        if (al.im != 0 || al.re == 0) return 0;
        for (int i = 0; i < 9; ++i) {
            if (!dir(i, d[i])) return 0;
            GaussQ want = i % 3 == 1 ? GaussQ(Q(0)) : al;
            if (cst(i) != want) return 0;
        }
        return 6;
    }
    return 0;
}

template <class F>
typename F::Scalar zeta_from_S(const F& fd, const Arrangement& a, const Weights& k, const typename F::Scalar& S,
                               int symmetry_factor) {
    int expected = documented_symmetry_factor(a, k);
    if (expected == 0) throw InvalidInput("arrangement/weights are not a documented symmetric family");
    if (expected != symmetry_factor)
        throw InvalidInput("symmetry factor " + std::to_string(symmetry_factor) + " does not match the family (" +
                           std::to_string(expected) + ")");
    return S * fd.from_q(Q(1) / Q(symmetry_factor));
}

}  // namespace latsum
