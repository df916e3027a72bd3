#pragma once

// Brute-force truncated sums
//   Z(N) = (-1)^{#L0} sum_v e^{2 pi i <y,v>} prod_{f in L+} f(v)^{-k_f}
// over v in a window, f(v) = 0 on L0 and f(v) != 0 on L+.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

#include "latsum/errors.hpp"
#include "latsum/intmat.hpp"
#include "latsum/lattice.hpp"
#include "latsum/real.hpp"
#include "latsum/scalar.hpp"

namespace latsum {

struct Window {
    enum class Shape { Box, Parallelotope };
    long N = 1;
    Shape shape = Shape::Box;
    std::vector<int> basis;  // parallelotope: |Re f(v)| <= N for f in basis
};

struct Constraint {
    std::vector<int> zero;      // L0
    std::vector<int> nonzero;   // L+
};

inline Constraint split_weights(const Arrangement& a, const std::vector<int>& k) {
    if (static_cast<int>(k.size()) != a.size()) throw InvalidInput("weight vector length differs from #functionals");
    Constraint c;
    for (int f = 0; f < a.size(); ++f) {
        if (k[f] < 0) throw InvalidInput("weights must be nonnegative");
        (k[f] == 0 ? c.zero : c.nonzero).push_back(f);
    }
    return c;
}

inline bool vanishes(const Functional& f, const ZVec& v) {
    if (f.constant.im != 0) return false;
    Z s = 0;
    for (std::size_t i = 0; i < v.size(); ++i) s += f.direction[i] * v[i];
    return Q(s) == -f.constant.re;
}

namespace detail {

// Integer box [lo_i, hi_i] enclosing the window.
inline std::pair<ZVec, ZVec> window_bounds(const Arrangement& a, const Window& w) {
    const int r = a.rank();
    ZVec lo(r, -w.N), hi(r, w.N);
    if (w.shape == Window::Shape::Box) return {lo, hi};
    if (static_cast<int>(w.basis.size()) != r) throw InvalidInput("parallelotope window needs r functionals");
    ZMat M;
    for (int f : w.basis) M.push_back(a[f].direction);
    QMat inv = inverse_q(M);
    // v = inv (s - c), s in [-N, N]^r
    for (int i = 0; i < r; ++i) {
        Q mn = 0, mx = 0;
        for (int j = 0; j < r; ++j) {
            Q coef = inv[i][j];
            Q c = a[w.basis[j]].constant.re;
            Q e1 = coef * (Q(w.N) - c), e2 = coef * (Q(-w.N) - c);
            mn += std::min(e1, e2);
            mx += std::max(e1, e2);
        }
        lo[i] = floor_q(mn);
        hi[i] = -floor_q(-mx);
    }
    return {lo, hi};
}

}  // namespace detail

using LVec = std::vector<long>;

namespace detail {

inline long to_long(const Z& z) {
    if (!z.fits_slong_p()) throw InvalidInput("integer too large for the point walker");
    return z.get_si();
}

// Admissibility data in machine integers.
struct PointFilter {
    int r = 0;
    std::vector<LVec> dirs;             // all functionals
    std::vector<int> nonzero;           // L+
    std::vector<long> forbidden;        // <f,v> == forbidden[f] means f(v) = 0 (real integral constant)
    std::vector<char> can_vanish;
    Window::Shape shape = Window::Shape::Box;
    long N = 0;
    std::vector<int> pbasis;
    std::vector<long> plo, phi;         // integer range of <f,v> for parallelotope functionals

    bool admissible(const LVec& v) const {
        if (shape == Window::Shape::Box) {
            for (long x : v)
                if (x > N || x < -N) return false;
        } else {
            for (std::size_t j = 0; j < pbasis.size(); ++j) {
                long s = dot(pbasis[j], v);
                if (s < plo[j] || s > phi[j]) return false;
            }
        }
        for (int f : nonzero)
            if (can_vanish[f] && dot(f, v) == forbidden[f]) return false;
        return true;
    }
    long dot(int f, const LVec& v) const {
        long s = 0;
        for (int i = 0; i < r; ++i) s += dirs[f][i] * v[i];
        return s;
    }
};

}  // namespace detail

// Calls fn(v) for every admissible v, lexicographic in v.
inline void constrained_points_l(const Arrangement& a, const std::vector<int>& k, const Window& w,
                                 const std::function<void(const LVec&)>& fn) {
    const int r = a.rank();
    Constraint c = split_weights(a, k);
    ZMat A;
    QVec b;
    for (int f : c.zero) {
        if (a[f].constant.im != 0) return;  // no integer solutions
        A.push_back(a[f].direction);
        b.push_back(-a[f].constant.re);
    }
    auto sol = solve_integer(A, b, r);
    if (!sol) return;
    auto [zlo, zhi] = detail::window_bounds(a, w);

    detail::PointFilter pf;
    pf.r = r;
    pf.shape = w.shape;
    pf.N = w.N;
    pf.nonzero = c.nonzero;
    for (int f = 0; f < a.size(); ++f) {
        LVec d;
        for (auto& x : a[f].direction) d.push_back(detail::to_long(x));
        pf.dirs.push_back(d);
        const GaussQ& cf = a[f].constant;
        bool v = cf.im == 0 && is_integer(cf.re);
        pf.can_vanish.push_back(v);
        pf.forbidden.push_back(v ? detail::to_long(-cf.re.get_num()) : 0);
    }
    if (w.shape == Window::Shape::Parallelotope) {
        pf.pbasis = w.basis;
        for (int f : w.basis) {
            // -N <= <f,v> + c <= N
            Q cr = a[f].constant.re;
            pf.plo.push_back(detail::to_long(-floor_q(Q(w.N) + cr)));
            pf.phi.push_back(detail::to_long(floor_q(Q(w.N) - cr)));
        }
    }
    LVec lo(r), hi(r), p(r);
    for (int i = 0; i < r; ++i) {
        lo[i] = detail::to_long(zlo[i]);
        hi[i] = detail::to_long(zhi[i]);
        p[i] = detail::to_long(sol->particular[i]);
    }
    const ZMat& K = sol->kernel;
    const int d = static_cast<int>(K.size());
    if (d == 0) {
        if (pf.admissible(p)) fn(p);
        return;
    }
    if (d == r) {
        // unconstrained: walk the bounding box lexicographically
        LVec v = lo;
        for (;;) {
            if (pf.admissible(v)) fn(v);
            int i = r - 1;
            while (i >= 0 && v[i] == hi[i]) v[i] = lo[i], --i;
            if (i < 0) break;
            ++v[i];
        }
        return;
    }
    // walk d coordinates J on which the kernel is invertible
    std::vector<int> J;
    ZMat KJ;
    for (auto& sub : subsets(r, d)) {
        ZMat M(d, ZVec(d));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) M[i][j] = K[j][sub[i]];
        if (det(M) != 0) {
            J = sub;
            KJ = M;
            break;
        }
    }
    QMat inv = inverse_q(KJ);
    Z dz = 1;
    for (auto& row : inv)
        for (auto& x : row) dz = lcm_z(dz, x.get_den());
    const long D = detail::to_long(dz);
    std::vector<LVec> adj(d, LVec(d));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) adj[i][j] = detail::to_long(Q(inv[i][j] * Q(dz)).get_num());
    std::vector<LVec> Kl(d, LVec(r));
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < r; ++i) Kl[j][i] = detail::to_long(K[j][i]);
    std::vector<LVec> pts;
    LVec cur(d), z(d), v(r);
    for (int i = 0; i < d; ++i) cur[i] = lo[J[i]];
    for (;;) {
        bool ok = true;
        for (int i = 0; i < d && ok; ++i) {
            long s = 0;
            for (int j = 0; j < d; ++j) s += adj[i][j] * (cur[j] - p[J[j]]);
            ok = s % D == 0;
            z[i] = s / D;
        }
        if (ok) {
            v = p;
            for (int j = 0; j < d; ++j)
                for (int i = 0; i < r; ++i) v[i] += Kl[j][i] * z[j];
            if (pf.admissible(v)) pts.push_back(v);
        }
        int i = d - 1;
        while (i >= 0 && cur[i] == hi[J[i]]) cur[i] = lo[J[i]], --i;
        if (i < 0) break;
        ++cur[i];
    }
    std::sort(pts.begin(), pts.end());
    for (auto& q : pts) fn(q);
}

inline void constrained_points(const Arrangement& a, const std::vector<int>& k, const Window& w,
                               const std::function<void(const ZVec&)>& fn) {
    constrained_points_l(a, k, w, [&](const LVec& v) {
        ZVec zv;
        for (long x : v) zv.push_back(Z(x));
        fn(zv);
    });
}

inline std::vector<ZVec> constrained_point_list(const Arrangement& a, const std::vector<int>& k, const Window& w) {
    std::vector<ZVec> out;
    constrained_points(a, k, w, [&](const ZVec& v) { out.push_back(v); });
    return out;
}

namespace detail {

// Neumaier-compensated complex accumulator.
template <class T>
struct Neumaier {
    T s{}, c{};
    void add(const T& x) {
        T t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    T value() const { return s + c; }
};

struct NeumaierMp {
    Real s, c;
    explicit NeumaierMp(mpfr_prec_t p) : s(p), c(p) {}
    void add(const Real& x) {
        Real t = s + x;
        if (!(abs(s) < abs(x)))
            c = c + ((s - t) + x);
        else
            c = c + ((x - t) + s);
        s = t;
    }
    Real value() const { return s + c; }
};

}  // namespace detail

struct OracleOptions {
    mpfr_prec_t precision = 64;  // <= 64 uses long double
};

// Z(N) of the window.
inline Complex truncated_sum(const Arrangement& a, const std::vector<int>& k, const QVec& y, const Window& w,
                             const OracleOptions& opt = {}) {
    if (static_cast<int>(y.size()) != a.rank()) throw InvalidInput("y has the wrong length");
    Constraint c = split_weights(a, k);
    const mpfr_prec_t prec = std::max<mpfr_prec_t>(opt.precision, 53);
    const bool fast = opt.precision <= 64;
    const bool negate = c.zero.size() % 2 == 1;
    Z den = 1;
    for (auto& x : y) den = lcm_z(den, x.get_den());
    QVec yn(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) yn[i] = y[i] * Q(den);  // integers
    const bool table = den <= 200000;
    const long D = table ? den.get_si() : 0;

    if (fast) {
        using C = std::complex<long double>;
        std::vector<C> roots;
        if (table)
            for (long j = 0; j < D; ++j) {
                long double th = 2 * 3.14159265358979323846264338327950288L * j / D;
                roots.emplace_back(std::cos(th), std::sin(th));
            }
        detail::Neumaier<long double> re, im;
        std::vector<LVec> dirs;
        std::vector<C> cst;
        for (int f = 0; f < a.size(); ++f) {
            LVec d;
            for (auto& x : a[f].direction) d.push_back(detail::to_long(x));
            dirs.push_back(d);
            cst.emplace_back(static_cast<long double>(a[f].constant.re.get_d()),
                             static_cast<long double>(a[f].constant.im.get_d()));
        }
        LVec ynl;
        if (table)
            for (auto& x : yn) ynl.push_back(detail::to_long(x.get_num()));
        constrained_points_l(a, k, w, [&](const LVec& v) {
            C term;
            if (table) {
                __int128 m = 0;
                for (std::size_t i = 0; i < v.size(); ++i) m += static_cast<__int128>(ynl[i]) * v[i];
                m %= D;
                if (m < 0) m += D;
                term = roots[static_cast<long>(m)];
            } else {
                Z num = 0;
                for (std::size_t i = 0; i < v.size(); ++i) num += yn[i].get_num() * v[i];
                Q fr = frac_q(Q(num, den));
                long double th = 2 * 3.14159265358979323846264338327950288L * fr.get_d();
                term = C(std::cos(th), std::sin(th));
            }
            C denom = 1;
            for (int f : c.nonzero) {
                long s = 0;
                for (std::size_t i = 0; i < v.size(); ++i) s += dirs[f][i] * v[i];
                C fv = C(static_cast<long double>(s), 0) + cst[f];
                for (int e = 0; e < k[f]; ++e) denom *= fv;
            }
            term /= denom;
            re.add(term.real());
            im.add(term.imag());
        });
        long double r = re.value(), i = im.value();
        if (negate) r = -r, i = -i;
        return Complex(Real::from_ld(r, 64), Real::from_ld(i, 64));
    }

    std::unordered_map<long, Complex> roots;
    auto root = [&](const Q& fr) {
        if (table) {
            long j = Q(fr * Q(den)).get_num().get_si();
            auto it = roots.find(j);
            if (it != roots.end()) return it->second;
            Complex z = Complex::cis(Real::pi(prec) * Real(2, prec) * Real(fr, prec));
            roots.emplace(j, z);
            return z;
        }
        return Complex::cis(Real::pi(prec) * Real(2, prec) * Real(fr, prec));
    };
    detail::NeumaierMp re(prec), im(prec);
    constrained_points(a, k, w, [&](const ZVec& v) {
        Z num = 0;
        for (std::size_t i = 0; i < v.size(); ++i) num += yn[i].get_num() * v[i];
        Complex term = root(frac_q(Q(num, den)));
        Complex denom(Real(1, prec), Real(0, prec));
        for (int f : c.nonzero) {
            Z s = 0;
            for (std::size_t i = 0; i < v.size(); ++i) s += a[f].direction[i] * v[i];
            Complex fv(Q(s) + a[f].constant.re, a[f].constant.im, prec);
            for (int e = 0; e < k[f]; ++e) denom = denom * fv;
        }
        term = term / denom;
        re.add(term.re());
        im.add(term.im());
    });
    Complex out(re.value(), im.value());
    if (negate) out = -out;
    return out;
}

inline Complex truncated_sum(const Arrangement& a, const std::vector<int>& k, const QVec& y, long N,
                             const OracleOptions& opt = {}) {
    Window w;
    w.N = N;
    return truncated_sum(a, k, y, w, opt);
}

struct ScanRow {
    long N;
    Complex Z;
    double diff_next;  // |Z(N) - Z(2N)|
    double error;      // |Z(N) - target| when a target was given, else NaN
};

inline std::vector<ScanRow> convergence_scan(const Arrangement& a, const std::vector<int>& k, const QVec& y,
                                             const std::vector<long>& Ns, const std::optional<Complex>& target = {},
                                             const OracleOptions& opt = {}) {
    for (std::size_t i = 1; i < Ns.size(); ++i)
        if (Ns[i] <= Ns[i - 1]) throw InvalidInput("N list must be increasing");
    std::vector<ScanRow> rows;
    for (long N : Ns) {
        Complex z = truncated_sum(a, k, y, N, opt);
        Complex z2 = truncated_sum(a, k, y, 2 * N, opt);
        double err = target ? magnitude(z - *target) : std::nan("");
        rows.push_back({N, z, magnitude(z - z2), err});
    }
    return rows;
}

}  // namespace latsum
