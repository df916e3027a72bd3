#pragma once

// The one-dimensional kernel F(t,y;b) = t e^{(t - 2 pi i b) y} / (e^{t - 2 pi i b} - 1)
// and its Taylor coefficients C(k,y;b).

#include <vector>

#include "latsum/series.hpp"

namespace latsum {

// B_n(y) coefficients (index = power of y), from
// sum_{j=0}^{n} B_{n-j}(y) / ((n-j)! (j+1)!) = y^n / n!.
inline std::vector<std::vector<Q>> bernoulli_polys(int K) {
    std::vector<Q> fact(K + 2, Q(1));
    for (int i = 1; i <= K + 1; ++i) fact[i] = fact[i - 1] * i;
    std::vector<std::vector<Q>> B(K + 1);
    for (int n = 0; n <= K; ++n) {
        std::vector<Q> p(n + 1, Q(0));
        p[n] = 1;
        for (int j = 1; j <= n; ++j) {
            Q w = fact[n] / (fact[n - j] * fact[j + 1]);
            for (std::size_t d = 0; d < B[n - j].size(); ++d) p[d] -= w * B[n - j][d];
        }
        B[n] = std::move(p);
    }
    return B;
}

inline Q eval_poly(const std::vector<Q>& p, const Q& y) {
    Q acc = 0;
    for (std::size_t i = p.size(); i-- > 0;) acc = acc * y + p[i];
    return acc;
}

inline Q bernoulli_poly(int n, const Q& y) { return eval_poly(bernoulli_polys(n)[n], y); }

inline bool is_integral(const GaussQ& b) { return b.im == 0 && is_integer(b.re); }

// Coefficients C(k,y;b)/k! for k = 0..K.
template <class F>
std::vector<typename F::Scalar> kernel_taylor(const F& fd, const GaussQ& b, const Q& y, int K) {
    using S = typename F::Scalar;
    if (y < 0 || y > 1) throw std::domain_error("kernel argument y must lie in [0,1]");
    S phase = fd.exp2pii(GaussQ(-b.re * y, -b.im * y));  // e^{-2 pi i b y}
    std::vector<S> out(K + 1, fd.zero());
    if (is_integral(b)) {
        auto B = bernoulli_polys(K);
        Q fact = 1;
        for (int k = 0; k <= K; ++k) {
            if (k) fact *= k;
            out[k] = phase * fd.from_q(eval_poly(B[k], y) / fact);
        }
        return out;
    }
    // t e^{ty} / (zeta e^t - 1), zeta = e^{-2 pi i b}
    S zeta = fd.exp2pii(GaussQ(-b.re, -b.im));
    Series<S> den(1, K);
    Q fact = 1;
    for (int j = 0; j <= K; ++j) {
        if (j) fact *= j;
        S c = zeta * fd.from_q(Q(1) / fact);
        if (j == 0) c = c - fd.one();
        den.add(mono_var(1, 0, j), c);
    }
    Series<S> inv = invert_unit(den);
    Series<S> num(1, K);
    Q ypow = 1;
    fact = 1;
    for (int j = 0; j + 1 <= K; ++j) {
        if (j) fact *= j;
        num.add(mono_var(1, 0, j + 1), fd.from_q(ypow / fact));
        ypow *= y;
    }
    Series<S> prod = (num * inv).truncated(K);
    for (int k = 0; k <= K; ++k) out[k] = phase * prod.coeff(mono_var(1, 0, k));
    return out;
}

// The kernel as a series in variable `var` of an nvars-variable ring.
template <class F>
Series<typename F::Scalar> kernel_series(const F& fd, const GaussQ& b, const Q& y, int K, int nvars = 1, int var = 0) {
    auto c = kernel_taylor(fd, b, y, K);
    Series<typename F::Scalar> s(nvars, K);
    for (int k = 0; k <= K; ++k) s.add(mono_var(nvars, var, k), c[k]);
    return s;
}

// C(k,y;b) itself.
template <class F>
typename F::Scalar kernel_coefficient(const F& fd, const GaussQ& b, const Q& y, int k) {
    auto c = kernel_taylor(fd, b, y, k);
    Q fact = 1;
    for (int i = 2; i <= k; ++i) fact *= i;
    return c[k] * fd.from_q(fact);
}

// -((2 pi i)^k / k!) * int_0^1 C(k,x;b) e^{-2 pi i m x} dx, by the case table.
template <class F>
typename F::Scalar kernel_moment(const F& fd, int k, long m, const GaussQ& b) {
    GaussQ mb(b.re + m, b.im);
    bool vanish = mb.is_zero();
    if (k == 0) return vanish ? -fd.one() : fd.zero();
    if (vanish) return fd.zero();
    auto x = fd.inv(fd.from_gauss(mb));
    auto r = fd.one();
    for (int i = 0; i < k; ++i) r = r * x;
    return r;
}

}  // namespace latsum
