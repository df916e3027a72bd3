#pragma once

// The operators D_g = (t_g - 2 pi i c_g)/t_g - (1/t_g) d_g, with d_g the
// derivative in y along g, acting on the summands
//   F_{B,w} = prod_{h not in B} t_h / L_{B,h} * prod_{f in B} kernel(c_f, {y+w}_{B,f})
// where L_{B,h} = u_h - sum_{f in B} u_f <h, f^B>, u = t - 2 pi i c.
// Removing g: D_g F(t,y;Lambda) = F(t',y;Lambda minus g).

#include <algorithm>
#include <vector>

#include "latsum/genfun.hpp"

namespace latsum {

template <class S>
struct HierarchySummand {
    int basis = 0;                 // index into Arrangement::bases()
    Q weight;                      // 1 / idx(B)
    Series<S> numerator;
    std::vector<int> denominators;  // h with a factor 1 / L_{B,h}
};

template <class F>
LinearForm<typename F::Scalar> basis_linear_form(const F& fd, const Arrangement& a, const Basis& B, int h) {
    LinearForm<typename F::Scalar> l;
    l.coeffs.assign(a.size(), fd.zero());
    l.coeffs[h] = fd.one();
    GaussQ kap = a[h].constant;
    for (std::size_t i = 0; i < B.members.size(); ++i) {
        Q p = dot(a[h].direction, B.dual[i]);
        if (p == 0) continue;
        l.coeffs[B.members[i]] = fd.from_q(-p);
        kap = kap - p * a[B.members[i]].constant;
    }
    l.constant = kap.is_zero() ? fd.zero() : -fd.two_pi_i(kap);
    return l;
}

// One summand per (B, w), numerators kept through degree K.
template <class F>
std::vector<HierarchySummand<typename F::Scalar>> hierarchy_summands(const F& fd, const Arrangement& a, const QVec& y,
                                                                     const ZVec& phi, int K) {
    using S = typename F::Scalar;
    const int n = a.size();
    auto terms = basis_terms(a, y, phi);
    std::vector<HierarchySummand<S>> out;
    for (std::size_t bi = 0; bi < terms.size(); ++bi) {
        const BasisTerm& T = terms[bi];
        const Basis& B = *T.basis;
        Series<S> tprod = Series<S>::constant(n, Series<S>::kExact, fd.one());
        for (int h : T.others) tprod = tprod * Series<S>::variable(n, Series<S>::kExact, h, fd.one());
        for (auto& fr : T.fracs) {
            HierarchySummand<S> s;
            s.basis = static_cast<int>(bi);
            s.weight = Q(1) / Q(B.index);
            Series<S> prod = Series<S>::constant(n, K, fd.one());
            for (std::size_t i = 0; i < B.members.size(); ++i)
                prod = (prod * kernel_series(fd, a[B.members[i]].constant, fr[i], K, n, B.members[i])).truncated(K);
            s.numerator = (prod * tprod).truncated(K);
            s.denominators = T.others;
            out.push_back(std::move(s));
        }
    }
    return out;
}

template <class S>
bool series_agree(const Series<S>& a, const Series<S>& b) {
    const int K = std::min(a.order(), b.order());
    auto d = (a.truncated(K) - b.truncated(K));
    if constexpr (scalar_exact<S>) {
        return d.empty();
    } else {
        double norm = 1;
        for (auto& [m, c] : a.terms()) norm = std::max(norm, magnitude(c));
        mpfr_prec_t prec = a.empty() ? 128 : a.terms().begin()->second.prec();
        double tol = std::ldexp(1.0, -static_cast<int>(prec / 2)) * norm;
        for (auto& [m, c] : d.terms())
            if (magnitude(c) > tol) return false;
        return true;
    }
}

template <class S>
struct DgResult {
    bool vanished = false;     // g in B: K(t,g) = 0
    bool agree = true;         // the two computations coincide
    HierarchySummand<S> summand;
};

// D_g F_{B,w}, computed (a) as K(t,g) F_{B,w} with K(t,g) = L_{B,g}/t_g
// cancelled symbolically, and (b) from the definition, the y-derivative along
// g being multiplication by sum_{f in B} u_f <g, f^B>.
template <class F>
DgResult<typename F::Scalar> apply_Dg_summand(const F& fd, const Arrangement& a,
                                              const HierarchySummand<typename F::Scalar>& s, int g) {
    using S = typename F::Scalar;
    const int n = a.size();
    const Basis& B = a.bases()[s.basis];
    DgResult<S> r;
    LinearForm<S> tg;
    tg.coeffs.assign(n, fd.zero());
    tg.coeffs[g] = fd.one();
    tg.constant = fd.zero();

    // (b) ((u_g - d_g) F_{B,w}) / t_g
    LinearForm<S> grad;
    grad.coeffs.assign(n, fd.zero());
    grad.coeffs[g] = fd.one();
    GaussQ phase = a[g].constant;
    for (std::size_t i = 0; i < B.members.size(); ++i) {
        Q p = dot(a[g].direction, B.dual[i]);
        if (p == 0) continue;
        int f = B.members[i];
        grad.coeffs[f] = grad.coeffs[f] - fd.from_q(p);
        phase = phase - p * a[f].constant;
    }
    grad.constant = phase.is_zero() ? fd.zero() : -fd.two_pi_i(phase);
    Series<S> defn = divide_exact((s.numerator * grad.to_series()).truncated(s.numerator.order()), tg);

    if (B.contains(g)) {
        r.vanished = true;
        r.agree = defn.empty() || series_agree(defn, Series<S>(n, defn.order()));
        r.summand = s;
        r.summand.numerator = Series<S>(n, defn.order());
        return r;
    }
    // (a) t_g and L_{B,g} cancel
    auto it = std::find(s.denominators.begin(), s.denominators.end(), g);
    if (it == s.denominators.end()) throw std::logic_error("summand has no factor for this functional");
    r.summand = s;
    r.summand.denominators.erase(r.summand.denominators.begin() + (it - s.denominators.begin()));
    r.summand.numerator = divide_exact(s.numerator, tg);
    // (b) still carries 1/L_{B,g}: compare numerators after clearing it
    Series<S> lhs = (r.summand.numerator * basis_linear_form(fd, a, B, g).to_series()).truncated(defn.order());
    r.agree = series_agree(defn, lhs);
    return r;
}

template <class F>
RationalForm<typename F::Scalar> to_rational_form(const F& fd, const Arrangement& a,
                                                  const HierarchySummand<typename F::Scalar>& s, int order) {
    using S = typename F::Scalar;
    const Basis& B = a.bases()[s.basis];
    RationalForm<S> form;
    form.numerator = s.numerator.truncated(order).scaled(fd.from_q(s.weight));
    for (int h : s.denominators) {
        auto l = basis_linear_form(fd, a, B, h);
        if (is_zero(l.constant))
            form.denominators.push_back(l);
        else
            form.numerator = (form.numerator * invert_unit(l.to_series(order))).truncated(order);
    }
    return form;
}

// Re-indexes a series in the variables of a sub-arrangement into the full one.
template <class S>
Series<S> embed_variables(const Series<S>& s, const std::vector<int>& keep, int n) {
    Series<S> r(n, s.order());
    for (auto& [m, c] : s.terms()) {
        auto e = mono_unpack(m, s.nvars());
        std::vector<int> full(n, 0);
        for (std::size_t i = 0; i < keep.size(); ++i) full[keep[i]] = e[i];
        r.add(mono_pack(full), c);
    }
    return r;
}

struct HierarchyOptions {
    std::optional<ZVec> phi;
    std::vector<int> removal_order;  // default: increasing
};

struct HierarchyReport {
    std::vector<int> removed;
    int summands = 0;
    int vanished = 0;
    int disagreements = 0;      // summands where the two D_g computations differ
    int mismatched = 0;         // coefficients where the two sides differ
    double max_discrepancy = 0;
    bool exact = false;
    bool ok() const { return disagreements == 0 && mismatched == 0; }
};

template <class F>
Series<typename F::Scalar> hierarchy_lhs(const F& fd, const Arrangement& a, const std::vector<int>& removed,
                                         const QVec& y, const ZVec& phi, int K, HierarchyReport* rep = nullptr) {
    using S = typename F::Scalar;
    int free_max = a.size();
    const int K0 = K + free_max + static_cast<int>(removed.size()) + 1;
    auto ss = hierarchy_summands(fd, a, y, phi, K0);
    std::vector<RationalForm<S>> forms;
    int vanished = 0, dis = 0;
    for (auto& s : ss) {
        HierarchySummand<S> cur = s;
        bool gone = false;
        for (int g : removed) {
            auto r = apply_Dg_summand(fd, a, cur, g);
            dis += !r.agree;
            if (r.vanished) {
                gone = true;
                break;
            }
            cur = std::move(r.summand);
        }
        if (gone) {
            ++vanished;
            continue;
        }
        int free = 0;
        for (int h : cur.denominators) free += is_zero(basis_linear_form(fd, a, a.bases()[cur.basis], h).constant);
        forms.push_back(to_rational_form(fd, a, cur, K + free));
    }
    if (rep) {
        rep->summands = static_cast<int>(ss.size());
        rep->vanished = vanished;
        rep->disagreements = dis;
    }
    if (forms.empty()) throw RankDrop("every summand vanished");
    return sum_rational_forms(std::move(forms)).truncated(K);
}

// (prod_{g removed} D_g) F(t,y;Lambda) against F(t',y;Lambda'), Lambda' = keep.
template <class F>
HierarchyReport check_hierarchy(const F& fd, const Arrangement& a, const std::vector<int>& keep, const QVec& y, int K,
                                const HierarchyOptions& opt = {}) {
    using S = typename F::Scalar;
    if (static_cast<int>(y.size()) != a.rank()) throw InvalidInput("y has the wrong length");
    for (int i : keep)
        if (i < 0 || i >= a.size()) throw InvalidInput("kept functional out of range");
    Arrangement sub = a.restricted(keep);  // RankDrop when the rank falls
    HierarchyReport rep;
    rep.exact = F::exact;
    rep.removed = opt.removal_order;
    if (rep.removed.empty())
        for (int g = 0; g < a.size(); ++g)
            if (std::find(keep.begin(), keep.end(), g) == keep.end()) rep.removed.push_back(g);
    {
        auto want = rep.removed;
        std::vector<int> all = keep;
        all.insert(all.end(), want.begin(), want.end());
        std::sort(all.begin(), all.end());
        if (std::adjacent_find(all.begin(), all.end()) != all.end() || static_cast<int>(all.size()) != a.size())
            throw InvalidInput("removal order must list exactly the dropped functionals");
    }
    check_excluded(a, y, a.indispensable());
    check_excluded(sub, y, sub.indispensable());
    ZVec phi = opt.phi ? *opt.phi : choose_phi(a);
    if (!phi_valid(a, phi)) throw InvalidInput("phi is not generic for this arrangement");

    Series<S> lhs = hierarchy_lhs(fd, a, rep.removed, y, phi, K, &rep);
    GenfunOptions gopt;
    gopt.phi = phi;
    Series<S> rhs = embed_variables(generating_function(fd, sub, y, K, gopt), keep, a.size());
    auto d = (lhs - rhs).truncated(K);
    if constexpr (F::exact) {
        rep.mismatched = static_cast<int>(d.size());
        for (auto& [m, c] : d.terms()) rep.max_discrepancy = std::max(rep.max_discrepancy, fd.magnitude(c));
    } else {
        double norm = 1;
        for (auto& [m, c] : rhs.terms()) norm = std::max(norm, fd.magnitude(c));
        double tol = std::ldexp(1.0, -static_cast<int>(fd.prec / 2)) * norm;
        for (auto& [m, c] : d.terms()) {
            double e = fd.magnitude(c);
            rep.max_discrepancy = std::max(rep.max_discrepancy, e);
            rep.mismatched += e > tol;
        }
    }
    return rep;
}

}  // namespace latsum
