#pragma once

// Arrangements of affine functionals f(v) = <f, v> + c_f on Z^r: bases, dual
// bases, coset representatives, the generic direction phi, and the
// multi-dimensional fractional part.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "latsum/errors.hpp"
#include "latsum/intmat.hpp"
#include "latsum/rational.hpp"

namespace latsum {

struct Functional {
    ZVec direction;
    GaussQ constant;
    std::string name;

    Q eval_real(const ZVec& v) const {
        Q s = constant.re;
        for (std::size_t i = 0; i < v.size(); ++i) s += Q(direction[i] * v[i]);
        return s;
    }
};

struct Basis {
    std::vector<int> members;  // indices into the arrangement, increasing
    ZMat directions;           // row i = direction of members[i]
    QMat dual;                 // dual[i] = f_i^B, <f_i, f_j^B> = delta_ij
    Z index;                   // #(Z^r / <B>)
    std::vector<ZVec> cosets;  // representatives w of Z^r / <B>

    int position(int f) const {
        for (std::size_t i = 0; i < members.size(); ++i)
            if (members[i] == f) return static_cast<int>(i);
        return -1;
    }
    bool contains(int f) const { return position(f) >= 0; }
};

// Combination helper: all k-subsets of {0..n-1} in lexicographic order.
inline std::vector<std::vector<int>> subsets(int n, int k) {
    std::vector<std::vector<int>> out;
    if (k > n || k < 0) return out;
    std::vector<int> c(k);
    for (int i = 0; i < k; ++i) c[i] = i;
    for (;;) {
        out.push_back(c);
        int i = k - 1;
        while (i >= 0 && c[i] == n - k + i) --i;
        if (i < 0) break;
        ++c[i];
        for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
    }
    return out;
}

inline Basis make_basis(const std::vector<Functional>& fs, const std::vector<int>& members) {
    Basis B;
    B.members = members;
    for (int f : members) B.directions.push_back(fs[f].direction);
    const std::size_t r = members.size();
    QMat inv = inverse_q(B.directions);  // directions * inv = I, so columns of inv are duals
    B.dual.assign(r, QVec(r));
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t i = 0; i < r; ++i) B.dual[j][i] = inv[i][j];
    B.index = abs(det(B.directions));
    // lattice <B> = columns of A = directions^T; U A V = D
    ZMat A = transpose(B.directions);
    SmithForm snf = smith(A);
    QMat Uinv_q = inverse_q(snf.U);
    ZMat Uinv(r, ZVec(r));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) Uinv[i][j] = Uinv_q[i][j].get_num();
    std::vector<long> d(r);
    for (std::size_t i = 0; i < r; ++i) d[i] = snf.D[i][i].get_si();
    ZVec a(r, 0);
    for (;;) {
        B.cosets.push_back(mul(Uinv, a));
        std::size_t i = 0;
        while (i < r) {
            a[i] += 1;
            if (a[i] < d[i]) break;
            a[i] = 0;
            ++i;
        }
        if (i == r) break;
    }
    return B;
}

class Arrangement {
public:
    Arrangement() = default;
    Arrangement(int rank, std::vector<Functional> fs) : r_(rank), fs_(std::move(fs)) {
        if (r_ < 1) throw InvalidInput("rank must be >= 1");
        if (fs_.empty()) throw InvalidInput("arrangement has no functionals");
        for (std::size_t i = 0; i < fs_.size(); ++i) {
            auto& f = fs_[i];
            if (static_cast<int>(f.direction.size()) != r_) throw InvalidInput("direction length differs from rank");
            if (std::all_of(f.direction.begin(), f.direction.end(), [](const Z& z) { return z == 0; }))
                throw InvalidInput("zero direction");
            if (f.name.empty()) f.name = "f" + std::to_string(i + 1);
        }
        if (rank_of(all_indices()) != static_cast<std::size_t>(r_))
            throw RankDrop("directions do not span a space of dimension " + std::to_string(r_));
        for (int i = 0; i < size(); ++i) {
            auto rest = all_indices();
            rest.erase(rest.begin() + i);
            if (rank_of(rest) < static_cast<std::size_t>(r_)) indisp_.push_back(i);
        }
        for (auto& s : subsets(size(), r_)) {
            ZMat M;
            for (int f : s) M.push_back(fs_[f].direction);
            if (det(M) != 0) bases_.push_back(make_basis(fs_, s));
        }
    }

    int rank() const { return r_; }
    int size() const { return static_cast<int>(fs_.size()); }
    const std::vector<Functional>& functionals() const { return fs_; }
    const Functional& operator[](int i) const { return fs_[i]; }
    const std::vector<Basis>& bases() const { return bases_; }
    const std::vector<int>& indispensable() const { return indisp_; }

    int index_of(const std::string& name) const {
        for (int i = 0; i < size(); ++i)
            if (fs_[i].name == name) return i;
        return -1;
    }

    std::vector<int> all_indices() const {
        std::vector<int> v(size());
        for (int i = 0; i < size(); ++i) v[i] = i;
        return v;
    }

    std::size_t rank_of(const std::vector<int>& idx) const {
        ZMat M;
        for (int i : idx) M.push_back(fs_[i].direction);
        if (M.empty()) return 0;
        return rank_z(M);
    }

    // Arrangement on a sub-list (order kept).
    Arrangement restricted(const std::vector<int>& keep) const {
        std::vector<Functional> fs;
        for (int i : keep) fs.push_back(fs_[i]);
        return Arrangement(r_, fs);
    }

    Arrangement without(int g) const {
        std::vector<int> keep;
        for (int i = 0; i < size(); ++i)
            if (i != g) keep.push_back(i);
        return restricted(keep);
    }

private:
    int r_ = 0;
    std::vector<Functional> fs_;
    std::vector<int> indisp_;
    std::vector<Basis> bases_;
};

inline const std::vector<Basis>& enumerate_bases(const Arrangement& a) { return a.bases(); }
inline const std::vector<int>& indispensable_set(const Arrangement& a) { return a.indispensable(); }

inline bool phi_valid(const Arrangement& a, const ZVec& phi) {
    for (auto& B : a.bases())
        for (auto& d : B.dual)
            if (dot(phi, d) == 0) return false;
    return true;
}

// phi = (1, M, ..., M^{r-1}) for the smallest working M.
inline ZVec choose_phi(const Arrangement& a) {
    for (long M = 1;; ++M) {
        ZVec phi(a.rank());
        Z p = 1;
        for (int i = 0; i < a.rank(); ++i) {
            phi[i] = p;
            p *= M;
        }
        if (phi_valid(a, phi)) return phi;
    }
}

// {y + w}_{B,f} for the member at position i of B.
inline Q frac_part(const QVec& y, const ZVec& w, const Basis& B, int i, const ZVec& phi) {
    QVec yw = y;
    for (std::size_t j = 0; j < yw.size(); ++j) yw[j] += Q(w[j]);
    Q x = dot(yw, B.dual[i]);
    Q s = dot(phi, B.dual[i]);
    if (s == 0) throw std::domain_error("phi is not generic for this basis");
    if (s > 0) return frac_q(x);
    return Q(1) - frac_q(-x);
}

// gcd of the entries of a rational vector: <Z^r, v> = g Z.
inline Q rational_gcd(const QVec& v) {
    Z den = 1;
    for (auto& x : v) den = lcm_z(den, x.get_den());
    Z g = 0;
    for (auto& x : v) g = gcd_z(g, Q(x * Q(den)).get_num());
    Q r(g, den);
    r.canonicalize();
    return r;
}

// Is <y, n> in <Z^r, n> (i.e. y on a lattice translate of the hyperplane n^perp)?
inline bool on_translate(const QVec& y, const QVec& normal) {
    Q g = rational_gcd(normal);
    return is_integer(dot(y, normal) / g);
}

// y in (h_{Lambda minus f} + Z^r) for some f in `subset` (each f must be indispensable).
inline bool on_excluded_hyperplanes(const QVec& y, const Arrangement& a, const std::vector<int>& subset,
                                    int* violator = nullptr) {
    for (int f : subset) {
        if (std::find(a.indispensable().begin(), a.indispensable().end(), f) == a.indispensable().end()) continue;
        const Basis& B = a.bases().front();  // f lies in every basis
        int pos = B.position(f);
        if (pos < 0) throw std::logic_error("indispensable functional missing from a basis");
        if (on_translate(y, B.dual[pos])) {
            if (violator) *violator = f;
            return true;
        }
    }
    return false;
}

// Distance (in units of the translate spacing) from y to the nearest excluded
// hyperplane for f in subset; used for proximity warnings.
inline double excluded_distance(const QVec& y, const Arrangement& a, const std::vector<int>& subset) {
    double best = 1e300;
    for (int f : subset) {
        if (std::find(a.indispensable().begin(), a.indispensable().end(), f) == a.indispensable().end()) continue;
        const Basis& B = a.bases().front();
        int pos = B.position(f);
        Q x = dot(y, B.dual[pos]) / rational_gcd(B.dual[pos]);
        Q fr = frac_q(x);
        double d = std::min(fr.get_d(), 1.0 - fr.get_d());
        best = std::min(best, d);
    }
    return best;
}

// y in the union over R of (h_R + Z^r).
inline bool in_h_R(const QVec& y, const Arrangement& a) {
    for (auto& B : a.bases())
        for (auto& d : B.dual)
            if (on_translate(y, d)) return true;
    return false;
}

// (1/index) sum_w e^{2 pi i <w, lam>} for lam in the dual lattice of <B>.
template <class F>
typename F::Scalar coset_character_sum(const F& fd, const Basis& B, const QVec& lam) {
    for (auto& row : B.directions)
        if (!is_integer(dot(row, lam))) throw std::invalid_argument("lam is not in the dual lattice of <B>");
    auto s = fd.zero();
    for (auto& w : B.cosets) s = s + fd.exp2pii(GaussQ(dot(w, lam)));
    return s * fd.from_q(Q(1) / Q(B.index));
}

}  // namespace latsum
