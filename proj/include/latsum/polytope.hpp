#pragma once

// The polytopes P(m;y) in [0,1]^{#L0} attached to a decomposition
// Lambda = B0 u L0, their vertices (found from witnesses W = (B,A) or by a
// brute-force H-to-V conversion), exponential integrals over simple
// polytopes, and the reassembly of the generating function from them.
//
// Coordinates are x_g for g in L0. Half-space 2f+a is u(f,a).x >= v(f,a).

#include <map>
#include <optional>
#include <vector>

#include "latsum/genfun.hpp"
#include "latsum/real.hpp"

namespace latsum {

namespace detail {

inline Q det_q(QMat a) {
    const std::size_t n = a.size();
    Q d = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            std::swap(a[p], a[c]);
            d = -d;
        }
        d *= a[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            if (a[i][c] == 0) continue;
            Q f = a[i][c] / a[c][c];
            for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
        }
    }
    return d;
}

inline std::optional<QVec> try_solve(const QMat& m, const QVec& b) {
    if (m.empty()) return QVec{};
    if (det_q(m) == 0) return std::nullopt;
    return solve_q(m, b);
}

}  // namespace detail

// sum_i lin_i t_i - 2 pi i phase
struct AffineForm {
    QVec lin;
    GaussQ phase;

    AffineForm& operator+=(const AffineForm& o) {
        for (std::size_t i = 0; i < lin.size(); ++i) lin[i] += o.lin[i];
        phase = phase + o.phase;
        return *this;
    }
    AffineForm scaled(const Q& s) const {
        AffineForm r{lin, s * phase};
        for (auto& c : r.lin) c *= s;
        return r;
    }
    bool lin_zero() const {
        for (auto& c : lin)
            if (c != 0) return false;
        return true;
    }
    friend bool operator==(const AffineForm& a, const AffineForm& b) { return a.lin == b.lin && a.phase == b.phase; }
};

inline AffineForm zero_form(int n) { return {QVec(n, 0), GaussQ()}; }

struct HalfSpace {
    int functional;
    int side;       // a in {0,1}
    QVec normal;    // u(f,a)
    Q offset;       // v(f,a;m;y)
    bool contains(const QVec& x) const { return dot(normal, x) >= offset; }
    bool tight(const QVec& x) const { return dot(normal, x) == offset; }
};

struct HPolytope {
    int dim = 0;
    ZVec m;
    std::vector<HalfSpace> halfspaces;  // index 2f + a
    bool contains(const QVec& x) const {
        for (auto& h : halfspaces)
            if (!h.contains(x)) return false;
        return true;
    }
};

struct Witness {
    int basis;                // index into Arrangement::bases()
    std::vector<int> labels;  // a_g for g outside the basis, increasing g
};

struct PolytopeVertex {
    QVec point;
    std::vector<int> incident;  // tight half-spaces
    std::vector<Witness> witnesses;
};

// The fixed decomposition Lambda = B0 u L0 and the pairings <g, f^{B0}>.
struct PolytopeFrame {
    const Arrangement* arr = nullptr;
    int b0 = 0;
    std::vector<int> L0;
    QVec y;
    std::vector<std::vector<Q>> pairing;  // pairing[i][j] = <g_j, f_i^{B0}>, g_j = L0[j]

    const Basis& B0() const { return arr->bases()[b0]; }
    int dim() const { return static_cast<int>(L0.size()); }
    Q z(const ZVec& m, int i) const {
        QVec ym = y;
        for (std::size_t k = 0; k < ym.size(); ++k) ym[k] += m[k];
        return dot(ym, B0().dual[i]);
    }
};

inline PolytopeFrame make_frame(const Arrangement& a, const QVec& y, int b0 = 0) {
    if (static_cast<int>(y.size()) != a.rank()) throw InvalidInput("y has the wrong length");
    if (b0 < 0 || b0 >= static_cast<int>(a.bases().size())) throw InvalidInput("no such basis");
    PolytopeFrame fr;
    fr.arr = &a;
    fr.b0 = b0;
    fr.y = y;
    const Basis& B = a.bases()[b0];
    for (int g = 0; g < a.size(); ++g)
        if (!B.contains(g)) fr.L0.push_back(g);
    for (std::size_t i = 0; i < B.members.size(); ++i) {
        std::vector<Q> row;
        for (int g : fr.L0) row.push_back(dot(a[g].direction, B.dual[i]));
        fr.pairing.push_back(row);
    }
    return fr;
}

inline HPolytope build_polytope(const PolytopeFrame& fr, const ZVec& m) {
    const Arrangement& a = *fr.arr;
    const Basis& B0 = fr.B0();
    HPolytope P;
    P.dim = fr.dim();
    P.m = m;
    for (int f = 0; f < a.size(); ++f)
        for (int side = 0; side < 2; ++side) {
            HalfSpace h{f, side, QVec(P.dim, 0), 0};
            int i = B0.position(f);
            if (i >= 0) {
                Q sg = side ? 1 : -1;
                for (int j = 0; j < P.dim; ++j) h.normal[j] = sg * fr.pairing[i][j];
                h.offset = sg * (fr.z(m, i) - side);
            } else {
                int j = static_cast<int>(std::find(fr.L0.begin(), fr.L0.end(), f) - fr.L0.begin());
                h.normal[j] = side ? -1 : 1;
                h.offset = -side;
            }
            P.halfspaces.push_back(std::move(h));
        }
    return P;
}

namespace detail {

inline void merge_vertex(std::vector<PolytopeVertex>& out, const HPolytope& P, QVec x,
                         std::optional<Witness> w) {
    for (auto& v : out)
        if (v.point == x) {
            if (w) v.witnesses.push_back(*w);
            return;
        }
    PolytopeVertex v;
    v.point = std::move(x);
    for (std::size_t h = 0; h < P.halfspaces.size(); ++h)
        if (P.halfspaces[h].tight(v.point)) v.incident.push_back(static_cast<int>(h));
    if (w) v.witnesses.push_back(*w);
    out.push_back(std::move(v));
}

inline bool vertex_test(const PolytopeFrame& fr, const ZVec& m, const Basis& B, const std::vector<int>& others,
                        const std::vector<int>& labels) {
    const Arrangement& a = *fr.arr;
    QVec q = fr.y;
    for (std::size_t k = 0; k < q.size(); ++k) q[k] += m[k];
    for (std::size_t j = 0; j < others.size(); ++j)
        if (labels[j])
            for (std::size_t k = 0; k < q.size(); ++k) q[k] -= a[others[j]].direction[k];
    for (auto& d : B.dual) {
        Q s = dot(q, d);
        if (s < 0 || s > 1) return false;
    }
    return true;
}

}  // namespace detail

// Vertices from witnesses W = (B,A): the n hyperplanes H(g, a_g), g outside B,
// meet in one point, which is a vertex iff 0 <= <y+m-sum a_g g, f^B> <= 1 for f in B.
inline std::vector<PolytopeVertex> vertices(const PolytopeFrame& fr, const HPolytope& P) {
    const Arrangement& a = *fr.arr;
    const int n = P.dim;
    std::vector<PolytopeVertex> out;
    for (std::size_t bi = 0; bi < a.bases().size(); ++bi) {
        const Basis& B = a.bases()[bi];
        std::vector<int> others;
        for (int g = 0; g < a.size(); ++g)
            if (!B.contains(g)) others.push_back(g);
        for (unsigned long mask = 0; mask < (1ul << n); ++mask) {
            std::vector<int> labels(n);
            for (int j = 0; j < n; ++j) labels[j] = (mask >> j) & 1;
            if (!detail::vertex_test(fr, P.m, B, others, labels)) continue;
            QMat M;
            QVec rhs;
            for (int j = 0; j < n; ++j) {
                const HalfSpace& h = P.halfspaces[2 * others[j] + labels[j]];
                M.push_back(h.normal);
                rhs.push_back(h.offset);
            }
            auto x = detail::try_solve(M, rhs);
            if (!x) throw std::logic_error("witness system is singular for a basis");
            detail::merge_vertex(out, P, std::move(*x), Witness{static_cast<int>(bi), labels});
        }
    }
    return out;
}

// Brute-force H-to-V: every nonsingular choice of n hyperplanes, kept when feasible.
inline std::vector<PolytopeVertex> vertices_generic(const HPolytope& P) {
    const int n = P.dim;
    const int H = static_cast<int>(P.halfspaces.size());
    std::vector<PolytopeVertex> out;
    for (auto& s : subsets(H, n)) {
        QMat M;
        QVec rhs;
        for (int h : s) {
            M.push_back(P.halfspaces[h].normal);
            rhs.push_back(P.halfspaces[h].offset);
        }
        auto x = detail::try_solve(M, rhs);
        if (!x || !P.contains(*x)) continue;
        detail::merge_vertex(out, P, std::move(*x), std::nullopt);
    }
    std::sort(out.begin(), out.end(), [](const PolytopeVertex& a, const PolytopeVertex& b) { return a.point < b.point; });
    return out;
}

inline bool is_simple(const HPolytope& P, const std::vector<PolytopeVertex>& verts) {
    if (verts.empty()) return false;
    for (auto& v : verts)
        if (static_cast<int>(v.incident.size()) != P.dim) return false;
    return true;
}

// E_k: vertices sharing n-1 tight half-spaces with vertex k.
inline std::vector<std::vector<int>> edges(const HPolytope& P, const std::vector<PolytopeVertex>& verts) {
    std::vector<std::vector<int>> E(verts.size());
    for (std::size_t k = 0; k < verts.size(); ++k)
        for (std::size_t j = 0; j < verts.size(); ++j) {
            if (j == k) continue;
            int shared = 0;
            for (int h : verts[k].incident)
                shared += std::count(verts[j].incident.begin(), verts[j].incident.end(), h);
            if (shared == P.dim - 1) E[k].push_back(static_cast<int>(j));
        }
    return E;
}

namespace detail {

inline Q edge_det(const std::vector<PolytopeVertex>& verts, int k, const std::vector<int>& Ek) {
    QMat D;
    for (int j : Ek) {
        QVec row(verts[k].point.size());
        for (std::size_t i = 0; i < row.size(); ++i) row[i] = verts[k].point[i] - verts[j].point[i];
        D.push_back(row);
    }
    Q d = det_q(D);
    return d < 0 ? Q(-d) : d;
}

inline void require_simple(const HPolytope& P, const std::vector<PolytopeVertex>& verts) {
    if (!is_simple(P, verts)) {
        std::string m;
        for (std::size_t i = 0; i < P.m.size(); ++i) m += (i ? "," : "") + P.m[i].get_str();
        throw NotSimple("polytope for m = (" + m + ") is not simple");
    }
}

}  // namespace detail

// int_P e^{a.x} dx by the vertex formula over edges found from incidences.
inline Real exp_integral_simple(const HPolytope& P, const std::vector<PolytopeVertex>& verts, const QVec& a,
                                mpfr_prec_t prec = 128) {
    detail::require_simple(P, verts);
    auto E = edges(P, verts);
    Real total(prec);
    for (std::size_t k = 0; k < verts.size(); ++k) {
        if (static_cast<int>(E[k].size()) != P.dim) throw NotSimple("vertex without n edges");
        Q den = 1;
        for (int j : E[k]) {
            Q ad = 0;
            for (std::size_t i = 0; i < a.size(); ++i) ad += a[i] * (verts[k].point[i] - verts[j].point[i]);
            if (ad == 0) throw DegenerateExponent("exponent vector is orthogonal to an edge");
            den *= ad;
        }
        Real term = exp(Real(dot(a, verts[k].point), prec));
        term *= Real(Q(detail::edge_det(verts, static_cast<int>(k), E[k]) / den), prec);
        total += term;
    }
    return total;
}

// Nonempty cells: m ranges over the box where <y+m, f^{B0}> can meet the
// range of sum_g x_g <g, f^{B0}> over the unit cube.
inline std::vector<ZVec> enumerate_m(const PolytopeFrame& fr) {
    const Arrangement& a = *fr.arr;
    const Basis& B0 = fr.B0();
    const int r = a.rank();
    std::vector<Q> lo(r), hi(r);
    for (int i = 0; i < r; ++i) {
        for (auto& p : fr.pairing[i]) (p < 0 ? lo[i] : hi[i]) += p;
        hi[i] += 1;
    }
    // m = sum_f z_f f - y with z_f in [lo_f, hi_f]
    std::vector<Z> mlo(r), mhi(r);
    for (int k = 0; k < r; ++k) {
        Q l = -fr.y[k], h = -fr.y[k];
        for (int i = 0; i < r; ++i) {
            Q d(a[B0.members[i]].direction[k]);
            if (d >= 0) {
                l += d * lo[i];
                h += d * hi[i];
            } else {
                l += d * hi[i];
                h += d * lo[i];
            }
        }
        mlo[k] = -floor_q(-l);
        mhi[k] = floor_q(h);
    }
    std::vector<ZVec> out;
    ZVec m = mlo;
    for (;;) {
        bool inside = true;
        for (int i = 0; i < r && inside; ++i) {
            Q zi = fr.z(m, i);
            inside = zi >= lo[i] && zi <= hi[i];
        }
        if (inside && !vertices(fr, build_polytope(fr, m)).empty()) out.push_back(m);
        int k = r - 1;
        while (k >= 0 && m[k] == mhi[k]) {
            m[k] = mlo[k];
            --k;
        }
        if (k < 0) break;
        ++m[k];
    }
    return out;
}

struct PolytopeCell {
    HPolytope P;
    std::vector<PolytopeVertex> verts;
    bool simple = false;
};

struct PolytopeGeometry {
    PolytopeFrame frame;
    std::vector<PolytopeCell> cells;  // ordered by m lexicographically
};

inline PolytopeGeometry polytope_geometry(const Arrangement& a, const QVec& y, int b0 = 0, int threads = 1) {
    PolytopeGeometry G;
    G.frame = make_frame(a, y, b0);
    auto ms = enumerate_m(G.frame);
    G.cells.resize(ms.size());
    parallel_for(static_cast<int>(ms.size()), threads, [&](int i) {
        auto& c = G.cells[i];
        c.P = build_polytope(G.frame, ms[i]);
        c.verts = vertices(G.frame, c.P);
        c.simple = is_simple(c.P, c.verts);
    });
    return G;
}

// ------------------------------------------------------- symbolic vertex data

// u_f = t_f - 2 pi i c_f
inline AffineForm u_form(const Arrangement& a, int f) {
    AffineForm u = zero_form(a.size());
    u.lin[f] = 1;
    u.phase = a[f].constant;
    return u;
}

// t*_g = u_g - sum_{f in B0} u_f <g, f^{B0}>, g in L0.
inline std::vector<AffineForm> t_star(const PolytopeFrame& fr) {
    const Arrangement& a = *fr.arr;
    const Basis& B0 = fr.B0();
    std::vector<AffineForm> ts;
    for (int j = 0; j < fr.dim(); ++j) {
        AffineForm t = u_form(a, fr.L0[j]);
        for (std::size_t i = 0; i < B0.members.size(); ++i)
            if (fr.pairing[i][j] != 0) t += u_form(a, B0.members[i]).scaled(-fr.pairing[i][j]);
        ts.push_back(t);
    }
    return ts;
}

inline AffineForm pair_forms(const std::vector<AffineForm>& v, const QVec& x, int n) {
    AffineForm s = zero_form(n);
    for (std::size_t j = 0; j < v.size(); ++j)
        if (x[j] != 0) s += v[j].scaled(x[j]);
    return s;
}

// sum_{f in B0} u_f <y+m, f^{B0}> + t*.p
inline AffineForm vertex_exponent(const PolytopeFrame& fr, const ZVec& m, const QVec& p) {
    const Arrangement& a = *fr.arr;
    const Basis& B0 = fr.B0();
    AffineForm e = pair_forms(t_star(fr), p, a.size());
    for (std::size_t i = 0; i < B0.members.size(); ++i) e += u_form(a, B0.members[i]).scaled(fr.z(m, static_cast<int>(i)));
    return e;
}

// u_f - sum_{g in B} u_g <f, g^B>
inline AffineForm basis_form(const Arrangement& a, const Basis& B, int f) {
    AffineForm l = u_form(a, f);
    for (std::size_t i = 0; i < B.members.size(); ++i) {
        Q p = dot(a[f].direction, B.dual[i]);
        if (p != 0) l += u_form(a, B.members[i]).scaled(-p);
    }
    return l;
}

// Matrix U of a witness: column j is u(g_j, a_{g_j}) for g_j outside B.
inline QMat witness_matrix(const PolytopeFrame& fr, const HPolytope& P, const Witness& w) {
    const Arrangement& a = *fr.arr;
    const Basis& B = a.bases()[w.basis];
    const int n = P.dim;
    QMat U(n, QVec(n));
    int j = 0;
    for (int g = 0; g < a.size(); ++g) {
        if (B.contains(g)) continue;
        const HalfSpace& h = P.halfspaces[2 * g + w.labels[j]];
        for (int i = 0; i < n; ++i) U[i][j] = h.normal[i];
        ++j;
    }
    return U;
}

struct VertexIdentities {
    bool det_index = true;   // |det U| = idx(B)/idx(B0)
    bool cramer = true;      // det U(f,t*)/det U = (-1)^{a_f} (basis form of f)
    bool exponent = true;    // vertex exponent in B coordinates
};

inline VertexIdentities check_vertex_identities(const PolytopeFrame& fr, const HPolytope& P,
                                                const PolytopeVertex& v, const Witness& w) {
    const Arrangement& a = *fr.arr;
    const Basis& B = a.bases()[w.basis];
    const int n = P.dim;
    const int N = a.size();
    VertexIdentities out;
    QMat U = witness_matrix(fr, P, w);
    Q d = detail::det_q(U);
    out.det_index = (d < 0 ? Q(-d) : d) == Q(B.index) / Q(fr.B0().index);

    // Cramer: solve U z = t*, coordinatewise in the t-basis and the phase
    auto ts = t_star(fr);
    std::vector<AffineForm> z(n, zero_form(N));
    QMat inv = n ? QMat(n, QVec(n)) : QMat{};
    for (int c = 0; c < n; ++c) {
        QVec e(n, 0);
        e[c] = 1;
        QVec col = solve_q(U, e);
        for (int i = 0; i < n; ++i) inv[i][c] = col[i];
    }
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < n; ++c)
            if (inv[i][c] != 0) z[i] += ts[c].scaled(inv[i][c]);
    int j = 0;
    for (int g = 0; g < N; ++g) {
        if (B.contains(g)) continue;
        AffineForm want = basis_form(a, B, g).scaled(w.labels[j] ? -1 : 1);
        if (!(z[j] == want)) out.cramer = false;
        ++j;
    }

    AffineForm lhs = vertex_exponent(fr, P.m, v.point);
    AffineForm rhs = zero_form(N);
    QVec q = fr.y;
    for (std::size_t k = 0; k < q.size(); ++k) q[k] += P.m[k];
    j = 0;
    for (int g = 0; g < N; ++g) {
        if (B.contains(g)) continue;
        if (w.labels[j]) {
            rhs += u_form(a, g);
            for (std::size_t k = 0; k < q.size(); ++k) q[k] -= a[g].direction[k];
        }
        ++j;
    }
    for (std::size_t i = 0; i < B.members.size(); ++i) rhs += u_form(a, B.members[i]).scaled(dot(q, B.dual[i]));
    out.exponent = lhs == rhs;
    return out;
}

// ------------------------------------------------------------- assembly

// Smallest N (multiple of 4) holding every phase e^{-2 pi i c} met in the assembly.
inline u32 polytope_cyclotomic_order(const PolytopeGeometry& G) {
    const Arrangement& a = *G.frame.arr;
    Z N = 4;
    for (auto& f : a.functionals()) {
        if (f.constant.im != 0) throw InvalidInput("exact mode needs real rational constants");
        N = lcm_z(N, f.constant.re.get_den());
    }
    for (auto& c : G.cells)
        for (auto& v : c.verts) N = lcm_z(N, vertex_exponent(G.frame, c.P.m, v.point).phase.re.get_den());
    if (N > Z(1u << 30)) throw InvalidInput("cyclotomic order too large");
    return static_cast<u32>(N.get_ui());
}

enum class EdgeData {
    Witness,    // closed-form cone data at each witness (|det U|, Cramer forms)
    Incidence,  // vertex formula with edges from shared tight half-spaces
};

struct PolytopeOptions {
    EdgeData edges = EdgeData::Witness;
    int b0 = 0;
    int threads = 1;
};

struct PolytopeReport {
    int cells = 0;
    int vertices = 0;
    bool all_simple = true;
    int identity_failures = 0;
    int degenerate_divisions = 0;
    std::vector<std::pair<ZVec, int>> vertex_counts;
};

namespace detail {

template <class F>
class TermBuilder {
public:
    using S = typename F::Scalar;
    TermBuilder(const F& fd, const Arrangement& a, int K) : fd_(fd), a_(a), K_(K), n_(a.size()) {}

    // coef * P(t) * e^{expo} / prod dens, P(t) = prod_f t_f / (e^{u_f} - 1)
    RationalForm<S> build(const Q& coef, const AffineForm& expo, const std::vector<AffineForm>& dens) const {
        int free = 0;
        for (auto& d : dens) {
            if (d.lin_zero()) throw DegenerateExponent("identically vanishing edge form");
            free += d.phase.is_zero();
        }
        const int Kn = K_ + free;
        RationalForm<S> form;
        Series<S> lin(n_, Kn);
        for (int i = 0; i < n_; ++i) lin.add(mono_var(n_, i), fd_.from_q(expo.lin[i]));
        S phase = fd_.exp2pii(GaussQ(-expo.phase.re, -expo.phase.im)) * fd_.from_q(coef);
        form.numerator = (prefactor(Kn) * exp_series(lin, fd_.one())).truncated(Kn).scaled(phase);
        for (auto& d : dens) {
            LinearForm<S> l;
            for (auto& c : d.lin) l.coeffs.push_back(fd_.from_q(c));
            if (d.phase.is_zero()) {
                l.constant = fd_.zero();
                form.denominators.push_back(l);
            } else {
                l.constant = -fd_.two_pi_i(d.phase);
                form.numerator = (form.numerator * invert_unit(l.to_series(Kn))).truncated(Kn);
            }
        }
        return form;
    }

private:
    const Series<S>& prefactor(int Kn) const {
        auto it = pre_.find(Kn);
        if (it != pre_.end()) return it->second;
        Series<S> p = Series<S>::constant(n_, Kn, fd_.one());
        for (int f = 0; f < n_; ++f) p = (p * kernel_series(fd_, a_[f].constant, Q(0), Kn, n_, f)).truncated(Kn);
        return pre_.emplace(Kn, std::move(p)).first->second;
    }

    const F& fd_;
    const Arrangement& a_;
    int K_, n_;
    mutable std::map<int, Series<S>> pre_;
};

}  // namespace detail

// F~(t,y;Lambda) through total degree K, reassembled from the cells.
template <class F>
Series<typename F::Scalar> genfun_via_polytopes(const F& fd, const PolytopeGeometry& G, int K,
                                                const PolytopeOptions& opt = {}, PolytopeReport* rep = nullptr) {
    using S = typename F::Scalar;
    const PolytopeFrame& fr = G.frame;
    const Arrangement& a = *fr.arr;
    const int N = a.size();
    if (in_h_R(fr.y, a)) throw ExcludedPoint("y lies on a translate of a hyperplane spanned by a basis");
    PolytopeReport R;
    std::vector<std::vector<RationalForm<S>>> per(G.cells.size());
    std::vector<int> fails(G.cells.size(), 0);
    const Q inv_idx0 = Q(1) / Q(fr.B0().index);
    parallel_for(static_cast<int>(G.cells.size()), opt.threads, [&](int ci) {
        const PolytopeCell& c = G.cells[ci];
        detail::require_simple(c.P, c.verts);
        detail::TermBuilder<F> tb(fd, a, K);
        if (opt.edges == EdgeData::Witness) {
            for (auto& v : c.verts) {
                const Witness& w = v.witnesses.front();
                auto id = check_vertex_identities(fr, c.P, v, w);
                fails[ci] += !(id.det_index && id.cramer && id.exponent);
                const Basis& B = a.bases()[w.basis];
                Q coef = Q(1) / Q(B.index);
                std::vector<AffineForm> dens;
                int j = 0;
                for (int g = 0; g < N; ++g) {
                    if (B.contains(g)) continue;
                    if (!w.labels[j]) coef = -coef;
                    dens.push_back(basis_form(a, B, g));
                    ++j;
                }
                per[ci].push_back(tb.build(coef, vertex_exponent(fr, c.P.m, v.point), dens));
            }
        } else {
            auto E = edges(c.P, c.verts);
            auto ts = t_star(fr);
            for (std::size_t k = 0; k < c.verts.size(); ++k) {
                std::vector<AffineForm> dens;
                for (int j : E[k]) {
                    QVec d(c.P.dim);
                    for (int i = 0; i < c.P.dim; ++i) d[i] = c.verts[k].point[i] - c.verts[j].point[i];
                    dens.push_back(pair_forms(ts, d, N));
                }
                Q coef = detail::edge_det(c.verts, static_cast<int>(k), E[k]) * inv_idx0;
                per[ci].push_back(tb.build(coef, vertex_exponent(fr, c.P.m, c.verts[k].point), dens));
            }
        }
    });
    std::vector<RationalForm<S>> forms;
    for (std::size_t ci = 0; ci < G.cells.size(); ++ci) {
        R.cells++;
        R.vertices += static_cast<int>(G.cells[ci].verts.size());
        R.all_simple = R.all_simple && G.cells[ci].simple;
        R.identity_failures += fails[ci];
        R.vertex_counts.push_back({G.cells[ci].P.m, static_cast<int>(G.cells[ci].verts.size())});
        for (auto& f : per[ci]) forms.push_back(std::move(f));
    }
    if (forms.empty()) throw InvalidInput("no nonempty cells");
    int divs = 0;
    Series<S> total = sum_rational_forms(std::move(forms), nullptr, &divs);
    R.degenerate_divisions = divs;
    if (rep) *rep = std::move(R);
    return total.truncated(K);
}

template <class F>
Series<typename F::Scalar> genfun_via_polytopes(const F& fd, const Arrangement& a, const QVec& y, int K,
                                                const PolytopeOptions& opt = {}, PolytopeReport* rep = nullptr) {
    if (in_h_R(y, a)) throw ExcludedPoint("y lies on a translate of a hyperplane spanned by a basis");
    return genfun_via_polytopes(fd, polytope_geometry(a, y, opt.b0, opt.threads), K, opt, rep);
}

}  // namespace latsum
