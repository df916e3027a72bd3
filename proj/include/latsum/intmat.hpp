#pragma once

// Small exact integer/rational matrix kit: determinant, inverse, rank,
// Smith and column-Hermite normal forms, integer linear systems.

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "latsum/rational.hpp"

namespace latsum {

using ZMat = std::vector<ZVec>;  // row major
using QMat = std::vector<QVec>;

inline ZMat identity_z(std::size_t n) {
    ZMat m(n, ZVec(n, 0));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

inline ZMat transpose(const ZMat& a) {
    if (a.empty()) return {};
    ZMat t(a[0].size(), ZVec(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
    return t;
}

inline ZMat mul(const ZMat& a, const ZMat& b) {
    ZMat c(a.size(), ZVec(b.empty() ? 0 : b[0].size(), 0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k)
            if (a[i][k] != 0)
                for (std::size_t j = 0; j < b[k].size(); ++j) c[i][j] += a[i][k] * b[k][j];
    return c;
}

inline ZVec mul(const ZMat& a, const ZVec& v) {
    ZVec r(a.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) r[i] += a[i][j] * v[j];
    return r;
}

// Bareiss fraction-free elimination.
inline Z det(ZMat a) {
    const std::size_t n = a.size();
    if (n == 0) return 1;
    Z prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t p = k + 1;
            while (p < n && a[p][k] == 0) ++p;
            if (p == n) return 0;
            std::swap(a[k], a[p]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                a[i][j] = a[i][j] * a[k][k] - a[i][k] * a[k][j];
                mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
            }
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

inline std::size_t rank_q(QMat a) {
    std::size_t rank = 0;
    const std::size_t rows = a.size();
    const std::size_t cols = rows ? a[0].size() : 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t p = rank;
        while (p < rows && a[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(a[rank], a[p]);
        for (std::size_t i = rank + 1; i < rows; ++i) {
            if (a[i][c] == 0) continue;
            Q f = a[i][c] / a[rank][c];
            for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[rank][j];
        }
        ++rank;
    }
    return rank;
}

inline std::size_t rank_z(const ZMat& a) {
    QMat q;
    for (auto& row : a) q.push_back(to_qvec(row));
    return rank_q(q);
}

// Inverse over Q; throws on singular input.
inline QMat inverse_q(const ZMat& m) {
    const std::size_t n = m.size();
    QMat a(n, QVec(2 * n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a[i][j] = m[i][j];
        a[i][n + i] = 1;
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) throw std::domain_error("singular matrix");
        std::swap(a[c], a[p]);
        Q inv = 1 / a[c][c];
        for (auto& x : a[c]) x *= inv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || a[i][c] == 0) continue;
            Q f = a[i][c];
            for (std::size_t j = 0; j < 2 * n; ++j) a[i][j] -= f * a[c][j];
        }
    }
    QMat r(n, QVec(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) r[i][j] = a[i][n + j];
    return r;
}

// Solves M x = b over Q for square invertible M.
inline QVec solve_q(const QMat& m, const QVec& b) {
    const std::size_t n = m.size();
    QMat a(n, QVec(n + 1));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a[i][j] = m[i][j];
        a[i][n] = b[i];
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) throw std::domain_error("singular system");
        std::swap(a[c], a[p]);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || a[i][c] == 0) continue;
            Q f = a[i][c] / a[c][c];
            for (std::size_t j = c; j <= n; ++j) a[i][j] -= f * a[c][j];
        }
    }
    QVec x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = a[i][n] / a[i][i];
    return x;
}

struct SmithForm {
    ZMat U, D, V;  // U * A * V = D, U and V unimodular
};

inline SmithForm smith(const ZMat& A) {
    const std::size_t m = A.size();
    const std::size_t n = m ? A[0].size() : 0;
    ZMat D = A, U = identity_z(m), V = identity_z(n);
    auto swap_rows = [&](std::size_t i, std::size_t j) {
        std::swap(D[i], D[j]);
        std::swap(U[i], U[j]);
    };
    auto swap_cols = [&](std::size_t i, std::size_t j) {
        for (auto& r : D) std::swap(r[i], r[j]);
        for (auto& r : V) std::swap(r[i], r[j]);
    };
    auto add_row = [&](std::size_t dst, std::size_t src, const Z& f) {  // row dst += f*row src
        for (std::size_t j = 0; j < n; ++j) D[dst][j] += f * D[src][j];
        for (std::size_t j = 0; j < m; ++j) U[dst][j] += f * U[src][j];
    };
    auto add_col = [&](std::size_t dst, std::size_t src, const Z& f) {
        for (std::size_t i = 0; i < m; ++i) D[i][dst] += f * D[i][src];
        for (std::size_t i = 0; i < n; ++i) V[i][dst] += f * V[i][src];
    };
    for (std::size_t t = 0; t < std::min(m, n); ++t) {
        for (;;) {
            // pivot: smallest nonzero magnitude in the remaining block
            std::size_t pi = m, pj = n;
            for (std::size_t i = t; i < m; ++i)
                for (std::size_t j = t; j < n; ++j)
                    if (D[i][j] != 0 && (pi == m || abs(D[i][j]) < abs(D[pi][pj]))) pi = i, pj = j;
            if (pi == m) return {U, D, V};
            if (pi != t) swap_rows(t, pi);
            if (pj != t) swap_cols(t, pj);
            bool clean = true;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (D[i][t] == 0) continue;
                Z q;
                mpz_fdiv_q(q.get_mpz_t(), D[i][t].get_mpz_t(), D[t][t].get_mpz_t());
                add_row(i, t, -q);
                if (D[i][t] != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (D[t][j] == 0) continue;
                Z q;
                mpz_fdiv_q(q.get_mpz_t(), D[t][j].get_mpz_t(), D[t][t].get_mpz_t());
                add_col(j, t, -q);
                if (D[t][j] != 0) clean = false;
            }
            if (!clean) continue;
            // divisibility condition d_t | remaining block
            bool divides = true;
            for (std::size_t i = t + 1; i < m && divides; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (D[i][j] % D[t][t] != 0) {
                        add_row(t, i, 1);
                        divides = false;
                        break;
                    }
            if (divides) break;
        }
        if (D[t][t] < 0) {
            for (std::size_t j = 0; j < n; ++j) D[t][j] = -D[t][j];
            for (std::size_t j = 0; j < m; ++j) U[t][j] = -U[t][j];
        }
    }
    return {U, D, V};
}

struct ColumnHermite {
    ZMat H;            // H = A * U, column echelon
    ZMat U;            // unimodular
    std::size_t rank;  // nonzero columns come first
    std::vector<std::size_t> pivot_rows;
};

// Column Hermite normal form: lower echelon, positive pivots, entries left of a
// pivot reduced into [0, pivot).
inline ColumnHermite column_hermite(const ZMat& A) {
    const std::size_t m = A.size();
    const std::size_t n = m ? A[0].size() : 0;
    ZMat H = A, U = identity_z(n);
    auto col_op = [&](std::size_t dst, std::size_t src, const Z& f) {
        for (std::size_t i = 0; i < m; ++i) H[i][dst] += f * H[i][src];
        for (std::size_t i = 0; i < n; ++i) U[i][dst] += f * U[i][src];
    };
    auto swap_c = [&](std::size_t a, std::size_t b) {
        for (auto& r : H) std::swap(r[a], r[b]);
        for (auto& r : U) std::swap(r[a], r[b]);
    };
    std::size_t piv = 0;
    std::vector<std::size_t> prow;
    for (std::size_t i = 0; i < m && piv < n; ++i) {
        for (;;) {
            std::size_t best = n;
            for (std::size_t j = piv; j < n; ++j)
                if (H[i][j] != 0 && (best == n || abs(H[i][j]) < abs(H[i][best]))) best = j;
            if (best == n) break;
            if (best != piv) swap_c(piv, best);
            bool done = true;
            for (std::size_t j = piv + 1; j < n; ++j) {
                if (H[i][j] == 0) continue;
                Z q;
                mpz_fdiv_q(q.get_mpz_t(), H[i][j].get_mpz_t(), H[i][piv].get_mpz_t());
                col_op(j, piv, -q);
                if (H[i][j] != 0) done = false;
            }
            if (done) break;
        }
        if (H[i][piv] == 0) continue;
        if (H[i][piv] < 0) {
            for (std::size_t r = 0; r < m; ++r) H[r][piv] = -H[r][piv];
            for (std::size_t r = 0; r < n; ++r) U[r][piv] = -U[r][piv];
        }
        for (std::size_t j = 0; j < piv; ++j) {
            Z q;
            mpz_fdiv_q(q.get_mpz_t(), H[i][j].get_mpz_t(), H[i][piv].get_mpz_t());
            if (q != 0) col_op(j, piv, -q);
        }
        prow.push_back(i);
        ++piv;
    }
    return {H, U, piv, prow};
}

// Integer solutions of A v = b: v = particular + kernel * z, z in Z^k.
struct IntegerSolution {
    ZVec particular;
    ZMat kernel;  // columns as vectors: kernel[j] is the j-th basis vector
};

inline std::optional<IntegerSolution> solve_integer(const ZMat& A, const QVec& b, std::size_t n) {
    if (A.empty()) return IntegerSolution{ZVec(n, 0), [&] {
                                              ZMat k;
                                              for (std::size_t j = 0; j < n; ++j) {
                                                  ZVec e(n, 0);
                                                  e[j] = 1;
                                                  k.push_back(e);
                                              }
                                              return k;
                                          }()};
    for (auto& x : b)
        if (!is_integer(x)) return std::nullopt;
    auto ch = column_hermite(A);
    const std::size_t m = A.size();
    ZVec z(n, 0);
    // forward substitution along pivot rows, then consistency on all rows
    for (std::size_t c = 0; c < ch.rank; ++c) {
        std::size_t i = ch.pivot_rows[c];
        Q rest = b[i];
        for (std::size_t j = 0; j < c; ++j) rest -= Q(ch.H[i][j] * z[j]);
        Q zc = rest / Q(ch.H[i][c]);
        if (!is_integer(zc)) return std::nullopt;
        z[c] = zc.get_num();
    }
    for (std::size_t i = 0; i < m; ++i) {
        Z s = 0;
        for (std::size_t j = 0; j < ch.rank; ++j) s += ch.H[i][j] * z[j];
        if (Q(s) != b[i]) return std::nullopt;
    }
    IntegerSolution sol;
    sol.particular = mul(ch.U, z);
    for (std::size_t j = ch.rank; j < n; ++j) {
        ZVec col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = ch.U[i][j];
        sol.kernel.push_back(col);
    }
    return sol;
}

// Is d in the lattice spanned by the columns of M?
inline bool in_column_lattice(const ZMat& M, const ZVec& d) {
    return solve_integer(M, to_qvec(d), M.empty() ? 0 : M[0].size()).has_value();
}

}  // namespace latsum
