#pragma once

#include <optional>
#include <vector>

#include "cwp/kronecker.hpp"
#include "cwp/multipoly.hpp"

namespace cwp {

// Upper triangular d x d matrix with polynomial entries.
struct TriPolyMatrix {
    int dim = 0;
    std::vector<MultiPoly> e;  // row-major, dim*dim entries

    static TriPolyMatrix zero(int dim, int nvars, RingTag ring, bool has_y = false) {
        TriPolyMatrix m;
        m.dim = dim;
        m.e.assign(static_cast<size_t>(dim) * dim, mp_zero(nvars, ring, has_y));
        return m;
    }

    MultiPoly& at(int i, int j) { return e[static_cast<size_t>(i) * dim + j]; }
    const MultiPoly& at(int i, int j) const { return e[static_cast<size_t>(i) * dim + j]; }

    int nvars() const { return e.front().nvars; }
    RingTag ring() const { return e.front().ring; }
    bool has_y() const { return e.front().has_y; }

    bool is_triangular() const {
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < i; ++j)
                if (!at(i, j).is_zero()) return false;
        return true;
    }

    void require_triangular() const {
        if (!is_triangular()) fail(Code::NotTriangular, "matrix has entries below the diagonal");
    }

    bool operator==(const TriPolyMatrix& o) const { return dim == o.dim && e == o.e; }
};

inline TriPolyMatrix tri_mul(const TriPolyMatrix& a, const TriPolyMatrix& b) {
    if (a.dim != b.dim) fail(Code::DimensionMismatch, "triangular product of unequal dimensions");
    TriPolyMatrix r = TriPolyMatrix::zero(a.dim, a.nvars(), a.ring(), a.has_y() || b.has_y());
    for (int i = 0; i < a.dim; ++i)
        for (int j = i; j < a.dim; ++j) {
            MultiPoly s = r.at(i, j);
            for (int k = i; k <= j; ++k) {
                if (a.at(i, k).is_zero() || b.at(k, j).is_zero()) continue;
                s = mp_add(s, mp_mul(a.at(i, k), b.at(k, j)));
            }
            r.at(i, j) = s;
        }
    return r;
}

inline TriPolyMatrix tri_add(const TriPolyMatrix& a, const TriPolyMatrix& b) {
    if (a.dim != b.dim) fail(Code::DimensionMismatch, "triangular sum of unequal dimensions");
    TriPolyMatrix r = a;
    for (size_t i = 0; i < r.e.size(); ++i) r.e[i] = mp_add(r.e[i], b.e[i]);
    return r;
}

namespace detail {

// scale row i of m by diag[i]
inline TriPolyMatrix diag_mul_left(const std::vector<MultiPoly>& diag, const TriPolyMatrix& m) {
    TriPolyMatrix r = m;
    for (int i = 0; i < m.dim; ++i)
        for (int j = i; j < m.dim; ++j)
            r.at(i, j) = mp_mul(diag[static_cast<size_t>(i)], m.at(i, j));
    return r;
}

// scale column j of m by diag[j]
inline TriPolyMatrix diag_mul_right(const TriPolyMatrix& m, const std::vector<MultiPoly>& diag) {
    TriPolyMatrix r = m;
    for (int i = 0; i < m.dim; ++i)
        for (int j = i; j < m.dim; ++j)
            r.at(i, j) = mp_mul(m.at(i, j), diag[static_cast<size_t>(j)]);
    return r;
}

}  // namespace detail

// Product of n triangular matrices by the (D_i + U_i) expansion: every matrix
// splits into its diagonal D_i and strict upper part U_i; the product expands
// into summands with at most d-1 U-factors (more U-factors multiply to the
// zero matrix), interleaved with runs of diagonal matrices. The diagonal runs
// are taken from a prefix-product table D_{u,v}. If `q` is given, every entry
// of the result is reduced mod q via divrem_multivar.
//
// The summands are enumerated depth-first over the positions of the U-factors
// so that partial products are shared between summands with a common prefix.
inline TriPolyMatrix triangular_product_expansion(const std::vector<TriPolyMatrix>& ms,
                                                  const std::optional<MultiPoly>& q = {}) {
    if (ms.empty()) fail(Code::BadParams, "empty product");
    const int dim = ms.front().dim;
    const int nv = ms.front().nvars();
    const RingTag ring = ms.front().ring();
    const bool hy = ms.front().has_y();
    for (const auto& m : ms) {
        if (m.dim != dim || m.nvars() != nv || !(m.ring() == ring))
            fail(Code::DimensionMismatch, "mixed matrix shapes in product");
        m.require_triangular();
    }
    if (q) check_monic_in_y(*q);

    const int n = static_cast<int>(ms.size());
    const MultiPoly one = mp_const(1, nv, ring, hy);

    // diagonals and strict upper parts
    std::vector<std::vector<MultiPoly>> diag(static_cast<size_t>(n));
    std::vector<TriPolyMatrix> upper(static_cast<size_t>(n),
                                     TriPolyMatrix::zero(dim, nv, ring, hy));
    std::vector<bool> upper_nonzero(static_cast<size_t>(n), false);
    for (int t = 0; t < n; ++t) {
        diag[static_cast<size_t>(t)].reserve(static_cast<size_t>(dim));
        for (int i = 0; i < dim; ++i) diag[static_cast<size_t>(t)].push_back(ms[static_cast<size_t>(t)].at(i, i));
        for (int i = 0; i < dim; ++i)
            for (int j = i + 1; j < dim; ++j) {
                upper[static_cast<size_t>(t)].at(i, j) = ms[static_cast<size_t>(t)].at(i, j);
                if (!ms[static_cast<size_t>(t)].at(i, j).is_zero()) upper_nonzero[static_cast<size_t>(t)] = true;
            }
    }

    // prefix table of diagonal segment products: seg[u][v] = prod_{i=u..v} D_i
    // (1-based closed ranges, seg[u][u-1] = identity diagonal)
    std::vector<std::vector<std::vector<MultiPoly>>> seg(static_cast<size_t>(n + 2));
    for (int u = 1; u <= n + 1; ++u) {
        seg[static_cast<size_t>(u)].resize(static_cast<size_t>(n + 1));
        std::vector<MultiPoly> acc(static_cast<size_t>(dim), one);
        if (u <= n) seg[static_cast<size_t>(u)][static_cast<size_t>(u - 1)] = acc;
        else seg[static_cast<size_t>(u)][static_cast<size_t>(n)] = acc;
        for (int v = u; v <= n; ++v) {
            for (int i = 0; i < dim; ++i)
                acc[static_cast<size_t>(i)] = mp_mul(acc[static_cast<size_t>(i)], diag[static_cast<size_t>(v - 1)][static_cast<size_t>(i)]);
            seg[static_cast<size_t>(u)][static_cast<size_t>(v)] = acc;
        }
    }
    auto segment = [&](int u, int v) -> const std::vector<MultiPoly>& {
        // product over positions u..v; empty when u > v
        if (u > v) return seg[static_cast<size_t>(u)][static_cast<size_t>(u - 1)];
        return seg[static_cast<size_t>(u)][static_cast<size_t>(v)];
    };

    TriPolyMatrix total = TriPolyMatrix::zero(dim, nv, ring, hy);

    // all-diagonal summand
    {
        const auto& full = segment(1, n);
        for (int i = 0; i < dim; ++i) total.at(i, i) = full[static_cast<size_t>(i)];
    }

    // prefix = product of the expansion terms up to and including U at
    // position `last`; extends by one more U-position at a time
    auto dfs = [&](auto&& self, const TriPolyMatrix& prefix, int last, int used) -> void {
        {
            TriPolyMatrix summand = detail::diag_mul_right(prefix, segment(last + 1, n));
            total = tri_add(total, summand);
        }
        if (used == dim - 1) return;  // one more U would zero the product
        for (int next = last + 1; next <= n; ++next) {
            if (!upper_nonzero[static_cast<size_t>(next - 1)]) continue;
            TriPolyMatrix ext = detail::diag_mul_right(prefix, segment(last + 1, next - 1));
            ext = tri_mul(ext, upper[static_cast<size_t>(next - 1)]);
            self(self, ext, next, used + 1);
        }
    };
    for (int first = 1; first <= n; ++first) {
        if (!upper_nonzero[static_cast<size_t>(first - 1)]) continue;
        TriPolyMatrix head = detail::diag_mul_left(segment(1, first - 1), upper[static_cast<size_t>(first - 1)]);
        dfs(dfs, head, first, 1);
    }

    if (q) {
        for (auto& entry : total.e)
            if (!entry.is_zero()) entry = divrem_multivar(entry, *q).second;
    }
    return total;
}

}  // namespace cwp
