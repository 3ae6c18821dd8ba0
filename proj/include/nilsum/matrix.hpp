#pragma once

#include <cstddef>
#include <vector>

#include "nilsum/ring.hpp"

// Dense n x n matrices over a RingElement coefficient ring. Row entries
// multiply column entries on the left, so products are correct over
// noncommutative entry rings.

namespace nilsum {

struct Matrix {
    RingSpec ring;
    std::size_t n = 0;
    std::vector<RingElement> e;  // row major

    Matrix() = default;
    Matrix(RingSpec spec, std::size_t n_)
        : ring(std::move(spec)), n(n_), e(n_ * n_, ring_zero(ring)) {}

    RingElement& at(std::size_t i, std::size_t j) { return e[i * n + j]; }
    const RingElement& at(std::size_t i, std::size_t j) const { return e[i * n + j]; }

    static Matrix zeros(const RingSpec& spec, std::size_t n) { return Matrix(spec, n); }

    static Matrix identity(const RingSpec& spec, std::size_t n) {
        Matrix m(spec, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = ring_one(spec);
        return m;
    }

    bool operator==(const Matrix& o) const { return ring == o.ring && n == o.n && e == o.e; }
};

namespace detail {
inline void check_compatible(const Matrix& a, const Matrix& b) {
    if (a.ring != b.ring) throw ring_error("matrix ring mismatch");
    if (a.n != b.n) throw ring_error("matrix shape mismatch");
}
}  // namespace detail

inline Matrix mat_add(const Matrix& a, const Matrix& b) {
    detail::check_compatible(a, b);
    Matrix out(a.ring, a.n);
    for (std::size_t i = 0; i < a.e.size(); ++i) out.e[i] = ring_add(a.e[i], b.e[i]);
    return out;
}

inline Matrix mat_neg(const Matrix& a) {
    Matrix out(a.ring, a.n);
    for (std::size_t i = 0; i < a.e.size(); ++i) out.e[i] = ring_neg(a.e[i]);
    return out;
}

inline Matrix mat_sub(const Matrix& a, const Matrix& b) { return mat_add(a, mat_neg(b)); }

inline Matrix mat_mul(const Matrix& a, const Matrix& b) {
    detail::check_compatible(a, b);
    Matrix out(a.ring, a.n);
    for (std::size_t i = 0; i < a.n; ++i)
        for (std::size_t k = 0; k < a.n; ++k) {
            const RingElement& aik = a.at(i, k);
            if (is_zero(aik)) continue;
            for (std::size_t j = 0; j < a.n; ++j) {
                if (is_zero(b.at(k, j))) continue;
                out.at(i, j) = ring_add(out.at(i, j), ring_mul(aik, b.at(k, j)));
            }
        }
    return out;
}

// left scaling c * A
inline Matrix mat_scale(const RingElement& c, const Matrix& a) {
    Matrix out(a.ring, a.n);
    for (std::size_t i = 0; i < a.e.size(); ++i) out.e[i] = ring_mul(c, a.e[i]);
    return out;
}

inline Matrix mat_pow(const Matrix& a, unsigned e) {
    Matrix out = Matrix::identity(a.ring, a.n);
    for (unsigned i = 0; i < e; ++i) out = mat_mul(out, a);
    return out;
}

inline bool mat_is_zero(const Matrix& a) {
    for (const auto& x : a.e)
        if (!is_zero(x)) return false;
    return true;
}

inline RingElement trace(const Matrix& a) {
    RingElement t = ring_zero(a.ring);
    for (std::size_t i = 0; i < a.n; ++i) t = ring_add(t, a.at(i, i));
    return t;
}

inline std::vector<RingElement> diagonal(const Matrix& a) {
    std::vector<RingElement> d;
    d.reserve(a.n);
    for (std::size_t i = 0; i < a.n; ++i) d.push_back(a.at(i, i));
    return d;
}

inline bool is_scalar_matrix(const Matrix& a) {
    const RingElement& d = a.at(0, 0);
    for (std::size_t i = 0; i < a.n; ++i)
        for (std::size_t j = 0; j < a.n; ++j)
            if (i == j ? !(a.at(i, j) == d) : !is_zero(a.at(i, j))) return false;
    return true;
}

inline bool is_strict_upper(const Matrix& a) {
    for (std::size_t i = 0; i < a.n; ++i)
        for (std::size_t j = 0; j <= i; ++j)
            if (!is_zero(a.at(i, j))) return false;
    return true;
}

inline bool is_strict_lower(const Matrix& a) {
    for (std::size_t i = 0; i < a.n; ++i)
        for (std::size_t j = i; j < a.n; ++j)
            if (!is_zero(a.at(i, j))) return false;
    return true;
}

inline bool has_zero_diagonal(const Matrix& a) {
    for (std::size_t i = 0; i < a.n; ++i)
        if (!is_zero(a.at(i, i))) return false;
    return true;
}

inline Matrix strict_upper_part(const Matrix& a) {
    Matrix out(a.ring, a.n);
    for (std::size_t i = 0; i < a.n; ++i)
        for (std::size_t j = i + 1; j < a.n; ++j) out.at(i, j) = a.at(i, j);
    return out;
}

inline Matrix strict_lower_part(const Matrix& a) {
    Matrix out(a.ring, a.n);
    for (std::size_t i = 0; i < a.n; ++i)
        for (std::size_t j = 0; j < i; ++j) out.at(i, j) = a.at(i, j);
    return out;
}

inline Matrix diagonal_part(const Matrix& a) {
    Matrix out(a.ring, a.n);
    for (std::size_t i = 0; i < a.n; ++i) out.at(i, i) = a.at(i, i);
    return out;
}

// place `small` in the bottom-right corner of an n x n zero matrix
inline Matrix embed_bottom_right(const Matrix& small, std::size_t n) {
    if (small.n > n) throw ring_error("embed: block too large");
    Matrix out(small.ring, n);
    std::size_t off = n - small.n;
    for (std::size_t i = 0; i < small.n; ++i)
        for (std::size_t j = 0; j < small.n; ++j) out.at(off + i, off + j) = small.at(i, j);
    return out;
}

inline Matrix bottom_right_block(const Matrix& a, std::size_t v) {
    if (v > a.n) throw ring_error("block larger than matrix");
    Matrix out(a.ring, v);
    std::size_t off = a.n - v;
    for (std::size_t i = 0; i < v; ++i)
        for (std::size_t j = 0; j < v; ++j) out.at(i, j) = a.at(off + i, off + j);
    return out;
}

// Exact inverse over Rational/PrimeField entries by Gauss-Jordan elimination.
inline Matrix mat_inverse_commutative(const Matrix& a) {
    if (!a.ring.is_field()) throw ring_error("mat_inverse_commutative: field entries only");
    const std::size_t n = a.n;
    Matrix work = a;
    Matrix inv = Matrix::identity(a.ring, n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && is_zero(work.at(piv, col))) ++piv;
        if (piv == n) throw ring_error("singular matrix");
        if (piv != col)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(work.at(piv, j), work.at(col, j));
                std::swap(inv.at(piv, j), inv.at(col, j));
            }
        RingElement pinv = ring_inverse(work.at(col, col));
        for (std::size_t j = 0; j < n; ++j) {
            work.at(col, j) = ring_mul(pinv, work.at(col, j));
            inv.at(col, j) = ring_mul(pinv, inv.at(col, j));
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || is_zero(work.at(i, col))) continue;
            RingElement f = work.at(i, col);
            for (std::size_t j = 0; j < n; ++j) {
                work.at(i, j) = ring_sub(work.at(i, j), ring_mul(f, work.at(col, j)));
                inv.at(i, j) = ring_sub(inv.at(i, j), ring_mul(f, inv.at(col, j)));
            }
        }
    }
    return inv;
}

// block-to-scalar flattening: (M_m)_n -> M_{nm}; a ring homomorphism
inline Matrix flatten(const Matrix& a) {
    if (a.ring.kind != RingKind::MatrixRing) throw ring_error("flatten: MatrixRing entries only");
    const std::size_t m = a.ring.m;
    Matrix out(a.ring.base_spec(), a.n * m);
    for (std::size_t i = 0; i < a.n; ++i)
        for (std::size_t j = 0; j < a.n; ++j) {
            const auto& blk = std::get<MatrixElem>(a.at(i, j).v);
            for (std::size_t r = 0; r < m; ++r)
                for (std::size_t c = 0; c < m; ++c)
                    out.at(i * m + r, j * m + c) = blk.entries[r * m + c];
        }
    return out;
}

// element of a matrix ring viewed as a matrix over the base, and back
inline Matrix matrix_from_element(const RingElement& e) {
    const auto* me = std::get_if<MatrixElem>(&e.v);
    if (!me) throw ring_error("matrix_from_element: not a matrix-ring element");
    Matrix out(spec_of(me->entries[0]), me->m);
    out.e = me->entries;
    return out;
}

inline RingElement element_from_matrix(const Matrix& a) {
    if (!a.ring.is_field()) throw ring_error("element_from_matrix: field entries only");
    MatrixElem me;
    me.m = a.n;
    me.entries = a.e;
    return RingElement(std::move(me));
}

}  // namespace nilsum
