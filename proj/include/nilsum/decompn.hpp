#pragma once

#include <cstddef>
#include <vector>

#include "nilsum/decomp3.hpp"
#include "nilsum/decomposition.hpp"
#include "nilsum/matrix.hpp"
#include "nilsum/witness.hpp"

// The n x n pipeline: halving sequence n_k, square-zero reducers N_n(A),
// reduction to a residual block of side 1 or 2, the floor(log2 n)+k+2
// nilpotent sum, and the all-square-zero variant.

namespace nilsum {

// n_0 = n, n_k = floor((n_{k-1}+1)/2), down to n_m with m = floor(log2 n);
// n_m is 1 when n is a power of two and 2 otherwise.
inline std::vector<std::size_t> nk_sequence(std::size_t n) {
    if (n < 1) throw ring_error("nk_sequence: n >= 1 required");
    std::size_t m = 0;
    while ((std::size_t{2} << m) <= n) ++m;  // m = floor(log2 n)
    std::vector<std::size_t> seq{n};
    for (std::size_t k = 0; k < m; ++k) seq.push_back((seq.back() + 1) / 2);
    return seq;
}

// Square-zero, trace-zero matrix that clears the top half of A's diagonal:
// for k <= floor(n/2), a_{kk} sits at (k,k) and (k,n+1-k), -a_{kk} at
// (n+1-k,k) and (n+1-k,n+1-k). The index pairs {k, n+1-k} are disjoint, so
// the square vanishes blockwise over any ring.
inline Matrix build_Nn(const Matrix& A) {
    if (A.n < 2) throw ring_error("build_Nn: n >= 2 required");
    Matrix N(A.ring, A.n);
    for (std::size_t k = 0; k < A.n / 2; ++k) {
        std::size_t kk = A.n - 1 - k;  // n+1-k in 1-based indexing
        const RingElement& a = A.at(k, k);
        N.at(k, k) = a;
        N.at(k, kk) = a;
        N.at(kk, k) = ring_neg(a);
        N.at(kk, kk) = ring_neg(a);
    }
    return N;
}

// Peel square-zero reducers off successively smaller bottom-right blocks until
// the residual has side 1 or 2; zero-diagonal remainders accumulate into
// strictly upper/lower stages. Produces exactly floor(log2 n) stages.
inline ReductionTrace reduce_to_small(const Matrix& A) {
    if (A.n < 2) throw ring_error("reduce_to_small: n >= 2 required");
    ReductionTrace rt;
    rt.sequence = nk_sequence(A.n);
    Matrix cur = A;
    for (std::size_t j = 0; j + 1 < rt.sequence.size(); ++j) {
        Matrix N = build_Nn(cur);
        Matrix R = mat_sub(cur, N);
        std::size_t next = rt.sequence[j + 1];
        Matrix D = bottom_right_block(R, next);
        Matrix B = mat_sub(R, embed_bottom_right(D, cur.n));  // zero diagonal
        rt.stages.push_back({embed_bottom_right(N, A.n),
                             embed_bottom_right(strict_upper_part(B), A.n),
                             embed_bottom_right(strict_lower_part(B), A.n)});
        cur = D;
    }
    rt.v = cur.n;
    rt.residual = cur;
    return rt;
}

namespace detail {

// upper/lower accumulators over the whole n x n frame
struct Accumulated {
    Matrix upper, lower;
};

inline Accumulated accumulate_stages(const ReductionTrace& rt, std::size_t n,
                                     const RingSpec& spec) {
    Accumulated acc{Matrix::zeros(spec, n), Matrix::zeros(spec, n)};
    for (const auto& st : rt.stages) {
        acc.upper = mat_add(acc.upper, st.upper);
        acc.lower = mat_add(acc.lower, st.lower);
    }
    return acc;
}

}  // namespace detail

// N1 = [[xy, x], [-yxy, -yx]] and N2 = [[c, 1], [-c^2, -c]] with c = a11 - xy
// square to zero over any ring; Z = A - N1 - N2 has zero diagonal.
struct TwoByTwoParts {
    Matrix n1, n2, z;
};

inline TwoByTwoParts two_by_two_decompose(const Matrix& A, const CommutatorWitness& w) {
    if (A.n != 2) throw ring_error("two_by_two_decompose: 2x2 input required");
    if (w.pairs.size() != 1) throw ring_error("two_by_two_decompose: one-pair witness required");
    if (!witness_check(w) || !ring_eq(w.target, trace(A)))
        throw ring_error("two_by_two_decompose: witness does not certify Tr(A)");
    const auto& [x, y] = w.pairs[0];
    RingSpec spec = A.ring;
    RingElement xy = ring_mul(x, y);
    RingElement yx = ring_mul(y, x);
    TwoByTwoParts out{Matrix(spec, 2), Matrix(spec, 2), Matrix(spec, 2)};
    out.n1.at(0, 0) = xy;
    out.n1.at(0, 1) = x;
    out.n1.at(1, 0) = ring_neg(ring_mul(y, xy));
    out.n1.at(1, 1) = ring_neg(yx);
    RingElement c = ring_sub(A.at(0, 0), xy);
    out.n2.at(0, 0) = c;
    out.n2.at(0, 1) = ring_one(spec);
    out.n2.at(1, 0) = ring_neg(ring_mul(c, c));
    out.n2.at(1, 1) = ring_neg(c);
    out.z = mat_sub(A, mat_add(out.n1, out.n2));
    return out;
}

// Split a strictly triangular matrix into n-1 single-row square-zero terms.
inline std::vector<Matrix> strict_triangular_rowsplit(const Matrix& T) {
    bool upper = is_strict_upper(T);
    if (!upper && !is_strict_lower(T))
        throw ring_error("strict_triangular_rowsplit: strictly triangular input required");
    std::vector<Matrix> out;
    for (std::size_t i = 0; i < T.n - 1; ++i) {
        std::size_t row = upper ? i : i + 1;
        Matrix term(T.ring, T.n);
        for (std::size_t j = 0; j < T.n; ++j) term.at(row, j) = T.at(row, j);
        out.push_back(std::move(term));
    }
    return out;
}

namespace detail {

// split the residual-derived 3x3 block C into k index-3 nilpotents plus
// zero-diagonal upper/lower leftovers, one nilpotent per witness pair
struct SmallBlockSplit {
    std::vector<Matrix> nilpotents;  // 3x3, each (U T U^{-1})^3 = 0
    Matrix K, L;                     // 3x3 strictly upper / lower leftovers
};

inline SmallBlockSplit split_small_block(const Matrix& C, const CommutatorWitness& w) {
    RingSpec spec = C.ring;
    RingElement z = ring_zero(spec);
    SmallBlockSplit out;
    out.K = Matrix::zeros(spec, 3);
    out.L = Matrix::zeros(spec, 3);
    Matrix remaining = C;
    const std::size_t k = w.pairs.size();
    for (std::size_t i = 0; i < k; ++i) {
        Matrix Ci(spec, 3);
        if (i + 1 < k) {
            Ci.at(0, 0) = ring_commutator(w.pairs[i].first, w.pairs[i].second);
        } else {
            Ci = remaining;
        }
        remaining = mat_sub(remaining, Ci);
        CommutatorWitness wi = CommutatorWitness::single(w.pairs[i].first, w.pairs[i].second);
        auto pd = prescribe_diagonal(Ci.at(0, 0), Ci.at(1, 1), Ci.at(2, 2), z, z, z, wi);
        Matrix Ni = mat_mul(pd.U, mat_mul(pd.T, pd.U_inv));
        Matrix left = mat_sub(Ci, Ni);  // zero diagonal
        out.K = mat_add(out.K, strict_upper_part(left));
        out.L = mat_add(out.L, strict_lower_part(left));
        out.nilpotents.push_back(std::move(Ni));
    }
    return out;
}

}  // namespace detail

// A as a sum of floor(log2 n) + k + 2 nilpotent matrices: the square-zero
// reducers, k conjugated-triangular index-3 terms carrying the residual
// trace, and the two global strictly triangular terms.
inline Decomposition nilpotent_sum(const Matrix& A, const CommutatorWitness& w) {
    if (A.n < 3) throw ring_error("nilpotent_sum: n >= 3 required");
    if (!witness_check(w) || !ring_eq(w.target, trace(A)))
        throw ring_error("nilpotent_sum: witness does not certify Tr(A)");
    ReductionTrace rt = reduce_to_small(A);
    auto acc = detail::accumulate_stages(rt, A.n, A.ring);
    Matrix C = embed_bottom_right(rt.residual, 3);  // Tr(C) = Tr(A)
    auto split = detail::split_small_block(C, w);

    Decomposition d;
    d.input = A;
    d.witness = w;
    d.lemma = "3.9";
    d.seed = w.seed;
    d.k = w.pairs.size();
    for (const auto& st : rt.stages) {
        d.terms.push_back(st.squarezero);
        d.claims.push_back(Claim::nilpotent(2));
    }
    for (const auto& Ni : split.nilpotents) {
        d.terms.push_back(embed_bottom_right(Ni, A.n));
        d.claims.push_back(Claim::nilpotent(3));
    }
    d.terms.push_back(mat_add(acc.upper, embed_bottom_right(split.K, A.n)));
    d.claims.push_back(Claim::strict_upper());
    d.terms.push_back(mat_add(acc.lower, embed_bottom_right(split.L, A.n)));
    d.claims.push_back(Claim::strict_lower());
    d.reduction = std::move(rt);
    return d;
}

// A as a sum of floor(log2 n) + 2k + 2(n-1) square-zero matrices.
inline Decomposition squarezero_sum(const Matrix& A, const CommutatorWitness& w) {
    if (A.n < 2) throw ring_error("squarezero_sum: n >= 2 required");
    if (!witness_check(w) || !ring_eq(w.target, trace(A)))
        throw ring_error("squarezero_sum: witness does not certify Tr(A)");
    ReductionTrace rt = reduce_to_small(A);
    auto acc = detail::accumulate_stages(rt, A.n, A.ring);
    Matrix C = embed_bottom_right(rt.residual, 2);  // Tr(C) = Tr(A)

    Decomposition d;
    d.input = A;
    d.witness = w;
    d.lemma = "remark";
    d.seed = w.seed;
    d.k = w.pairs.size();
    for (const auto& st : rt.stages) {
        d.terms.push_back(st.squarezero);
        d.claims.push_back(Claim::nilpotent(2));
    }
    // per-pair 2x2 splits; diag(B_i) = (x_i y_i, -y_i x_i) for all but the last
    Matrix remaining = C;
    Matrix K2 = Matrix::zeros(A.ring, 2), L2 = Matrix::zeros(A.ring, 2);
    const std::size_t k = w.pairs.size();
    for (std::size_t i = 0; i < k; ++i) {
        Matrix Bi(A.ring, 2);
        if (i + 1 < k) {
            Bi.at(0, 0) = ring_mul(w.pairs[i].first, w.pairs[i].second);
            Bi.at(1, 1) = ring_neg(ring_mul(w.pairs[i].second, w.pairs[i].first));
        } else {
            Bi = remaining;
        }
        remaining = mat_sub(remaining, Bi);
        CommutatorWitness wi = CommutatorWitness::single(w.pairs[i].first, w.pairs[i].second);
        auto parts = two_by_two_decompose(Bi, wi);
        d.terms.push_back(embed_bottom_right(parts.n1, A.n));
        d.claims.push_back(Claim::nilpotent(2));
        d.terms.push_back(embed_bottom_right(parts.n2, A.n));
        d.claims.push_back(Claim::nilpotent(2));
        K2 = mat_add(K2, strict_upper_part(parts.z));
        L2 = mat_add(L2, strict_lower_part(parts.z));
    }
    Matrix Tu = mat_add(acc.upper, embed_bottom_right(K2, A.n));
    Matrix Tl = mat_add(acc.lower, embed_bottom_right(L2, A.n));
    for (const auto& t : strict_triangular_rowsplit(Tu)) {
        d.terms.push_back(t);
        d.claims.push_back(Claim::nilpotent(2));
    }
    for (const auto& t : strict_triangular_rowsplit(Tl)) {
        d.terms.push_back(t);
        d.claims.push_back(Claim::nilpotent(2));
    }
    d.reduction = std::move(rt);
    return d;
}

}  // namespace nilsum
