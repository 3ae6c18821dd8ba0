#pragma once

#include <array>

#include "nilsum/decomposition.hpp"
#include "nilsum/matrix.hpp"
#include "nilsum/ring.hpp"
#include "nilsum/witness.hpp"

// 3x3 decompositions: the base solver for the triangular-conjugation system,
// diagonal prescription via U(x), polynomial-annihilated 3- and 4-term sums,
// the three-nilpotent-subring decomposition and truss witnesses.

namespace nilsum {

// Solution of
//   x q + r     = a
//   p - q - r   = b
//   -p + q - qx = c
// from a one-pair witness x0 y0 - y0 x0 = a + b + c:
// x = x0, q = y0, r = a - x0 y0, p = b + q + r.
struct LemmaBazaSolution {
    RingElement x, p, q, r;
};

inline LemmaBazaSolution lemma_baza_solve(const RingElement& a, const RingElement& b,
                                          const RingElement& c, const CommutatorWitness& w) {
    if (w.pairs.size() != 1) throw ring_error("lemma_baza_solve: one-pair witness required");
    if (!witness_check(w) || !ring_eq(w.target, ring_add(ring_add(a, b), c)))
        throw ring_error("lemma_baza_solve: witness does not certify a+b+c");
    const auto& [x0, y0] = w.pairs[0];
    LemmaBazaSolution s;
    s.x = x0;
    s.q = y0;
    s.r = ring_sub(a, ring_mul(x0, y0));
    s.p = ring_add(b, ring_add(s.q, s.r));
    return s;
}

// U(x) and its closed-form inverse, valid over any unital ring
inline Matrix build_U(const RingElement& x) {
    RingSpec spec = spec_of(x);
    Matrix U(spec, 3);
    RingElement one = ring_one(spec);
    U.at(0, 0) = x;
    U.at(0, 1) = one;
    U.at(0, 2) = one;
    U.at(1, 0) = one;
    U.at(1, 1) = one;
    U.at(2, 0) = one;
    return U;
}

inline Matrix build_U_inv(const RingElement& x) {
    RingSpec spec = spec_of(x);
    Matrix V(spec, 3);
    RingElement one = ring_one(spec);
    V.at(0, 2) = one;
    V.at(1, 1) = one;
    V.at(1, 2) = ring_neg(one);
    V.at(2, 0) = one;
    V.at(2, 1) = ring_neg(one);
    V.at(2, 2) = ring_sub(one, x);
    return V;
}

struct PrescribedDiagonal {
    Matrix U, U_inv, T;  // T upper triangular with diag (s,t,u); diag(U T U^{-1}) = (a,b,c)
};

// Lemma: if (a-u)+(b-t)+(c-s) is a commutator then some U(x), T realize
// diag(T) = (s,t,u) and diag(U T U^{-1}) = (a,b,c).
inline PrescribedDiagonal prescribe_diagonal(const RingElement& a, const RingElement& b,
                                             const RingElement& c, const RingElement& s,
                                             const RingElement& t, const RingElement& u,
                                             const CommutatorWitness& w) {
    auto sol = lemma_baza_solve(ring_sub(a, u), ring_sub(b, t), ring_sub(c, s), w);
    PrescribedDiagonal out;
    out.U = build_U(sol.x);
    out.U_inv = build_U_inv(sol.x);
    out.T = Matrix(spec_of(a), 3);
    out.T.at(0, 0) = s;
    out.T.at(0, 1) = sol.p;
    out.T.at(0, 2) = sol.q;
    out.T.at(1, 1) = t;
    out.T.at(1, 2) = sol.r;
    out.T.at(2, 2) = u;
    return out;
}

// Same contract, but U = U(r) depends only on the oracle element: the witness
// pair is (r, preimage(shifted sum)).
inline PrescribedDiagonal prescribe_diagonal_fixed_U(
    const InnerDerivationOracle& oracle, const RingElement& a, const RingElement& b,
    const RingElement& c, const RingElement& s, const RingElement& t, const RingElement& u) {
    RingElement target =
        ring_add(ring_add(ring_sub(a, u), ring_sub(b, t)), ring_sub(c, s));
    CommutatorWitness w = CommutatorWitness::single(oracle.r, oracle.preimage(target));
    return prescribe_diagonal(a, b, c, s, t, u, w);
}

namespace detail {

inline void check_roots_central(const PolySpec& p) {
    for (const auto& r : p.roots)
        if (!is_central(r)) throw ring_error("polynomial roots must be central");
}

// sampling cross-check on top of the structural centrality test
inline void sample_centrality(const PolySpec& p) {
    Rng rng(0xC0FFEEu);
    RingSpec spec = spec_of(p.roots[0]);
    for (int i = 0; i < 16; ++i) {
        RingElement s = random_element(spec, rng);
        for (const auto& r : p.roots)
            if (!ring_eq(ring_mul(r, s), ring_mul(s, r)))
                throw ring_error("centrality sampling check failed");
    }
}

inline Matrix scalar_matrix3(const RingElement& c) {
    Matrix out(spec_of(c), 3);
    for (std::size_t i = 0; i < 3; ++i) out.at(i, i) = c;
    return out;
}

}  // namespace detail

// A = U T1 U^{-1} + (upper, diag s2 t2 u2) + (lower, diag u3 t3 s3), where the
// strictly-upper/-lower residues of A - U T1 U^{-1} are absorbed into terms 2
// and 3. The witness must certify diag-sum(A) minus the sum of all nine
// targets.
inline Decomposition corollary_decompose(const Matrix& A, const DiagonalTargets& targets,
                                         const CommutatorWitness& w) {
    if (A.n != 3) throw ring_error("corollary_decompose: 3x3 input required");
    const auto& [s1, t1, u1] = targets.rows[0];
    const auto& [s2, t2, u2] = targets.rows[1];
    const auto& [s3, t3, u3] = targets.rows[2];
    RingElement a = ring_sub(A.at(0, 0), ring_add(s2, u3));
    RingElement b = ring_sub(A.at(1, 1), ring_add(t2, t3));
    RingElement c = ring_sub(A.at(2, 2), ring_add(u2, s3));
    auto pd = prescribe_diagonal(a, b, c, s1, t1, u1, w);
    Matrix term1 = mat_mul(pd.U, mat_mul(pd.T, pd.U_inv));
    Matrix R = mat_sub(A, term1);  // diag (s2+u3, t2+t3, u2+s3)
    Matrix term2 = strict_upper_part(R);
    term2.at(0, 0) = s2;
    term2.at(1, 1) = t2;
    term2.at(2, 2) = u2;
    Matrix term3 = strict_lower_part(R);
    term3.at(0, 0) = u3;
    term3.at(1, 1) = t3;
    term3.at(2, 2) = s3;

    Decomposition d;
    d.input = A;
    d.terms = {term1, term2, term3};
    d.witness = w;
    d.lemma = "2.3";
    d.seed = w.seed;
    auto row_zero = [](const std::array<RingElement, 3>& r) {
        return is_zero(r[0]) && is_zero(r[1]) && is_zero(r[2]);
    };
    auto row_central = [](const std::array<RingElement, 3>& r) {
        return is_central(r[0]) && is_central(r[1]) && is_central(r[2]);
    };
    if (row_zero(targets.rows[0]))
        d.claims.push_back(Claim::conjugated_strict_upper(pd.U, pd.U_inv));
    else if (row_central(targets.rows[0]))
        d.claims.push_back(Claim::annihilated(PolySpec{{s1, t1, u1}}));
    else
        d.claims.push_back(Claim::none());
    d.claims.push_back(row_zero(targets.rows[1])
                           ? Claim::strict_upper()
                           : (row_central(targets.rows[1])
                                  ? Claim::annihilated(PolySpec{{s2, t2, u2}})
                                  : Claim::none()));
    d.claims.push_back(row_zero(targets.rows[2])
                           ? Claim::strict_lower()
                           : (row_central(targets.rows[2])
                                  ? Claim::annihilated(PolySpec{{s3, t3, u3}})
                                  : Claim::none()));
    return d;
}

// three terms, term k annihilated by p_k; all nine roots central
inline Decomposition poly_sum_3(const Matrix& A, const PolySpec& p1, const PolySpec& p2,
                                const PolySpec& p3, const CommutatorWitness& w) {
    for (const auto* p : {&p1, &p2, &p3}) {
        detail::check_roots_central(*p);
        detail::sample_centrality(*p);
    }
    DiagonalTargets targets;
    targets.rows[0] = p1.roots;
    targets.rows[1] = p2.roots;
    targets.rows[2] = p3.roots;
    Decomposition d = corollary_decompose(A, targets, w);
    d.claims = {Claim::annihilated(p1), Claim::annihilated(p2), Claim::annihilated(p3)};
    return d;
}

namespace detail {

// scalar trace of a matrix-ring element (trace of the m x m block)
inline RingElement block_trace(const RingElement& e) { return trace(matrix_from_element(e)); }

}  // namespace detail

// Four polynomial-annihilated terms for a 3x3 matrix over M_m(field).
// Feasibility (the finite-dimensional stand-in for the operator-theoretic
// splitting): trace(flatten(A)) = m * sum of all twelve roots. The input is
// split A = M + N by shifting one scalar slot of the (1,1) block entry so that
// each half meets the trace condition of its own two polynomials.
inline Decomposition poly_sum_4(const Matrix& A, const std::array<PolySpec, 4>& polys) {
    if (A.n != 3 || A.ring.kind != RingKind::MatrixRing)
        throw ring_error("poly_sum_4: 3x3 matrix over a matrix ring required");
    RingSpec base = A.ring.base_spec();
    for (const auto& p : polys) {
        detail::check_roots_central(p);
        detail::sample_centrality(p);
    }
    auto root_sum = [&](const PolySpec& p) {
        RingElement s = ring_zero(base);
        for (const auto& r : p.roots) s = ring_add(s, matrix_from_element(r).at(0, 0));
        return s;
    };
    RingElement m_scalar = central_from_int(base, static_cast<long>(A.ring.m));
    RingElement sum12 = ring_mul(m_scalar, ring_add(root_sum(polys[0]), root_sum(polys[1])));
    RingElement sum34 = ring_mul(m_scalar, ring_add(root_sum(polys[2]), root_sum(polys[3])));
    RingElement tau = trace(flatten(A));
    if (!ring_eq(tau, ring_add(sum12, sum34)))
        throw infeasible_error(
            "trace obstruction: trace(flatten(A)) != m * sum of roots; the "
            "infinite-dimensional splitting behind this decomposition is out of reach "
            "at finite scale");

    // shift the (1,1) scalar slot of the (1,1) block by -sum34
    Matrix M = A;
    Matrix blk = matrix_from_element(M.at(0, 0));
    blk.at(0, 0) = ring_sub(blk.at(0, 0), sum34);
    M.at(0, 0) = element_from_matrix(blk);
    Matrix N = mat_sub(A, M);

    auto half = [&](const Matrix& H, const PolySpec& pc, const PolySpec& pt, bool upper_first) {
        // conjugated targets pc; triangular targets pt on the upper (resp. lower) slot
        DiagonalTargets targets = DiagonalTargets::zeros(A.ring);
        targets.rows[0] = pc.roots;
        if (upper_first)
            targets.rows[1] = pt.roots;
        else
            targets.rows[2] = {pt.roots[2], pt.roots[1], pt.roots[0]};
        RingElement shift = ring_zero(A.ring);
        for (const auto& row : targets.rows)
            for (const auto& r : row) shift = ring_add(shift, r);
        RingElement target = ring_sub(trace(H), shift);
        CommutatorWitness w = trace_zero_witness(target);
        return corollary_decompose(H, targets, w);
    };
    // first display: p1-conjugated + p2-upper + strictly-lower
    Decomposition dm = half(M, polys[0], polys[1], true);
    // second display: p3-conjugated + strictly-upper + p4-lower
    Decomposition dn = half(N, polys[2], polys[3], false);

    Decomposition d;
    d.input = A;
    d.terms = {dm.terms[0], mat_add(dm.terms[1], dn.terms[1]), dn.terms[0],
               mat_add(dm.terms[2], dn.terms[2])};
    d.claims = {Claim::annihilated(polys[0]), Claim::annihilated(polys[1]),
                Claim::annihilated(polys[2]),
                Claim::annihilated(PolySpec{{polys[3].roots[2], polys[3].roots[1],
                                             polys[3].roots[0]}})};
    d.witness = dm.witness;
    for (const auto& p : dn.witness.pairs) d.witness.pairs.push_back(p);
    d.witness.target = ring_add(dm.witness.target, dn.witness.target);
    d.lemma = "3.1";
    return d;
}

// A = S_u + S_l + U(r) S_u U(r)^{-1} membership decomposition
inline Decomposition three_nilpotent_subrings(const Matrix& A,
                                              const InnerDerivationOracle& oracle) {
    if (A.n != 3) throw ring_error("three_nilpotent_subrings: 3x3 input required");
    RingSpec spec = A.ring;
    RingElement z = ring_zero(spec);
    auto pd = prescribe_diagonal_fixed_U(oracle, A.at(0, 0), A.at(1, 1), A.at(2, 2), z, z, z);
    Matrix conj = mat_mul(pd.U, mat_mul(pd.T, pd.U_inv));
    Matrix R = mat_sub(A, conj);  // zero diagonal
    Decomposition d;
    d.input = A;
    d.terms = {strict_upper_part(R), strict_lower_part(R), conj};
    d.claims = {Claim::strict_upper(), Claim::strict_lower(),
                Claim::conjugated_strict_upper(pd.U, pd.U_inv)};
    d.witness = CommutatorWitness::single(oracle.r, oracle.preimage(trace(A)));
    d.lemma = "3.5";
    return d;
}

// Heap witness [k, l, m] = k - l + m = A with k, l, m unipotent: decompose
// A - I = s1 + s2 + s3 into the three nilpotent subrings and set
// k = 1 + s1, l = 1 - s2, m = 1 + s3.
inline Decomposition truss_witness(const Matrix& A, const InnerDerivationOracle& oracle) {
    Matrix I = Matrix::identity(A.ring, A.n);
    Decomposition sub = three_nilpotent_subrings(mat_sub(A, I), oracle);
    Decomposition d;
    d.input = A;
    d.terms = {mat_add(I, sub.terms[0]), mat_sub(I, sub.terms[1]), mat_add(I, sub.terms[2])};
    d.claims = {Claim::unipotent(3), Claim::unipotent(3), Claim::unipotent(3)};
    d.witness = sub.witness;
    d.lemma = "3.4";
    return d;
}

}  // namespace nilsum
