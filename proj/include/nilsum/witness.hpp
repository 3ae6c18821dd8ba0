#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "nilsum/matrix.hpp"
#include "nilsum/ring.hpp"
#include "nilsum/rng.hpp"

// Commutator witnesses and the oracles that produce them: the classical
// trace-zero construction over fields, the ad_d preimage in the Weyl algebra,
// and splitting an element into a sum of k commutators.

namespace nilsum {

struct CommutatorWitness {
    std::vector<std::pair<RingElement, RingElement>> pairs;
    RingElement target;
    std::uint64_t seed = 0;

    static CommutatorWitness single(RingElement x, RingElement y) {
        CommutatorWitness w;
        w.target = ring_commutator(x, y);
        w.pairs.emplace_back(std::move(x), std::move(y));
        return w;
    }

    static CommutatorWitness trivial(const RingSpec& spec, std::size_t k = 1) {
        CommutatorWitness w;
        w.target = ring_zero(spec);
        for (std::size_t i = 0; i < k; ++i) w.pairs.emplace_back(w.target, w.target);
        return w;
    }
};

inline bool witness_check(const CommutatorWitness& w) {
    RingElement sum = ring_zero(spec_of(w.target));
    for (const auto& [x, y] : w.pairs) sum = ring_add(sum, ring_commutator(x, y));
    return ring_eq(sum, w.target);
}

struct InnerDerivationOracle {
    RingElement r;
    std::function<RingElement(const RingElement&)> preimage;
};

// Right inverse of ad_d on A1: x^a d^b -> x^{a+1} d^b / (a+1).
inline RingElement weyl_ad_preimage(const RingElement& s) {
    const auto* w = std::get_if<WeylElem>(&s.v);
    if (!w) throw ring_error("weyl_ad_preimage: Weyl element expected");
    WeylElem out;
    for (const auto& [k, c] : w->terms)
        out.terms[{k.first + 1, k.second}] = c / mpq_class(k.first + 1);
    return RingElement(std::move(out));
}

inline InnerDerivationOracle weyl_oracle() {
    return {weyl_d(), [](const RingElement& s) { return weyl_ad_preimage(s); }};
}

namespace detail {

// Deterministic search for v with Mv not in span(v): standard basis vectors
// first, then pairs e_i + e_j in lexicographic order (needed for diagonal M).
inline std::vector<RingElement> nonscalar_direction(const Matrix& M) {
    const std::size_t n = M.n;
    auto column_of = [&](const std::vector<RingElement>& v) {
        std::vector<RingElement> out(n, ring_zero(M.ring));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (!is_zero(v[j])) out[i] = ring_add(out[i], ring_mul(M.at(i, j), v[j]));
        return out;
    };
    auto independent = [&](const std::vector<RingElement>& v, const std::vector<RingElement>& w) {
        // v has entries 0/1 with at most two ones; w not in span(v) iff either
        // w is nonzero outside supp(v), or the supp(v) coordinates disagree.
        std::vector<std::size_t> supp;
        for (std::size_t i = 0; i < n; ++i)
            if (!is_zero(v[i])) supp.push_back(i);
        for (std::size_t i = 0; i < n; ++i) {
            bool in_supp = false;
            for (auto s : supp) in_supp |= (s == i);
            if (!in_supp && !is_zero(w[i])) return true;
        }
        if (supp.size() == 2 && !(w[supp[0]] == w[supp[1]])) return true;
        return false;
    };
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<RingElement> v(n, ring_zero(M.ring));
        v[i] = ring_one(M.ring);
        if (independent(v, column_of(v))) return v;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            std::vector<RingElement> v(n, ring_zero(M.ring));
            v[i] = ring_one(M.ring);
            v[j] = ring_one(M.ring);
            if (independent(v, column_of(v))) return v;
        }
    throw ring_error("zero_diagonal_similarity: scalar matrix");
}

// complete {v, Mv} to a basis with standard basis vectors, greedily
inline Matrix basis_with(const Matrix& M, const std::vector<RingElement>& v) {
    const std::size_t n = M.n;
    Matrix P(M.ring, n);
    std::vector<std::vector<RingElement>> cols;
    cols.push_back(v);
    std::vector<RingElement> Mv(n, ring_zero(M.ring));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (!is_zero(v[j])) Mv[i] = ring_add(Mv[i], ring_mul(M.at(i, j), v[j]));
    cols.push_back(Mv);
    // row-echelon tracking to test independence incrementally
    auto rank_of = [&](const std::vector<std::vector<RingElement>>& cs) {
        std::vector<std::vector<RingElement>> rows;
        for (const auto& c : cs) rows.push_back(c);
        std::size_t rank = 0;
        std::vector<bool> used(n, false);
        for (auto& r : rows) {
            for (std::size_t piv = 0; piv < n; ++piv) {
                if (used[piv] || is_zero(r[piv])) continue;
                used[piv] = true;
                ++rank;
                RingElement inv = ring_inverse(r[piv]);
                for (auto& x : r) x = ring_mul(inv, x);
                for (auto& r2 : rows) {
                    if (&r2 == &r || is_zero(r2[piv])) continue;
                    RingElement f = r2[piv];
                    for (std::size_t c = 0; c < n; ++c)
                        r2[c] = ring_sub(r2[c], ring_mul(f, r[c]));
                }
                break;
            }
        }
        return rank;
    };
    for (std::size_t i = 0; i < n && cols.size() < n; ++i) {
        std::vector<RingElement> ei(n, ring_zero(M.ring));
        ei[i] = ring_one(M.ring);
        cols.push_back(ei);
        if (rank_of(cols) < cols.size()) cols.pop_back();
    }
    if (cols.size() != n) throw ring_error("basis completion failed");
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) P.at(i, j) = cols[j][i];
    return P;
}

}  // namespace detail

// Returns invertible S with S M S^{-1} zero-diagonal. M must be a trace-zero
// non-scalar matrix over a field (M = 0 yields S = I; nonzero scalars are
// rejected, including the F_p case of scalars with n*lambda = 0).
inline Matrix zero_diagonal_similarity(const Matrix& M) {
    if (!M.ring.is_field()) throw ring_error("zero_diagonal_similarity: field entries only");
    if (has_zero_diagonal(M)) return Matrix::identity(M.ring, M.n);
    if (is_scalar_matrix(M)) throw ring_error("zero_diagonal_similarity: scalar matrix");
    if (M.n == 1) throw ring_error("zero_diagonal_similarity: nonzero 1x1");
    auto v = detail::nonscalar_direction(M);
    Matrix P = detail::basis_with(M, v);
    Matrix Pinv = mat_inverse_commutative(P);
    Matrix Mp = mat_mul(Pinv, mat_mul(M, P));  // (1,1) entry is zero
    Matrix S = Pinv;
    Matrix B = bottom_right_block(Mp, M.n - 1);
    if (!mat_is_zero(B)) {
        if (is_scalar_matrix(B))
            throw ring_error("zero_diagonal_similarity: scalar trailing block");
        Matrix S2 = zero_diagonal_similarity(B);
        Matrix S2full = Matrix::identity(M.ring, M.n);
        for (std::size_t i = 0; i < M.n - 1; ++i)
            for (std::size_t j = 0; j < M.n - 1; ++j) S2full.at(i + 1, j + 1) = S2.at(i, j);
        S = mat_mul(S2full, S);
    }
    return S;
}

// Albert-Muckenhoupt: a trace-zero matrix over a field is a commutator.
// Conjugate to zero-diagonal B, pick D with distinct diagonal 0,1,...,n-1,
// solve B = DC - CD entrywise, pull back through the similarity.
inline CommutatorWitness matrix_trace_zero_witness(const Matrix& M) {
    if (!M.ring.is_field()) throw ring_error("trace_zero_witness: field entries only");
    if (!is_zero(trace(M))) throw ring_error("trace_zero_witness: nonzero trace");
    if (M.ring.kind == RingKind::PrimeField && M.ring.p < M.n)
        throw ring_error("trace_zero_witness: field too small for distinct diagonal");
    if (mat_is_zero(M)) {
        CommutatorWitness w;
        w.target = element_from_matrix(M);
        w.pairs.emplace_back(element_from_matrix(Matrix::zeros(M.ring, M.n)),
                             element_from_matrix(Matrix::zeros(M.ring, M.n)));
        return w;
    }
    if (is_scalar_matrix(M)) throw ring_error("trace_zero_witness: nonzero scalar matrix");
    Matrix S = zero_diagonal_similarity(M);
    Matrix Sinv = mat_inverse_commutative(S);
    Matrix B = mat_mul(S, mat_mul(M, Sinv));
    Matrix D(M.ring, M.n), C(M.ring, M.n);
    std::vector<RingElement> d;
    for (std::size_t i = 0; i < M.n; ++i) {
        d.push_back(central_from_int(M.ring, static_cast<long>(i)));
        D.at(i, i) = d.back();
    }
    for (std::size_t i = 0; i < M.n; ++i)
        for (std::size_t j = 0; j < M.n; ++j) {
            if (i == j) continue;
            C.at(i, j) = ring_mul(B.at(i, j), ring_inverse(ring_sub(d[i], d[j])));
        }
    Matrix X = mat_mul(Sinv, mat_mul(D, S));
    Matrix Y = mat_mul(Sinv, mat_mul(C, S));
    CommutatorWitness w;
    w.target = element_from_matrix(M);
    w.pairs.emplace_back(element_from_matrix(X), element_from_matrix(Y));
    return w;
}

// element-level wrapper for matrix-ring elements
inline CommutatorWitness trace_zero_witness(const RingElement& t) {
    return matrix_trace_zero_witness(matrix_from_element(t));
}

// Split t into a sum of k commutators. Weyl elements always split (via ad_d);
// matrix-ring elements need trace zero over the base field; in a commutative
// ring only t = 0 is expressible.
inline CommutatorWitness split_k_commutators(const RingElement& t, std::size_t k, Rng& rng) {
    if (k < 1) throw ring_error("split_k_commutators: k >= 1 required");
    RingSpec spec = spec_of(t);
    CommutatorWitness w;
    w.target = t;
    w.seed = rng.seed();
    switch (spec.kind) {
        case RingKind::Rational:
        case RingKind::PrimeField: {
            if (!is_zero(t))
                throw infeasible_error("commutators vanish in a commutative ring; target must be 0");
            for (std::size_t i = 0; i < k; ++i)
                w.pairs.emplace_back(ring_zero(spec), ring_zero(spec));
            return w;
        }
        case RingKind::Weyl: {
            RingElement rest = t;
            for (std::size_t i = 0; i + 1 < k; ++i) {
                RingElement ti = random_element(spec, rng);
                rest = ring_sub(rest, ti);
                w.pairs.emplace_back(weyl_d(), weyl_ad_preimage(ti));
            }
            w.pairs.emplace_back(weyl_d(), weyl_ad_preimage(rest));
            return w;
        }
        case RingKind::MatrixRing: {
            Matrix T = matrix_from_element(t);
            if (!is_zero(trace(T)))
                throw infeasible_error("matrix-ring target has nonzero scalar trace");
            for (int attempt = 0; attempt < 64; ++attempt) {
                std::vector<Matrix> parts;
                Matrix rest = T;
                bool ok = true;
                for (std::size_t i = 0; i + 1 < k; ++i) {
                    Matrix ti = random_trace_zero_matrix(T.ring, T.n, rng);
                    if (!mat_is_zero(ti) && is_scalar_matrix(ti)) {
                        ok = false;
                        break;
                    }
                    parts.push_back(ti);
                    rest = mat_sub(rest, ti);
                }
                if (!ok || (!mat_is_zero(rest) && is_scalar_matrix(rest))) continue;
                parts.push_back(rest);
                w.pairs.clear();
                for (const auto& part : parts) {
                    auto wi = matrix_trace_zero_witness(part);
                    w.pairs.push_back(wi.pairs.at(0));
                }
                return w;
            }
            throw ring_error("split_k_commutators: could not avoid scalar parts");
        }
    }
    throw ring_error("bad ring kind");
}

}  // namespace nilsum
