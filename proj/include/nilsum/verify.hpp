#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "nilsum/decomposition.hpp"
#include "nilsum/matrix.hpp"
#include "nilsum/ring.hpp"

// Independent certificate checker. Everything here re-derives its verdict
// from ring arithmetic alone; no decomposer code is called, so a buggy
// decomposer cannot self-certify.

namespace nilsum {

struct NilpotencyResult {
    bool holds = false;   // M^e = 0
    bool strict = false;  // additionally M^{e-1} != 0
};

inline NilpotencyResult check_nilpotent(const Matrix& M, unsigned e) {
    Matrix p = Matrix::identity(M.ring, M.n);
    Matrix prev = p;
    for (unsigned i = 0; i < e; ++i) {
        prev = p;
        p = mat_mul(p, M);
    }
    return {mat_is_zero(p), !mat_is_zero(prev)};
}

// (M - a)(M - b)(M - c) = 0, evaluated left to right
inline bool check_annihilated(const Matrix& M, const PolySpec& p) {
    Matrix prod = Matrix::identity(M.ring, M.n);
    for (const auto& root : p.roots) {
        Matrix factor = M;
        for (std::size_t i = 0; i < M.n; ++i)
            factor.at(i, i) = ring_sub(factor.at(i, i), root);
        prod = mat_mul(prod, factor);
    }
    return mat_is_zero(prod);
}

inline bool check_subring_membership(const Matrix& M, const Claim& claim) {
    switch (claim.kind) {
        case Claim::Kind::StrictUpper: return is_strict_upper(M);
        case Claim::Kind::StrictLower: return is_strict_lower(M);
        case Claim::Kind::ConjugatedStrictUpper: {
            if (!claim.U || !claim.U_inv) return false;
            const Matrix& U = *claim.U;
            const Matrix& Uinv = *claim.U_inv;
            // the supplied inverse must actually invert U
            if (!(mat_mul(U, Uinv) == Matrix::identity(M.ring, M.n))) return false;
            if (!(mat_mul(Uinv, U) == Matrix::identity(M.ring, M.n))) return false;
            return is_strict_upper(mat_mul(Uinv, mat_mul(M, U)));
        }
        default: return false;
    }
}

inline bool check_unipotent(const Matrix& M, unsigned e) {
    return check_nilpotent(mat_sub(M, Matrix::identity(M.ring, M.n)), e).holds;
}

// k - l + m = A with all three unipotent of index 3
inline bool check_truss_identity(const Matrix& k, const Matrix& l, const Matrix& m,
                                 const Matrix& A) {
    if (!(mat_add(mat_sub(k, l), m) == A)) return false;
    return check_unipotent(k, 3) && check_unipotent(l, 3) && check_unipotent(m, 3);
}

struct VerificationReport {
    bool sum_ok = false;
    struct TermResult {
        std::string claim;
        bool pass = false;
        std::string note;
    };
    std::vector<TermResult> per_term;
    bool counts_ok = false;
    bool witness_ok = false;
    bool overall = false;
};

inline const char* claim_name(Claim::Kind k) {
    switch (k) {
        case Claim::Kind::None: return "none";
        case Claim::Kind::NilpotentIndex: return "nilpotent_index";
        case Claim::Kind::AnnihilatedBy: return "annihilated_by";
        case Claim::Kind::StrictUpper: return "strict_upper";
        case Claim::Kind::StrictLower: return "strict_lower";
        case Claim::Kind::ConjugatedStrictUpper: return "conjugated_strict_upper";
        case Claim::Kind::Unipotent: return "unipotent";
    }
    return "?";
}

inline bool check_claim(const Matrix& M, const Claim& c, std::string* note = nullptr) {
    switch (c.kind) {
        case Claim::Kind::None: return true;
        case Claim::Kind::NilpotentIndex: {
            auto r = check_nilpotent(M, c.index);
            if (note && r.holds && !r.strict) *note = "index lower than claimed";
            return r.holds;
        }
        case Claim::Kind::AnnihilatedBy: return c.poly && check_annihilated(M, *c.poly);
        case Claim::Kind::StrictUpper:
        case Claim::Kind::StrictLower:
        case Claim::Kind::ConjugatedStrictUpper: return check_subring_membership(M, c);
        case Claim::Kind::Unipotent: return check_unipotent(M, c.index);
    }
    return false;
}

inline std::size_t floor_log2(std::size_t n) {
    std::size_t m = 0;
    while ((std::size_t{2} << m) <= n) ++m;
    return m;
}

inline bool check_count_formula(const Decomposition& d) {
    const std::size_t n = d.input.n;
    if (d.lemma == "3.9") return d.terms.size() == floor_log2(n) + d.k + 2;
    if (d.lemma == "remark") return d.terms.size() == floor_log2(n) + 2 * d.k + 2 * (n - 1);
    if (d.lemma == "3.1") return d.terms.size() == 4;
    if (d.lemma == "2.3" || d.lemma == "3.5" || d.lemma == "3.4") return d.terms.size() == 3;
    return false;
}

inline VerificationReport verify_certificate(const Decomposition& d, const Matrix& original) {
    VerificationReport rep;
    if (d.terms.empty() || d.claims.size() != d.terms.size()) return rep;
    if (d.lemma == "3.4") {
        rep.sum_ok = mat_add(mat_sub(d.terms[0], d.terms[1]), d.terms[2]) == original;
    } else {
        Matrix sum = Matrix::zeros(original.ring, original.n);
        for (const auto& t : d.terms) sum = mat_add(sum, t);
        rep.sum_ok = (sum == original);
    }
    bool all = true;
    for (std::size_t i = 0; i < d.terms.size(); ++i) {
        VerificationReport::TermResult tr;
        tr.claim = claim_name(d.claims[i].kind);
        tr.pass = check_claim(d.terms[i], d.claims[i], &tr.note);
        all &= tr.pass;
        rep.per_term.push_back(std::move(tr));
    }
    rep.counts_ok = check_count_formula(d);
    rep.witness_ok = witness_check(d.witness);
    rep.overall = rep.sum_ok && all && rep.counts_ok && rep.witness_ok;
    return rep;
}

inline VerificationReport verify_certificate(const Decomposition& d) {
    return verify_certificate(d, d.input);
}

}  // namespace nilsum
