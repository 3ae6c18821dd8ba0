#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nilsum/matrix.hpp"
#include "nilsum/witness.hpp"

namespace nilsum {

// monic degree-3 polynomial (X - a)(X - b)(X - c) given by central roots
struct PolySpec {
    std::array<RingElement, 3> roots;

    static PolySpec cubed(const RingSpec& spec) {  // X^3
        RingElement z = ring_zero(spec);
        return PolySpec{{z, z, z}};
    }
};

struct DiagonalTargets {
    std::array<std::array<RingElement, 3>, 3> rows;  // (s_k, t_k, u_k), k = 1..3

    static DiagonalTargets zeros(const RingSpec& spec) {
        RingElement z = ring_zero(spec);
        DiagonalTargets t;
        for (auto& r : t.rows) r = {z, z, z};
        return t;
    }
};

struct Claim {
    enum class Kind {
        None,
        NilpotentIndex,          // M^index = 0
        AnnihilatedBy,           // (M - a)(M - b)(M - c) = 0
        StrictUpper,
        StrictLower,
        ConjugatedStrictUpper,   // U^{-1} M U strictly upper
        Unipotent,               // (M - I)^index = 0
    };

    Kind kind = Kind::None;
    unsigned index = 0;
    std::optional<PolySpec> poly;
    std::optional<Matrix> U;
    std::optional<Matrix> U_inv;

    static Claim none() { return {}; }
    static Claim nilpotent(unsigned e) { return {Kind::NilpotentIndex, e, {}, {}, {}}; }
    static Claim annihilated(PolySpec p) {
        return {Kind::AnnihilatedBy, 0, std::move(p), {}, {}};
    }
    static Claim strict_upper() { return {Kind::StrictUpper, 0, {}, {}, {}}; }
    static Claim strict_lower() { return {Kind::StrictLower, 0, {}, {}, {}}; }
    static Claim conjugated_strict_upper(Matrix U, Matrix U_inv) {
        return {Kind::ConjugatedStrictUpper, 0, {}, std::move(U), std::move(U_inv)};
    }
    static Claim unipotent(unsigned e) { return {Kind::Unipotent, e, {}, {}, {}}; }
};

// bookkeeping of the square-zero reduction of an n x n matrix down to a
// residual block of side 1 or 2
struct ReductionTrace {
    struct Stage {
        Matrix squarezero;  // embedded N_{n_j}(block)
        Matrix upper;       // strictly upper remainder of this stage, embedded
        Matrix lower;       // strictly lower remainder, embedded
    };
    std::vector<std::size_t> sequence;
    std::vector<Stage> stages;
    std::size_t v = 0;
    Matrix residual;
};

// A certificate: terms, per-term claims, the witness that fed the
// construction, and enough metadata to recheck the count formulas.
// For lemma "3.4" (truss) the terms (k, l, m) combine as k - l + m.
struct Decomposition {
    Matrix input;
    std::vector<Matrix> terms;
    std::vector<Claim> claims;
    CommutatorWitness witness;
    std::string lemma;  // "2.3", "3.1", "3.4", "3.5", "3.9", "remark"
    std::uint64_t seed = 0;
    std::size_t k = 0;  // commutator count for the 3.9/remark count formulas
    std::optional<ReductionTrace> reduction;
};

}  // namespace nilsum
