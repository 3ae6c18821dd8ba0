#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

// Exact arithmetic for the coefficient rings: rationals, prime fields F_p,
// dense matrix rings M_m over a commutative base, and the first Weyl algebra
// A1 = Q<x,d> with dx - xd = 1, kept in normal form (x-powers left of d-powers).

namespace nilsum {

struct ring_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when a decomposition cannot exist for the given input
// (e.g. a trace obstruction); the CLI maps this to exit code 3.
struct infeasible_error : ring_error {
    using ring_error::ring_error;
};

enum class RingKind { Rational, PrimeField, MatrixRing, Weyl };

inline const char* ring_kind_name(RingKind k) {
    switch (k) {
        case RingKind::Rational: return "Rational";
        case RingKind::PrimeField: return "PrimeField";
        case RingKind::MatrixRing: return "MatrixRing";
        case RingKind::Weyl: return "Weyl";
    }
    return "?";
}

inline bool is_prime_u64(std::uint64_t p) {
    mpz_class z(static_cast<unsigned long>(p));
    return mpz_probab_prime_p(z.get_mpz_t(), 32) != 0;
}

struct RingSpec {
    RingKind kind = RingKind::Rational;
    std::uint64_t p = 0;                    // PrimeField modulus
    std::size_t m = 0;                      // MatrixRing side
    RingKind base_kind = RingKind::Rational;  // MatrixRing base
    std::uint64_t base_p = 0;

    static RingSpec rational() { return {}; }

    static RingSpec prime_field(std::uint64_t p) {
        if (!is_prime_u64(p) || p >= (std::uint64_t{1} << 31))
            throw ring_error("prime field modulus must be prime and < 2^31");
        RingSpec s;
        s.kind = RingKind::PrimeField;
        s.p = p;
        return s;
    }

    static RingSpec matrix_ring(std::size_t m, const RingSpec& base) {
        if (m < 1) throw ring_error("matrix ring dimension must be >= 1");
        if (base.kind != RingKind::Rational && base.kind != RingKind::PrimeField)
            throw ring_error("matrix ring base must be Rational or PrimeField");
        RingSpec s;
        s.kind = RingKind::MatrixRing;
        s.m = m;
        s.base_kind = base.kind;
        s.base_p = base.p;
        return s;
    }

    static RingSpec weyl() {
        RingSpec s;
        s.kind = RingKind::Weyl;
        return s;
    }

    RingSpec base_spec() const {
        if (kind != RingKind::MatrixRing) throw ring_error("base_spec: not a matrix ring");
        RingSpec s;
        s.kind = base_kind;
        s.p = base_p;
        return s;
    }

    bool is_field() const {
        return kind == RingKind::Rational || kind == RingKind::PrimeField;
    }
    bool is_commutative() const { return is_field(); }

    bool operator==(const RingSpec&) const = default;

    std::string name() const {
        switch (kind) {
            case RingKind::Rational: return "Q";
            case RingKind::PrimeField: return "F" + std::to_string(p);
            case RingKind::MatrixRing:
                return "M(" + std::to_string(m) + "," + base_spec().name() + ")";
            case RingKind::Weyl: return "Weyl";
        }
        return "?";
    }
};

// ---------------------------------------------------------------------------
// element payloads

struct FpElem {
    std::uint64_t v = 0;
    std::uint64_t p = 0;
    bool operator==(const FpElem&) const = default;
};

struct RingElement;

struct MatrixElem {
    std::size_t m = 0;
    std::vector<RingElement> entries;  // row major, m*m scalars
    bool operator==(const MatrixElem&) const;
};

// Finite map (a,b) -> c, representing sum of c * x^a d^b; zero coefficients
// are never stored, so the map is the unique normal form.
struct WeylElem {
    std::map<std::pair<unsigned long, unsigned long>, mpq_class> terms;
    bool operator==(const WeylElem& o) const {
        if (terms.size() != o.terms.size()) return false;
        auto it = o.terms.begin();
        for (const auto& [k, c] : terms) {
            if (k != it->first || cmp(c, it->second) != 0) return false;
            ++it;
        }
        return true;
    }
};

struct RingElement {
    std::variant<mpq_class, FpElem, MatrixElem, WeylElem> v;

    RingElement() : v(mpq_class(0)) {}
    explicit RingElement(mpq_class q) : v(std::move(q)) { std::get<mpq_class>(v).canonicalize(); }
    explicit RingElement(FpElem f) : v(f) {}
    explicit RingElement(MatrixElem m) : v(std::move(m)) {}
    explicit RingElement(WeylElem w) : v(std::move(w)) {}

    bool operator==(const RingElement& o) const;
};

inline bool MatrixElem::operator==(const MatrixElem& o) const {
    return m == o.m && entries == o.entries;
}

inline bool RingElement::operator==(const RingElement& o) const {
    if (v.index() != o.v.index()) return false;
    if (auto* q = std::get_if<mpq_class>(&v))
        return cmp(*q, std::get<mpq_class>(o.v)) == 0;
    if (auto* f = std::get_if<FpElem>(&v)) return *f == std::get<FpElem>(o.v);
    if (auto* mm = std::get_if<MatrixElem>(&v)) return *mm == std::get<MatrixElem>(o.v);
    return std::get<WeylElem>(v) == std::get<WeylElem>(o.v);
}

// ---------------------------------------------------------------------------
// spec recovery and constants

RingElement ring_zero(const RingSpec& spec);
RingElement ring_one(const RingSpec& spec);

inline RingSpec spec_of(const RingElement& e) {
    if (std::holds_alternative<mpq_class>(e.v)) return RingSpec::rational();
    if (auto* f = std::get_if<FpElem>(&e.v)) return RingSpec::prime_field(f->p);
    if (auto* m = std::get_if<MatrixElem>(&e.v))
        return RingSpec::matrix_ring(m->m, spec_of(m->entries.at(0)));
    return RingSpec::weyl();
}

inline RingElement ring_zero(const RingSpec& spec) {
    switch (spec.kind) {
        case RingKind::Rational: return RingElement(mpq_class(0));
        case RingKind::PrimeField: return RingElement(FpElem{0, spec.p});
        case RingKind::MatrixRing: {
            MatrixElem m;
            m.m = spec.m;
            m.entries.assign(spec.m * spec.m, ring_zero(spec.base_spec()));
            return RingElement(std::move(m));
        }
        case RingKind::Weyl: return RingElement(WeylElem{});
    }
    throw ring_error("bad ring kind");
}

inline RingElement ring_one(const RingSpec& spec) {
    switch (spec.kind) {
        case RingKind::Rational: return RingElement(mpq_class(1));
        case RingKind::PrimeField: return RingElement(FpElem{1 % spec.p, spec.p});
        case RingKind::MatrixRing: {
            MatrixElem m;
            m.m = spec.m;
            m.entries.assign(spec.m * spec.m, ring_zero(spec.base_spec()));
            for (std::size_t i = 0; i < spec.m; ++i)
                m.entries[i * spec.m + i] = ring_one(spec.base_spec());
            return RingElement(std::move(m));
        }
        case RingKind::Weyl: {
            WeylElem w;
            w.terms[{0, 0}] = 1;
            return RingElement(std::move(w));
        }
    }
    throw ring_error("bad ring kind");
}

inline bool is_zero(const RingElement& e) {
    if (auto* q = std::get_if<mpq_class>(&e.v)) return sgn(*q) == 0;
    if (auto* f = std::get_if<FpElem>(&e.v)) return f->v == 0;
    if (auto* m = std::get_if<MatrixElem>(&e.v)) {
        for (const auto& x : m->entries)
            if (!is_zero(x)) return false;
        return true;
    }
    return std::get<WeylElem>(e.v).terms.empty();
}

// ---------------------------------------------------------------------------
// arithmetic

namespace detail {

inline std::uint64_t fp_add(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return (a + b) % p;
}
inline std::uint64_t fp_mul(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}
inline std::uint64_t fp_neg(std::uint64_t a, std::uint64_t p) { return a == 0 ? 0 : p - a; }

inline std::uint64_t fp_pow(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1 % p;
    while (e) {
        if (e & 1) r = fp_mul(r, a, p);
        a = fp_mul(a, a, p);
        e >>= 1;
    }
    return r;
}

inline void check_same_ring(const RingElement& a, const RingElement& b) {
    if (a.v.index() != b.v.index()) throw ring_error("ring mismatch");
    if (auto* fa = std::get_if<FpElem>(&a.v)) {
        if (fa->p != std::get<FpElem>(b.v).p) throw ring_error("ring mismatch: different moduli");
    }
    if (auto* ma = std::get_if<MatrixElem>(&a.v)) {
        if (ma->m != std::get<MatrixElem>(b.v).m)
            throw ring_error("ring mismatch: different matrix sizes");
    }
}

inline void weyl_insert(WeylElem& w, unsigned long a, unsigned long b, const mpq_class& c) {
    if (sgn(c) == 0) return;
    auto key = std::make_pair(a, b);
    auto it = w.terms.find(key);
    if (it == w.terms.end()) {
        w.terms.emplace(key, c);
    } else {
        it->second += c;
        if (sgn(it->second) == 0) w.terms.erase(it);
    }
}

}  // namespace detail

RingElement ring_add(const RingElement& a, const RingElement& b);
RingElement ring_mul(const RingElement& a, const RingElement& b);
RingElement ring_neg(const RingElement& a);

// Normal form of the product x^a1 d^b1 * x^a2 d^b2, using
// d^b x^a = sum_i C(b,i) C(a,i) i! x^{a-i} d^{b-i}.
inline WeylElem weyl_normalize(unsigned long a1, unsigned long b1, unsigned long a2,
                               unsigned long b2, const mpq_class& coeff = 1) {
    WeylElem out;
    unsigned long top = std::min(b1, a2);
    for (unsigned long i = 0; i <= top; ++i) {
        mpz_class c1, c2, f;
        mpz_bin_uiui(c1.get_mpz_t(), b1, i);
        mpz_bin_uiui(c2.get_mpz_t(), a2, i);
        mpz_fac_ui(f.get_mpz_t(), i);
        mpq_class c = coeff * mpq_class(c1 * c2 * f);
        detail::weyl_insert(out, a1 + a2 - i, b1 + b2 - i, c);
    }
    return out;
}

inline RingElement weyl_monomial(unsigned long a, unsigned long b, const mpq_class& c = 1) {
    WeylElem w;
    detail::weyl_insert(w, a, b, c);
    return RingElement(std::move(w));
}

inline RingElement weyl_x() { return weyl_monomial(1, 0); }
inline RingElement weyl_d() { return weyl_monomial(0, 1); }

inline RingElement ring_add(const RingElement& a, const RingElement& b) {
    detail::check_same_ring(a, b);
    if (auto* q = std::get_if<mpq_class>(&a.v))
        return RingElement(mpq_class(*q + std::get<mpq_class>(b.v)));
    if (auto* f = std::get_if<FpElem>(&a.v))
        return RingElement(FpElem{detail::fp_add(f->v, std::get<FpElem>(b.v).v, f->p), f->p});
    if (auto* ma = std::get_if<MatrixElem>(&a.v)) {
        const auto& mb = std::get<MatrixElem>(b.v);
        MatrixElem out;
        out.m = ma->m;
        out.entries.reserve(ma->entries.size());
        for (std::size_t i = 0; i < ma->entries.size(); ++i)
            out.entries.push_back(ring_add(ma->entries[i], mb.entries[i]));
        return RingElement(std::move(out));
    }
    WeylElem out = std::get<WeylElem>(a.v);
    for (const auto& [k, c] : std::get<WeylElem>(b.v).terms)
        detail::weyl_insert(out, k.first, k.second, c);
    return RingElement(std::move(out));
}

inline RingElement ring_neg(const RingElement& a) {
    if (auto* q = std::get_if<mpq_class>(&a.v)) return RingElement(mpq_class(-*q));
    if (auto* f = std::get_if<FpElem>(&a.v))
        return RingElement(FpElem{detail::fp_neg(f->v, f->p), f->p});
    if (auto* ma = std::get_if<MatrixElem>(&a.v)) {
        MatrixElem out;
        out.m = ma->m;
        out.entries.reserve(ma->entries.size());
        for (const auto& x : ma->entries) out.entries.push_back(ring_neg(x));
        return RingElement(std::move(out));
    }
    WeylElem out;
    for (const auto& [k, c] : std::get<WeylElem>(a.v).terms) out.terms[k] = -c;
    return RingElement(std::move(out));
}

inline RingElement ring_sub(const RingElement& a, const RingElement& b) {
    return ring_add(a, ring_neg(b));
}

inline RingElement ring_mul(const RingElement& a, const RingElement& b) {
    detail::check_same_ring(a, b);
    if (auto* q = std::get_if<mpq_class>(&a.v))
        return RingElement(mpq_class(*q * std::get<mpq_class>(b.v)));
    if (auto* f = std::get_if<FpElem>(&a.v))
        return RingElement(FpElem{detail::fp_mul(f->v, std::get<FpElem>(b.v).v, f->p), f->p});
    if (auto* ma = std::get_if<MatrixElem>(&a.v)) {
        const auto& mb = std::get<MatrixElem>(b.v);
        const std::size_t m = ma->m;
        MatrixElem out;
        out.m = m;
        out.entries.assign(m * m, ring_zero(spec_of(ma->entries[0])));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t k = 0; k < m; ++k) {
                const RingElement& aik = ma->entries[i * m + k];
                if (is_zero(aik)) continue;
                for (std::size_t j = 0; j < m; ++j)
                    out.entries[i * m + j] = ring_add(
                        out.entries[i * m + j], ring_mul(aik, mb.entries[k * m + j]));
            }
        return RingElement(std::move(out));
    }
    const auto& wa = std::get<WeylElem>(a.v);
    const auto& wb = std::get<WeylElem>(b.v);
    WeylElem out;
    for (const auto& [ka, ca] : wa.terms)
        for (const auto& [kb, cb] : wb.terms) {
            WeylElem prod = weyl_normalize(ka.first, ka.second, kb.first, kb.second, ca * cb);
            for (const auto& [k, c] : prod.terms) detail::weyl_insert(out, k.first, k.second, c);
        }
    return RingElement(std::move(out));
}

inline bool ring_eq(const RingElement& a, const RingElement& b) {
    detail::check_same_ring(a, b);
    return a == b;
}

inline RingElement ring_commutator(const RingElement& x, const RingElement& y) {
    return ring_sub(ring_mul(x, y), ring_mul(y, x));
}

// multiplicative inverse of a nonzero field scalar
inline RingElement ring_inverse(const RingElement& a) {
    if (auto* q = std::get_if<mpq_class>(&a.v)) {
        if (sgn(*q) == 0) throw ring_error("inverse of zero");
        return RingElement(mpq_class(1 / *q));
    }
    if (auto* f = std::get_if<FpElem>(&a.v)) {
        if (f->v == 0) throw ring_error("inverse of zero");
        return RingElement(FpElem{detail::fp_pow(f->v, f->p - 2, f->p), f->p});
    }
    throw ring_error("ring_inverse: field scalars only");
}

// Structural centrality: field scalars are always central, scalar matrices are
// central in M_m over a commutative base, constants are central in A1.
inline bool is_central(const RingElement& e) {
    if (std::holds_alternative<mpq_class>(e.v) || std::holds_alternative<FpElem>(e.v))
        return true;
    if (auto* m = std::get_if<MatrixElem>(&e.v)) {
        const RingElement& d = m->entries[0];
        for (std::size_t i = 0; i < m->m; ++i)
            for (std::size_t j = 0; j < m->m; ++j) {
                const RingElement& x = m->entries[i * m->m + j];
                if (i == j ? !(x == d) : !is_zero(x)) return false;
            }
        return true;
    }
    const auto& w = std::get<WeylElem>(e.v);
    return w.terms.empty() ||
           (w.terms.size() == 1 && w.terms.begin()->first == std::make_pair(0ul, 0ul));
}

// lift an integer into the ring's center
inline RingElement central_from_int(const RingSpec& spec, long v) {
    switch (spec.kind) {
        case RingKind::Rational: return RingElement(mpq_class(v));
        case RingKind::PrimeField: {
            long r = v % static_cast<long>(spec.p);
            if (r < 0) r += static_cast<long>(spec.p);
            return RingElement(FpElem{static_cast<std::uint64_t>(r), spec.p});
        }
        case RingKind::MatrixRing: {
            RingElement s = central_from_int(spec.base_spec(), v);
            MatrixElem m;
            m.m = spec.m;
            m.entries.assign(spec.m * spec.m, ring_zero(spec.base_spec()));
            for (std::size_t i = 0; i < spec.m; ++i) m.entries[i * spec.m + i] = s;
            return RingElement(std::move(m));
        }
        case RingKind::Weyl:
            return v == 0 ? RingElement(WeylElem{}) : weyl_monomial(0, 0, mpq_class(v));
    }
    throw ring_error("bad ring kind");
}

}  // namespace nilsum
