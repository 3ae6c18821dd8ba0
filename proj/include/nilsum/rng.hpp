#pragma once

#include <cstdint>
#include <random>

#include "nilsum/matrix.hpp"
#include "nilsum/ring.hpp"

namespace nilsum {

// Seeded generator passed explicitly everywhere; certificates record the seed.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : seed_(seed), g_(seed) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t next() { return g_(); }
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }
    long range(long lo, long hi) {  // inclusive
        return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

  private:
    std::uint64_t seed_;
    std::mt19937_64 g_;
};

struct RandomOpts {
    long max_abs = 9;            // rational numerators in [-max_abs, max_abs]
    long max_den = 4;            // rational denominators in [1, max_den]
    unsigned long weyl_max_deg = 4;  // per-exponent cap
    std::size_t weyl_terms = 3;
};

inline RingElement random_element(const RingSpec& spec, Rng& rng, const RandomOpts& o = {}) {
    switch (spec.kind) {
        case RingKind::Rational: {
            mpq_class q(rng.range(-o.max_abs, o.max_abs), rng.range(1, o.max_den));
            q.canonicalize();
            return RingElement(q);
        }
        case RingKind::PrimeField:
            return RingElement(FpElem{rng.below(spec.p), spec.p});
        case RingKind::MatrixRing: {
            MatrixElem m;
            m.m = spec.m;
            m.entries.reserve(spec.m * spec.m);
            for (std::size_t i = 0; i < spec.m * spec.m; ++i)
                m.entries.push_back(random_element(spec.base_spec(), rng, o));
            return RingElement(std::move(m));
        }
        case RingKind::Weyl: {
            WeylElem w;
            std::size_t k = 1 + rng.below(o.weyl_terms);
            for (std::size_t i = 0; i < k; ++i) {
                unsigned long a = rng.below(o.weyl_max_deg + 1);
                unsigned long b = rng.below(o.weyl_max_deg + 1);
                mpq_class c(rng.range(-o.max_abs, o.max_abs), rng.range(1, o.max_den));
                c.canonicalize();
                detail::weyl_insert(w, a, b, c);
            }
            return RingElement(std::move(w));
        }
    }
    throw ring_error("bad ring kind");
}

inline Matrix random_matrix(const RingSpec& spec, std::size_t n, Rng& rng,
                            const RandomOpts& o = {}) {
    Matrix out(spec, n);
    for (auto& x : out.e) x = random_element(spec, rng, o);
    return out;
}

// random matrix whose trace is zero in the entry ring (last diagonal entry adjusted)
inline Matrix random_trace_zero_matrix(const RingSpec& spec, std::size_t n, Rng& rng,
                                       const RandomOpts& o = {}) {
    Matrix out = random_matrix(spec, n, rng, o);
    RingElement t = ring_zero(spec);
    for (std::size_t i = 0; i + 1 < n; ++i) t = ring_add(t, out.at(i, i));
    out.at(n - 1, n - 1) = ring_neg(t);
    return out;
}

}  // namespace nilsum
