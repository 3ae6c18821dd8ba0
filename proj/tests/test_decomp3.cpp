#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nilsum/nilsum.hpp"

using namespace nilsum;

namespace {

// the three equations of the base system
bool system_holds(const RingElement& a, const RingElement& b, const RingElement& c,
                  const LemmaBazaSolution& s) {
    bool e1 = ring_eq(ring_add(ring_mul(s.x, s.q), s.r), a);
    bool e2 = ring_eq(ring_sub(s.p, ring_add(s.q, s.r)), b);
    bool e3 = ring_eq(ring_sub(ring_sub(s.q, s.p), ring_mul(s.q, s.x)), c);
    return e1 && e2 && e3;
}

}  // namespace

TEST_CASE("lemma_baza_solve satisfies the system") {
    auto spec = RingSpec::rational();
    auto z = ring_zero(spec);
    auto w0 = CommutatorWitness::trivial(spec);
    auto s = lemma_baza_solve(z, z, z, w0);
    CHECK(is_zero(s.x));
    CHECK(is_zero(s.p));
    CHECK(is_zero(s.q));
    CHECK(is_zero(s.r));

    auto one = ring_one(spec);
    auto s2 = lemma_baza_solve(one, ring_neg(one), z, w0);
    CHECK(system_holds(one, ring_neg(one), z, s2));
    CHECK(s2.r == one);

    // Weyl: a = 1, b = c = 0, witness (d, x)
    auto wspec = RingSpec::weyl();
    auto w = CommutatorWitness::single(weyl_d(), weyl_x());
    auto one_w = ring_one(wspec);
    auto zw = ring_zero(wspec);
    auto s3 = lemma_baza_solve(one_w, zw, zw, w);
    CHECK(s3.x == weyl_d());
    CHECK(s3.q == weyl_x());
    CHECK(s3.r == ring_neg(weyl_monomial(1, 1)));  // 1 - dx = -xd
    CHECK(system_holds(one_w, zw, zw, s3));

    // random noncommutative instances
    Rng rng(8);
    auto mring = RingSpec::matrix_ring(2, RingSpec::rational());
    for (int t = 0; t < 20; ++t) {
        auto a = random_element(mring, rng);
        auto b = random_element(mring, rng);
        auto cw = split_k_commutators(
            element_from_matrix(random_trace_zero_matrix(RingSpec::rational(), 2, rng)), 1, rng);
        auto c = ring_sub(cw.target, ring_add(a, b));
        auto sol = lemma_baza_solve(a, b, c, cw);
        CHECK(system_holds(a, b, c, sol));
    }
    CHECK_THROWS_AS((void)lemma_baza_solve(one, z, z, w0), ring_error);  // wrong target
}

TEST_CASE("build_U and its closed-form inverse over any ring") {
    for (const auto& x : {ring_zero(RingSpec::rational()), RingElement(mpq_class(7, 3))}) {
        auto I = Matrix::identity(RingSpec::rational(), 3);
        CHECK(mat_mul(build_U(x), build_U_inv(x)) == I);
        CHECK(mat_mul(build_U_inv(x), build_U(x)) == I);
    }
    auto Iw = Matrix::identity(RingSpec::weyl(), 3);
    CHECK(mat_mul(build_U(weyl_d()), build_U_inv(weyl_d())) == Iw);
    CHECK(mat_mul(build_U_inv(weyl_d()), build_U(weyl_d())) == Iw);

    Rng rng(55);
    auto mring = RingSpec::matrix_ring(2, RingSpec::prime_field(5));
    for (int t = 0; t < 10; ++t) {
        auto x = random_element(mring, rng);
        auto I = Matrix::identity(mring, 3);
        CHECK(mat_mul(build_U(x), build_U_inv(x)) == I);
        CHECK(mat_mul(build_U_inv(x), build_U(x)) == I);
    }
}

TEST_CASE("prescribe_diagonal realizes both diagonals") {
    auto spec = RingSpec::rational();
    auto z = ring_zero(spec);
    auto w0 = CommutatorWitness::trivial(spec);

    // zero shift: T diagonal, U = U(0)
    auto one = ring_one(spec);
    auto pd = prescribe_diagonal(one, z, one, one, z, one, w0);
    CHECK(pd.U == build_U(z));
    CHECK(is_zero(pd.T.at(0, 1)));
    CHECK(is_zero(pd.T.at(0, 2)));
    CHECK(is_zero(pd.T.at(1, 2)));

    Rng rng(17);
    auto mring = RingSpec::matrix_ring(2, RingSpec::rational());
    for (int t = 0; t < 15; ++t) {
        auto a = random_element(mring, rng);
        auto b = random_element(mring, rng);
        RingElement c = random_element(mring, rng);
        // force a+b+c trace-zero so a witness exists
        auto blk = matrix_from_element(c);
        blk.at(1, 1) = ring_sub(blk.at(1, 1),
                                trace(matrix_from_element(ring_add(ring_add(a, b), c))));
        c = element_from_matrix(blk);
        auto w = split_k_commutators(ring_add(ring_add(a, b), c), 1, rng);
        auto zz = ring_zero(mring);
        auto res = prescribe_diagonal(a, b, c, zz, zz, zz, w);
        auto conj = mat_mul(res.U, mat_mul(res.T, res.U_inv));
        CHECK(conj.at(0, 0) == a);
        CHECK(conj.at(1, 1) == b);
        CHECK(conj.at(2, 2) == c);
        CHECK(is_strict_upper(res.T));
    }
}

TEST_CASE("prescribe_diagonal_fixed_U: U depends only on the oracle") {
    auto oracle = weyl_oracle();
    auto wspec = RingSpec::weyl();
    auto z = ring_zero(wspec);

    auto pd0 = prescribe_diagonal_fixed_U(oracle, z, z, z, z, z, z);
    CHECK(has_zero_diagonal(mat_mul(pd0.U, mat_mul(pd0.T, pd0.U_inv))));

    auto a = weyl_x();
    auto b = weyl_d();
    auto c = weyl_monomial(1, 1);
    auto pd1 = prescribe_diagonal_fixed_U(oracle, a, b, c, z, z, z);
    auto conj = mat_mul(pd1.U, mat_mul(pd1.T, pd1.U_inv));
    CHECK(conj.at(0, 0) == a);
    CHECK(conj.at(1, 1) == b);
    CHECK(conj.at(2, 2) == c);
    CHECK(pd1.U == pd0.U);  // fixed-U property
    CHECK(pd1.U == build_U(weyl_d()));

    auto pd2 = prescribe_diagonal_fixed_U(oracle, a, b, c, z, z, z);
    CHECK(pd2.U == pd1.U);
    CHECK(pd2.T == pd1.T);  // fully deterministic
}

TEST_CASE("corollary_decompose: sum exactness and structure") {
    auto wspec = RingSpec::weyl();
    auto zero3 = Matrix::zeros(wspec, 3);
    auto d0 = corollary_decompose(zero3, DiagonalTargets::zeros(wspec),
                                  CommutatorWitness::trivial(wspec));
    CHECK(d0.terms.size() == 3);
    Matrix sum = Matrix::zeros(wspec, 3);
    for (const auto& t : d0.terms) sum = mat_add(sum, t);
    CHECK(mat_is_zero(sum));

    // random Weyl input, all-zero targets: three index-3 nilpotent terms
    Rng rng(23);
    RandomOpts o;
    o.weyl_max_deg = 3;
    auto oracle = weyl_oracle();
    for (int t = 0; t < 10; ++t) {
        auto A = random_matrix(wspec, 3, rng, o);
        auto w = CommutatorWitness::single(oracle.r, oracle.preimage(trace(A)));
        auto d = corollary_decompose(A, DiagonalTargets::zeros(wspec), w);
        Matrix s = Matrix::zeros(wspec, 3);
        for (const auto& term : d.terms) {
            CHECK(check_nilpotent(term, 3).holds);
            s = mat_add(s, term);
        }
        CHECK(s == A);
        CHECK(verify_certificate(d).overall);
    }
}

TEST_CASE("poly_sum_3 over F_7 with the roots of X^3 - 1") {
    auto f7 = RingSpec::prime_field(7);
    PolySpec p{{central_from_int(f7, 1), central_from_int(f7, 2), central_from_int(f7, 4)}};
    Rng rng(29);
    for (int t = 0; t < 20; ++t) {
        auto A = random_trace_zero_matrix(f7, 3, rng);  // feasible: 3*(1+2+4) = 0 mod 7
        auto d = poly_sum_3(A, p, p, p, CommutatorWitness::trivial(f7));
        CHECK(verify_certificate(d).overall);
        for (const auto& term : d.terms)
            CHECK(mat_pow(term, 3) == Matrix::identity(f7, 3));  // order-3 automorphisms
    }
    // non-central roots are rejected
    PolySpec bad{{weyl_x(), ring_zero(RingSpec::weyl()), ring_zero(RingSpec::weyl())}};
    CHECK_THROWS_AS((void)poly_sum_3(Matrix::zeros(RingSpec::weyl(), 3), bad, bad, bad,
                                     CommutatorWitness::trivial(RingSpec::weyl())),
                    ring_error);
}

TEST_CASE("poly_sum_3 diagonal case over Q") {
    auto spec = RingSpec::rational();
    PolySpec p1{{RingElement(mpq_class(1)), RingElement(mpq_class(2)), RingElement(mpq_class(3))}};
    PolySpec p2{{RingElement(mpq_class(4)), RingElement(mpq_class(0)), RingElement(mpq_class(1))}};
    PolySpec p3{{RingElement(mpq_class(-2)), RingElement(mpq_class(5)), RingElement(mpq_class(1))}};
    // A = (alpha1+alpha2+alpha3) I has feasible trace by construction when the
    // remaining root sums cancel against the other two diagonal entries
    Matrix A(spec, 3);
    A.at(0, 0) = RingElement(mpq_class(1 + 4 - 2));
    A.at(1, 1) = RingElement(mpq_class(2 + 0 + 5));
    A.at(2, 2) = RingElement(mpq_class(3 + 1 + 1));
    auto d = poly_sum_3(A, p1, p2, p3, CommutatorWitness::trivial(spec));
    CHECK(verify_certificate(d).overall);
}

TEST_CASE("poly_sum_4 over M_2(Q)") {
    auto ring = RingSpec::matrix_ring(2, RingSpec::rational());
    std::array<PolySpec, 4> ps{PolySpec::cubed(ring), PolySpec::cubed(ring),
                               PolySpec::cubed(ring), PolySpec::cubed(ring)};
    auto d0 = poly_sum_4(Matrix::zeros(ring, 3), ps);
    CHECK(d0.terms.size() == 4);
    CHECK(verify_certificate(d0).overall);

    Rng rng(41);
    for (int t = 0; t < 10; ++t) {
        auto A = random_matrix(ring, 3, rng);
        auto blk = matrix_from_element(A.at(2, 2));
        blk.at(1, 1) = ring_sub(blk.at(1, 1), trace(flatten(A)));
        A.at(2, 2) = element_from_matrix(blk);  // flattened trace now zero
        auto d = poly_sum_4(A, ps);
        CHECK(verify_certificate(d).overall);
        for (const auto& term : d.terms) CHECK(mat_is_zero(mat_pow(flatten(term), 3)));
    }

    // trace obstruction, m = 1
    auto m1 = RingSpec::matrix_ring(1, RingSpec::rational());
    std::array<PolySpec, 4> ps1{PolySpec::cubed(m1), PolySpec::cubed(m1), PolySpec::cubed(m1),
                                PolySpec::cubed(m1)};
    CHECK_THROWS_AS((void)poly_sum_4(Matrix::identity(m1, 3), ps1), infeasible_error);
}

TEST_CASE("three_nilpotent_subrings over the Weyl algebra") {
    auto wspec = RingSpec::weyl();
    auto oracle = weyl_oracle();

    auto d0 = three_nilpotent_subrings(Matrix::zeros(wspec, 3), oracle);
    for (const auto& t : d0.terms) CHECK(mat_is_zero(t));

    auto dI = three_nilpotent_subrings(Matrix::identity(wspec, 3), oracle);
    Matrix s = Matrix::zeros(wspec, 3);
    for (const auto& t : dI.terms) {
        CHECK(check_nilpotent(t, 3).holds);
        s = mat_add(s, t);
    }
    CHECK(s == Matrix::identity(wspec, 3));

    Rng rng(61);
    RandomOpts o;
    o.weyl_max_deg = 4;
    for (int t = 0; t < 10; ++t) {
        auto A = random_matrix(wspec, 3, rng, o);
        auto d = three_nilpotent_subrings(A, oracle);
        CHECK(verify_certificate(d).overall);
    }
}

TEST_CASE("subring closure and triple products vanish") {
    auto wspec = RingSpec::weyl();
    auto U = build_U(weyl_d());
    auto Uinv = build_U_inv(weyl_d());
    Rng rng(67);
    RandomOpts o;
    o.weyl_max_deg = 2;
    o.weyl_terms = 2;
    auto rand_su = [&] {
        Matrix m(wspec, 3);
        m.at(0, 1) = random_element(wspec, rng, o);
        m.at(0, 2) = random_element(wspec, rng, o);
        m.at(1, 2) = random_element(wspec, rng, o);
        return m;
    };
    for (int t = 0; t < 30; ++t) {
        auto a = rand_su();
        auto b = rand_su();
        auto c = rand_su();
        CHECK(is_strict_upper(mat_add(a, b)));
        CHECK(is_strict_upper(mat_sub(a, b)));
        CHECK(is_strict_upper(mat_mul(a, b)));
        CHECK(mat_is_zero(mat_mul(a, mat_mul(b, c))));  // S_u^3 = 0
        // conjugated copy inherits all of it
        auto ca = mat_mul(U, mat_mul(a, Uinv));
        auto cb = mat_mul(U, mat_mul(b, Uinv));
        auto cc = mat_mul(U, mat_mul(c, Uinv));
        CHECK(mat_is_zero(mat_mul(ca, mat_mul(cb, cc))));
        CHECK(is_strict_upper(mat_mul(Uinv, mat_mul(mat_mul(ca, cb), U))));
    }
}

TEST_CASE("truss_witness and heap identities") {
    auto wspec = RingSpec::weyl();
    auto oracle = weyl_oracle();
    auto I = Matrix::identity(wspec, 3);

    auto dI = truss_witness(I, oracle);
    CHECK(dI.terms[0] == I);
    CHECK(dI.terms[1] == I);
    CHECK(dI.terms[2] == I);

    auto d0 = truss_witness(Matrix::zeros(wspec, 3), oracle);
    CHECK(check_truss_identity(d0.terms[0], d0.terms[1], d0.terms[2], Matrix::zeros(wspec, 3)));

    Rng rng(71);
    RandomOpts o;
    o.weyl_max_deg = 3;
    for (int t = 0; t < 10; ++t) {
        auto A = random_matrix(wspec, 3, rng, o);
        auto d = truss_witness(A, oracle);
        CHECK(check_truss_identity(d.terms[0], d.terms[1], d.terms[2], A));
        CHECK(verify_certificate(d).overall);
    }

    // truss laws over random matrix samples
    auto heap = [](const Matrix& x, const Matrix& y, const Matrix& z) {
        return mat_add(mat_sub(x, y), z);
    };
    for (int t = 0; t < 20; ++t) {
        auto x = random_matrix(RingSpec::rational(), 3, rng);
        auto y = random_matrix(RingSpec::rational(), 3, rng);
        auto z = random_matrix(RingSpec::rational(), 3, rng);
        auto u = random_matrix(RingSpec::rational(), 3, rng);
        auto v = random_matrix(RingSpec::rational(), 3, rng);
        auto a = random_matrix(RingSpec::rational(), 3, rng);
        CHECK(heap(x, y, y) == x);
        CHECK(heap(y, y, z) == z);
        CHECK(heap(heap(x, y, z), u, v) == heap(x, y, heap(z, u, v)));
        CHECK(mat_mul(a, heap(x, y, z)) ==
              heap(mat_mul(a, x), mat_mul(a, y), mat_mul(a, z)));
    }
}
