#include "doctest.h"

#include <random>

#include "torusq/quantizer.hpp"
#include "torusq/rational_structure.hpp"

using namespace torusq;

namespace {

const IntSymplectic kCat(1, {{2, 1}, {3, 2}});
const IntSymplectic kA4(1, {{1, 1}, {-2, -1}});
const IntSymplectic kBlock(2, linear_matrix({{1, 1}, {1, 0}}));
const IntSymplectic kSp4(2, {{11, 3, 4, 10}, {6, 1, 2, 4}, {-2, -1, -1, -2}, {1, 1, 1, 1}});
const IntSymplectic kPhi10(2, {{-1, -1, -1, 0}, {0, 2, 1, -1}, {3, 1, 1, 1}, {1, 4, 2, -1}});

IVec row(const ZVec& z) {
    IVec v;
    for (auto& x : z) v.push_back(static_cast<i64>(x));
    return v;
}

IVec random_vec(std::mt19937_64& rng, int n, int r = 5) {
    IVec v(n);
    for (auto& x : v) x = static_cast<i64>(rng() % (2 * r + 1)) - r;
    return v;
}

}  // namespace

TEST_CASE("characteristic polynomials") {
    CHECK(kCat.char_poly() == IntPoly::from_i64({1, -4, 1}));
    CHECK(kA4.char_poly() == IntPoly::from_i64({1, 0, 1}));
    CHECK(kBlock.char_poly() == IntPoly::from_i64({1, 0, -3, 0, 1}));
    CHECK(kPhi10.char_poly() == IntPoly::from_i64({1, -1, 1, -1, 1}));
    CHECK(kSp4.char_poly() == IntPoly::from_i64({1, -12, -10, -12, 1}));
    CHECK_THROWS_AS(IntSymplectic(1, {{1, 1}, {1, 1}}), InputError);
}

TEST_CASE("theta flag") {
    CHECK(kCat.theta_flag());
    CHECK(kSp4.theta_flag());
    CHECK_FALSE(IntSymplectic(1, {{1, 1}, {0, 1}}).theta_flag());
    CHECK_FALSE(kPhi10.theta_flag());
}

TEST_CASE("factorization over Z") {
    CHECK(factor_over_z(IntPoly::from_i64({1, 0, 1})) == std::vector<IntPoly>{IntPoly::from_i64({1, 0, 1})});
    CHECK(factor_over_z(IntPoly::from_i64({1, 0, -3, 0, 1})) ==
          std::vector<IntPoly>{IntPoly::from_i64({-1, -1, 1}), IntPoly::from_i64({-1, 1, 1})});
    CHECK(factor_over_z(IntPoly::from_i64({1, -1, 1, -1, 1})).size() == 1);
    CHECK(factor_over_z(IntPoly::from_i64({1, -12, -10, -12, 1})).size() == 1);
    auto f = factor_over_z(IntPoly::from_i64({-6, 11, -6, 1}));
    CHECK(f.size() == 3);
    IntPoly prod = IntPoly::from_i64({1});
    for (auto& g : f) prod = prod * g;
    CHECK(prod == IntPoly::from_i64({-6, 11, -6, 1}));
}

TEST_CASE("discriminant and trace polynomial") {
    CHECK(discriminant(IntPoly::from_i64({1, -4, 1})) == 12);
    CHECK(discriminant(IntPoly::from_i64({1, -1, 1, -1, 1})) == 125);
    CHECK(trace_polynomial(IntPoly::from_i64({1, -1, 1, -1, 1})) == IntPoly::from_i64({-1, -1, 1}));
    CHECK(trace_polynomial(IntPoly::from_i64({1, -12, -10, -12, 1})) == IntPoly::from_i64({-12, -12, 1}));
    CHECK(trace_polynomial(IntPoly::from_i64({1, -4, 1})) == IntPoly::from_i64({-4, 1}));
}

TEST_CASE("orbit decomposition examples") {
    auto cat = rational_orbit_decomposition(kCat);
    REQUIRE(cat.orbits.size() == 1);
    CHECK(cat.orbits[0].symmetric);
    CHECK(cat.orbits[0].degree() == 2);
    CHECK(cat.aque);

    auto a4 = rational_orbit_decomposition(kA4);
    REQUIRE(a4.orbits.size() == 1);
    CHECK(a4.orbits[0].symmetric);
    CHECK(a4.aque);

    auto blk = rational_orbit_decomposition(kBlock);
    REQUIRE(blk.orbits.size() == 2);
    CHECK_FALSE(blk.orbits[0].symmetric);
    CHECK(blk.orbits[0].partner == 1);
    CHECK(blk.orbits[1].partner == 0);
    CHECK_FALSE(blk.aque);
    QMat plane = to_q(ZMat{{1, 0, 0, 0}, {0, 1, 0, 0}});
    REQUIRE(blk.witness.size() == 2);
    for (auto& w : blk.witness) CHECK(in_row_span(plane, QVec(w.begin(), w.end())));
    bool plane_is_orbit = false;
    for (auto& o : blk.orbits) {
        bool all = true;
        for (auto& b : o.basis) all = all && in_row_span(plane, QVec(b.begin(), b.end()));
        plane_is_orbit = plane_is_orbit || all;
    }
    CHECK(plane_is_orbit);
}

TEST_CASE("orbit decomposition invariants") {
    for (const IntSymplectic* A : {&kCat, &kA4, &kBlock, &kSp4, &kPhi10}) {
        auto D = rational_orbit_decomposition(*A);
        ZMat all;
        int deg = 0;
        for (auto& o : D.orbits) {
            deg += o.degree();
            for (auto& b : o.basis) all.push_back(b);
        }
        CHECK(deg == A->size());
        CHECK(rank_q(to_q(all)) == static_cast<size_t>(A->size()));
        for (size_t a = 0; a < D.orbits.size(); ++a)
            for (size_t b = 0; b < D.orbits.size(); ++b) {
                if (static_cast<int>(b) == D.orbits[a].partner) continue;
                for (auto& x : D.orbits[a].basis)
                    for (auto& y : D.orbits[b].basis) CHECK(omega(row(x), row(y)) == 0);
            }
        for (auto& o : D.orbits) {
            if (!o.symmetric) continue;
            ZMat gram;
            for (auto& x : o.basis) {
                ZVec r;
                for (auto& y : o.basis) r.push_back(omega(row(x), row(y)));
                gram.push_back(r);
            }
            CHECK(det_bareiss(gram) != 0);
        }
        for (auto& o : D.orbits)
            for (auto& b : o.basis) {
                IVec v = row(b);
                IVec img = A->act(v);
                CHECK(in_row_span(to_q(o.basis), QVec(img.begin(), img.end())));
            }
    }
}

TEST_CASE("projection criterion matches rational coordinates") {
    std::mt19937_64 rng(3);
    for (const IntSymplectic* A : {&kBlock, &kSp4, &kCat}) {
        auto D = rational_orbit_decomposition(*A);
        QMat basis;
        std::vector<size_t> owner;
        for (size_t t = 0; t < D.orbits.size(); ++t)
            for (auto& b : D.orbits[t].basis) {
                basis.push_back(QVec(b.begin(), b.end()));
                owner.push_back(t);
            }
        // coordinates c with c . basis = n
        QMat T(basis[0].size(), QVec(basis.size()));
        for (size_t i = 0; i < basis.size(); ++i)
            for (size_t j = 0; j < basis[i].size(); ++j) T[j][i] = basis[i][j];
        for (int trial = 0; trial < 30; ++trial) {
            IVec n = random_vec(rng, A->size(), 2);
            if (trial < 4) {
                n.assign(A->size(), 0);
                n[trial % A->size()] = 1;
            }
            auto c = solve_particular(T, QVec(n.begin(), n.end()));
            REQUIRE(c);
            for (size_t t = 0; t < D.orbits.size(); ++t) {
                bool nonzero = false;
                for (size_t i = 0; i < owner.size(); ++i)
                    if (owner[i] == t && (*c)[i] != 0) nonzero = true;
                CHECK(projects_to(D.orbits[t], n) == nonzero);
            }
        }
    }
}

TEST_CASE("number ring star involution") {
    IntPoly P = IntPoly::from_i64({1, -1, 1, -1, 1});
    auto lam = NumberRingElement::lambda(P);
    CHECK((lam * lam.star()) == NumberRingElement::from_int(P, 1));
    CHECK(lam.star() == lambda_inverse(P));
    std::mt19937_64 rng(5);
    for (int i = 0; i < 20; ++i) {
        NumberRingElement a(P, IntPoly::from_i64(random_vec(rng, 4)));
        NumberRingElement b(P, IntPoly::from_i64(random_vec(rng, 4)));
        CHECK((a * b).star() == a.star() * b.star());
        CHECK((a + b).star() == a.star() + b.star());
        CHECK(a.star().star() == a);
        CHECK(a.norm() == a.star().norm());
    }
    CHECK(NumberRingElement::from_int(P, 3).norm() == 81);
}

TEST_CASE("quadratic form invariance") {
    std::mt19937_64 rng(9);
    for (const IntSymplectic* A : {&kCat, &kSp4, &kPhi10, &kA4}) {
        auto D = rational_orbit_decomposition(*A);
        IVec zero(A->size(), 0);
        for (auto& q : quadratic_form_q(D, zero)) CHECK(q.is_zero());
        for (int trial = 0; trial < 15; ++trial) {
            IVec n = random_vec(rng, A->size());
            auto q = quadratic_form_q(D, n);
            IVec m = n;
            for (int k = 1; k <= 3; ++k) {
                m = A->act(m);
                CHECK(quadratic_form_q(D, m) == q);
            }
            IVec back = A->inverse().act(n);
            CHECK(quadratic_form_q(D, back) == q);
        }
    }
    CHECK_THROWS_AS(quadratic_form_q(rational_orbit_decomposition(kBlock), IVec{1, 0, 0, 0}), MathError);
}

TEST_CASE("invariant subspace dimension of a frequency") {
    std::mt19937_64 rng(4);
    auto sp4 = rational_orbit_decomposition(kSp4);
    auto cat = rational_orbit_decomposition(kCat);
    for (int i = 0; i < 10; ++i) {
        IVec n = random_vec(rng, 4);
        if (std::all_of(n.begin(), n.end(), [](i64 x) { return x == 0; })) continue;
        CHECK(d_n_dimension(sp4, n) == 2);
    }
    CHECK(d_n_dimension(cat, {3, -1}) == 1);
    auto blk = rational_orbit_decomposition(kBlock);
    CHECK(d_n_dimension(blk, {1, 0, 0, 0}) == 2);
    CHECK(d_n_dimension(cat, {0, 0}) == 0);
}

TEST_CASE("modified Fourier coefficients") {
    auto D = rational_orbit_decomposition(kCat);
    IVec n{1, 2};
    IVec nA = kCat.act(n);
    Observable diff{{n, nA}, {1.0, -1.0}};
    auto r = sharp_coefficients(D, diff);
    for (auto& e : r.entries) CHECK(std::abs(e.value) < 1e-12);
    CHECK(r.variance == 0.0);

    Observable single{{n}, {1.0}};
    auto s = sharp_coefficients(D, single);
    REQUIRE(s.entries.size() == 1);
    CHECK(std::abs(std::abs(s.entries[0].value) - 1.0) < 1e-12);

    Observable sum{{n, nA}, {cplx(0.5, 0.25), cplx(0.5, 0.25)}};
    auto t = sharp_coefficients(D, sum);
    REQUIRE(t.entries.size() == 1);
    double sign = ((n[0] * n[1]) % 2 == 0) ? 1.0 : -1.0;
    CHECK(std::abs(t.entries[0].value - 2.0 * sign * cplx(0.5, 0.25)) < 1e-12);
}

TEST_CASE("scar manifold base point") {
    auto S = scar_manifold(kBlock, {{1, 0, 0, 0}, {0, 1, 0, 0}});
    for (auto& x : S.x0) CHECK(x == 0);
    CHECK(in_z0(S, {3, -2, 0, 0}));
    CHECK_FALSE(in_z0(S, {0, 0, 1, 0}));
    CHECK(std::abs(integral_over_x0(S, {3, -2, 0, 0}) - 1.0) < 1e-12);
    CHECK(std::abs(integral_over_x0(S, {1, 0, 1, 0})) < 1e-12);

    // conjugate by the shear with F = diag(1, 0): E0 acquires the vector (1, 0, 1, 0)
    IMat X = shear_matrix({{1, 0}, {0, 0}});
    IntSymplectic Xs(2, X);
    IntSymplectic B(2, matmul(matmul(Xs.inverse().entries(), kBlock.entries()), X));
    auto T = scar_manifold(B, {{1, 0, 1, 0}, {0, 1, 0, 0}});
    bool half = false;
    for (auto& x : T.x0) half = half || x == Rational(1, 2);
    CHECK(half);
    for (auto& z : T.z0) {
        Rational s = 0;
        for (size_t i = 0; i < 4; ++i) s += Rational(z[i]) * T.x0[i];
        Rational target = Rational(z[0] * z[2] + z[1] * z[3], 2);
        Rational diff = s - target;
        CHECK(denominator(diff) == 1);
    }
    CHECK(std::abs(integral_over_x0(T, {1, 0, 1, 0}) + 1.0) < 1e-12);

    CHECK_THROWS_AS(scar_manifold(kBlock, {{1, 0, 0, 0}, {0, 0, 1, 0}}), MathError);
    CHECK_THROWS_AS(
        scar_manifold(kBlock, {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}), MathError);
}

TEST_CASE("order mod N") {
    CHECK(ord_mod(kA4.entries(), 5) == 4);
    CHECK(ord_mod(identity(2), 7) == 1);
    CHECK(ord_mod(kCat.entries(), 5) == 3);
    CHECK(ord_mod(kCat.entries(), 25) == 15);
}

TEST_CASE("integer lattices") {
    ZMat K = integer_kernel(ZMat{{2, 4, 6}});
    CHECK(K.size() == 2);
    for (auto& r : K) CHECK(2 * r[0] + 4 * r[1] + 6 * r[2] == 0);
    // (1, 1, -1) lies in the kernel
    QMat Kq = to_q(K);
    CHECK(in_row_span(Kq, QVec{1, 1, -1}));
    ZMat H = hnf_rows(ZMat{{2, 4}, {1, 3}});
    CHECK(abs(det_bareiss(H)) == 2);
    ZMat R = right_kernel(to_q(ZMat{{1, 1, 0, 0}, {0, 0, 1, -1}}));
    CHECK(R.size() == 2);
}
