#include "doctest.h"

#include <map>
#include <random>
#include <set>

#include "torusq/ff.hpp"

using namespace torusq;

namespace {

// Trial division by every monic polynomial of degree <= deg/2.
bool irreducible_by_trial(const PolyFp& f) {
    u64 p = f.p();
    int n = f.degree();
    for (int k = 1; 2 * k <= n; ++k) {
        u64 count = checked_pow(p, k);
        for (u64 idx = 0; idx < count; ++idx) {
            std::vector<u64> c(k + 1, 0);
            u64 r = idx;
            for (int i = 0; i < k; ++i) {
                c[i] = r % p;
                r /= p;
            }
            c[k] = 1;
            if ((f % PolyFp(p, c)).is_zero()) return false;
        }
    }
    return true;
}

std::vector<u64> odd_prime_powers(u64 hi) {
    std::vector<u64> out;
    for (u64 q = 3; q <= hi; ++q) {
        auto f = prime_factors(q);
        if (f.size() == 1 && f[0] != 2) out.push_back(q);
    }
    return out;
}

}  // namespace

TEST_CASE("integer helpers") {
    CHECK(powmod(3, 3, 7) == 6);
    CHECK(discrete_log_mod_p(3, 6, 7) == 3);
    CHECK(invmod(3, 7) == 5);
    CHECK(legendre(5, 11) == 1);
    CHECK(legendre(2, 5) == -1);
    CHECK(primes_between(10, 30) == std::vector<u64>{11, 13, 17, 19, 23, 29});
    CHECK(is_prime(4999));
    CHECK_FALSE(is_prime(4997));
}

TEST_CASE("lowest irreducible polynomials") {
    CHECK(find_irreducible(5, 1) == PolyFp(5, {0, 1}));
    CHECK(find_irreducible(5, 2) == PolyFp(5, {2, 0, 1}));
    CHECK(find_irreducible(3, 2) == PolyFp(3, {1, 0, 1}));
    for (u64 p : {3, 5, 7})
        for (int k = 1; k <= 4; ++k) {
            auto f = find_irreducible(p, k);
            CHECK(f.degree() == k);
            CHECK(f.is_monic());
            CHECK(irreducible_by_trial(f));
        }
}

TEST_CASE("rabin test agrees with trial division") {
    for (u64 p : {3, 5})
        for (int n = 1; n <= 4; ++n) {
            u64 count = checked_pow(p, n);
            for (u64 idx = 0; idx < count; ++idx) {
                std::vector<u64> c(n + 1, 0);
                u64 r = idx;
                for (int i = 0; i < n; ++i) {
                    c[i] = r % p;
                    r /= p;
                }
                c[n] = 1;
                PolyFp f(p, c);
                CHECK(is_irreducible(f) == irreducible_by_trial(f));
            }
        }
}

TEST_CASE("squarefree factorization multiplies back") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 60; ++trial) {
        u64 p = std::vector<u64>{3, 5, 7, 11, 13}[trial % 5];
        std::vector<u64> c(7);
        for (auto& x : c) x = rng() % p;
        c.back() = 1;
        PolyFp f(p, c);
        if (!is_squarefree(f)) continue;
        auto fac = factor_squarefree(f);
        PolyFp prod = PolyFp::constant(p, 1);
        for (auto& g : fac) {
            CHECK(is_irreducible(g));
            prod = prod * g;
        }
        CHECK(prod == f);
        CHECK(std::is_sorted(fac.begin(), fac.end()));
    }
}

TEST_CASE("frobenius") {
    ExtField F = ExtField::standard(5, 2);
    FieldElement t = F.gen();
    CHECK(t.frobenius(1) == -t);
    CHECK(t.frobenius(0) == t);
    CHECK(F.from_int(3).frobenius(1) == F.from_int(3));
    std::mt19937_64 rng(11);
    for (u64 p : {3, 5, 7})
        for (int k : {2, 3, 4}) {
            ExtField G = ExtField::standard(p, k);
            for (int i = 0; i < 20; ++i) {
                FieldElement a = G.from_index(rng() % G.order()), b = G.from_index(rng() % G.order());
                CHECK((a + b).frobenius(1) == a.frobenius(1) + b.frobenius(1));
                CHECK(a.pow(G.order()) == a);
                CHECK(a.frobenius(k) == a);
            }
        }
}

TEST_CASE("norm and trace maps") {
    ExtField F9 = ExtField::standard(3, 2);
    for (i64 a = 0; a < 3; ++a) CHECK(F9.from_int(a).trace() == static_cast<u64>((2 * a) % 3));
    for (u64 q : odd_prime_powers(49)) {
        u64 p = prime_factors(q)[0];
        int s = 0;
        for (u64 r = q; r > 1; r /= p) ++s;
        ExtField F = ExtField::standard(p, 2 * s);
        std::map<u64, u64> fiber;
        for (u64 i = 1; i < F.order(); ++i) {
            FieldElement x = F.from_index(i);
            FieldElement nx = x.norm_to(s);
            CHECK(nx == x * x.frobenius(s));
            CHECK(nx.in_subfield(s));
            ++fiber[nx.index()];
        }
        CHECK(fiber.size() == q - 1);
        for (auto& kv : fiber) CHECK(kv.second == q + 1);
    }
    ExtField F25 = ExtField::standard(5, 2);
    u64 ones = 0;
    for (u64 i = 1; i < 25; ++i) {
        FieldElement x = F25.from_index(i);
        if ((x * x.frobenius(1)).is_one()) ++ones;
    }
    CHECK(ones == 6);
    CHECK(CyclicGroup::norm_one(F25).order() == 6);
}

TEST_CASE("discrete logarithms") {
    ExtField F7 = ExtField::standard(7, 1);
    auto G = CyclicGroup::from_generator(F7.from_int(3), 6);
    CHECK(G.dlog(F7.from_int(6)) == 3);
    CHECK(G.dlog(F7.one()) == 0);
    CHECK(G.dlog(G.generator()) == 1);
    auto H = CyclicGroup::norm_one(ExtField::standard(5, 2));
    CHECK_FALSE(H.contains(ExtField::standard(5, 2).from_int(2)));
}

TEST_CASE("additive characters") {
    ExtField F5 = ExtField::standard(5, 1);
    CHECK(std::abs(additive_character(F5.zero()) - 1.0) < 1e-12);
    CHECK(std::abs(additive_character(F5.one()) - std::polar(1.0, kTwoPi / 5)) < 1e-12);
    ExtField F9 = ExtField::standard(3, 2);
    for (u64 i = 0; i < 9; ++i) {
        FieldElement y = F9.from_index(i);
        CHECK(std::abs(additive_character(y - y.frobenius(1)) - 1.0) < 1e-12);
        for (u64 j = 0; j < 9; ++j) {
            FieldElement z = F9.from_index(j);
            CHECK(std::abs(additive_character(y + z) - additive_character(y) * additive_character(z)) < 1e-12);
        }
    }
}

TEST_CASE("multiplicative characters") {
    for (u64 p : primes_between(3, 199)) {
        ExtField F = ExtField::standard(p, 1);
        auto G = CyclicGroup::multiplicative(F);
        u64 m = G.order();
        for (u64 j = 1; j < m; ++j) {
            MultCharacter chi{m, j};
            cplx s = 0;
            for (u64 t = 0; t < m; ++t) s += chi.at_exponent(t);
            CHECK(std::abs(s) < 1e-9);
        }
        std::set<u64> squares;
        for (auto& x : G.elements()) squares.insert((x * x).index());
        MultCharacter chi2{m, m / 2};
        CHECK(chi2.is_quadratic());
        for (u64 t = 0; t < m; ++t) {
            bool sq = squares.count(G.element(t).index()) > 0;
            CHECK((chi2.at_exponent(t).real() > 0) == sq);
        }
    }
}
