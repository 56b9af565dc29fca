// Acceptance suite: one PASS/FAIL line per criterion. Usage: acceptance [criterion numbers...]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "torusq/exp_sums.hpp"
#include "torusq/io.hpp"
#include "torusq/scars.hpp"
#include "torusq/stats.hpp"

using namespace torusq;

namespace {

// ---- pinned tolerances ---------------------------------------------------------

constexpr double kExactTol = 1e-9;
constexpr double kC2RelTol = 1e-8;
constexpr double kMultisetTol = 1e-8;
constexpr double kScarTol = 1e-9;
constexpr double kScarConstant = 5.0;
constexpr double kVarianceConstant = 20.0;
constexpr double kDensityTol = 0.05;
constexpr double kKsSoft = 0.2;
constexpr double kAlgebraSeconds = 60;
constexpr double kEgorovSeconds = 300;
constexpr double kMomentSeconds = 600;
constexpr int kRandomFrequencies = 20;
constexpr u64 kSeed = 20240607;

struct Outcome {
    bool pass = true;
    bool soft = false;
    std::ostringstream detail;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (pass) detail << "FIRST FAILURE: " << what << "; ";
            pass = false;
        }
    }
};

MatrixFixture fixture(const std::string& name) {
    return load_matrix(std::string(TORUSQ_FIXTURE_DIR) + "/" + name + ".json");
}

std::vector<IVec> grid(int len, int N) {
    std::vector<IVec> out;
    int total = 1;
    for (int i = 0; i < len; ++i) total *= N;
    out.reserve(total);
    for (int t = 0; t < total; ++t) {
        IVec v(len);
        int r = t;
        for (auto& x : v) {
            x = r % N;
            r /= N;
        }
        out.push_back(v);
    }
    return out;
}

IVec add(const IVec& a, const IVec& b) {
    IVec r(a);
    for (size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
}

IVec neg(const IVec& a) {
    IVec r(a);
    for (auto& x : r) x = -x;
    return r;
}

/// max |a - s b| entrywise; infinite when the permutations differ.
double op_dist(const SparseOp& a, const SparseOp& b, cplx s = 1.0) {
    double e = 0;
    for (size_t y = 0; y < a.col.size(); ++y) {
        if (a.col[y] != b.col[y]) return INFINITY;
        e = std::max(e, std::abs(a.phase[y] - s * b.phase[y]));
    }
    return e;
}

bool zero_mod(const IVec& n, i64 N) {
    return std::all_of(n.begin(), n.end(), [&](i64 x) { return mod(x, N) == 0; });
}

std::string fmt_e(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", x);
    return buf;
}

/// P_A irreducible mod p: one symmetric orbit of full degree.
bool inert(const IntSymplectic& A, u64 p) {
    auto o = frobenius_orbits_mod_p(A, p);
    return o.single_orbit() && o.orbits[0].symmetric && o.orbits[0].d_theta == A.d();
}

double max_abs(const CMatrix& M) { return M.size() ? M.cwiseAbs().maxCoeff() : 0.0; }

// ---- 1. exact algebra ----------------------------------------------------------

/// Composition, commutation, unitarity and periodicity of T(n).
///
/// d = 1 is checked on all pairs m, n in [0, 2N)^2. For d = 2, T(n) is checked to equal
/// T(n_1, n_3) (x) T(n_2, n_4) for every n in [0, 2N)^4; since the cocycle splits over
/// coordinates this carries the d = 1 pair laws over to every d = 2 pair. All d = 2 pairs are
/// also composed directly at N = 3, and a seeded sample of pairs at every other N.
void criterion_exact_algebra(Outcome& o) {
    double worst = 0;
    size_t pairs = 0;
    std::mt19937_64 rng(kSeed);
    for (int N = 3; N <= 10; ++N) {
        HilbertSpace H1(N, 1), H2(N, 2);
        const i64 period = N % 2 ? N : 2 * N;
        auto ns1 = grid(2, 2 * N);
        std::vector<SparseOp> T1;
        for (auto& n : ns1) T1.push_back(elementary_op(H1, n));
        auto idx1 = [&](const IVec& n) { return static_cast<size_t>(mod(n[0], 2 * N) + 2 * N * mod(n[1], 2 * N)); };

        auto check_pair = [&](const HilbertSpace& H, const SparseOp& Tm, const SparseOp& Tn, const SparseOp& Tmn,
                              const IVec& m, const IVec& n) {
            SparseOp lhs = Tm * Tn;
            double e1 = op_dist(lhs, Tmn, H.root((1 + N * N) * omega(m, n)));
            double e2 = op_dist(lhs, Tn * Tm, H.root(2 * omega(m, n)));
            worst = std::max({worst, e1, e2});
            ++pairs;
        };

        for (size_t a = 0; a < ns1.size(); ++a)
            for (size_t b = 0; b < ns1.size(); ++b)
                check_pair(H1, T1[a], T1[b], T1[idx1(add(ns1[a], ns1[b]))], ns1[a], ns1[b]);

        for (int d : {1, 2}) {
            HilbertSpace& H = d == 1 ? H1 : H2;
            for (auto& n : grid(2 * d, 2 * N)) {
                SparseOp T = elementary_op(H, n);
                SparseOp Tneg = elementary_op(H, neg(n));
                worst = std::max(worst, op_dist(T.adjoint(), Tneg));
                SparseOp id = T * Tneg;
                for (size_t y = 0; y < id.col.size(); ++y) {
                    if (id.col[y] != static_cast<i64>(y)) worst = INFINITY;
                    worst = std::max(worst, std::abs(id.phase[y] - 1.0));
                }
                for (int i = 0; i < 2 * d; ++i) {
                    IVec s = n;
                    s[i] += period;
                    worst = std::max(worst, op_dist(elementary_op(H, s), T));
                }
            }
        }

        for (auto& n : grid(4, 2 * N)) {
            SparseOp T = elementary_op(H2, n);
            const SparseOp& a = T1[idx1({n[0], n[2]})];
            const SparseOp& b = T1[idx1({n[1], n[3]})];
            for (i64 x2 = 0; x2 < N; ++x2)
                for (i64 x1 = 0; x1 < N; ++x1) {
                    i64 y = x1 + N * x2;
                    if (T.col[y] != a.col[x1] + N * b.col[x2]) worst = INFINITY;
                    worst = std::max(worst, std::abs(T.phase[y] - a.phase[x1] * b.phase[x2]));
                }
        }

        auto ns2 = grid(4, 2 * N);
        if (N == 3) {
            std::vector<SparseOp> T2;
            for (auto& n : ns2) T2.push_back(elementary_op(H2, n));
            for (auto& m : ns2)
                for (auto& n : ns2) {
                    IVec s = add(m, n);
                    size_t k = 0;
                    for (int i = 3; i >= 0; --i) k = k * 6 + static_cast<size_t>(mod(s[i], 6));
                    size_t km = 0, kn = 0;
                    for (int i = 3; i >= 0; --i) {
                        km = km * 6 + static_cast<size_t>(m[i]);
                        kn = kn * 6 + static_cast<size_t>(n[i]);
                    }
                    check_pair(H2, T2[km], T2[kn], T2[k], m, n);
                }
        } else {
            std::uniform_int_distribution<size_t> pick(0, ns2.size() - 1);
            for (int t = 0; t < 4000; ++t) {
                const IVec& m = ns2[pick(rng)];
                const IVec& n = ns2[pick(rng)];
                check_pair(H2, elementary_op(H2, m), elementary_op(H2, n), elementary_op(H2, add(m, n)), m, n);
            }
        }
    }
    o.require(worst < kExactTol, "operator identity deviation " + fmt_e(worst));
    o.detail << "max deviation " << fmt_e(worst) << " over " << pairs << " pairs";
}

// ---- 2. trace formula ----------------------------------------------------------

void criterion_trace(Outcome& o) {
    double worst = 0;
    size_t count = 0;
    for (int N = 3; N <= 10; ++N)
        for (int d : {1, 2}) {
            HilbertSpace H(N, d);
            for (auto& n : grid(2 * d, 2 * N)) {
                double expected = zero_mod(n, N) ? std::pow(static_cast<double>(N), d) : 0.0;
                worst = std::max(worst, std::abs(elementary_op(H, n).trace() - expected));
                ++count;
            }
        }
    o.require(worst < kExactTol, "trace error " + fmt_e(worst));
    o.detail << "max |Tr T(n) - N^d [n = 0 mod N]| " << fmt_e(worst) << " over " << count << " operators";
}

// ---- 3. Egorov -----------------------------------------------------------------

void criterion_egorov(Outcome& o) {
    double gen = 0, avg = 0, c2 = 0;
    const IMat F1{{3}}, E1{{1}};
    const IMat F2{{1, 2}, {2, -1}}, E2{{1, 1}, {0, 1}};
    for (int N = 2; N <= 21; ++N)
        for (int d : {1, 2}) {
            HilbertSpace H(N, d);
            const IMat& F = d == 1 ? F1 : F2;
            const IMat& E = d == 1 ? E1 : E2;
            gen = std::max(gen, egorov_deviation(H, generator_shear(H, F), shear_matrix(F)));
            gen = std::max(gen, egorov_deviation(H, generator_linear(H, E), linear_matrix(E)));
            gen = std::max(gen, egorov_deviation(H, generator_fourier(H), fourier_matrix(d)));
        }
    for (const char* name : {"cat", "sp4"}) {
        auto fx = fixture(name);
        for (int N = 3; N <= 21; N += 2) {
            HilbertSpace H(N, fx.A.d());
            try {
                auto P = propagator_averaging(H, fx.A.entries());
                avg = std::max(avg, egorov_deviation(H, P.U, fx.A.entries()));
                c2 = std::max(c2, std::abs(P.c2_measured - P.c2_expected) / P.c2_expected);
            } catch (const Error& e) {
                o.require(false, std::string(name) + " N=" + std::to_string(N) + ": " + e.what());
            }
        }
    }
    o.require(gen < kExactTol, "generator deviation " + fmt_e(gen));
    o.require(avg < kExactTol, "averaged propagator deviation " + fmt_e(avg));
    o.require(c2 <= kC2RelTol, "|c|^2 relative error " + fmt_e(c2));
    o.detail << "generators " << fmt_e(gen) << ", averaged cat/sp4 " << fmt_e(avg) << ", |c|^2 rel " << fmt_e(c2);
}

// ---- 4. Hecke structure --------------------------------------------------------

struct FixturePrimes {
    std::string name;
    std::vector<u64> primes;
};

const std::vector<FixturePrimes> kHeckeFixtures{{"cat", {5, 7, 11, 13, 17, 19, 23}}, {"sp4", {7, 11, 13}}};

double commutation_error(const HeckeOperators& ops) {
    double e = 0;
    for (size_t a = 0; a < ops.U.size(); ++a) {
        e = std::max(e, max_abs(ops.U[a] * ops.UA - ops.UA * ops.U[a]));
        for (size_t b = a + 1; b < ops.U.size(); ++b) e = std::max(e, max_abs(ops.U[a] * ops.U[b] - ops.U[b] * ops.U[a]));
    }
    return e;
}

void criterion_hecke(Outcome& o) {
    double comm = 0;
    int brute = 0, tables = 0;
    for (auto& fp : kHeckeFixtures) {
        auto fx = fixture(fp.name);
        for (u64 p : fp.primes) {
            auto S = build_hecke_system(fx.A, p);
            std::string tag = fp.name + " p=" + std::to_string(p);
            u64 predicted = 1;
            for (auto& orb : S.orbits.orbits) predicted *= orb.symmetric ? orb.q + 1 : orb.q - 1;
            o.require(S.group.size() == predicted, tag + ": |C| != prod(q +- 1)");
            if (p <= 13) {
                o.require(centralizer_count_bruteforce(fx.A.entries(), p) == predicted, tag + ": brute-force count");
                ++brute;
            }
            comm = std::max(comm, commutation_error(S.ops));
            std::string why;
            bool ok = multiplicity_table_ok(S.basis, &why);
            o.require(ok, tag + ": " + why);
            tables += ok;
        }
    }
    o.require(comm < kExactTol, "commutator " + fmt_e(comm));
    o.detail << brute << " brute-force counts, " << tables << " multiplicity tables, max commutator " << fmt_e(comm);
}

// ---- 5. matrix-element formula -------------------------------------------------

void criterion_matrix_elements(Outcome& o) {
    double worst = 0;
    int checks = 0;
    std::mt19937_64 rng(kSeed);
    for (auto& fp : kHeckeFixtures) {
        auto fx = fixture(fp.name);
        const int d = fx.A.d();
        for (u64 p : fp.primes) {
            auto S = build_hecke_system(fx.A, p);
            for (int i = 0; i < kRandomFrequencies; ++i) {
                IVec n(2 * d);
                do {
                    for (auto& x : n) x = static_cast<i64>(rng() % (2 * p)) - static_cast<i64>(p);
                } while (zero_mod(n, static_cast<i64>(p)));
                double e = multiset_distance(direct_multiset(S, n), formula_multiset(S.orbits, n));
                worst = std::max(worst, e);
                ++checks;
            }
        }
    }
    o.require(worst <= kMultisetTol, "multiset distance " + fmt_e(worst));
    o.detail << checks << " frequencies, max matched distance " << fmt_e(worst);
}

// ---- 6. Weil bound -------------------------------------------------------------

void criterion_weil(Outcome& o) {
    double worst_margin = -INFINITY, worst_kl = 0;
    int qs = 0;
    for (u64 q = 5; q <= 121; q += 2) {
        auto f = prime_factors(q);
        if (f.size() != 1) continue;
        int s = 0;
        for (u64 x = q; x > 1; x /= f[0]) ++s;
        ++qs;
        const double sq = std::sqrt(static_cast<double>(q));
        for (bool sym : {true, false}) {
            auto ctx = ExpSumContext::standalone(f[0], s, sym);
            auto nus = ctx.nonzero_nu();
            auto grid_vals = expsum_grid(ctx, nus);
            const u64 quad = ctx.order() / 2;
            for (auto& row : grid_vals)
                for (u64 j = 0; j < row.size(); ++j)
                    if (j != quad) worst_margin = std::max(worst_margin, sq * std::abs(row[j]) - (2 + 10 / sq));
            if (!sym && q <= 49)
                for (auto& a : nus) worst_kl = std::max(worst_kl, std::abs(kloosterman_sum(ctx, a)) / (2 * sq));
        }
    }
    o.require(worst_margin <= 0, "Weil bound exceeded by " + fmt_e(worst_margin));
    o.require(worst_kl <= 1, "Kloosterman margin " + fmt_e(worst_kl));
    o.detail << qs << " moduli, max sqrt(q)|E| - (2 + 10/sqrt(q)) = " << fmt_e(worst_margin) << ", Kloosterman margin "
             << fmt_e(worst_kl);
}

// ---- 7. moments ----------------------------------------------------------------

void criterion_moments(Outcome& o) {
    auto fx = fixture("cat");
    const IVec n{1, 0};
    double w2 = 0, w4 = 0;
    int used = 0;
    for (u64 p : primes_between(13, 101)) {
        if (!inert(fx.A, p)) continue;
        auto S = build_hecke_system(fx.A, p);
        const double q = static_cast<double>(S.orbits.orbits[0].q);
        cplx m2 = mixed_moment(S, n, n);
        double e2 = std::abs(q * m2.real() - 1.0);
        double e4 = std::abs(q * q * fourth_moment(S, n) - 2.0);
        o.require(e2 <= 5 / q, "second moment at p=" + std::to_string(p) + ": " + fmt_e(e2));
        o.require(e4 <= 10 / std::sqrt(q), "fourth moment at p=" + std::to_string(p) + ": " + fmt_e(e4));
        w2 = std::max(w2, e2 * q);
        w4 = std::max(w4, e4 * std::sqrt(q));
        ++used;
    }
    o.require(used > 0, "no single-orbit primes");
    o.detail << used << " inert primes, max q|q m2 - 1| = " << fmt_e(w2) << " (<= 5), max sqrt(q)|q^2 m4 - 2| = "
             << fmt_e(w4) << " (<= 10)";
}

// ---- 8. scars ------------------------------------------------------------------

void criterion_scars(Outcome& o) {
    auto fx = fixture("block");
    auto M = scar_manifold(fx.A, fx.e0);
    auto D = rational_orbit_decomposition(fx.A);
    ZMat comp = partner_subspace(D, M.e0);
    auto ns = box(fx.A.d(), 2);
    Observable f{{{0, 0, 0, 0}, {1, 0, 0, 0}, {0, 1, 0, 0}, {1, 0, 0, 1}, {0, 0, 1, 1}},
                 {1.0, 0.5, cplx(0, 1), 2.0, -1.0}};
    double z0 = 0, cmp = 0, gen = 0;
    std::vector<double> dev;
    auto primes = primes_between(11, 101);
    for (u64 p : primes) {
        auto st = build_scar(fx.A, M, p);
        auto sp = scar_spectrum(st, comp, ns);
        z0 = std::max(z0, sp.z0_deviation);
        cmp = std::max(cmp, sp.complement_max);
        gen = std::max(gen, sp.generic_constant);
        dev.push_back(scar_measure_deviation(st, f));
    }
    bool monotone = true;
    for (size_t i = 1; i < dev.size(); ++i)
        if (dev[i] > dev[i - 1] && dev[i] >= kScarTol) monotone = false;
    o.require(z0 <= kScarTol, "Z0 deviation " + fmt_e(z0));
    o.require(cmp <= kScarTol, "complement max " + fmt_e(cmp));
    o.require(gen <= kScarConstant, "generic constant " + fmt_e(gen));
    o.require(monotone, "measure deviation not monotone above the noise floor");
    o.detail << primes.size() << " primes, Z0 " << fmt_e(z0) << ", complement " << fmt_e(cmp)
             << ", max p^{1/4}|elem| " << fmt_e(gen) << ", measure deviation max "
             << fmt_e(*std::max_element(dev.begin(), dev.end()));
}

// ---- 9. variance ---------------------------------------------------------------

void criterion_variance(Outcome& o) {
    auto fx = fixture("cat");
    auto D = rational_orbit_decomposition(fx.A);
    Observable f{{{1, 0}, {0, 1}}, {1.0, 1.0}};
    IVec n{1, 0};
    Observable g{{n, fx.A.act(n)}, {1.0, -1.0}};
    auto nf = n0_norms(D, f), ng = n0_norms(D, g);
    double C = 0, zero = 0;
    int used = 0;
    for (u64 p : primes_between(13, 101)) {
        if (!inert(fx.A, p)) continue;
        if (!prime_allowed(nf, D.discriminant, p) || !prime_allowed(ng, D.discriminant, p)) continue;
        auto S = build_hecke_system(fx.A, p);
        auto r = variance(D, S, f);
        o.require(r.d_f == 1, "d_f != 1");
        o.require(std::abs(r.S2 - r.S2_via_sharp) < kExactTol, "two-way S2 mismatch at p=" + std::to_string(p));
        C = std::max(C, static_cast<double>(p) * std::abs(r.S2_scaled - r.V_f));
        auto z = variance(D, S, g);
        double pz = static_cast<double>(p) * z.S2;
        o.require(pz <= 10.0 / static_cast<double>(p), "f-sharp zero at p=" + std::to_string(p) + ": " + fmt_e(pz));
        zero = std::max(zero, pz * static_cast<double>(p));
        ++used;
    }
    o.require(used > 0, "no admissible primes");
    o.require(C <= kVarianceConstant, "fitted C " + fmt_e(C));
    o.detail << used << " inert primes, fitted C = " << fmt_e(C) << " (<= 20), max p^2 S2 for f-sharp = 0: " << fmt_e(zero);
}

// ---- 10. prime classification --------------------------------------------------

void criterion_classification(Outcome& o) {
    auto fx = fixture("phi10");
    const IntPoly P = fx.A.char_poly();
    o.require(P == IntPoly::from_i64({1, -1, 1, -1, 1}), "fixture polynomial is not Phi_10");
    u64 total = 0, split = 0, mismatches = 0;
    for (u64 p : primes_between(3, 4999)) {
        if (discriminant(P) % p == 0) continue;
        auto c = classify_prime(P, p);
        bool in_p2 = c.k == 2;
        if (in_p2 != (legendre(5, p) == 1)) ++mismatches;
        ++total;
        split += in_p2;
    }
    double d2 = static_cast<double>(split) / static_cast<double>(total);
    o.require(mismatches == 0, std::to_string(mismatches) + " membership mismatches");
    o.require(std::abs(d2 - 0.5) <= kDensityTol && std::abs((1 - d2) - 0.5) <= kDensityTol, "density " + fmt_e(d2));
    o.detail << total << " primes, density(P_2) = " << d2 << ", density(P_1) = " << 1 - d2;
}

// ---- 11. Sato-Tate (soft) ------------------------------------------------------

void criterion_sato_tate(Outcome& o) {
    o.soft = true;
    auto fx = fixture("cat");
    const u64 p = 101;
    auto orbits = frobenius_orbits_mod_p(fx.A, p);
    const auto& orb = orbits.orbits[0];
    auto ctx = ExpSumContext::from_orbit(orb);
    auto vals = expsum_all_chars(ctx, q_mod_p(orb, {1, 0}));
    const double sq = std::sqrt(static_cast<double>(ctx.q));
    std::vector<double> samples;
    double imag = 0;
    for (u64 j = 0; j < vals.size(); ++j) {
        if (j == ctx.order() / 2) continue;
        samples.push_back(sq * vals[j].real());
        imag = std::max(imag, std::abs(vals[j].imag()));
    }
    double ks = sato_tate_stats(samples).distance;
    o.require(ks < kKsSoft, "KS distance " + fmt_e(ks));
    o.detail << "q = " << ctx.q << (orb.symmetric ? " symmetric" : " nonsymmetric") << ", " << samples.size()
             << " characters, KS = " << ks << " (soft gate < 0.2), max |Im E| " << fmt_e(imag);
}

struct Criterion {
    int id;
    const char* title;
    std::function<void(Outcome&)> run;
    double budget_seconds;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all{
        {1, "exact algebra", criterion_exact_algebra, kAlgebraSeconds},
        {2, "trace formula", criterion_trace, 0},
        {3, "Egorov", criterion_egorov, kEgorovSeconds},
        {4, "Hecke structure", criterion_hecke, 0},
        {5, "matrix-element formula", criterion_matrix_elements, 0},
        {6, "Weil bound", criterion_weil, 0},
        {7, "moments", criterion_moments, kMomentSeconds},
        {8, "scars", criterion_scars, 0},
        {9, "variance", criterion_variance, 0},
        {10, "prime classification", criterion_classification, 0},
        {11, "Sato-Tate statistics", criterion_sato_tate, 0},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

    int failures = 0;
    for (auto& c : all) {
        if (!only.empty() && !only.count(c.id)) continue;
        Outcome o;
        auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(o);
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.budget_seconds > 0) o.require(secs < c.budget_seconds, "runtime over " + fmt_e(c.budget_seconds) + " s");
        const char* tag = o.pass ? "PASS" : (o.soft ? "SOFT-FAIL" : "FAIL");
        std::printf("[%s] %2d %-24s %s (%.1f s)\n", tag, c.id, c.title, o.detail.str().c_str(), secs);
        std::fflush(stdout);
        if (!o.pass && !o.soft) ++failures;
    }
    std::printf("%s: %d hard failure(s)\n", failures ? "FAILED" : "ALL PASSED", failures);
    return failures ? 1 : 0;
}
