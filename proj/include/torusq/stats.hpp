#pragma once

#include <exception>
#include <string>
#include <vector>

#include "torusq/hecke.hpp"
#include "torusq/rational_structure.hpp"

namespace torusq {

struct PrimeClass {
    u64 p = 0;
    /// Number of irreducible factors of the trace polynomial mod p.
    int k = 0;
    std::vector<int> degrees;
    std::string pattern() const;
};

/// Factors the degree-d trace polynomial of P mod p; BadPrime for p = 2 or p | disc(P).
PrimeClass classify_prime(const IntPoly& P, u64 p);

struct DegeneracyRow {
    i64 N;
    u64 ord;
    double degeneracy;
};
std::vector<DegeneracyRow> degeneracy_stats(const IntSymplectic& A, const std::vector<i64>& Ns);

/// Nonzero norms N(Q(n)) and N(Q(n) - Q(m)) over the support of f; primes dividing one are skipped.
std::vector<BigInt> n0_norms(const OrbitDecomposition& D, const Observable& f);
bool prime_allowed(const std::vector<BigInt>& norms, const BigInt& disc, u64 p);

/// min d_n over the nonzero support of f.
int d_f_of(const OrbitDecomposition& D, const Observable& f);

/// <Op_p(f) psi_i, psi_i> for every basis vector.
std::vector<cplx> observable_diagonal(const HeckeSystem& S, const Observable& f, Backend backend = Backend::Serial);

struct VarianceResult {
    u64 p = 0;
    int d_f = 0;
    double S2 = 0;
    double S2_scaled = 0;
    double V_f = 0;
    /// S2 recomputed from f-sharp and mixed moments.
    double S2_via_sharp = 0;
};

VarianceResult variance(const OrbitDecomposition& D, const HeckeSystem& S, const Observable& f,
                        Backend backend = Backend::Serial);

/// p^{-d} sum_i <T(n) psi_i, psi_i> conj(<T(m) psi_i, psi_i>).
cplx mixed_moment(const HeckeSystem& S, const IVec& n, const IVec& m, Backend backend = Backend::Serial);
/// p^{-d} sum_i |<T(n) psi_i, psi_i>|^4 on a prime where P_A stays irreducible.
double fourth_moment(const HeckeSystem& S, const IVec& n, Backend backend = Backend::Serial);

struct Samples {
    std::vector<cplx> w;
    cplx mean = 0;
    double variance = 0;
};
/// W_i = p^{d_f/2}(<Op(f) psi_i, psi_i> - f(0)) over vectors without the quadratic character.
Samples normalized_elements(const HeckeSystem& S, const Observable& f, int d_f, Backend backend = Backend::Serial);

/// Runs fn(p) for every prime on up to jobs threads; results come back in input order.
template <class R, class F>
std::vector<R> sweep_primes(const std::vector<u64>& primes, int jobs, F fn) {
    std::vector<R> out(primes.size());
    std::vector<std::exception_ptr> err(primes.size());
    const i64 n = static_cast<i64>(primes.size());
#pragma omp parallel for schedule(dynamic) num_threads(jobs < 1 ? 1 : jobs)
    for (i64 i = 0; i < n; ++i) {
        try {
            out[i] = fn(primes[i]);
        } catch (...) {
            err[i] = std::current_exception();
        }
    }
    for (auto& e : err)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace torusq
