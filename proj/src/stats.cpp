#include "torusq/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace torusq {

namespace {

bool zero_vec(const IVec& n) {
    return std::all_of(n.begin(), n.end(), [](i64 x) { return x == 0; });
}

std::vector<cplx> twisted_diagonal(const HeckeSystem& S, const IVec& n, Backend backend) {
    HilbertSpace H(static_cast<int>(S.orbits.p), S.orbits.d);
    return diagonal_elements(elementary_op(H, n), S.basis.vectors, backend);
}

}  // namespace

std::string PrimeClass::pattern() const {
    std::string s;
    for (size_t i = 0; i < degrees.size(); ++i) s += (i ? "+" : "") + std::to_string(degrees[i]);
    return s;
}

PrimeClass classify_prime(const IntPoly& P, u64 p) {
    if (p == 2) throw MathError("EvenPrime", "p = 2 is excluded");
    if (!is_prime(p)) throw InputError("NotPrime", std::to_string(p) + " is not prime");
    if (discriminant(P) % p == 0) throw MathError("BadPrime", std::to_string(p) + " divides the discriminant");
    PrimeClass c;
    c.p = p;
    for (auto& f : factor_squarefree(trace_polynomial(P).to_fp(p))) c.degrees.push_back(f.degree());
    std::sort(c.degrees.begin(), c.degrees.end());
    c.k = static_cast<int>(c.degrees.size());
    return c;
}

std::vector<DegeneracyRow> degeneracy_stats(const IntSymplectic& A, const std::vector<i64>& Ns) {
    std::vector<DegeneracyRow> out;
    for (i64 N : Ns) {
        if (N < 2) throw InputError("BadModulus", "N must be >= 2");
        u64 o = ord_mod(A.entries(), N);
        out.push_back({N, o, std::pow(static_cast<double>(N), A.d()) / static_cast<double>(o)});
    }
    return out;
}

std::vector<BigInt> n0_norms(const OrbitDecomposition& D, const Observable& f) {
    std::vector<std::vector<NumberRingElement>> qs;
    for (auto& n : f.n)
        if (!zero_vec(n)) qs.push_back(quadratic_form_q(D, n));
    std::vector<BigInt> out;
    auto add = [&](const NumberRingElement& x) {
        if (x.is_zero()) return;
        BigInt v = abs(x.norm());
        if (v != 0) out.push_back(v);
    };
    for (size_t a = 0; a < qs.size(); ++a) {
        for (auto& x : qs[a]) add(x);
        for (size_t b = a + 1; b < qs.size(); ++b)
            for (size_t t = 0; t < qs[a].size(); ++t) add(qs[a][t] - qs[b][t]);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool prime_allowed(const std::vector<BigInt>& norms, const BigInt& disc, u64 p) {
    if (p == 2 || disc % p == 0) return false;
    return std::none_of(norms.begin(), norms.end(), [&](const BigInt& v) { return v % p == 0; });
}

int d_f_of(const OrbitDecomposition& D, const Observable& f) {
    int best = std::numeric_limits<int>::max();
    for (auto& n : f.n)
        if (!zero_vec(n)) best = std::min(best, d_n_dimension(D, n));
    return best == std::numeric_limits<int>::max() ? 0 : best;
}

std::vector<cplx> observable_diagonal(const HeckeSystem& S, const Observable& f, Backend backend) {
    HilbertSpace H(static_cast<int>(S.orbits.p), S.orbits.d);
    std::vector<cplx> out(static_cast<size_t>(S.basis.vectors.cols()), 0.0);
    for (size_t i = 0; i < f.n.size(); ++i) {
        auto e = diagonal_elements(elementary_op(H, f.n[i], false), S.basis.vectors, backend);
        for (size_t k = 0; k < out.size(); ++k) out[k] += f.c[i] * e[k];
    }
    return out;
}

VarianceResult variance(const OrbitDecomposition& D, const HeckeSystem& S, const Observable& f, Backend backend) {
    if (!D.aque) throw MathError("NotAQUE", "variance needs every rational orbit symmetric");
    VarianceResult r;
    r.p = S.orbits.p;
    r.d_f = d_f_of(D, f);
    SharpResult sh = sharp_coefficients(D, f);
    for (auto& e : sh.entries)
        if (e.d_nu == r.d_f) r.V_f += std::norm(e.value);

    auto diag = observable_diagonal(S, f, backend);
    const cplx f0 = f.mean();
    const double dim = static_cast<double>(diag.size());
    for (auto& v : diag) r.S2 += std::norm(v - f0);
    r.S2 /= dim;
    r.S2_scaled = r.S2 * std::pow(static_cast<double>(r.p), r.d_f);

    std::vector<std::vector<cplx>> rep;
    std::vector<cplx> coef;
    for (auto& e : sh.entries) {
        if (std::abs(e.value) < 1e-14) continue;
        rep.push_back(twisted_diagonal(S, e.support.front(), backend));
        coef.push_back(e.value);
    }
    cplx s = 0;
    for (size_t a = 0; a < rep.size(); ++a)
        for (size_t b = 0; b < rep.size(); ++b) {
            cplx m = 0;
            for (size_t i = 0; i < rep[a].size(); ++i) m += rep[a][i] * std::conj(rep[b][i]);
            s += coef[a] * std::conj(coef[b]) * m / dim;
        }
    r.S2_via_sharp = s.real();
    return r;
}

cplx mixed_moment(const HeckeSystem& S, const IVec& n, const IVec& m, Backend backend) {
    auto a = twisted_diagonal(S, n, backend);
    auto b = n == m ? a : twisted_diagonal(S, m, backend);
    cplx s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * std::conj(b[i]);
    return s / static_cast<double>(a.size());
}

double fourth_moment(const HeckeSystem& S, const IVec& n, Backend backend) {
    const auto& o = S.orbits;
    if (!o.single_orbit() || !o.orbits[0].symmetric || o.orbits[0].d_theta != o.d)
        throw MathError("MultiOrbitPrime", "P_A is reducible mod " + std::to_string(o.p));
    auto a = twisted_diagonal(S, n, backend);
    double s = 0;
    for (auto& v : a) s += std::pow(std::norm(v), 2);
    return s / static_cast<double>(a.size());
}

Samples normalized_elements(const HeckeSystem& S, const Observable& f, int d_f, Backend backend) {
    auto diag = observable_diagonal(S, f, backend);
    const double scale = std::pow(static_cast<double>(S.orbits.p), d_f / 2.0);
    const cplx f0 = f.mean();
    Samples out;
    for (size_t i = 0; i < diag.size(); ++i)
        if (!S.basis.carries_quad(i)) out.w.push_back(scale * (diag[i] - f0));
    if (out.w.empty()) return out;
    for (auto& w : out.w) out.mean += w;
    out.mean /= static_cast<double>(out.w.size());
    for (auto& w : out.w) out.variance += std::norm(w - out.mean);
    out.variance /= static_cast<double>(out.w.size());
    return out;
}

}  // namespace torusq
