#pragma once

#include <vector>

#include "torusq/ff.hpp"
#include "torusq/hecke.hpp"

namespace torusq {

/// Data defining E_q(nu, chi) = (1/|C|) sum_{x != 1} e_q(nu kappa (x+1)/(x-1)) chi chi_2(x).
struct ExpSumContext {
    ExtField field;
    /// q = p^s; additive characters are taken over F_{p^s}.
    int s = 1;
    u64 q = 0;
    CyclicGroup group;
    FieldElement kappa;
    bool symmetric = false;

    static ExpSumContext from_orbit(const FrobeniusOrbit& o);
    /// Standalone context over F_q, q = p^s (kappa = 1, or a trace-zero kappa when symmetric).
    static ExpSumContext standalone(u64 p, int s, bool symmetric);

    u64 order() const { return group.order(); }
    /// The nonzero elements of F_q inside the ambient field.
    std::vector<FieldElement> nonzero_nu() const;
    cplx e_q(const FieldElement& x) const { return additive_character(x, s); }
};

/// Literal evaluation of E_q(nu, chi_j).
cplx expsum(const ExpSumContext& ctx, const FieldElement& nu, u64 j);
/// E_q(nu, chi_j) for j = 0..|C|-1 at once.
std::vector<cplx> expsum_all_chars(const ExpSumContext& ctx, const FieldElement& nu);
/// Rows indexed like nus, columns by j.
std::vector<std::vector<cplx>> expsum_grid(const ExpSumContext& ctx, const std::vector<FieldElement>& nus,
                                           Backend backend = Backend::Parallel);

/// sum_{x in C} e_q(a (x^2 - 1)/x); a = 2 nu kappa keeps the argument in F_q.
cplx kloosterman_sum(const ExpSumContext& ctx, const FieldElement& a);

/// Q(n) = omega(n, v) omega(n, v*) in the orbit field.
FieldElement q_mod_p(const FrobeniusOrbit& o, const IVec& n);
/// Does n have a component on the symplectic orbit?
bool touches_orbit(const FrobeniusOrbit& o, const IVec& n);

/// Predicted (T(n) psi, psi) for a Hecke eigenvector with eigenvalue labels j (character chi_{-j} in E).
cplx matrix_element_formula(const OrbitsModP& orbits, const std::vector<ExpSumContext>& ctx,
                            const std::vector<int>& labels, const IVec& n);
/// Predicted values for every label tuple without the quadratic character.
std::vector<cplx> formula_multiset(const OrbitsModP& orbits, const IVec& n);
/// Direct (T(n) psi_i, psi_i) for the basis vectors without the quadratic character.
std::vector<cplx> direct_multiset(const HeckeSystem& S, const IVec& n, Backend backend = Backend::Parallel);

/// Greedy nearest-neighbour matching; returns the largest matched distance (inf on size mismatch).
double multiset_distance(std::vector<cplx> a, std::vector<cplx> b);

struct KsResult {
    double distance = 0;
    std::vector<double> histogram;
    std::vector<double> bin_edges;
};
/// Semicircle CDF on [-2, 2].
double semicircle_cdf(double x);
KsResult sato_tate_stats(std::vector<double> samples, int bins = 20);

}  // namespace torusq
