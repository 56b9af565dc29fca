#pragma once

#include <map>
#include <optional>
#include <vector>

#include "torusq/ff.hpp"
#include "torusq/quantizer.hpp"
#include "torusq/rational_structure.hpp"
#include "torusq/symplectic.hpp"

namespace torusq {

using FVec = std::vector<FieldElement>;

/// A symplectic Frobenius orbit of eigenvalues of A mod p.
struct FrobeniusOrbit {
    PolyFp factor;
    PolyFp partner_factor;
    /// F_p[t]/(factor); lambda is the class of t.
    ExtField field;
    bool symmetric = false;
    /// Half the size of the symplectic orbit; q = p^{d_theta}.
    int d_theta = 0;
    u64 q = 0;
    FVec v;
    FVec v_star;
    FieldElement kappa;
    /// Norm-one group (symmetric) or F_q^* (nonsymmetric) with its generator beta.
    CyclicGroup group;
};

struct OrbitsModP {
    u64 p;
    int d;
    std::vector<FrobeniusOrbit> orbits;
    bool single_orbit() const { return orbits.size() == 1; }
};

/// Throws BadPrime when p = 2 or P_A mod p is not squarefree.
OrbitsModP frobenius_orbits_mod_p(const IntSymplectic& A, u64 p);

/// Left kernel vector of (M - mu I) over F, normalized with first nonzero entry 1.
FVec left_eigenvector_mod_p(const IMat& M, const FieldElement& mu);
FieldElement omega_field(const FVec& a, const FVec& b);
FieldElement omega_field(const IVec& n, const FVec& b);

struct HeckeGroup {
    u64 p;
    /// One generator per orbit, acting from the right on row vectors mod p.
    std::vector<IMat> generators;
    std::vector<u64> orders;
    u64 size() const;
};

/// Generators g_theta with v g = beta v on the orbit and identity elsewhere.
HeckeGroup hecke_generators(const IntSymplectic& A, const OrbitsModP& orbits);
/// |{X in Sp(2d, F_p) : X A = A X}| by enumeration of the linear centralizer.
u64 centralizer_count_bruteforce(const IMat& A, u64 p);

struct HeckeOperators {
    std::vector<CMatrix> U;
    std::vector<u64> orders;
    /// Propagator of A itself (averaging, positive normalization).
    CMatrix UA;
};

/// Hecke operators with the phase fixed by Tr U(g) = +-p^{d - d_theta}; checks U^m = I.
HeckeOperators hecke_operators(const IntSymplectic& A, const OrbitsModP& orbits, const HeckeGroup& G,
                               Backend backend = Backend::Parallel);

struct HeckeBasis {
    u64 p;
    int d;
    CMatrix vectors;
    /// labels[i][t]: U(g_t) psi_i = exp(2 pi i labels[i][t] / m_t) psi_i.
    std::vector<std::vector<int>> labels;
    std::vector<u64> orders;
    std::vector<bool> symmetric;
    /// Label of the quadratic character per orbit, read off the eigenspace dimensions.
    std::vector<int> quad_label;
    std::map<std::vector<int>, int> multiplicity;
    /// Does some nonsymmetric orbit carry the quadratic character on vector i?
    bool carries_quad(size_t i) const;
};

/// Simultaneous diagonalization by refinement of eigenvalue clusters.
HeckeBasis hecke_diagonalize(const HeckeOperators& ops, const std::vector<bool>& symmetric, u64 p, int d);

/// Checks the eigenspace dimension table (0 on the symmetric quadratic label, 2^k otherwise).
bool multiplicity_table_ok(const HeckeBasis& B, std::string* why = nullptr);

/// Full pipeline: orbits, generators, operators and basis.
struct HeckeSystem {
    OrbitsModP orbits;
    HeckeGroup group;
    HeckeOperators ops;
    HeckeBasis basis;
};
HeckeSystem build_hecke_system(const IntSymplectic& A, u64 p, Backend backend = Backend::Parallel);

}  // namespace torusq
