#pragma once

#include <vector>

#include "torusq/quantizer.hpp"
#include "torusq/rational_structure.hpp"

namespace torusq {

/// Orthonormal columns spanning {psi : T_p(z) psi = psi for all z in the rows of z0}.
CMatrix joint_fixed_space(const HilbertSpace& H, const ZMat& z0);

struct ScarState {
    u64 p = 0;
    int d = 0;
    ScarManifold manifold;
    CVector psi;
    i64 joint_dim = 0;
    /// max ||(I - P) U(g) P|| over Hecke generators; negative when the check was skipped.
    double hecke_leak = -1;
};

/// Dense Hecke operators are only formed up to this dimension.
inline constexpr i64 kScarDenseLimit = 400;

/// Joint eigenvector of T_p(Z0) (eigenvalue 1) and of the Hecke generators.
ScarState build_scar(const IntSymplectic& A, const ScarManifold& S, u64 p, Backend backend = Backend::Parallel);

/// Sum of the partner orbits of the orbits inside E0.
ZMat partner_subspace(const OrbitDecomposition& D, const ZMat& e0);

enum class ScarClass { InZ0, InComplement, Generic };
const char* scar_class_name(ScarClass c);

struct ScarValue {
    IVec n;
    ScarClass cls;
    cplx value;
};

struct ScarSpectrum {
    std::vector<ScarValue> values;
    double z0_deviation = 0;
    double complement_max = 0;
    /// max p^{1/4} |value| over generic n.
    double generic_constant = 0;
};

/// All n in [-radius, radius]^{2d}.
std::vector<IVec> box(int d, int radius);

ScarSpectrum scar_spectrum(const ScarState& s, const ZMat& complement, const std::vector<IVec>& ns);

/// |<Op_p(f) psi, psi> - integral of f over X0|.
double scar_measure_deviation(const ScarState& s, const Observable& f);

}  // namespace torusq
