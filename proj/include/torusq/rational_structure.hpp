#pragma once

#include <map>
#include <optional>
#include <vector>

#include "torusq/common.hpp"
#include "torusq/exact.hpp"
#include "torusq/ff.hpp"
#include "torusq/symplectic.hpp"

namespace torusq {

/// Residue class in Z[t]/(P) for a monic P with P(0) = +-1.
class NumberRingElement {
public:
    NumberRingElement() = default;
    NumberRingElement(IntPoly modulus, IntPoly value);
    static NumberRingElement from_int(const IntPoly& modulus, i64 v);
    static NumberRingElement lambda(const IntPoly& modulus);

    const IntPoly& value() const { return v_; }
    const IntPoly& modulus() const { return m_; }
    bool is_zero() const { return v_.is_zero(); }

    NumberRingElement operator+(const NumberRingElement& o) const;
    NumberRingElement operator-(const NumberRingElement& o) const;
    NumberRingElement operator*(const NumberRingElement& o) const;
    NumberRingElement operator*(i64 s) const;
    bool operator==(const NumberRingElement& o) const { return v_ == o.v_ && m_ == o.m_; }
    bool operator<(const NumberRingElement& o) const { return v_ < o.v_; }

    /// Image under lambda -> lambda^{-1} (a ring automorphism when P is palindromic).
    NumberRingElement star() const;
    /// Substitute t -> x in Z[t]/(P) (x must be a root of P in the ring).
    NumberRingElement substitute(const NumberRingElement& x) const;
    /// Field norm to Z: determinant of the multiplication map.
    BigInt norm() const;
    /// Image in F_p[t]/(f) for an irreducible factor f of P mod p.
    FieldElement reduce(const ExtField& F) const;

private:
    IntPoly m_;
    IntPoly v_;
};

/// The inverse of lambda in Z[t]/(P): h(t) = (P(0) - P(t)) / (t P(0)).
NumberRingElement lambda_inverse(const IntPoly& P);

using RingVec = std::vector<NumberRingElement>;

struct RationalOrbit {
    IntPoly poly;
    bool symmetric = false;
    /// Index of the orbit of the inverse eigenvalues (self when symmetric).
    int partner = -1;
    /// Integer basis of the rational invariant subspace {n : n P(A) = 0}.
    ZMat basis;
    /// Left eigenvector of A for lambda over Z[lambda]/(P).
    RingVec v;
    /// Left eigenvector of A for lambda^{-1}, also over Z[lambda]/(P).
    RingVec v_star;
    int degree() const { return poly.degree(); }
};

struct OrbitDecomposition {
    IntPoly char_poly;
    BigInt discriminant;
    std::vector<RationalOrbit> orbits;
    bool aque = true;
    /// Isotropic invariant subspace (rows) when some orbit is nonsymmetric.
    ZMat witness;
};

/// Left eigenvector of A for the ring element mu (a root of the modulus).
RingVec left_eigenvector(const IMat& A, const NumberRingElement& mu);
/// omega(n, v) in the ring.
NumberRingElement omega_ring(const IVec& n, const RingVec& v);

OrbitDecomposition rational_orbit_decomposition(const IntSymplectic& A);
/// Q(n): one component per orbit; requires every orbit symmetric.
std::vector<NumberRingElement> quadratic_form_q(const OrbitDecomposition& D, const IVec& n);
/// Half the dimension of the smallest invariant symplectic subspace containing n.
int d_n_dimension(const OrbitDecomposition& D, const IVec& n);
/// Does n have a nonzero component in E_theta?
bool projects_to(const RationalOrbit& o, const IVec& n);

/// A finite trigonometric polynomial sum c_n e_n.
struct Observable {
    std::vector<IVec> n;
    std::vector<cplx> c;
    cplx mean() const;
};

struct SharpEntry {
    std::vector<NumberRingElement> nu;
    cplx value;
    int d_nu = 0;
    std::vector<IVec> support;
};

struct SharpResult {
    std::vector<SharpEntry> entries;
    /// Minimal d_nu over nonzero coefficients; nullopt when f is constant at this level.
    std::optional<int> d_f;
    double variance = 0.0;
};

/// Groups f-hat by Q(n) with the (-1)^{n1.n2} twist and evaluates V(f).
SharpResult sharp_coefficients(const OrbitDecomposition& D, const Observable& f, double tol = 1e-12);

struct ScarManifold {
    ZMat e0;
    /// HNF basis of E0 intersected with Z^{2d}.
    ZMat z0;
    /// Base point: z.x0 = z1.z2 / 2 for z in the basis of Z0.
    QVec x0;
};

/// Validates invariance and isotropy of E0 and builds Z0 and x0.
ScarManifold scar_manifold(const IntSymplectic& A, const ZMat& e0_rows);
bool in_z0(const ScarManifold& S, const IVec& n);
/// Integral of e_n over the translated subtorus X0.
cplx integral_over_x0(const ScarManifold& S, const IVec& n);

}  // namespace torusq
