#pragma once

#include <string>
#include <vector>

#include "torusq/common.hpp"
#include "torusq/rational_structure.hpp"
#include "torusq/symplectic.hpp"

namespace torusq {

/// Serial reference kernels or their OpenMP counterparts.
enum class Backend { Serial, Parallel };

/// L^2((Z/N)^d), indexed by sum_i x_i N^i.
struct HilbertSpace {
    int N;
    int d;
    i64 dim;

    HilbertSpace(int N, int d);
    IVec coords(i64 idx) const;
    i64 index(const IVec& x) const;
    /// exp(2 pi i k / (2N)).
    cplx root(i64 k) const { return roots_[static_cast<size_t>(mod(k, 2 * N))]; }

private:
    std::vector<cplx> roots_;
};

/// Generalized permutation matrix: (S psi)(y) = phase[y] psi(col[y]).
struct SparseOp {
    std::vector<i64> col;
    std::vector<cplx> phase;

    /// (this * o)
    SparseOp operator*(const SparseOp& o) const;
    CMatrix dense() const;
    CVector apply(const CVector& v) const;
    cplx trace() const;
    SparseOp adjoint() const;
};

/// T(n) (twisted) or its untwisted counterpart.
SparseOp elementary_op(const HilbertSpace& H, const IVec& n, bool twisted = true);
/// Op_N(f) = sum f(n) T_untwisted(n), dense.
CMatrix op_from_observable(const HilbertSpace& H, const Observable& f);

/// Quantization of [[I, F], [0, I]] for symmetric F.
CMatrix generator_shear(const HilbertSpace& H, const IMat& F);
/// Quantization of [[E^T, 0], [0, E^{-1}]] for E in GL(d, Z).
CMatrix generator_linear(const HilbertSpace& H, const IMat& E);
/// Quantization of [[0, I], [-I, 0]].
CMatrix generator_fourier(const HilbertSpace& H);
/// Block matrices corresponding to the three generators.
IMat shear_matrix(const IMat& F);
IMat linear_matrix(const IMat& E);
IMat fourier_matrix(int d);

/// One factor of a generator word: "shear" (block F), "linear" (block E) or "fourier".
struct WordStep {
    std::string gen;
    IMat block;
};
/// Product of the generator matrices in word order.
IMat matrix_from_word(int d, const std::vector<WordStep>& word);
/// Product of the generator quantizations in word order; works for every N.
CMatrix propagator_from_word(const HilbertSpace& H, const std::vector<WordStep>& word);

/// |{n mod N : n (A - I) = 0 mod N}|.
i64 kernel_count(const IMat& A, i64 N);

struct Propagator {
    CMatrix U;
    /// N^{2d} |ker(A - I)|.
    double c2_expected = 0;
    /// ||F||_F^2 / dim.
    double c2_measured = 0;
};

/// sum_{n mod N} T(n) T(-nA) for odd N.
CMatrix averaging_sum(const HilbertSpace& H, const IMat& A, Backend backend = Backend::Parallel);
/// Normalized averaging propagator; checks |c|^2 to relative 1e-8.
Propagator propagator_averaging(const HilbertSpace& H, const IMat& A, Backend backend = Backend::Parallel);

/// ||U T(nA) - T(n) U||_max.
double intertwining_error(const HilbertSpace& H, const CMatrix& U, const IMat& A, const IVec& n);
/// Max intertwining error over all n (when affordable) or unit vectors plus a seeded sample.
double egorov_deviation(const HilbertSpace& H, const CMatrix& U, const IMat& A, int samples = 48,
                        double budget = 2e8);

/// (psi_i, T(n) psi_i) for every column, with the (1/N^d)-normalized states.
std::vector<cplx> diagonal_elements(const SparseOp& T, const CMatrix& basis, Backend backend = Backend::Parallel);

}  // namespace torusq
