#pragma once

#include <string>
#include <vector>

#include "torusq/common.hpp"
#include "torusq/exact.hpp"

namespace torusq {

using IMat = std::vector<std::vector<i64>>;

/// omega(m, n) = m1.n2 - m2.n1 for vectors of even length 2d.
i64 omega(const IVec& m, const IVec& n);

IMat identity(int n);
IMat matmul(const IMat& a, const IMat& b);
IMat matmul_mod(const IMat& a, const IMat& b, i64 N);
IMat reduce_mod(const IMat& a, i64 N);
/// Row action n -> n M.
IVec act(const IVec& n, const IMat& M);
IVec act_mod(const IVec& n, const IMat& M, i64 N);
IVec reduce_mod(const IVec& n, i64 N);
IMat transpose(const IMat& a);
/// The 2d x 2d matrix [[0, I], [-I, 0]].
IMat standard_j(int d);
/// M J M^T == J, over Z (N = 0) or mod N.
bool is_symplectic(const IMat& M, i64 N = 0);

/// An integer symplectic matrix in Sp(2d, Z) acting on frequency vectors from the right.
class IntSymplectic {
public:
    IntSymplectic(int d, IMat entries);

    int d() const { return d_; }
    int size() const { return 2 * d_; }
    const IMat& entries() const { return a_; }
    i64 at(int i, int j) const { return a_[i][j]; }
    IVec act(const IVec& n) const { return torusq::act(n, a_); }
    /// Parity condition: diagonals of E F^T and G H^T even for A = [[E, F], [G, H]].
    bool theta_flag() const;
    IntPoly char_poly() const;
    IntSymplectic inverse() const;
    std::string str() const;

private:
    int d_;
    IMat a_;
};

/// Smallest s >= 1 with A^s = I mod N.
u64 ord_mod(const IMat& A, i64 N, u64 cap = 100000000ULL);

}  // namespace torusq
