#pragma once

#include <optional>
#include <string>
#include <vector>

#include "torusq/common.hpp"
#include "torusq/ff.hpp"

namespace torusq {

using ZVec = std::vector<BigInt>;
using QVec = std::vector<Rational>;
using ZMat = std::vector<ZVec>;
using QMat = std::vector<QVec>;

// ---- integer polynomials ----------------------------------------------------

/// Polynomial over Z, coefficients low to high, trimmed.
class IntPoly {
public:
    IntPoly() = default;
    explicit IntPoly(ZVec c);
    static IntPoly from_i64(const std::vector<i64>& c);
    static IntPoly x();

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const ZVec& coeffs() const { return c_; }
    BigInt coeff(int i) const { return i >= 0 && i < static_cast<int>(c_.size()) ? c_[i] : BigInt(0); }
    BigInt lead() const { return c_.empty() ? BigInt(0) : c_.back(); }
    bool is_monic() const { return !c_.empty() && c_.back() == 1; }
    BigInt eval(const BigInt& x) const;

    IntPoly operator+(const IntPoly& o) const;
    IntPoly operator-(const IntPoly& o) const;
    IntPoly operator*(const IntPoly& o) const;
    bool operator==(const IntPoly& o) const { return c_ == o.c_; }
    bool operator!=(const IntPoly& o) const { return c_ != o.c_; }
    bool operator<(const IntPoly& o) const;

    /// Quotient by a monic divisor if the division is exact.
    std::optional<IntPoly> divide_exact(const IntPoly& monic_divisor) const;
    /// Remainder modulo a monic polynomial.
    IntPoly mod_monic(const IntPoly& m) const;
    IntPoly derivative() const;
    PolyFp to_fp(u64 p) const;
    std::vector<i64> to_i64() const;
    std::string str(const char* var = "t") const;

private:
    void trim();
    ZVec c_;
};

/// Irreducible monic factors over Z of a monic polynomial, with repetition, sorted.
std::vector<IntPoly> factor_over_z(const IntPoly& P);
/// Monic normalization of t^deg f(1/t); requires f(0) = +-1 for an integer result.
IntPoly reciprocal(const IntPoly& f);
/// True iff gcd(P, P') over Q is constant.
bool squarefree_over_q(const IntPoly& P);
/// Resultant-free discriminant: det of the Sylvester matrix of P and P'.
BigInt discriminant(const IntPoly& P);
/// For palindromic P of degree 2d, the degree-d polynomial with P(t) = t^d R(t + 1/t).
IntPoly trace_polynomial(const IntPoly& P);

// ---- exact linear algebra ---------------------------------------------------

QMat to_q(const ZMat& m);
ZMat to_z(const std::vector<std::vector<i64>>& m);
/// Fraction-free (Bareiss) determinant.
BigInt det_bareiss(ZMat m);
size_t rank_q(const QMat& m);
/// Basis of {x : m x = 0}, one vector per free column, each scaled to a primitive integer vector.
ZMat right_kernel(const QMat& m);
/// A solution of m x = b with free variables set to zero, if consistent.
std::optional<QVec> solve_particular(const QMat& m, const QVec& b);
/// Row Hermite normal form of the row lattice (zero rows removed).
ZMat hnf_rows(ZMat rows);
/// Z-basis (row HNF) of {x in Z^n : m x = 0}.
ZMat integer_kernel(const ZMat& m);
/// Is v in the rational row span of rows?
bool in_row_span(const QMat& rows, const QVec& v);

}  // namespace torusq
