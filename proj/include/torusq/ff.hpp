#pragma once

#include <memory>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "torusq/common.hpp"

namespace torusq {

// ---- prime field arithmetic -------------------------------------------------

u64 mulmod(u64 a, u64 b, u64 m);
u64 powmod(u64 a, u64 e, u64 m);
u64 invmod(u64 a, u64 m);
bool is_prime(u64 n);
std::vector<u64> primes_between(u64 lo, u64 hi);
std::vector<u64> prime_factors(u64 n);
/// Legendre symbol (a/p) for odd prime p, in {-1,0,1}.
int legendre(i64 a, u64 p);
/// Exponent x with g^x = a mod p (baby-step giant-step).
u64 discrete_log_mod_p(u64 g, u64 a, u64 p);
/// p^k, throws on overflow.
u64 checked_pow(u64 p, unsigned k);

// ---- polynomials over F_p ---------------------------------------------------

/// Dense polynomial over F_p, coefficients low to high, trimmed.
class PolyFp {
public:
    explicit PolyFp(u64 p = 2) : p_(p) {}
    PolyFp(u64 p, std::vector<u64> coeffs);
    static PolyFp monomial(u64 p, int deg, u64 c = 1);
    static PolyFp constant(u64 p, i64 c);

    u64 p() const { return p_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    u64 coeff(int i) const { return i >= 0 && i < static_cast<int>(c_.size()) ? c_[i] : 0; }
    u64 lead() const { return c_.empty() ? 0 : c_.back(); }
    const std::vector<u64>& coeffs() const { return c_; }
    bool is_monic() const { return !c_.empty() && c_.back() == 1; }

    PolyFp monic() const;
    PolyFp derivative() const;
    u64 eval(u64 x) const;
    std::string str(const char* var = "t") const;

    PolyFp operator+(const PolyFp& o) const;
    PolyFp operator-(const PolyFp& o) const;
    PolyFp operator*(const PolyFp& o) const;
    PolyFp operator%(const PolyFp& o) const;
    PolyFp operator/(const PolyFp& o) const;
    PolyFp scaled(u64 s) const;
    bool operator==(const PolyFp& o) const { return p_ == o.p_ && c_ == o.c_; }
    bool operator!=(const PolyFp& o) const { return !(*this == o); }
    /// Degree first, then coefficients from the top down.
    bool operator<(const PolyFp& o) const;

    static void divmod(const PolyFp& a, const PolyFp& b, PolyFp& q, PolyFp& r);

private:
    void trim();
    u64 p_;
    std::vector<u64> c_;
};

PolyFp gcd(PolyFp a, PolyFp b);
PolyFp powmod(const PolyFp& base, u64 e, const PolyFp& m);
bool is_irreducible(const PolyFp& f);
bool is_squarefree(const PolyFp& f);
/// Monic irreducible factors of a squarefree polynomial, sorted.
std::vector<PolyFp> factor_squarefree(const PolyFp& f);
/// Lowest monic irreducible of degree k (coefficients compared from the top down).
PolyFp find_irreducible(u64 p, int k);
/// Monic normalization of t^deg f(1/t); requires f(0) != 0.
PolyFp reciprocal(const PolyFp& f);

// ---- extension fields -------------------------------------------------------

class FieldElement;

/// F_p[t]/(m) for a monic irreducible m.
class ExtField {
public:
    struct Data {
        u64 p;
        int k;
        u64 q;
        PolyFp modulus;
    };

    ExtField() = default;
    explicit ExtField(const PolyFp& modulus);
    static ExtField standard(u64 p, int k);

    u64 p() const { return d_->p; }
    int degree() const { return d_->k; }
    u64 order() const { return d_->q; }
    const PolyFp& modulus() const { return d_->modulus; }
    bool operator==(const ExtField& o) const { return d_ == o.d_ || d_->modulus == o.d_->modulus; }

    FieldElement zero() const;
    FieldElement one() const;
    FieldElement from_int(i64 v) const;
    /// The class of t.
    FieldElement gen() const;
    FieldElement from_coeffs(std::vector<u64> c) const;
    FieldElement from_poly(const PolyFp& f) const;
    FieldElement from_index(u64 idx) const;
    /// Least-index generator of the multiplicative group.
    FieldElement primitive_element() const;

    const std::shared_ptr<const Data>& data() const { return d_; }

private:
    friend class FieldElement;
    explicit ExtField(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
    std::shared_ptr<const Data> d_;
};

class FieldElement {
public:
    FieldElement() = default;
    FieldElement(std::shared_ptr<const ExtField::Data> f, std::vector<u64> c);

    ExtField field() const;
    u64 p() const { return f_->p; }
    const std::vector<u64>& coeffs() const { return c_; }

    FieldElement operator+(const FieldElement& o) const;
    FieldElement operator-(const FieldElement& o) const;
    FieldElement operator-() const;
    FieldElement operator*(const FieldElement& o) const;
    FieldElement operator/(const FieldElement& o) const;
    FieldElement& operator+=(const FieldElement& o) { return *this = *this + o; }
    FieldElement& operator*=(const FieldElement& o) { return *this = *this * o; }
    bool operator==(const FieldElement& o) const { return c_ == o.c_; }
    bool operator!=(const FieldElement& o) const { return c_ != o.c_; }

    FieldElement inverse() const;
    FieldElement pow(u64 e) const;
    /// x^{p^i}
    FieldElement frobenius(int i = 1) const;
    bool is_zero() const;
    bool is_one() const;
    /// Sum c_i p^i; a bijection onto [0, q).
    u64 index() const;
    bool in_subfield(int s) const;
    bool in_prime_field() const { return in_subfield(1); }
    /// Value in [0,p) of an element of the prime field.
    u64 prime_value() const;
    /// Tr_{F_{p^s}/F_p}; the element must lie in F_{p^s}. s<=0 means the whole field.
    u64 trace(int s = 0) const;
    /// Norm from F_{p^k} down to F_{p^s}, s | k.
    FieldElement norm_to(int s) const;
    std::string str() const;

private:
    std::shared_ptr<const ExtField::Data> f_;
    std::vector<u64> c_;
};

/// e_{p^s}(x) = exp(2 pi i Tr(x)/p) for x in the subfield F_{p^s}.
cplx additive_character(const FieldElement& x, int s = 0);

/// A cyclic subgroup of F^*, materialized with its discrete-log table.
class CyclicGroup {
public:
    CyclicGroup() = default;
    /// F_{p^s}^* inside F (s | deg F; s<=0 means all of F^*).
    static CyclicGroup multiplicative(const ExtField& F, int s = 0);
    /// Kernel of the norm F_{q^2} -> F_q, of order q+1.
    static CyclicGroup norm_one(const ExtField& F);
    static CyclicGroup from_generator(const FieldElement& g, u64 order);

    u64 order() const { return elems_.size(); }
    const FieldElement& generator() const { return elems_.at(order() > 1 ? 1 : 0); }
    const FieldElement& element(u64 t) const { return elems_[t % order()]; }
    const std::vector<FieldElement>& elements() const { return elems_; }
    bool contains(const FieldElement& x) const;
    u64 dlog(const FieldElement& x) const;
    const ExtField& field() const { return F_; }

private:
    CyclicGroup(ExtField F) : F_(std::move(F)) {}
    ExtField F_;
    std::vector<FieldElement> elems_;
    std::unordered_map<u64, u64> log_;
};

/// chi_j(g^t) = exp(2 pi i j t / m) on a cyclic group of order m.
struct MultCharacter {
    u64 m;
    u64 j;
    cplx at_exponent(u64 t) const;
    bool is_trivial() const { return j % m == 0; }
    bool is_quadratic() const { return m % 2 == 0 && j % m == m / 2; }
};

}  // namespace torusq
