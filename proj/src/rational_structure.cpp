#include "torusq/rational_structure.hpp"

#include <algorithm>
#include <cmath>

namespace torusq {

// ---- NumberRingElement ------------------------------------------------------

NumberRingElement::NumberRingElement(IntPoly modulus, IntPoly value)
    : m_(std::move(modulus)), v_(value.mod_monic(m_)) {}

NumberRingElement NumberRingElement::from_int(const IntPoly& modulus, i64 v) {
    return NumberRingElement(modulus, IntPoly(ZVec{v}));
}

NumberRingElement NumberRingElement::lambda(const IntPoly& modulus) {
    return NumberRingElement(modulus, IntPoly::x());
}

NumberRingElement NumberRingElement::operator+(const NumberRingElement& o) const {
    return NumberRingElement(m_, v_ + o.v_);
}

NumberRingElement NumberRingElement::operator-(const NumberRingElement& o) const {
    return NumberRingElement(m_, v_ - o.v_);
}

NumberRingElement NumberRingElement::operator*(const NumberRingElement& o) const {
    return NumberRingElement(m_, v_ * o.v_);
}

NumberRingElement NumberRingElement::operator*(i64 s) const {
    return NumberRingElement(m_, v_ * IntPoly(ZVec{s}));
}

NumberRingElement NumberRingElement::substitute(const NumberRingElement& x) const {
    NumberRingElement r = from_int(m_, 0);
    for (int i = v_.degree(); i >= 0; --i) r = r * x + NumberRingElement(m_, IntPoly(ZVec{v_.coeff(i)}));
    return r;
}

NumberRingElement lambda_inverse(const IntPoly& P) {
    BigInt c0 = P.coeff(0);
    if (c0 != 1 && c0 != -1) throw MathError("NotUnit", "lambda is not a unit for " + P.str());
    // (P(0) - P(t)) / t, times 1/P(0) = P(0)
    ZVec c;
    for (int i = 1; i <= P.degree(); ++i) c.push_back(-P.coeff(i) * c0);
    return NumberRingElement(P, IntPoly(c));
}

NumberRingElement NumberRingElement::star() const {
    NumberRingElement h = lambda_inverse(m_);
    NumberRingElement check = from_int(m_, 0);
    for (int i = m_.degree(); i >= 0; --i) check = check * h + NumberRingElement(m_, IntPoly(ZVec{m_.coeff(i)}));
    if (!check.is_zero()) throw MathError("NotSymmetric", "lambda^{-1} is not conjugate to lambda");
    return substitute(h);
}

BigInt NumberRingElement::norm() const {
    int k = m_.degree();
    ZMat M(k, ZVec(k, 0));
    IntPoly tj(ZVec{1});
    for (int j = 0; j < k; ++j) {
        IntPoly col = (v_ * tj).mod_monic(m_);
        for (int i = 0; i < k; ++i) M[i][j] = col.coeff(i);
        tj = tj * IntPoly::x();
    }
    return det_bareiss(M);
}

FieldElement NumberRingElement::reduce(const ExtField& F) const {
    PolyFp f = m_.to_fp(F.p());
    if (!(f % F.modulus()).is_zero()) throw InvariantError("NotAFactor", "orbit field modulus does not divide P");
    return F.from_poly(v_.to_fp(F.p()));
}

// ---- eigenvectors -----------------------------------------------------------

namespace {

using RingMat = std::vector<RingVec>;

NumberRingElement ring_det(const RingMat& M, const IntPoly& mod) {
    size_t n = M.size();
    if (n == 0) return NumberRingElement::from_int(mod, 1);
    if (n == 1) return M[0][0];
    NumberRingElement acc = NumberRingElement::from_int(mod, 0);
    for (size_t j = 0; j < n; ++j) {
        if (M[0][j].is_zero()) continue;
        RingMat minor;
        for (size_t i = 1; i < n; ++i) {
            RingVec row;
            for (size_t l = 0; l < n; ++l)
                if (l != j) row.push_back(M[i][l]);
            minor.push_back(row);
        }
        NumberRingElement t = M[0][j] * ring_det(minor, mod);
        acc = (j % 2 == 0) ? acc + t : acc - t;
    }
    return acc;
}

ZMat poly_at_matrix(const IntPoly& P, const IMat& A) {
    size_t n = A.size();
    ZMat R(n, ZVec(n, 0));
    for (int k = P.degree(); k >= 0; --k) {
        ZMat T(n, ZVec(n, 0));
        for (size_t i = 0; i < n; ++i)
            for (size_t l = 0; l < n; ++l)
                if (R[i][l] != 0)
                    for (size_t j = 0; j < n; ++j) T[i][j] += R[i][l] * A[l][j];
        for (size_t i = 0; i < n; ++i) T[i][i] += P.coeff(k);
        R = T;
    }
    return R;
}

}  // namespace

RingVec left_eigenvector(const IMat& A, const NumberRingElement& mu) {
    const IntPoly& mod = mu.modulus();
    size_t n = A.size();
    RingMat M(n, RingVec(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            M[i][j] = NumberRingElement::from_int(mod, A[i][j]);
            if (i == j) M[i][j] = M[i][j] - mu;
        }
    // row r of adj(M): adj[r][c] = (-1)^{r+c} det(M without row c, column r)
    for (size_t r = 0; r < n; ++r) {
        RingVec row(n);
        bool nonzero = false;
        for (size_t c = 0; c < n; ++c) {
            RingMat minor;
            for (size_t i = 0; i < n; ++i) {
                if (i == c) continue;
                RingVec mr;
                for (size_t j = 0; j < n; ++j)
                    if (j != r) mr.push_back(M[i][j]);
                minor.push_back(mr);
            }
            NumberRingElement det = ring_det(minor, mod);
            row[c] = ((r + c) % 2 == 0) ? det : det * -1;
            if (!row[c].is_zero()) nonzero = true;
        }
        if (nonzero) return row;
    }
    throw InvariantError("ZeroAdjugate", "eigenvalue is not simple");
}

NumberRingElement omega_ring(const IVec& n, const RingVec& v) {
    size_t d = n.size() / 2;
    const IntPoly& mod = v[0].modulus();
    NumberRingElement s = NumberRingElement::from_int(mod, 0);
    for (size_t i = 0; i < d; ++i) s = s + v[d + i] * n[i] - v[i] * n[d + i];
    return s;
}

namespace {

bool omega_ring_pair_zero(const RationalOrbit& o) {
    size_t d = o.v.size() / 2;
    NumberRingElement s = NumberRingElement::from_int(o.poly, 0);
    for (size_t i = 0; i < d; ++i) s = s + o.v[i] * o.v_star[d + i] - o.v[d + i] * o.v_star[i];
    return s.is_zero();
}

}  // namespace

// ---- decomposition ----------------------------------------------------------

OrbitDecomposition rational_orbit_decomposition(const IntSymplectic& A) {
    OrbitDecomposition D;
    D.char_poly = A.char_poly();
    if (!squarefree_over_q(D.char_poly)) throw MathError("RepeatedEigenvalues", D.char_poly.str());
    D.discriminant = discriminant(D.char_poly);
    auto factors = factor_over_z(D.char_poly);
    for (auto& f : factors) {
        RationalOrbit o;
        o.poly = f;
        ZMat PA = poly_at_matrix(f, A.entries());
        ZMat PAt(PA.size(), ZVec(PA.size()));
        for (size_t i = 0; i < PA.size(); ++i)
            for (size_t j = 0; j < PA.size(); ++j) PAt[i][j] = PA[j][i];
        o.basis = right_kernel(to_q(PAt));
        if (static_cast<int>(o.basis.size()) != f.degree())
            throw InvariantError("BadInvariantSubspace", "dim E_theta != deg P_theta");
        D.orbits.push_back(o);
    }
    for (size_t i = 0; i < D.orbits.size(); ++i) {
        IntPoly r = reciprocal(D.orbits[i].poly);
        for (size_t j = 0; j < D.orbits.size(); ++j)
            if (D.orbits[j].poly == r) D.orbits[i].partner = static_cast<int>(j);
        if (D.orbits[i].partner < 0) throw InvariantError("NoPartner", "reciprocal factor missing");
        auto& o = D.orbits[i];
        o.symmetric = (o.partner == static_cast<int>(i));
        NumberRingElement lam = NumberRingElement::lambda(o.poly);
        o.v = left_eigenvector(A.entries(), lam);
        if (o.symmetric) {
            o.v_star.clear();
            for (auto& x : o.v) o.v_star.push_back(x.star());
        } else {
            o.v_star = left_eigenvector(A.entries(), lambda_inverse(o.poly));
        }
        if (omega_ring_pair_zero(o)) throw InvariantError("DegeneratePairing", "omega(v, v*) = 0");
    }
    for (size_t i = 0; i < D.orbits.size(); ++i) {
        auto& o = D.orbits[i];
        if (o.symmetric) continue;
        D.aque = false;
        if (static_cast<int>(i) < o.partner)
            for (auto& row : o.basis) D.witness.push_back(row);
    }
    return D;
}

bool projects_to(const RationalOrbit& o, const IVec& n) {
    return !omega_ring(n, o.v_star).is_zero();
}

std::vector<NumberRingElement> quadratic_form_q(const OrbitDecomposition& D, const IVec& n) {
    std::vector<NumberRingElement> out;
    for (auto& o : D.orbits) {
        if (!o.symmetric) throw MathError("NonSymmetricOrbitPresent", "Q is defined only when every orbit is symmetric");
        out.push_back(omega_ring(n, o.v) * omega_ring(n, o.v_star));
    }
    return out;
}

int d_n_dimension(const OrbitDecomposition& D, const IVec& n) {
    int twice = 0;
    for (size_t i = 0; i < D.orbits.size(); ++i) {
        auto& o = D.orbits[i];
        if (o.symmetric) {
            if (projects_to(o, n)) twice += o.degree();
        } else if (static_cast<int>(i) < o.partner) {
            if (projects_to(o, n) || projects_to(D.orbits[o.partner], n)) twice += 2 * o.degree();
        }
    }
    return twice / 2;
}

cplx Observable::mean() const {
    cplx s = 0;
    for (size_t i = 0; i < n.size(); ++i)
        if (std::all_of(n[i].begin(), n[i].end(), [](i64 v) { return v == 0; })) s += c[i];
    return s;
}

namespace {

i64 dot_halves(const IVec& n) {
    size_t d = n.size() / 2;
    i64 s = 0;
    for (size_t i = 0; i < d; ++i) s += n[i] * n[d + i];
    return s;
}

bool is_zero_vec(const IVec& n) {
    return std::all_of(n.begin(), n.end(), [](i64 v) { return v == 0; });
}

}  // namespace

SharpResult sharp_coefficients(const OrbitDecomposition& D, const Observable& f, double tol) {
    struct KeyLess {
        bool operator()(const std::vector<NumberRingElement>& a, const std::vector<NumberRingElement>& b) const {
            for (size_t i = 0; i < a.size(); ++i) {
                if (a[i] < b[i]) return true;
                if (b[i] < a[i]) return false;
            }
            return false;
        }
    };
    std::map<std::vector<NumberRingElement>, SharpEntry, KeyLess> groups;
    for (size_t i = 0; i < f.n.size(); ++i) {
        if (is_zero_vec(f.n[i])) continue;
        auto key = quadratic_form_q(D, f.n[i]);
        auto& e = groups[key];
        if (e.nu.empty()) {
            e.nu = key;
            e.value = 0;
            for (size_t t = 0; t < key.size(); ++t)
                if (!key[t].is_zero()) e.d_nu += D.orbits[t].degree() / 2;
        }
        double sign = (mod(dot_halves(f.n[i]), 2) == 0) ? 1.0 : -1.0;
        e.value += sign * f.c[i];
        e.support.push_back(f.n[i]);
    }
    SharpResult R;
    for (auto& kv : groups) R.entries.push_back(kv.second);
    for (auto& e : R.entries)
        if (std::abs(e.value) > tol) R.d_f = R.d_f ? std::min(*R.d_f, e.d_nu) : e.d_nu;
    if (R.d_f)
        for (auto& e : R.entries)
            if (std::abs(e.value) > tol && e.d_nu == *R.d_f) R.variance += std::norm(e.value);
    return R;
}

// ---- scar manifold ----------------------------------------------------------

ScarManifold scar_manifold(const IntSymplectic& A, const ZMat& e0_rows) {
    if (e0_rows.empty()) throw InputError("EmptySubspace", "E0 needs at least one row");
    size_t n = A.size();
    for (auto& r : e0_rows)
        if (r.size() != n) throw InputError("BadShape", "E0 rows must have length 2d");
    QMat E = to_q(e0_rows);
    for (auto& r : e0_rows) {
        IVec v;
        for (auto& x : r) v.push_back(static_cast<i64>(x));
        IVec w = A.act(v);
        QVec qw(w.begin(), w.end());
        if (!in_row_span(E, qw)) throw MathError("NotInvariant", "E0 A is not contained in E0");
    }
    for (auto& a : e0_rows)
        for (auto& b : e0_rows) {
            IVec x, y;
            for (auto& v : a) x.push_back(static_cast<i64>(v));
            for (auto& v : b) y.push_back(static_cast<i64>(v));
            if (omega(x, y) != 0) throw MathError("NotIsotropic", "omega does not vanish on E0");
        }
    ScarManifold S;
    S.e0 = e0_rows;
    ZMat M = right_kernel(E);
    if (M.empty()) throw MathError("NotIsotropic", "E0 is the whole space");
    S.z0 = integer_kernel(M);
    QMat Zq = to_q(S.z0);
    QVec rhs;
    for (auto& z : S.z0) {
        BigInt s = 0;
        size_t d = n / 2;
        for (size_t i = 0; i < d; ++i) s += z[i] * z[d + i];
        rhs.push_back(Rational(s) / 2);
    }
    auto x0 = solve_particular(Zq, rhs);
    if (!x0) throw InvariantError("NoBasePoint", "inconsistent base point system");
    for (auto& v : *x0) {
        BigInt fl = numerator(v) / denominator(v);
        if (v < 0 && Rational(fl) != v) fl -= 1;
        v -= Rational(fl);
    }
    S.x0 = *x0;
    return S;
}

bool in_z0(const ScarManifold& S, const IVec& n) {
    QVec v(n.begin(), n.end());
    return in_row_span(to_q(S.e0), v);
}

cplx integral_over_x0(const ScarManifold& S, const IVec& n) {
    if (!in_z0(S, n)) return 0.0;
    Rational s = 0;
    for (size_t i = 0; i < n.size(); ++i) s += Rational(n[i]) * S.x0[i];
    BigInt num = numerator(s) % denominator(s);
    double frac = static_cast<double>(Rational(num, denominator(s)));
    return std::polar(1.0, kTwoPi * frac);
}

}  // namespace torusq
