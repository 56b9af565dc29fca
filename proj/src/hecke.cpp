#include "torusq/hecke.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace torusq {

namespace {

using FMat = std::vector<FVec>;

FVec frob_vec(const FVec& v, int i) {
    FVec r;
    for (auto& x : v) r.push_back(x.frobenius(i));
    return r;
}

}  // namespace

FieldElement omega_field(const FVec& a, const FVec& b) {
    size_t d = a.size() / 2;
    FieldElement s = a[0].field().zero();
    for (size_t i = 0; i < d; ++i) s = s + a[i] * b[d + i] - a[d + i] * b[i];
    return s;
}

FieldElement omega_field(const IVec& n, const FVec& b) {
    size_t d = n.size() / 2;
    ExtField F = b[0].field();
    FieldElement s = F.zero();
    for (size_t i = 0; i < d; ++i) s = s + F.from_int(n[i]) * b[d + i] - F.from_int(n[d + i]) * b[i];
    return s;
}

FVec left_eigenvector_mod_p(const IMat& M, const FieldElement& mu) {
    ExtField F = mu.field();
    size_t n = M.size();
    // rows of B = (M - mu I)^T; solve B x = 0
    FMat B(n, FVec(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            B[i][j] = F.from_int(M[j][i]);
            if (i == j) B[i][j] = B[i][j] - mu;
        }
    std::vector<int> piv;
    size_t r = 0;
    for (size_t c = 0; c < n && r < n; ++c) {
        size_t s = r;
        while (s < n && B[s][c].is_zero()) ++s;
        if (s == n) continue;
        std::swap(B[s], B[r]);
        FieldElement inv = B[r][c].inverse();
        for (auto& x : B[r]) x = x * inv;
        for (size_t i = 0; i < n; ++i) {
            if (i == r || B[i][c].is_zero()) continue;
            FieldElement f = B[i][c];
            for (size_t j = 0; j < n; ++j) B[i][j] = B[i][j] - f * B[r][j];
        }
        piv.push_back(static_cast<int>(c));
        ++r;
    }
    if (piv.size() != n - 1) throw InvariantError("EigenspaceDimension", "eigenvalue mod p is not simple");
    size_t free_col = 0;
    while (std::find(piv.begin(), piv.end(), static_cast<int>(free_col)) != piv.end()) ++free_col;
    FVec v(n, F.zero());
    v[free_col] = F.one();
    for (size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -B[i][free_col];
    FieldElement lead;
    for (auto& x : v)
        if (!x.is_zero()) {
            lead = x;
            break;
        }
    FieldElement li = lead.inverse();
    for (auto& x : v) x = x * li;
    return v;
}

OrbitsModP frobenius_orbits_mod_p(const IntSymplectic& A, u64 p) {
    if (p == 2 || !is_prime(p)) throw MathError("BadPrime", std::to_string(p) + " is not an odd prime");
    PolyFp P = A.char_poly().to_fp(p);
    if (!is_squarefree(P)) throw MathError("BadPrime", "P_A mod " + std::to_string(p) + " has a repeated root");
    OrbitsModP out;
    out.p = p;
    out.d = A.d();
    auto factors = factor_squarefree(P);
    std::vector<bool> used(factors.size(), false);
    for (size_t i = 0; i < factors.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        FrobeniusOrbit o;
        o.factor = factors[i];
        o.partner_factor = reciprocal(factors[i]);
        o.symmetric = (o.partner_factor == o.factor);
        if (!o.symmetric) {
            auto it = std::find(factors.begin(), factors.end(), o.partner_factor);
            if (it == factors.end()) throw InvariantError("NoPartner", "reciprocal factor missing mod p");
            used[it - factors.begin()] = true;
        }
        o.field = ExtField(o.factor);
        int k = o.factor.degree();
        if (o.symmetric && k % 2 != 0) throw InvariantError("OddSymmetricOrbit", o.factor.str());
        o.d_theta = o.symmetric ? k / 2 : k;
        o.q = checked_pow(p, o.d_theta);
        FieldElement lam = o.field.gen();
        o.v = left_eigenvector_mod_p(A.entries(), lam);
        if (o.symmetric) {
            o.v_star = frob_vec(o.v, o.d_theta);
            o.group = CyclicGroup::norm_one(o.field);
        } else {
            o.v_star = left_eigenvector_mod_p(A.entries(), lam.inverse());
            o.group = CyclicGroup::multiplicative(o.field);
        }
        FieldElement w = omega_field(o.v, o.v_star);
        if (w.is_zero()) throw InvariantError("DegeneratePairing", "omega(v, v*) = 0 mod p");
        o.kappa = (o.field.from_int(2) * w).inverse();
        out.orbits.push_back(o);
    }
    return out;
}

u64 HeckeGroup::size() const {
    u64 s = 1;
    for (auto m : orders) s *= m;
    return s;
}

namespace {

IMat mat_pow_mod(IMat M, u64 e, i64 p) {
    IMat R = identity(static_cast<int>(M.size()));
    while (e) {
        if (e & 1) R = matmul_mod(R, M, p);
        M = matmul_mod(M, M, p);
        e >>= 1;
    }
    return R;
}

// I + sum (b_i - 1) (J w'^T) w / omega(w, w')
void add_projector(FMat& B, const FVec& w, const FVec& wp, const FieldElement& b) {
    size_t n = w.size(), d = n / 2;
    FieldElement scale = (b - b.field().one()) / omega_field(w, wp);
    for (size_t r = 0; r < n; ++r) {
        FieldElement jw = r < d ? wp[d + r] : -wp[r - d];
        if (jw.is_zero()) continue;
        FieldElement f = jw * scale;
        for (size_t c = 0; c < n; ++c) B[r][c] = B[r][c] + f * w[c];
    }
}

}  // namespace

HeckeGroup hecke_generators(const IntSymplectic& A, const OrbitsModP& orbits) {
    HeckeGroup G;
    G.p = orbits.p;
    const i64 p = static_cast<i64>(orbits.p);
    const size_t n = A.size();
    for (auto& o : orbits.orbits) {
        ExtField F = o.field;
        FMat B(n, FVec(n, F.zero()));
        for (size_t i = 0; i < n; ++i) B[i][i] = F.one();
        const FieldElement& beta = o.group.generator();
        int k = o.field.degree();
        if (o.symmetric) {
            for (int i = 0; i < k; ++i) add_projector(B, frob_vec(o.v, i), frob_vec(o.v_star, i), beta.frobenius(i));
        } else {
            FieldElement binv = beta.inverse();
            for (int i = 0; i < k; ++i) {
                add_projector(B, frob_vec(o.v, i), frob_vec(o.v_star, i), beta.frobenius(i));
                add_projector(B, frob_vec(o.v_star, i), frob_vec(o.v, i), binv.frobenius(i));
            }
        }
        IMat g(n, std::vector<i64>(n));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                if (!B[i][j].in_prime_field()) throw InvariantError("NotRational", "Hecke generator not defined over F_p");
                g[i][j] = static_cast<i64>(B[i][j].prime_value());
            }
        if (!is_symplectic(g, p)) throw InvariantError("NotSymplectic", "Hecke generator not symplectic");
        if (matmul_mod(g, A.entries(), p) != matmul_mod(A.entries(), g, p))
            throw InvariantError("NotCommuting", "Hecke generator does not commute with A");
        u64 m = o.group.order();
        IMat I = identity(static_cast<int>(n));
        if (mat_pow_mod(g, m, p) != I) throw InvariantError("BadOrder", "g^m != I");
        for (u64 r : prime_factors(m))
            if (mat_pow_mod(g, m / r, p) == I) throw InvariantError("BadOrder", "order of g is a proper divisor of m");
        G.generators.push_back(g);
        G.orders.push_back(m);
    }
    return G;
}

u64 centralizer_count_bruteforce(const IMat& A, u64 p) {
    const i64 P = static_cast<i64>(p);
    const size_t n = A.size(), nn = n * n;
    std::vector<std::vector<i64>> M(nn, std::vector<i64>(nn, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            auto& row = M[i * n + j];
            for (size_t k = 0; k < n; ++k) {
                row[i * n + k] = mod(row[i * n + k] + A[k][j], P);
                row[k * n + j] = mod(row[k * n + j] - A[i][k], P);
            }
        }
    std::vector<size_t> piv;
    size_t r = 0;
    for (size_t c = 0; c < nn && r < nn; ++c) {
        size_t s = r;
        while (s < nn && M[s][c] == 0) ++s;
        if (s == nn) continue;
        std::swap(M[s], M[r]);
        i64 inv = static_cast<i64>(invmod(static_cast<u64>(M[r][c]), p));
        for (auto& x : M[r]) x = x * inv % P;
        for (size_t i = 0; i < nn; ++i) {
            if (i == r || M[i][c] == 0) continue;
            i64 f = M[i][c];
            for (size_t j = 0; j < nn; ++j) M[i][j] = mod(M[i][j] - f * M[r][j], P);
        }
        piv.push_back(c);
        ++r;
    }
    std::vector<IVec> basis;
    for (size_t f = 0; f < nn; ++f) {
        if (std::find(piv.begin(), piv.end(), f) != piv.end()) continue;
        IVec v(nn, 0);
        v[f] = 1;
        for (size_t i = 0; i < piv.size(); ++i) v[piv[i]] = mod(-M[i][f], P);
        basis.push_back(v);
    }
    size_t k = basis.size();
    double total_d = std::pow(static_cast<double>(p), static_cast<double>(k));
    if (total_d > 5e7) throw InputError("TooLarge", "centralizer enumeration too large");
    u64 total = static_cast<u64>(std::llround(total_d));
    u64 count = 0;
    std::vector<i64> coef(k, 0);
    for (u64 t = 0; t < total; ++t) {
        u64 rem = t;
        for (size_t i = 0; i < k; ++i) {
            coef[i] = static_cast<i64>(rem % p);
            rem /= p;
        }
        IMat X(n, std::vector<i64>(n, 0));
        for (size_t b = 0; b < k; ++b) {
            if (coef[b] == 0) continue;
            for (size_t e = 0; e < nn; ++e) X[e / n][e % n] = (X[e / n][e % n] + coef[b] * basis[b][e]) % P;
        }
        if (is_symplectic(X, P)) ++count;
    }
    return count;
}

namespace {

CMatrix mat_pow(CMatrix M, u64 e) {
    CMatrix R = CMatrix::Identity(M.rows(), M.cols());
    while (e) {
        if (e & 1) R = R * M;
        e >>= 1;
        if (e) M = M * M;
    }
    return R;
}

}  // namespace

HeckeOperators hecke_operators(const IntSymplectic& A, const OrbitsModP& orbits, const HeckeGroup& G, Backend backend) {
    HeckeOperators out;
    HilbertSpace H(static_cast<int>(orbits.p), orbits.d);
    for (size_t t = 0; t < G.generators.size(); ++t) {
        const auto& o = orbits.orbits[t];
        Propagator P = propagator_averaging(H, G.generators[t], backend);
        double target = std::pow(static_cast<double>(orbits.p), orbits.d - o.d_theta) * (o.symmetric ? 1.0 : -1.0);
        cplx tr = P.U.trace();
        if (std::abs(std::abs(tr) - std::abs(target)) > 1e-8 * std::abs(target))
            throw InvariantError("TraceMismatch", "|Tr U(g)| != p^{d - d_theta}");
        CMatrix U = P.U * (target / tr);
        CMatrix Um = mat_pow(U, G.orders[t]);
        if ((Um - CMatrix::Identity(H.dim, H.dim)).cwiseAbs().maxCoeff() > 1e-8)
            throw InvariantError("NotARepresentation", "U(g)^m != I after the trace normalization");
        out.U.push_back(U);
        out.orders.push_back(G.orders[t]);
    }
    out.UA = propagator_averaging(H, reduce_mod(A.entries(), static_cast<i64>(orbits.p)), backend).U;
    return out;
}

bool HeckeBasis::carries_quad(size_t i) const {
    for (size_t t = 0; t < orders.size(); ++t)
        if (!symmetric[t] && labels[i][t] == quad_label[t]) return true;
    return false;
}

HeckeBasis hecke_diagonalize(const HeckeOperators& ops, const std::vector<bool>& symmetric, u64 p, int d) {
    HeckeBasis B;
    B.p = p;
    B.d = d;
    B.orders = ops.orders;
    B.symmetric = symmetric;
    const i64 dim = ops.U.empty() ? 0 : ops.U[0].rows();
    struct Cluster {
        CMatrix W;
        std::vector<int> labels;
    };
    std::vector<Cluster> clusters{{CMatrix::Identity(dim, dim), {}}};
    for (size_t t = 0; t < ops.U.size(); ++t) {
        const double m = static_cast<double>(ops.orders[t]);
        std::vector<Cluster> next;
        for (auto& c : clusters) {
            CMatrix R = c.W.adjoint() * ops.U[t] * c.W;
            Eigen::ComplexSchur<CMatrix> schur(R);
            CMatrix Q = schur.matrixU();
            const CMatrix& T = schur.matrixT();
            CMatrix W = c.W * Q;
            std::map<int, std::vector<i64>> groups;
            for (i64 i = 0; i < T.rows(); ++i) {
                cplx lam = T(i, i);
                double a = std::arg(lam);
                int j = static_cast<int>(mod(static_cast<i64>(std::llround(a * m / kTwoPi)), static_cast<i64>(m)));
                if (std::abs(lam - std::polar(1.0, kTwoPi * j / m)) > 1e-6)
                    throw InvariantError("EigenvalueOffLattice", "Hecke eigenvalue is not an m-th root of unity");
                groups[j].push_back(i);
            }
            for (i64 i = 0; i < T.rows(); ++i)
                for (i64 k = i + 1; k < T.rows(); ++k)
                    if (std::abs(T(i, k)) > 1e-6) throw InvariantError("NotNormal", "restricted operator is not normal");
            for (auto& [j, idx] : groups) {
                Cluster nc;
                nc.W.resize(dim, static_cast<i64>(idx.size()));
                for (size_t s = 0; s < idx.size(); ++s) nc.W.col(s) = W.col(idx[s]);
                nc.labels = c.labels;
                nc.labels.push_back(j);
                next.push_back(std::move(nc));
            }
        }
        clusters = std::move(next);
    }
    CMatrix V(dim, dim);
    i64 col = 0;
    for (auto& c : clusters) {
        for (i64 s = 0; s < c.W.cols(); ++s) {
            V.col(col++) = c.W.col(s);
            B.labels.push_back(c.labels);
        }
        B.multiplicity[c.labels] += static_cast<int>(c.W.cols());
    }
    Eigen::HouseholderQR<CMatrix> qr(V);
    CMatrix Q = qr.householderQ() * CMatrix::Identity(dim, dim);
    for (i64 i = 0; i < dim; ++i) {
        cplx ov = Q.col(i).dot(V.col(i));
        Q.col(i) *= ov / std::abs(ov);
    }
    B.vectors = Q;
    // quadratic label from the marginal dimensions
    for (size_t t = 0; t < ops.orders.size(); ++t) {
        std::vector<int> cnt(ops.orders[t], 0);
        for (auto& l : B.labels) cnt[l[t]]++;
        int quad = -1;
        if (symmetric[t]) {
            for (size_t j = 0; j < cnt.size(); ++j)
                if (cnt[j] == 0) quad = quad < 0 ? static_cast<int>(j) : -2;
        } else {
            int mx = *std::max_element(cnt.begin(), cnt.end());
            for (size_t j = 0; j < cnt.size(); ++j)
                if (cnt[j] == mx) quad = quad < 0 ? static_cast<int>(j) : -2;
        }
        B.quad_label.push_back(quad < 0 ? -1 : quad);
    }
    return B;
}

bool multiplicity_table_ok(const HeckeBasis& B, std::string* why) {
    size_t k = B.orders.size();
    for (auto q : B.quad_label)
        if (q < 0) {
            if (why) *why = "no distinguished quadratic label";
            return false;
        }
    std::vector<int> lab(k, 0);
    for (;;) {
        int expected = 1;
        for (size_t t = 0; t < k; ++t) {
            if (lab[t] != B.quad_label[t]) continue;
            if (B.symmetric[t])
                expected = 0;
            else if (expected)
                expected *= 2;
        }
        auto it = B.multiplicity.find(lab);
        int got = it == B.multiplicity.end() ? 0 : it->second;
        if (got != expected) {
            if (why) *why = "multiplicity mismatch";
            return false;
        }
        size_t pos = 0;
        while (pos < k) {
            if (++lab[pos] < static_cast<int>(B.orders[pos])) break;
            lab[pos] = 0;
            ++pos;
        }
        if (pos == k) break;
    }
    return true;
}

HeckeSystem build_hecke_system(const IntSymplectic& A, u64 p, Backend backend) {
    HeckeSystem S;
    S.orbits = frobenius_orbits_mod_p(A, p);
    S.group = hecke_generators(A, S.orbits);
    S.ops = hecke_operators(A, S.orbits, S.group, backend);
    std::vector<bool> sym;
    for (auto& o : S.orbits.orbits) sym.push_back(o.symmetric);
    S.basis = hecke_diagonalize(S.ops, sym, p, A.d());
    return S;
}

}  // namespace torusq
