#include "torusq/scars.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "torusq/hecke.hpp"

namespace torusq {

namespace {

using SparseVec = std::map<i64, cplx>;

struct Shift {
    SparseOp T;
    std::vector<i64> inv;
};

SparseVec apply_sparse(const Shift& s, const SparseVec& v) {
    SparseVec r;
    for (auto& [x, a] : v) {
        i64 y = s.inv[x];
        r[y] += s.T.phase[y] * a;
    }
    return r;
}

// (1/p) sum_{a < p} T^a v
SparseVec average(const Shift& s, const SparseVec& v, u64 p) {
    SparseVec acc = v, w = v;
    for (u64 a = 1; a < p; ++a) {
        w = apply_sparse(s, w);
        for (auto& [x, b] : w) acc[x] += b;
    }
    SparseVec out;
    for (auto& [x, b] : acc)
        if (std::abs(b) > 1e-12 * static_cast<double>(p)) out[x] = b / static_cast<double>(p);
    return out;
}

IVec to_ivec(const ZVec& z) {
    IVec v;
    for (auto& x : z) v.push_back(static_cast<i64>(x));
    return v;
}

bool in_span(const ZMat& rows, const IVec& n) {
    if (rows.empty()) return false;
    return in_row_span(to_q(rows), QVec(n.begin(), n.end()));
}

bool is_zero(const IVec& n) {
    return std::all_of(n.begin(), n.end(), [](i64 x) { return x == 0; });
}

}  // namespace

CMatrix joint_fixed_space(const HilbertSpace& H, const ZMat& z0) {
    std::vector<Shift> shifts;
    for (auto& z : z0) {
        Shift s{elementary_op(H, to_ivec(z)), {}};
        s.inv = s.T.adjoint().col;
        shifts.push_back(std::move(s));
    }
    const u64 p = static_cast<u64>(H.N);
    std::vector<bool> seen(H.dim, false);
    std::vector<SparseVec> cols;
    for (i64 x = 0; x < H.dim; ++x) {
        if (seen[x]) continue;
        std::vector<i64> orbit{x};
        seen[x] = true;
        for (size_t k = 0; k < orbit.size(); ++k)
            for (auto& s : shifts) {
                i64 y = s.inv[orbit[k]];
                if (!seen[y]) {
                    seen[y] = true;
                    orbit.push_back(y);
                }
            }
        SparseVec v{{x, 1.0}};
        for (auto& s : shifts) v = average(s, v, p);
        if (v.empty()) continue;
        double nrm = 0;
        for (auto& [i, a] : v) nrm += std::norm(a);
        nrm = std::sqrt(nrm);
        for (auto& [i, a] : v) a /= nrm;
        cols.push_back(std::move(v));
    }
    CMatrix B = CMatrix::Zero(H.dim, static_cast<Eigen::Index>(cols.size()));
    for (size_t c = 0; c < cols.size(); ++c)
        for (auto& [i, a] : cols[c]) B(i, static_cast<Eigen::Index>(c)) = a;
    return B;
}

ScarState build_scar(const IntSymplectic& A, const ScarManifold& S, u64 p, Backend backend) {
    HilbertSpace H(static_cast<int>(p), A.d());
    CMatrix B = joint_fixed_space(H, S.z0);
    if (B.cols() == 0) throw MathError("EmptyJointEigenspace", "no joint fixed vector at p = " + std::to_string(p));
    ScarState st;
    st.p = p;
    st.d = A.d();
    st.manifold = S;
    st.joint_dim = B.cols();
    if (H.dim > kScarDenseLimit) {
        if (B.cols() != 1)
            throw InputError("TooLarge", "joint eigenspace of dimension > 1 needs dense Hecke operators");
        st.psi = B.col(0);
        return st;
    }
    auto orbits = frobenius_orbits_mod_p(A, p);
    auto ops = hecke_operators(A, orbits, hecke_generators(A, orbits), backend);
    std::vector<CMatrix> R;
    st.hecke_leak = 0;
    for (auto& U : ops.U) {
        CMatrix UB = U * B;
        CMatrix M = B.adjoint() * UB;
        st.hecke_leak = std::max(st.hecke_leak, (UB - B * M).cwiseAbs().maxCoeff());
        R.push_back(M);
    }
    if (st.hecke_leak > 1e-9) throw InvariantError("HeckeLeak", "joint eigenspace is not Hecke invariant");
    CMatrix C = CMatrix::Zero(B.cols(), B.cols());
    for (size_t t = 0; t < R.size(); ++t) C += std::sqrt(2.0 + static_cast<double>(t)) * R[t];
    Eigen::ComplexEigenSolver<CMatrix> es(C);
    CVector w = es.eigenvectors().col(0);
    w.normalize();
    for (auto& M : R)
        if ((M * w - (w.dot(M * w)) * w).norm() > 1e-9)
            throw InvariantError("NotJointEigenvector", "restricted Hecke operators not simultaneously diagonal");
    st.psi = B * w;
    return st;
}

ZMat partner_subspace(const OrbitDecomposition& D, const ZMat& e0) {
    QMat E = to_q(e0);
    ZMat out;
    for (auto& o : D.orbits) {
        bool inside = std::all_of(o.basis.begin(), o.basis.end(), [&](const ZVec& b) {
            return in_row_span(E, QVec(b.begin(), b.end()));
        });
        if (!inside) continue;
        for (auto& b : D.orbits[o.partner].basis) out.push_back(b);
    }
    return out;
}

const char* scar_class_name(ScarClass c) {
    switch (c) {
        case ScarClass::InZ0: return "in_Z0";
        case ScarClass::InComplement: return "in_complement";
        default: return "generic";
    }
}

std::vector<IVec> box(int d, int radius) {
    std::vector<IVec> out;
    IVec n(2 * d, -radius);
    for (;;) {
        out.push_back(n);
        size_t k = 0;
        while (k < n.size() && n[k] == radius) n[k++] = -radius;
        if (k == n.size()) break;
        ++n[k];
    }
    return out;
}

ScarSpectrum scar_spectrum(const ScarState& s, const ZMat& complement, const std::vector<IVec>& ns) {
    HilbertSpace H(static_cast<int>(s.p), s.d);
    ScarSpectrum out;
    const double scale = std::pow(static_cast<double>(s.p), 0.25);
    for (auto& n : ns) {
        cplx v = s.psi.dot(elementary_op(H, n).apply(s.psi));
        ScarClass c = ScarClass::Generic;
        if (is_zero(n) || in_z0(s.manifold, n))
            c = ScarClass::InZ0;
        else if (in_span(complement, n))
            c = ScarClass::InComplement;
        out.values.push_back({n, c, v});
        if (c == ScarClass::InZ0)
            out.z0_deviation = std::max(out.z0_deviation, std::abs(v - 1.0));
        else if (c == ScarClass::InComplement)
            out.complement_max = std::max(out.complement_max, std::abs(v));
        else
            out.generic_constant = std::max(out.generic_constant, scale * std::abs(v));
    }
    return out;
}

double scar_measure_deviation(const ScarState& s, const Observable& f) {
    HilbertSpace H(static_cast<int>(s.p), s.d);
    cplx quantum = 0, classical = 0;
    for (size_t i = 0; i < f.n.size(); ++i) {
        quantum += f.c[i] * s.psi.dot(elementary_op(H, f.n[i], false).apply(s.psi));
        classical += f.c[i] * (is_zero(f.n[i]) ? cplx(1.0) : integral_over_x0(s.manifold, f.n[i]));
    }
    return std::abs(quantum - classical);
}

}  // namespace torusq
