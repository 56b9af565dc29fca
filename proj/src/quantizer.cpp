#include "torusq/quantizer.hpp"

#include <random>

namespace torusq {

HilbertSpace::HilbertSpace(int N_, int d_) : N(N_), d(d_), dim(1) {
    if (N < 2) throw InputError("BadN", "N must be >= 2");
    if (d < 1 || d > 4) throw InputError("BadDimension", "d must be in 1..4");
    for (int i = 0; i < d; ++i) {
        dim *= N;
        if (dim > 50000000) throw InputError("TooLarge", "Hilbert space dimension too large");
    }
    roots_.resize(2 * N);
    for (int k = 0; k < 2 * N; ++k) roots_[k] = std::polar(1.0, kTwoPi * k / (2.0 * N));
}

IVec HilbertSpace::coords(i64 idx) const {
    IVec x(d);
    for (int i = 0; i < d; ++i) {
        x[i] = idx % N;
        idx /= N;
    }
    return x;
}

i64 HilbertSpace::index(const IVec& x) const {
    i64 r = 0;
    for (int i = d - 1; i >= 0; --i) r = r * N + mod(x[i], N);
    return r;
}

// ---- SparseOp ---------------------------------------------------------------

SparseOp SparseOp::operator*(const SparseOp& o) const {
    SparseOp r;
    size_t n = col.size();
    r.col.resize(n);
    r.phase.resize(n);
    for (size_t y = 0; y < n; ++y) {
        i64 c = col[y];
        r.col[y] = o.col[c];
        r.phase[y] = phase[y] * o.phase[c];
    }
    return r;
}

CMatrix SparseOp::dense() const {
    i64 n = static_cast<i64>(col.size());
    CMatrix M = CMatrix::Zero(n, n);
    for (i64 y = 0; y < n; ++y) M(y, col[y]) = phase[y];
    return M;
}

CVector SparseOp::apply(const CVector& v) const {
    i64 n = static_cast<i64>(col.size());
    CVector r(n);
    for (i64 y = 0; y < n; ++y) r(y) = phase[y] * v(col[y]);
    return r;
}

cplx SparseOp::trace() const {
    cplx s = 0;
    for (size_t y = 0; y < col.size(); ++y)
        if (col[y] == static_cast<i64>(y)) s += phase[y];
    return s;
}

SparseOp SparseOp::adjoint() const {
    SparseOp r;
    size_t n = col.size();
    r.col.resize(n);
    r.phase.resize(n);
    for (size_t y = 0; y < n; ++y) {
        r.col[col[y]] = static_cast<i64>(y);
        r.phase[col[y]] = std::conj(phase[y]);
    }
    return r;
}

// ---- elementary operators ---------------------------------------------------

namespace {

// Phase exponent (mod 2N) and shift of T(n) at row y.
struct RowAction {
    i64 k;
    i64 col;
};

inline RowAction row_action(const HilbertSpace& H, const IVec& n, i64 base_k, const IVec& y) {
    const i64 twoN = 2 * H.N;
    i64 k = base_k;
    i64 c = 0, stride = 1;
    for (int i = 0; i < H.d; ++i) {
        k += 2 * mod(n[H.d + i], twoN) * y[i];
        c += mod(y[i] + n[i], H.N) * stride;
        stride *= H.N;
    }
    return {mod(k, twoN), c};
}

inline i64 base_exponent(const HilbertSpace& H, const IVec& n, bool twisted) {
    const i64 twoN = 2 * H.N;
    i64 s = 0;
    for (int i = 0; i < H.d; ++i) s = mod(s + mod(n[i], twoN) * mod(n[H.d + i], twoN), twoN);
    i64 c = twisted ? mod(1 + static_cast<i64>(H.N) * H.N, twoN) : 1;
    return mod(s * c, twoN);
}

}  // namespace

SparseOp elementary_op(const HilbertSpace& H, const IVec& n, bool twisted) {
    if (static_cast<int>(n.size()) != 2 * H.d) throw InputError("BadShape", "n must have length 2d");
    SparseOp T;
    T.col.resize(H.dim);
    T.phase.resize(H.dim);
    i64 bk = base_exponent(H, n, twisted);
    for (i64 y = 0; y < H.dim; ++y) {
        auto ra = row_action(H, n, bk, H.coords(y));
        T.col[y] = ra.col;
        T.phase[y] = H.root(ra.k);
    }
    return T;
}

CMatrix op_from_observable(const HilbertSpace& H, const Observable& f) {
    CMatrix M = CMatrix::Zero(H.dim, H.dim);
    for (size_t i = 0; i < f.n.size(); ++i) {
        SparseOp T = elementary_op(H, f.n[i], false);
        for (i64 y = 0; y < H.dim; ++y) M(y, T.col[y]) += f.c[i] * T.phase[y];
    }
    return M;
}

// ---- generators -------------------------------------------------------------

IMat shear_matrix(const IMat& F) {
    int d = static_cast<int>(F.size());
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (F[i][j] != F[j][i]) throw InputError("NonSymmetricF", "shear block must be symmetric");
    IMat M = identity(2 * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) M[i][d + j] = F[i][j];
    return M;
}

IMat linear_matrix(const IMat& E) {
    int d = static_cast<int>(E.size());
    IMat M(2 * d, std::vector<i64>(2 * d, 0));
    ZMat Ez = to_z(E);
    BigInt det = det_bareiss(Ez);
    if (det != 1 && det != -1) throw InputError("NotUnimodular", "E must have determinant +-1");
    IMat inv(d, std::vector<i64>(d, 0));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            ZMat minor;
            for (int r = 0; r < d; ++r) {
                if (r == j) continue;
                ZVec row;
                for (int c = 0; c < d; ++c)
                    if (c != i) row.push_back(E[r][c]);
                minor.push_back(row);
            }
            BigInt cof = det_bareiss(minor) * (((i + j) % 2 == 0) ? 1 : -1);
            inv[i][j] = static_cast<i64>(cof * det);
        }
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            M[i][j] = E[j][i];
            M[d + i][d + j] = inv[i][j];
        }
    return M;
}

IMat fourier_matrix(int d) { return standard_j(d); }

CMatrix generator_shear(const HilbertSpace& H, const IMat& F) {
    shear_matrix(F);
    const i64 twoN = 2 * H.N;
    i64 c = mod(1 + static_cast<i64>(H.N) * H.N, twoN);
    CMatrix U = CMatrix::Zero(H.dim, H.dim);
    for (i64 y = 0; y < H.dim; ++y) {
        IVec x = H.coords(y);
        i64 q = 0;
        for (int i = 0; i < H.d; ++i)
            for (int j = 0; j < H.d; ++j) q = mod(q + x[i] * mod(F[i][j], twoN) % twoN * x[j], twoN);
        U(y, y) = H.root(q * c);
    }
    return U;
}

CMatrix generator_linear(const HilbertSpace& H, const IMat& E) {
    linear_matrix(E);
    CMatrix U = CMatrix::Zero(H.dim, H.dim);
    for (i64 y = 0; y < H.dim; ++y) {
        IVec x = H.coords(y);
        IVec ex(H.d, 0);
        for (int i = 0; i < H.d; ++i)
            for (int j = 0; j < H.d; ++j) ex[i] += E[i][j] * x[j];
        U(y, H.index(ex)) = 1.0;
    }
    return U;
}

CMatrix generator_fourier(const HilbertSpace& H) {
    CMatrix U(H.dim, H.dim);
    double s = std::pow(static_cast<double>(H.N), -H.d / 2.0);
    for (i64 a = 0; a < H.dim; ++a) {
        IVec x = H.coords(a);
        for (i64 b = 0; b < H.dim; ++b) {
            IVec y = H.coords(b);
            i64 k = 0;
            for (int i = 0; i < H.d; ++i) k += x[i] * y[i];
            U(a, b) = s * H.root(2 * mod(k, H.N));
        }
    }
    return U;
}

// ---- averaging --------------------------------------------------------------

namespace {

IMat step_matrix(int d, const WordStep& s) {
    if (s.gen == "shear") return shear_matrix(s.block);
    if (s.gen == "linear") return linear_matrix(s.block);
    if (s.gen == "fourier") return fourier_matrix(d);
    throw InputError("UnknownGenerator", "generator '" + s.gen + "'");
}

}  // namespace

IMat matrix_from_word(int d, const std::vector<WordStep>& word) {
    IMat M = identity(2 * d);
    for (const auto& s : word) M = matmul(M, step_matrix(d, s));
    return M;
}

CMatrix propagator_from_word(const HilbertSpace& H, const std::vector<WordStep>& word) {
    CMatrix U = CMatrix::Identity(H.dim, H.dim);
    for (const auto& s : word) {
        step_matrix(H.d, s);
        if (s.gen == "shear")
            U = U * generator_shear(H, s.block);
        else if (s.gen == "linear")
            U = U * generator_linear(H, s.block);
        else
            U = U * generator_fourier(H);
    }
    return U;
}

i64 kernel_count(const IMat& A, i64 N) {
    int n = static_cast<int>(A.size());
    IMat B = A;
    for (int i = 0; i < n; ++i) B[i][i] -= 1;
    i64 total = 1;
    for (int i = 0; i < n; ++i) total *= N;
    i64 count = 0;
    IVec v(n, 0);
    for (i64 t = 0; t < total; ++t) {
        i64 r = t;
        for (int i = 0; i < n; ++i) {
            v[i] = r % N;
            r /= N;
        }
        IVec w = act_mod(v, B, N);
        bool zero = true;
        for (auto x : w)
            if (x != 0) {
                zero = false;
                break;
            }
        if (zero) ++count;
    }
    return count;
}

namespace {

std::vector<IVec> all_vectors(int len, i64 N) {
    i64 total = 1;
    for (int i = 0; i < len; ++i) total *= N;
    std::vector<IVec> out;
    out.reserve(total);
    for (i64 t = 0; t < total; ++t) {
        IVec v(len);
        i64 r = t;
        for (int i = 0; i < len; ++i) {
            v[i] = r % N;
            r /= N;
        }
        out.push_back(v);
    }
    return out;
}

IVec negate_act(const IVec& n, const IMat& A, i64 N) {
    IVec m = act_mod(n, A, N);
    for (auto& x : m) x = mod(-x, N);
    return m;
}

}  // namespace

CMatrix averaging_sum(const HilbertSpace& H, const IMat& A, Backend backend) {
    if (H.N % 2 == 0) throw MathError("EvenN", "averaging construction needs odd N");
    const auto ns = all_vectors(2 * H.d, H.N);
    CMatrix F = CMatrix::Zero(H.dim, H.dim);
    if (backend == Backend::Serial) {
        for (const auto& n : ns) {
            SparseOp P = elementary_op(H, n) * elementary_op(H, negate_act(n, A, H.N));
            for (i64 y = 0; y < H.dim; ++y) F(y, P.col[y]) += P.phase[y];
        }
        return F;
    }
    const int d = H.d;
    const i64 N = H.N, twoN = 2 * N, dim = H.dim;
    const i64 nn = static_cast<i64>(ns.size());
    // Per term: shifts n1, m1 and doubled frequencies 2 n2, 2 m2, all reduced.
    std::vector<i64> sh(nn * 2 * d), fr(nn * 2 * d), k0(nn);
    for (i64 t = 0; t < nn; ++t) {
        IVec m = negate_act(ns[t], A, N);
        k0[t] = mod(base_exponent(H, ns[t], true) + base_exponent(H, m, true), twoN);
        for (int i = 0; i < d; ++i) {
            sh[t * 2 * d + i] = mod(ns[t][i], N);
            sh[t * 2 * d + d + i] = mod(m[i], N);
            fr[t * 2 * d + i] = mod(2 * ns[t][d + i], twoN);
            fr[t * 2 * d + d + i] = mod(2 * m[d + i], twoN);
        }
    }
#pragma omp parallel for schedule(static)
    for (i64 y = 0; y < dim; ++y) {
        i64 x[4] = {0, 0, 0, 0};
        for (i64 r = y, i = 0; i < d; ++i, r /= N) x[i] = r % N;
        for (i64 t = 0; t < nn; ++t) {
            const i64* s1 = &sh[t * 2 * d];
            const i64* f1 = &fr[t * 2 * d];
            i64 k = k0[t], col = 0, stride = 1;
            for (int i = 0; i < d; ++i) {
                i64 xs = x[i] + s1[i];
                if (xs >= N) xs -= N;
                i64 z = xs + s1[d + i];
                if (z >= N) z -= N;
                k += f1[i] * x[i] + f1[d + i] * xs;
                col += z * stride;
                stride *= N;
            }
            F(y, col) += H.root(k % twoN);
        }
    }
    return F;
}

Propagator propagator_averaging(const HilbertSpace& H, const IMat& A, Backend backend) {
    if (!is_symplectic(A, H.N)) throw InputError("NotSymplectic", "A is not symplectic mod N");
    Propagator P;
    CMatrix F = averaging_sum(H, A, backend);
    double n2d = std::pow(static_cast<double>(H.N), 2 * H.d);
    P.c2_expected = n2d * static_cast<double>(kernel_count(A, H.N));
    P.c2_measured = F.squaredNorm() / static_cast<double>(H.dim);
    if (std::abs(P.c2_measured - P.c2_expected) > 1e-8 * P.c2_expected)
        throw InvariantError("AveragingNormMismatch", "|c|^2 differs from N^{2d}|ker(A-I)|");
    P.U = F / std::sqrt(P.c2_expected);
    return P;
}

double intertwining_error(const HilbertSpace& H, const CMatrix& U, const IMat& A, const IVec& n) {
    i64 per = (H.N % 2 == 1) ? H.N : 2 * H.N;
    SparseOp Tn = elementary_op(H, n);
    SparseOp Tm = elementary_op(H, act_mod(n, A, per));
    // (U Tm)[i, c] = U[i, r] ph[r] with col[r] = c
    std::vector<i64> inv(H.dim);
    for (i64 r = 0; r < H.dim; ++r) inv[Tm.col[r]] = r;
    double err = 0;
    for (i64 c = 0; c < H.dim; ++c) {
        i64 r = inv[c];
        for (i64 i = 0; i < H.dim; ++i) {
            cplx lhs = U(i, r) * Tm.phase[r];
            cplx rhs = Tn.phase[i] * U(Tn.col[i], c);
            err = std::max(err, std::abs(lhs - rhs));
        }
    }
    return err;
}

double egorov_deviation(const HilbertSpace& H, const CMatrix& U, const IMat& A, int samples, double budget) {
    i64 per = (H.N % 2 == 1) ? H.N : 2 * H.N;
    int len = 2 * H.d;
    double total = std::pow(static_cast<double>(per), len);
    double cost = total * static_cast<double>(H.dim) * static_cast<double>(H.dim);
    std::vector<IVec> ns;
    if (cost <= budget) {
        ns = all_vectors(len, per);
    } else {
        for (int i = 0; i < len; ++i) {
            IVec e(len, 0);
            e[i] = 1;
            ns.push_back(e);
        }
        std::mt19937_64 rng(0xE60u + H.N);
        for (int s = 0; s < samples; ++s) {
            IVec v(len);
            for (auto& x : v) x = static_cast<i64>(rng() % per);
            ns.push_back(v);
        }
    }
    double err = 0;
    const i64 cnt = static_cast<i64>(ns.size());
#pragma omp parallel for reduction(max : err) schedule(dynamic)
    for (i64 t = 0; t < cnt; ++t) err = std::max(err, intertwining_error(H, U, A, ns[t]));
    return err;
}

std::vector<cplx> diagonal_elements(const SparseOp& T, const CMatrix& basis, Backend backend) {
    const i64 dim = basis.rows();
    const i64 m = basis.cols();
    std::vector<cplx> out(m);
    auto one = [&](i64 j) {
        cplx s = 0;
        for (i64 y = 0; y < dim; ++y) s += T.phase[y] * basis(T.col[y], j) * std::conj(basis(y, j));
        out[j] = s;
    };
    if (backend == Backend::Serial) {
        for (i64 j = 0; j < m; ++j) one(j);
    } else {
#pragma omp parallel for schedule(static)
        for (i64 j = 0; j < m; ++j) one(j);
    }
    return out;
}

}  // namespace torusq
