#include "torusq/symplectic.hpp"

#include <sstream>

namespace torusq {

i64 omega(const IVec& m, const IVec& n) {
    size_t d = m.size() / 2;
    i64 s = 0;
    for (size_t i = 0; i < d; ++i) s += m[i] * n[d + i] - m[d + i] * n[i];
    return s;
}

IMat identity(int n) {
    IMat r(n, std::vector<i64>(n, 0));
    for (int i = 0; i < n; ++i) r[i][i] = 1;
    return r;
}

IMat matmul(const IMat& a, const IMat& b) {
    size_t n = a.size(), m = b[0].size(), k = b.size();
    IMat r(n, std::vector<i64>(m, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t l = 0; l < k; ++l)
            for (size_t j = 0; j < m; ++j) {
                i64 t;
                if (__builtin_mul_overflow(a[i][l], b[l][j], &t) || __builtin_add_overflow(r[i][j], t, &r[i][j]))
                    throw InputError("Overflow", "integer matrix product overflow");
            }
    return r;
}

IMat reduce_mod(const IMat& a, i64 N) {
    IMat r = a;
    for (auto& row : r)
        for (auto& v : row) v = mod(v, N);
    return r;
}

IMat matmul_mod(const IMat& a, const IMat& b, i64 N) {
    size_t n = a.size(), m = b[0].size(), k = b.size();
    IMat r(n, std::vector<i64>(m, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t l = 0; l < k; ++l) {
            i64 x = mod(a[i][l], N);
            if (x == 0) continue;
            for (size_t j = 0; j < m; ++j)
                r[i][j] = static_cast<i64>((r[i][j] + static_cast<__int128>(x) * mod(b[l][j], N)) % N);
        }
    return r;
}

IVec act(const IVec& n, const IMat& M) {
    IVec r(M[0].size(), 0);
    for (size_t i = 0; i < n.size(); ++i)
        if (n[i] != 0)
            for (size_t j = 0; j < r.size(); ++j) r[j] += n[i] * M[i][j];
    return r;
}

IVec act_mod(const IVec& n, const IMat& M, i64 N) {
    IVec r(M[0].size(), 0);
    for (size_t i = 0; i < n.size(); ++i) {
        i64 x = mod(n[i], N);
        if (x == 0) continue;
        for (size_t j = 0; j < r.size(); ++j) r[j] = (r[j] + x * mod(M[i][j], N)) % N;
    }
    return r;
}

IVec reduce_mod(const IVec& n, i64 N) {
    IVec r(n);
    for (auto& v : r) v = mod(v, N);
    return r;
}

IMat transpose(const IMat& a) {
    IMat r(a[0].size(), std::vector<i64>(a.size()));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a[0].size(); ++j) r[j][i] = a[i][j];
    return r;
}

IMat standard_j(int d) {
    IMat J(2 * d, std::vector<i64>(2 * d, 0));
    for (int i = 0; i < d; ++i) {
        J[i][d + i] = 1;
        J[d + i][i] = -1;
    }
    return J;
}

bool is_symplectic(const IMat& M, i64 N) {
    int n = static_cast<int>(M.size());
    if (n % 2 != 0) return false;
    for (auto& row : M)
        if (static_cast<int>(row.size()) != n) return false;
    IMat J = standard_j(n / 2);
    IMat P = N ? matmul_mod(matmul_mod(M, J, N), transpose(M), N) : matmul(matmul(M, J), transpose(M));
    return N ? P == reduce_mod(J, N) : P == J;
}

IntSymplectic::IntSymplectic(int d, IMat entries) : d_(d), a_(std::move(entries)) {
    if (d < 1) throw InputError("BadDimension", "d must be >= 1");
    if (static_cast<int>(a_.size()) != 2 * d) throw InputError("BadShape", "matrix must be 2d x 2d");
    for (auto& row : a_)
        if (static_cast<int>(row.size()) != 2 * d) throw InputError("BadShape", "matrix must be 2d x 2d");
    if (!is_symplectic(a_)) throw InputError("NotSymplectic", "A J A^T != J");
}

bool IntSymplectic::theta_flag() const {
    int d = d_;
    for (int i = 0; i < d; ++i) {
        i64 ef = 0, gh = 0;
        for (int j = 0; j < d; ++j) {
            ef += a_[i][j] * a_[i][d + j];
            gh += a_[d + i][j] * a_[d + i][d + j];
        }
        if (mod(ef, 2) != 0 || mod(gh, 2) != 0) return false;
    }
    return true;
}

IntPoly IntSymplectic::char_poly() const {
    // Faddeev-LeVerrier over Z: det(tI - A)
    int n = size();
    ZMat A(n, ZVec(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A[i][j] = a_[i][j];
    ZVec c(n + 1, 0);
    c[n] = 1;
    ZMat M(n, ZVec(n, 0));
    for (int k = 1; k <= n; ++k) {
        // M_k = A M_{k-1} + c_{n-k+1} I
        ZMat AM(n, ZVec(n, 0));
        for (int i = 0; i < n; ++i)
            for (int l = 0; l < n; ++l)
                if (A[i][l] != 0)
                    for (int j = 0; j < n; ++j) AM[i][j] += A[i][l] * M[l][j];
        for (int i = 0; i < n; ++i) AM[i][i] += c[n - k + 1];
        M = AM;
        BigInt tr = 0;
        for (int i = 0; i < n; ++i)
            for (int l = 0; l < n; ++l) tr += A[i][l] * M[l][i];
        c[n - k] = -tr / k;
    }
    return IntPoly(c);
}

IntSymplectic IntSymplectic::inverse() const {
    // A^{-1} = -J A^T J for symplectic A
    IMat J = standard_j(d_);
    IMat r = matmul(matmul(J, transpose(a_)), J);
    for (auto& row : r)
        for (auto& v : row) v = -v;
    return IntSymplectic(d_, r);
}

std::string IntSymplectic::str() const {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < a_.size(); ++i) {
        os << (i ? ", [" : "[");
        for (size_t j = 0; j < a_[i].size(); ++j) os << (j ? ", " : "") << a_[i][j];
        os << "]";
    }
    os << "]";
    return os.str();
}

u64 ord_mod(const IMat& A, i64 N, u64 cap) {
    IMat I = reduce_mod(identity(static_cast<int>(A.size())), N);
    IMat Am = reduce_mod(A, N);
    IMat cur = Am;
    for (u64 s = 1; s <= cap; ++s) {
        if (cur == I) return s;
        cur = matmul_mod(cur, Am, N);
    }
    throw MathError("OrderTooLarge", "ord exceeds cap");
}

}  // namespace torusq
