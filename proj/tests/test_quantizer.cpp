#include "doctest.h"

#include "torusq/quantizer.hpp"

using namespace torusq;

namespace {

std::vector<IVec> grid(int len, int N) {
    std::vector<IVec> out;
    int total = 1;
    for (int i = 0; i < len; ++i) total *= N;
    for (int t = 0; t < total; ++t) {
        IVec v(len);
        int r = t;
        for (auto& x : v) {
            x = r % N;
            r /= N;
        }
        out.push_back(v);
    }
    return out;
}

double dist(const SparseOp& a, const SparseOp& b, cplx s = 1.0) {
    double e = 0;
    for (size_t y = 0; y < a.col.size(); ++y) {
        if (a.col[y] != b.col[y]) return 1e9;
        e = std::max(e, std::abs(a.phase[y] - s * b.phase[y]));
    }
    return e;
}

IVec add(const IVec& a, const IVec& b) {
    IVec r(a);
    for (size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
}

}  // namespace

TEST_CASE("elementary operators compose with the twisted cocycle") {
    for (int N : {3, 4, 5}) {
        HilbertSpace H(N, 1);
        auto ns = grid(2, 2 * N);
        for (auto& m : ns)
            for (auto& n : ns) {
                SparseOp lhs = elementary_op(H, m) * elementary_op(H, n);
                cplx ph = H.root((1 + N * N) * omega(m, n));
                CHECK(dist(lhs, elementary_op(H, add(m, n)), ph) < 1e-12);
                cplx comm = H.root(2 * omega(m, n));
                CHECK(dist(lhs, elementary_op(H, n) * elementary_op(H, m), comm) < 1e-12);
            }
    }
}

TEST_CASE("trace of T(n) vanishes off the lattice N Z^2d") {
    HilbertSpace H(4, 2);
    for (auto& n : grid(4, 8)) {
        bool zero = true;
        for (auto v : n)
            if (v % 4 != 0) zero = false;
        cplx tr = elementary_op(H, n).trace();
        CHECK(std::abs(tr - (zero ? cplx(16.0) : cplx(0.0))) < 1e-9);
    }
}

TEST_CASE("odd N twisted operators are periodic mod N") {
    HilbertSpace H(5, 1);
    for (auto& n : grid(2, 5)) {
        CHECK(dist(elementary_op(H, n), elementary_op(H, add(n, {5, 0}))) < 1e-12);
        CHECK(dist(elementary_op(H, n), elementary_op(H, add(n, {0, 5}))) < 1e-12);
    }
}

TEST_CASE("generator formulas intertwine") {
    for (int N : {3, 4, 6, 7}) {
        HilbertSpace H1(N, 1);
        IMat F{{3}};
        CHECK(egorov_deviation(H1, generator_shear(H1, F), shear_matrix(F)) < 1e-9);
        CHECK(egorov_deviation(H1, generator_fourier(H1), fourier_matrix(1)) < 1e-9);
        IMat E{{-1}};
        CHECK(egorov_deviation(H1, generator_linear(H1, E), linear_matrix(E)) < 1e-9);
        HilbertSpace H2(N, 2);
        IMat F2{{1, 2}, {2, 0}};
        CHECK(egorov_deviation(H2, generator_shear(H2, F2), shear_matrix(F2)) < 1e-9);
        IMat E2{{1, 1}, {0, 1}};
        CHECK(egorov_deviation(H2, generator_linear(H2, E2), linear_matrix(E2)) < 1e-9);
        CHECK(egorov_deviation(H2, generator_fourier(H2), fourier_matrix(2)) < 1e-9);
    }
}

TEST_CASE("averaging propagator of the cat map") {
    IMat A{{2, 1}, {3, 2}};
    for (int N : {3, 5, 7, 9, 11}) {
        HilbertSpace H(N, 1);
        Propagator P = propagator_averaging(H, A);
        CHECK(egorov_deviation(H, P.U, A) < 1e-9);
        CMatrix I = P.U * P.U.adjoint();
        CHECK((I - CMatrix::Identity(H.dim, H.dim)).cwiseAbs().maxCoeff() < 1e-9);
        CHECK(std::abs(std::abs(P.U.trace()) - std::sqrt(double(kernel_count(A, N)))) < 1e-9);
        CMatrix S = averaging_sum(H, A, Backend::Serial);
        CHECK((S - averaging_sum(H, A, Backend::Parallel)).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("serial and parallel kernels agree in d = 2") {
    IMat A{{11, 3, 4, 10}, {6, 1, 2, 4}, {-2, -1, -1, -2}, {1, 1, 1, 1}};
    for (int N : {3, 5, 7}) {
        HilbertSpace H(N, 2);
        CMatrix S = averaging_sum(H, A, Backend::Serial);
        CHECK((S - averaging_sum(H, A, Backend::Parallel)).cwiseAbs().maxCoeff() < 1e-9);
        CMatrix B = propagator_averaging(H, A).U;
        for (IVec n : {IVec{1, 0, 0, 0}, IVec{1, 2, -1, 3}}) {
            auto a = diagonal_elements(elementary_op(H, n), B, Backend::Serial);
            auto b = diagonal_elements(elementary_op(H, n), B, Backend::Parallel);
            for (size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-12);
        }
    }
}
