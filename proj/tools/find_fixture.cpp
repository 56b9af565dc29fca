// Searches short generator words in Sp(4, Z) for the frozen fixtures.
//   find_fixture sp4   -> irreducible P_A, good at 7, 11, 13, mixed orbit structure
//   find_fixture phi10 -> P_A = t^4 - t^3 + t^2 - t + 1, via the companion matrix
#include <cstdio>
#include <iostream>
#include <limits>
#include <random>
#include <set>
#include <string>

#include "json.hpp"
#include "torusq/exact.hpp"
#include "torusq/ff.hpp"
#include "torusq/quantizer.hpp"
#include "torusq/symplectic.hpp"

using namespace torusq;

namespace {

struct Step {
    std::string gen;
    IMat block;
};

IMat step_matrix(const Step& s) {
    if (s.gen == "shear") return shear_matrix(s.block);
    if (s.gen == "linear") return linear_matrix(s.block);
    return fourier_matrix(2);
}

Step random_step(std::mt19937_64& rng) {
    int kind = static_cast<int>(rng() % 3);
    if (kind == 0) {
        i64 a = static_cast<i64>(rng() % 3) - 1, b = static_cast<i64>(rng() % 3) - 1, c = static_cast<i64>(rng() % 3) - 1;
        return {"shear", {{a, b}, {b, c}}};
    }
    if (kind == 1) {
        static const IMat Es[] = {{{1, 1}, {0, 1}}, {{1, -1}, {0, 1}}, {{1, 0}, {1, 1}}, {{0, 1}, {1, 0}}, {{-1, 0}, {0, 1}}};
        return {"linear", Es[rng() % 5]};
    }
    return {"fourier", {}};
}

int orbit_count(const IntPoly& P, u64 p) {
    return static_cast<int>(factor_squarefree(trace_polynomial(P).to_fp(p)).size());
}

nlohmann::json word_json(const std::vector<Step>& w) {
    nlohmann::json out = nlohmann::json::array();
    for (auto& s : w) {
        nlohmann::json j{{"gen", s.gen}};
        if (s.gen == "shear") j["F"] = s.block;
        if (s.gen == "linear") j["E"] = s.block;
        out.push_back(j);
    }
    return out;
}

i64 form(const IMat& W, const IVec& a, const IVec& b) {
    i64 s = 0;
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) s += a[i] * W[i][j] * b[j];
    return s;
}

// S with S W S^T = J, rows searched in a small box.
bool symplectic_basis(const IMat& W, IMat& S) {
    std::vector<IVec> box;
    for (int t = 0; t < 625; ++t) {
        IVec v(4);
        int r = t;
        for (auto& x : v) {
            x = r % 5 - 2;
            r /= 5;
        }
        box.push_back(v);
    }
    for (auto& e1 : box)
        for (auto& f1 : box) {
            if (form(W, e1, f1) != 1) continue;
            for (auto& e2 : box) {
                if (form(W, e1, e2) != 0 || form(W, f1, e2) != 0) continue;
                for (auto& f2 : box) {
                    if (form(W, e2, f2) != 1 || form(W, e1, f2) != 0 || form(W, f1, f2) != 0) continue;
                    S = {e1, e2, f1, f2};
                    return true;
                }
            }
        }
    return false;
}

// Companion matrix of t^4 - t^3 + t^2 - t + 1 carried to the standard form.
bool phi10_from_companion(IMat& out) {
    IMat C{{0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {-1, 1, -1, 1}};
    // unknown alternating W with C W C^T = W
    const int idx[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
    auto sgn = [](int i, int j) { return i < j ? 1 : -1; };
    QMat eqs;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            QVec row(6, Rational(0));
            for (int k = 0; k < 4; ++k)
                for (int l = 0; l < 4; ++l)
                    if (k != l) row[idx[k][l]] += Rational(C[i][k] * C[j][l] * sgn(k, l));
            if (i != j) row[idx[i][j]] -= Rational(sgn(i, j));
            eqs.push_back(row);
        }
    ZMat K = right_kernel(eqs);
    for (i64 a = -3; a <= 3; ++a)
        for (i64 b = -3; b <= 3; ++b) {
            std::vector<i64> w(6, 0);
            for (int t = 0; t < 6; ++t)
                w[t] = a * static_cast<i64>(K[0][t]) + (K.size() > 1 ? b * static_cast<i64>(K[1][t]) : 0);
            i64 pf = w[0] * w[5] - w[1] * w[4] + w[2] * w[3];
            if (pf != 1) continue;
            IMat W(4, std::vector<i64>(4, 0));
            for (int k = 0; k < 4; ++k)
                for (int l = 0; l < 4; ++l)
                    if (k != l) W[k][l] = sgn(k, l) * w[idx[k][l]];
            IMat S;
            if (!symplectic_basis(W, S)) continue;
            // S^{-1} = -W S^T J
            IMat Sinv = matmul(matmul(W, transpose(S)), standard_j(2));
            for (auto& r : Sinv)
                for (auto& v : r) v = -v;
            out = matmul(matmul(S, C), Sinv);
            return true;
        }
    return false;
}

std::vector<IMat> conjugators() {
    std::vector<IMat> gens;
    for (int t = 0; t < 27; ++t) {
        i64 a = t % 3 - 1, b = (t / 3) % 3 - 1, c = t / 9 - 1;
        if (a == 0 && b == 0 && c == 0) continue;
        gens.push_back(shear_matrix({{a, b}, {b, c}}));
    }
    for (const IMat& E : std::vector<IMat>{{{1, 1}, {0, 1}}, {{1, -1}, {0, 1}}, {{1, 0}, {1, 1}}, {{1, 0}, {-1, 1}},
                                           {{0, 1}, {1, 0}}, {{-1, 0}, {0, 1}}})
        gens.push_back(linear_matrix(E));
    gens.push_back(fourier_matrix(2));
    return gens;
}

i64 weight(const IMat& M) {
    i64 w = 0;
    for (auto& r : M)
        for (auto v : r) w += std::abs(v);
    return w;
}

IMat conjugate(const IMat& X, const IMat& A) { return matmul(matmul(X, A), IntSymplectic(2, X).inverse().entries()); }

// Greedy descent on the entry sum, then a depth-3 search for a theta-flagged conjugate.
// A keeps the reduced matrix when the search fails.
bool reduce_phi10(IMat& A) {
    auto gens = conjugators();
    for (bool improved = true; improved;) {
        improved = false;
        for (auto& X : gens) {
            IMat B = conjugate(X, A);
            if (weight(B) < weight(A)) {
                A = B;
                improved = true;
            }
        }
    }
    std::vector<IMat> layer{A};
    for (int depth = 0; depth <= 3; ++depth) {
        IMat best;
        i64 bw = std::numeric_limits<i64>::max();
        for (auto& M : layer)
            if (IntSymplectic(2, M).theta_flag() && weight(M) < bw) {
                best = M;
                bw = weight(M);
            }
        if (bw != std::numeric_limits<i64>::max()) {
            A = best;
            return true;
        }
        if (depth == 3) break;
        std::vector<IMat> next;
        for (auto& M : layer)
            for (auto& X : gens) {
                IMat B = conjugate(X, M);
                if (weight(B) <= weight(A) + 16) next.push_back(B);
            }
        layer = std::move(next);
    }
    return false;
}

}  // namespace

int main(int argc, char** argv) {
    std::string mode = argc > 1 ? argv[1] : "sp4";
    std::mt19937_64 rng(20240607);
    IMat base = identity(4);
    if (mode == "phi10" && !phi10_from_companion(base)) {
        std::cerr << "no unimodular invariant form\n";
        return 1;
    }
    if (mode == "phi10") {
        if (!reduce_phi10(base)) std::cerr << "no theta-flagged conjugate (none exists: order 5 mod 2)\n";
        IntSymplectic B(2, base);
        std::cout << nlohmann::json{{"d", 2}, {"entries", base}}.dump() << "\n";
        std::cerr << "P_A = " << B.char_poly().str() << "\n";
        return 0;
    }
    for (long attempt = 0; attempt < 5000000; ++attempt) {
        int len = 3 + static_cast<int>(rng() % 6);
        std::vector<Step> word;
        IMat M = identity(4);
        for (int i = 0; i < len; ++i) {
            word.push_back(random_step(rng));
            M = matmul(M, step_matrix(word.back()));
        }
        i64 mx = 0;
        for (auto& r : M)
            for (auto v : r) mx = std::max<i64>(mx, std::abs(v));
        if (mx > 12) continue;
        IntSymplectic A(2, M);
        if (!A.theta_flag()) continue;
        IntPoly P = A.char_poly();
        if (!squarefree_over_q(P)) continue;
        {
            if (factor_over_z(P).size() != 1) continue;
            if (P.coeff(3) == 0 || std::abs(static_cast<i64>(P.coeff(3))) < 3) continue;
            bool good = true;
            std::set<int> counts;
            for (u64 p : {7ULL, 11ULL, 13ULL}) {
                if (!is_squarefree(P.to_fp(p))) {
                    good = false;
                    break;
                }
                counts.insert(orbit_count(P, p));
            }
            if (!good || counts.size() < 2) continue;
        }
        nlohmann::json out{{"d", 2}, {"entries", M}, {"word", word_json(word)}};
        std::cout << out.dump() << "\n";
        std::cerr << "P_A = " << P.str() << " after " << attempt + 1 << " words\n";
        return 0;
    }
    std::cerr << "no fixture found\n";
    return 1;
}
