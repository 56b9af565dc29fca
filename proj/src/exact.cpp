#include "torusq/exact.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace torusq {

namespace {

BigInt babs(const BigInt& a) { return a < 0 ? BigInt(-a) : a; }

BigInt floordiv(const BigInt& a, const BigInt& b) {
    BigInt q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
    return q;
}

}  // namespace

// ---- IntPoly ----------------------------------------------------------------

IntPoly::IntPoly(ZVec c) : c_(std::move(c)) { trim(); }

IntPoly IntPoly::from_i64(const std::vector<i64>& c) {
    ZVec v(c.begin(), c.end());
    return IntPoly(v);
}

IntPoly IntPoly::x() { return IntPoly(ZVec{0, 1}); }

void IntPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

BigInt IntPoly::eval(const BigInt& x) const {
    BigInt r = 0;
    for (size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
    return r;
}

IntPoly IntPoly::operator+(const IntPoly& o) const {
    ZVec v(std::max(c_.size(), o.c_.size()));
    for (size_t i = 0; i < v.size(); ++i) v[i] = coeff(i) + o.coeff(i);
    return IntPoly(v);
}

IntPoly IntPoly::operator-(const IntPoly& o) const {
    ZVec v(std::max(c_.size(), o.c_.size()));
    for (size_t i = 0; i < v.size(); ++i) v[i] = coeff(i) - o.coeff(i);
    return IntPoly(v);
}

IntPoly IntPoly::operator*(const IntPoly& o) const {
    if (is_zero() || o.is_zero()) return IntPoly();
    ZVec v(c_.size() + o.c_.size() - 1, 0);
    for (size_t i = 0; i < c_.size(); ++i)
        for (size_t j = 0; j < o.c_.size(); ++j) v[i + j] += c_[i] * o.c_[j];
    return IntPoly(v);
}

bool IntPoly::operator<(const IntPoly& o) const {
    if (degree() != o.degree()) return degree() < o.degree();
    for (int i = degree(); i >= 0; --i)
        if (c_[i] != o.c_[i]) return c_[i] < o.c_[i];
    return false;
}

std::optional<IntPoly> IntPoly::divide_exact(const IntPoly& m) const {
    if (!m.is_monic()) throw MathError("NotMonic", m.str());
    ZVec rem(c_);
    int dm = m.degree(), da = degree();
    if (da < dm) {
        if (is_zero()) return IntPoly();
        return std::nullopt;
    }
    ZVec quo(da - dm + 1, 0);
    for (int i = da; i >= dm; --i) {
        BigInt c = rem[i];
        quo[i - dm] = c;
        if (c == 0) continue;
        for (int j = 0; j <= dm; ++j) rem[i - dm + j] -= c * m.c_[j];
    }
    for (int i = 0; i < dm; ++i)
        if (rem[i] != 0) return std::nullopt;
    return IntPoly(quo);
}

IntPoly IntPoly::mod_monic(const IntPoly& m) const {
    ZVec rem(c_);
    int dm = m.degree();
    for (int i = degree(); i >= dm; --i) {
        BigInt c = rem[i];
        if (c == 0) continue;
        for (int j = 0; j <= dm; ++j) rem[i - dm + j] -= c * m.c_[j];
    }
    rem.resize(std::min<size_t>(rem.size(), dm));
    return IntPoly(rem);
}

IntPoly IntPoly::derivative() const {
    ZVec v;
    for (size_t i = 1; i < c_.size(); ++i) v.push_back(c_[i] * static_cast<long long>(i));
    return IntPoly(v);
}

PolyFp IntPoly::to_fp(u64 p) const {
    std::vector<u64> v;
    BigInt P = p;
    for (const auto& c : c_) {
        BigInt r = c % P;
        if (r < 0) r += P;
        v.push_back(static_cast<u64>(r));
    }
    return PolyFp(p, v);
}

std::vector<i64> IntPoly::to_i64() const {
    std::vector<i64> v;
    for (const auto& c : c_) v.push_back(static_cast<i64>(c));
    return v;
}

std::string IntPoly::str(const char* var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        BigInt c = c_[i];
        if (c == 0) continue;
        if (first) {
            if (c < 0) os << "-";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        first = false;
        BigInt a = babs(c);
        if (a != 1 || i == 0) os << a;
        if (i >= 1) os << var;
        if (i >= 2) os << "^" << i;
    }
    return os.str();
}

namespace {

std::vector<BigInt> signed_divisors(const BigInt& v) {
    BigInt a = babs(v);
    std::vector<BigInt> out;
    for (BigInt f = 1; f * f <= a; ++f) {
        if (a % f == 0) {
            out.push_back(f);
            if (f * f != a) out.push_back(a / f);
        }
    }
    size_t n = out.size();
    for (size_t i = 0; i < n; ++i) out.push_back(-out[i]);
    return out;
}

// Lagrange interpolation through (xs[i], ys[i]); returns the integer polynomial if it is one.
std::optional<IntPoly> interpolate(const std::vector<BigInt>& xs, const std::vector<BigInt>& ys) {
    size_t n = xs.size();
    std::vector<Rational> acc(n, Rational(0));
    for (size_t i = 0; i < n; ++i) {
        std::vector<Rational> basis{Rational(1)};
        Rational denom = 1;
        for (size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            std::vector<Rational> nb(basis.size() + 1, Rational(0));
            for (size_t k = 0; k < basis.size(); ++k) {
                nb[k + 1] += basis[k];
                nb[k] -= basis[k] * Rational(xs[j]);
            }
            basis = nb;
            denom *= Rational(xs[i] - xs[j]);
        }
        for (size_t k = 0; k < n; ++k) acc[k] += basis[k] * Rational(ys[i]) / denom;
    }
    ZVec c;
    for (auto& r : acc) {
        if (denominator(r) != 1) return std::nullopt;
        c.push_back(numerator(r));
    }
    return IntPoly(c);
}

// A monic factor of degree e, searched by Kronecker's method on value divisors.
std::optional<IntPoly> find_factor(const IntPoly& P, int e) {
    std::vector<BigInt> xs, vals;
    for (int k = 0; static_cast<int>(xs.size()) < e; ++k) {
        for (int s : {1, -1}) {
            if (static_cast<int>(xs.size()) >= e) break;
            BigInt x = s * k;
            if (k == 0 && s == -1) continue;
            BigInt v = P.eval(x);
            if (v == 0) {
                // x is a root: t - x is a factor
                IntPoly lin(ZVec{-x, 1});
                if (e == 1) return lin;
                continue;
            }
            xs.push_back(x);
            vals.push_back(v);
        }
    }
    std::vector<std::vector<BigInt>> divs;
    for (auto& v : vals) divs.push_back(signed_divisors(v));
    // monic of degree e: fix e values, the leading coefficient supplies the rest
    std::vector<size_t> idx(e, 0);
    for (;;) {
        std::vector<BigInt> ys(e);
        for (int i = 0; i < e; ++i) ys[i] = divs[i][idx[i]];
        // g = prod(t - x_i) + h, deg h < e, h(x_i) = ys_i
        IntPoly base(ZVec{1});
        for (auto& x : xs) base = base * IntPoly(ZVec{-x, 1});
        auto h = interpolate(xs, ys);
        if (h) {
            IntPoly g = base + *h;
            if (g.degree() == e && g.is_monic()) {
                if (P.divide_exact(g)) return g;
            }
        }
        int pos = 0;
        while (pos < e) {
            if (++idx[pos] < divs[pos].size()) break;
            idx[pos] = 0;
            ++pos;
        }
        if (pos == e) break;
    }
    return std::nullopt;
}

}  // namespace

std::vector<IntPoly> factor_over_z(const IntPoly& P0) {
    if (!P0.is_monic()) throw MathError("NotMonic", P0.str());
    std::vector<IntPoly> out;
    IntPoly P = P0;
    while (P.degree() >= 1) {
        bool split = false;
        for (int e = 1; 2 * e <= P.degree(); ++e) {
            auto g = find_factor(P, e);
            if (g) {
                out.push_back(*g);
                P = *P.divide_exact(*g);
                split = true;
                break;
            }
        }
        if (!split) {
            out.push_back(P);
            break;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

IntPoly reciprocal(const IntPoly& f) {
    BigInt c0 = f.coeff(0);
    if (c0 != 1 && c0 != -1) throw MathError("NotUnit", "constant term must be +-1: " + f.str());
    ZVec c(f.coeffs().rbegin(), f.coeffs().rend());
    for (auto& v : c) v *= c0;
    return IntPoly(c);
}

namespace {

using QPoly = std::vector<Rational>;

void qtrim(QPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

QPoly qmod(QPoly a, const QPoly& b) {
    qtrim(a);
    while (a.size() >= b.size() && !a.empty()) {
        Rational c = a.back() / b.back();
        size_t shift = a.size() - b.size();
        for (size_t j = 0; j < b.size(); ++j) a[shift + j] -= c * b[j];
        a.pop_back();
        qtrim(a);
    }
    return a;
}

}  // namespace

bool squarefree_over_q(const IntPoly& P) {
    QPoly a(P.coeffs().begin(), P.coeffs().end());
    auto dp = P.derivative();
    QPoly b(dp.coeffs().begin(), dp.coeffs().end());
    qtrim(a);
    qtrim(b);
    while (!b.empty()) {
        QPoly r = qmod(a, b);
        a = b;
        b = r;
    }
    return a.size() == 1;
}

BigInt discriminant(const IntPoly& P) {
    IntPoly D = P.derivative();
    int n = P.degree(), m = D.degree();
    int sz = n + m;
    ZMat S(sz, ZVec(sz, 0));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= n; ++j) S[i][i + j] = P.coeff(n - j);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= m; ++j) S[m + i][i + j] = D.coeff(m - j);
    BigInt r = det_bareiss(S);
    // disc = (-1)^{n(n-1)/2} res(P, P') / lead(P)
    if ((n * (n - 1) / 2) % 2 == 1) r = -r;
    return r / P.lead();
}

IntPoly trace_polynomial(const IntPoly& P) {
    int n = P.degree();
    if (n % 2 != 0) throw MathError("OddDegree", P.str());
    int d = n / 2;
    for (int i = 0; i <= n; ++i)
        if (P.coeff(i) != P.coeff(n - i)) throw MathError("NotPalindromic", P.str());
    // D_0 = 2, D_1 = s, D_k = s D_{k-1} - D_{k-2}
    std::vector<IntPoly> D{IntPoly(ZVec{2}), IntPoly::x()};
    for (int k = 2; k <= d; ++k) D.push_back(IntPoly::x() * D[k - 1] - D[k - 2]);
    IntPoly R(ZVec{P.coeff(d)});
    for (int k = 1; k <= d; ++k) R = R + IntPoly(ZVec{P.coeff(d + k)}) * D[k];
    return R;
}

// ---- linear algebra ---------------------------------------------------------

QMat to_q(const ZMat& m) {
    QMat r;
    for (auto& row : m) r.emplace_back(row.begin(), row.end());
    return r;
}

ZMat to_z(const std::vector<std::vector<i64>>& m) {
    ZMat r;
    for (auto& row : m) r.emplace_back(row.begin(), row.end());
    return r;
}

BigInt det_bareiss(ZMat m) {
    size_t n = m.size();
    if (n == 0) return 1;
    BigInt prev = 1;
    int sign = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            size_t s = k + 1;
            while (s < n && m[s][k] == 0) ++s;
            if (s == n) return 0;
            std::swap(m[s], m[k]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i) {
            for (size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

namespace {

// Fraction-free echelon form of the scaled-to-integer matrix; returns pivot columns.
std::vector<size_t> echelon(QMat m, QMat& rref) {
    size_t rows = m.size(), cols = rows ? m[0].size() : 0;
    // clear denominators row by row, then eliminate fraction-free
    ZMat z(rows, ZVec(cols, 0));
    for (size_t i = 0; i < rows; ++i) {
        BigInt l = 1;
        for (auto& v : m[i]) l = boost::multiprecision::lcm(l, BigInt(denominator(v)));
        for (size_t j = 0; j < cols; ++j) z[i][j] = numerator(m[i][j] * Rational(l));
    }
    std::vector<size_t> piv;
    size_t r = 0;
    BigInt prev = 1;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t s = r;
        while (s < rows && z[s][c] == 0) ++s;
        if (s == rows) continue;
        std::swap(z[s], z[r]);
        for (size_t i = r + 1; i < rows; ++i) {
            for (size_t j = c + 1; j < cols; ++j) z[i][j] = (z[i][j] * z[r][c] - z[i][c] * z[r][j]) / prev;
            z[i][c] = 0;
        }
        prev = z[r][c];
        piv.push_back(c);
        ++r;
    }
    // back-substitute to reduced form over Q
    rref.assign(piv.size(), QVec(cols, Rational(0)));
    for (size_t i = 0; i < piv.size(); ++i)
        for (size_t j = 0; j < cols; ++j) rref[i][j] = Rational(z[i][j]);
    for (size_t i = piv.size(); i-- > 0;) {
        Rational lead = rref[i][piv[i]];
        for (auto& v : rref[i]) v /= lead;
        for (size_t k = 0; k < i; ++k) {
            Rational f = rref[k][piv[i]];
            if (f == 0) continue;
            for (size_t j = 0; j < cols; ++j) rref[k][j] -= f * rref[i][j];
        }
    }
    return piv;
}

ZVec primitive(const QVec& v) {
    BigInt l = 1;
    for (auto& x : v) l = boost::multiprecision::lcm(l, BigInt(denominator(x)));
    ZVec z;
    BigInt g = 0;
    for (auto& x : v) {
        z.push_back(numerator(x * Rational(l)));
        g = boost::multiprecision::gcd(g, z.back());
    }
    if (g > 1)
        for (auto& x : z) x /= g;
    return z;
}

}  // namespace

size_t rank_q(const QMat& m) {
    QMat r;
    return echelon(m, r).size();
}

ZMat right_kernel(const QMat& m) {
    if (m.empty()) return {};
    size_t cols = m[0].size();
    QMat r;
    auto piv = echelon(m, r);
    std::vector<bool> is_piv(cols, false);
    for (auto c : piv) is_piv[c] = true;
    ZMat out;
    for (size_t f = 0; f < cols; ++f) {
        if (is_piv[f]) continue;
        QVec v(cols, Rational(0));
        v[f] = 1;
        for (size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -r[i][f];
        out.push_back(primitive(v));
    }
    return out;
}

std::optional<QVec> solve_particular(const QMat& m, const QVec& b) {
    QMat aug = m;
    for (size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b[i]);
    size_t cols = m.empty() ? 0 : m[0].size();
    QMat r;
    auto piv = echelon(aug, r);
    if (!piv.empty() && piv.back() == cols) return std::nullopt;
    QVec x(cols, Rational(0));
    for (size_t i = 0; i < piv.size(); ++i) x[piv[i]] = r[i][cols];
    return x;
}

ZMat hnf_rows(ZMat a) {
    size_t rows = a.size();
    if (rows == 0) return a;
    size_t cols = a[0].size();
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        // Euclid on column c among rows r..end
        for (;;) {
            size_t best = rows;
            for (size_t i = r; i < rows; ++i)
                if (a[i][c] != 0 && (best == rows || babs(a[i][c]) < babs(a[best][c]))) best = i;
            if (best == rows) break;
            std::swap(a[r], a[best]);
            bool done = true;
            for (size_t i = r + 1; i < rows; ++i) {
                if (a[i][c] == 0) continue;
                BigInt q = floordiv(a[i][c], a[r][c]);
                for (size_t j = 0; j < cols; ++j) a[i][j] -= q * a[r][j];
                if (a[i][c] != 0) done = false;
            }
            if (done) break;
        }
        if (a[r][c] == 0) continue;
        if (a[r][c] < 0)
            for (auto& v : a[r]) v = -v;
        for (size_t i = 0; i < r; ++i) {
            BigInt q = floordiv(a[i][c], a[r][c]);
            if (q != 0)
                for (size_t j = 0; j < cols; ++j) a[i][j] -= q * a[r][j];
        }
        ++r;
    }
    a.resize(r);
    return a;
}

ZMat integer_kernel(const ZMat& m) {
    if (m.empty()) throw InputError("Empty", "integer_kernel of empty matrix");
    size_t rows = m.size(), n = m[0].size();
    // column operations: m U = [H 0]
    ZMat a = m;
    ZMat U(n, ZVec(n, 0));
    for (size_t i = 0; i < n; ++i) U[i][i] = 1;
    auto col_op = [&](size_t dst, size_t src, const BigInt& q) {
        for (size_t i = 0; i < rows; ++i) a[i][dst] -= q * a[i][src];
        for (size_t i = 0; i < n; ++i) U[i][dst] -= q * U[i][src];
    };
    auto col_swap = [&](size_t x, size_t y) {
        for (size_t i = 0; i < rows; ++i) std::swap(a[i][x], a[i][y]);
        for (size_t i = 0; i < n; ++i) std::swap(U[i][x], U[i][y]);
    };
    size_t c = 0;
    for (size_t r = 0; r < rows && c < n; ++r) {
        for (;;) {
            size_t best = n;
            for (size_t j = c; j < n; ++j)
                if (a[r][j] != 0 && (best == n || babs(a[r][j]) < babs(a[r][best]))) best = j;
            if (best == n) break;
            col_swap(c, best);
            bool done = true;
            for (size_t j = c + 1; j < n; ++j) {
                if (a[r][j] == 0) continue;
                col_op(j, c, floordiv(a[r][j], a[r][c]));
                if (a[r][j] != 0) done = false;
            }
            if (done) break;
        }
        if (a[r][c] != 0) ++c;
    }
    ZMat ker;
    for (size_t j = c; j < n; ++j) {
        ZVec v(n);
        for (size_t i = 0; i < n; ++i) v[i] = U[i][j];
        ker.push_back(v);
    }
    if (ker.empty()) return ker;
    return hnf_rows(ker);
}

bool in_row_span(const QMat& rows, const QVec& v) {
    QMat aug = rows;
    size_t r0 = rank_q(rows);
    aug.push_back(v);
    return rank_q(aug) == r0;
}

}  // namespace torusq
