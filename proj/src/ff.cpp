#include "torusq/ff.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace torusq {

u64 mulmod(u64 a, u64 b, u64 m) {
    return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % m);
}

u64 powmod(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

u64 invmod(u64 a, u64 m) {
    i64 t = 0, nt = 1;
    i64 r = static_cast<i64>(m), nr = static_cast<i64>(a % m);
    while (nr != 0) {
        i64 q = r / nr;
        t = t - q * nt;
        std::swap(t, nt);
        r = r - q * nr;
        std::swap(r, nr);
    }
    if (r != 1) throw MathError("NotInvertible", std::to_string(a) + " mod " + std::to_string(m));
    return static_cast<u64>(mod(t, static_cast<i64>(m)));
}

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 s : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % s == 0) return n == s;
    }
    u64 d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool comp = true;
        for (int i = 1; i < r; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                comp = false;
                break;
            }
        }
        if (comp) return false;
    }
    return true;
}

std::vector<u64> primes_between(u64 lo, u64 hi) {
    std::vector<u64> out;
    for (u64 n = lo; n <= hi; ++n)
        if (is_prime(n)) out.push_back(n);
    return out;
}

std::vector<u64> prime_factors(u64 n) {
    std::vector<u64> out;
    for (u64 f = 2; f * f <= n; ++f) {
        if (n % f == 0) {
            out.push_back(f);
            while (n % f == 0) n /= f;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

int legendre(i64 a, u64 p) {
    u64 r = powmod(static_cast<u64>(mod(a, static_cast<i64>(p))), (p - 1) / 2, p);
    if (r == 0) return 0;
    return r == 1 ? 1 : -1;
}

u64 discrete_log_mod_p(u64 g, u64 a, u64 p) {
    u64 m = static_cast<u64>(std::ceil(std::sqrt(static_cast<double>(p))));
    std::unordered_map<u64, u64> baby;
    u64 cur = 1;
    for (u64 j = 0; j < m; ++j) {
        baby.emplace(cur, j);
        cur = mulmod(cur, g, p);
    }
    u64 step = invmod(powmod(g, m, p), p);
    u64 y = a % p;
    for (u64 i = 0; i <= m; ++i) {
        auto it = baby.find(y);
        if (it != baby.end()) return i * m + it->second;
        y = mulmod(y, step, p);
    }
    throw MathError("NoDiscreteLog", std::to_string(a) + " not a power of " + std::to_string(g));
}

u64 checked_pow(u64 p, unsigned k) {
    u64 r = 1;
    for (unsigned i = 0; i < k; ++i) {
        if (r > UINT64_MAX / p) throw InputError("Overflow", "p^k too large");
        r *= p;
    }
    return r;
}

// ---- PolyFp -----------------------------------------------------------------

PolyFp::PolyFp(u64 p, std::vector<u64> coeffs) : p_(p), c_(std::move(coeffs)) {
    for (auto& c : c_) c %= p_;
    trim();
}

PolyFp PolyFp::monomial(u64 p, int deg, u64 c) {
    std::vector<u64> v(deg + 1, 0);
    v[deg] = c % p;
    return PolyFp(p, v);
}

PolyFp PolyFp::constant(u64 p, i64 c) {
    return PolyFp(p, {static_cast<u64>(mod(c, static_cast<i64>(p)))});
}

void PolyFp::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

PolyFp PolyFp::monic() const {
    if (is_zero()) return *this;
    return scaled(invmod(lead(), p_));
}

PolyFp PolyFp::scaled(u64 s) const {
    std::vector<u64> v(c_);
    for (auto& c : v) c = mulmod(c, s, p_);
    return PolyFp(p_, v);
}

PolyFp PolyFp::derivative() const {
    std::vector<u64> v;
    for (size_t i = 1; i < c_.size(); ++i) v.push_back(mulmod(c_[i], i % p_, p_));
    return PolyFp(p_, v);
}

u64 PolyFp::eval(u64 x) const {
    u64 r = 0;
    for (size_t i = c_.size(); i-- > 0;) r = (mulmod(r, x, p_) + c_[i]) % p_;
    return r;
}

std::string PolyFp::str(const char* var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        if (c_[i] == 0) continue;
        if (!first) os << " + ";
        first = false;
        if (c_[i] != 1 || i == 0) os << c_[i];
        if (i >= 1) os << var;
        if (i >= 2) os << "^" << i;
    }
    return os.str();
}

PolyFp PolyFp::operator+(const PolyFp& o) const {
    std::vector<u64> v(std::max(c_.size(), o.c_.size()), 0);
    for (size_t i = 0; i < v.size(); ++i) v[i] = (coeff(i) + o.coeff(i)) % p_;
    return PolyFp(p_, v);
}

PolyFp PolyFp::operator-(const PolyFp& o) const {
    std::vector<u64> v(std::max(c_.size(), o.c_.size()), 0);
    for (size_t i = 0; i < v.size(); ++i) v[i] = (coeff(i) + p_ - o.coeff(i)) % p_;
    return PolyFp(p_, v);
}

PolyFp PolyFp::operator*(const PolyFp& o) const {
    if (is_zero() || o.is_zero()) return PolyFp(p_);
    std::vector<u64> v(c_.size() + o.c_.size() - 1, 0);
    for (size_t i = 0; i < c_.size(); ++i)
        for (size_t j = 0; j < o.c_.size(); ++j) v[i + j] = (v[i + j] + mulmod(c_[i], o.c_[j], p_)) % p_;
    return PolyFp(p_, v);
}

void PolyFp::divmod(const PolyFp& a, const PolyFp& b, PolyFp& q, PolyFp& r) {
    if (b.is_zero()) throw MathError("DivisionByZero", "polynomial division by zero");
    u64 p = a.p_;
    std::vector<u64> rem(a.c_);
    int db = b.degree();
    int da = a.degree();
    std::vector<u64> quo(da >= db ? da - db + 1 : 0, 0);
    u64 inv = invmod(b.lead(), p);
    for (int i = da; i >= db; --i) {
        u64 c = mulmod(rem[i], inv, p);
        if (c == 0) continue;
        quo[i - db] = c;
        for (int j = 0; j <= db; ++j) rem[i - db + j] = (rem[i - db + j] + p - mulmod(c, b.c_[j], p)) % p;
    }
    q = PolyFp(p, quo);
    r = PolyFp(p, rem);
}

PolyFp PolyFp::operator%(const PolyFp& o) const {
    PolyFp q(p_), r(p_);
    divmod(*this, o, q, r);
    return r;
}

PolyFp PolyFp::operator/(const PolyFp& o) const {
    PolyFp q(p_), r(p_);
    divmod(*this, o, q, r);
    return q;
}

bool PolyFp::operator<(const PolyFp& o) const {
    if (degree() != o.degree()) return degree() < o.degree();
    for (int i = degree(); i >= 0; --i)
        if (c_[i] != o.c_[i]) return c_[i] < o.c_[i];
    return false;
}

PolyFp gcd(PolyFp a, PolyFp b) {
    while (!b.is_zero()) {
        PolyFp r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

PolyFp powmod(const PolyFp& base, u64 e, const PolyFp& m) {
    PolyFp r = PolyFp::constant(base.p(), 1) % m;
    PolyFp b = base % m;
    while (e) {
        if (e & 1) r = (r * b) % m;
        b = (b * b) % m;
        e >>= 1;
    }
    return r;
}

namespace {

// x^{p^i} mod f, iterated.
PolyFp frob_power_x(const PolyFp& f, int i) {
    PolyFp x = PolyFp::monomial(f.p(), 1) % f;
    for (int j = 0; j < i; ++j) x = powmod(x, f.p(), f);
    return x;
}

std::vector<u64> small_prime_divisors(int k) {
    return prime_factors(static_cast<u64>(k));
}

}  // namespace

bool is_irreducible(const PolyFp& f) {
    int k = f.degree();
    if (k <= 0) return false;
    if (k == 1) return true;
    PolyFp x = PolyFp::monomial(f.p(), 1);
    if ((frob_power_x(f, k) - x) % f != PolyFp(f.p())) return false;
    for (u64 r : small_prime_divisors(k)) {
        PolyFp g = gcd(f, frob_power_x(f, k / static_cast<int>(r)) - x);
        if (g.degree() != 0) return false;
    }
    return true;
}

bool is_squarefree(const PolyFp& f) {
    PolyFp d = f.derivative();
    if (d.is_zero()) return f.degree() <= 0;
    return gcd(f, d).degree() == 0;
}

namespace {

void equal_degree_split(const PolyFp& f, int e, std::mt19937_64& rng, std::vector<PolyFp>& out) {
    if (f.degree() == e) {
        out.push_back(f.monic());
        return;
    }
    u64 p = f.p();
    if (p == 2) throw MathError("UnsupportedPrime", "equal-degree splitting needs odd p");
    for (;;) {
        std::vector<u64> c(f.degree());
        for (auto& v : c) v = rng() % p;
        PolyFp a(p, c);
        if (a.degree() < 1) continue;
        // a^{(p^e-1)/2} = (prod_i a^{p^i})^{(p-1)/2}
        PolyFp prod = a % f;
        PolyFp cur = a % f;
        for (int i = 1; i < e; ++i) {
            cur = powmod(cur, p, f);
            prod = (prod * cur) % f;
        }
        PolyFp b = powmod(prod, (p - 1) / 2, f) - PolyFp::constant(p, 1);
        PolyFp g = gcd(f, b);
        if (g.degree() > 0 && g.degree() < f.degree()) {
            equal_degree_split(g, e, rng, out);
            equal_degree_split((f / g).monic(), e, rng, out);
            return;
        }
    }
}

}  // namespace

std::vector<PolyFp> factor_squarefree(const PolyFp& f0) {
    if (!is_squarefree(f0)) throw MathError("NotSquarefree", f0.str());
    u64 p = f0.p();
    PolyFp f = f0.monic();
    std::vector<PolyFp> out;
    std::mt19937_64 rng(0x5eed + p);
    PolyFp x = PolyFp::monomial(p, 1);
    PolyFp xp = x % f;
    for (int i = 1; f.degree() >= 2 * i; ++i) {
        xp = powmod(xp, p, f);
        PolyFp g = gcd(f, xp - x);
        if (g.degree() > 0) {
            equal_degree_split(g, i, rng, out);
            f = (f / g).monic();
            xp = xp % f;
        }
    }
    if (f.degree() > 0) out.push_back(f);
    std::sort(out.begin(), out.end());
    return out;
}

PolyFp find_irreducible(u64 p, int k) {
    if (k < 1) throw InputError("BadDegree", "degree must be >= 1");
    u64 count = checked_pow(p, k);
    for (u64 idx = 0; idx < count; ++idx) {
        // idx enumerates (c_{k-1}, ..., c_0) with c_{k-1} most significant
        std::vector<u64> c(k + 1, 0);
        c[k] = 1;
        u64 t = idx;
        for (int i = 0; i < k; ++i) {
            c[i] = t % p;
            t /= p;
        }
        PolyFp f(p, c);
        if (is_irreducible(f)) return f;
    }
    throw MathError("NoIrreducible", "none found");
}

PolyFp reciprocal(const PolyFp& f) {
    if (f.coeff(0) == 0) throw MathError("ZeroConstantTerm", f.str());
    std::vector<u64> c(f.coeffs().rbegin(), f.coeffs().rend());
    return PolyFp(f.p(), c).monic();
}

// ---- ExtField ---------------------------------------------------------------

ExtField::ExtField(const PolyFp& modulus) {
    if (!is_prime(modulus.p())) throw InputError("NotPrime", std::to_string(modulus.p()));
    if (!is_irreducible(modulus)) throw MathError("Reducible", modulus.str());
    auto d = std::make_shared<Data>();
    d->p = modulus.p();
    d->k = modulus.degree();
    d->q = checked_pow(d->p, d->k);
    d->modulus = modulus.monic();
    d_ = d;
}

ExtField ExtField::standard(u64 p, int k) {
    return ExtField(find_irreducible(p, k));
}

FieldElement ExtField::zero() const { return FieldElement(d_, std::vector<u64>(d_->k, 0)); }
FieldElement ExtField::one() const { return from_int(1); }

FieldElement ExtField::from_int(i64 v) const {
    std::vector<u64> c(d_->k, 0);
    c[0] = static_cast<u64>(mod(v, static_cast<i64>(d_->p)));
    return FieldElement(d_, c);
}

FieldElement ExtField::gen() const { return from_poly(PolyFp::monomial(d_->p, 1)); }

FieldElement ExtField::from_coeffs(std::vector<u64> c) const {
    return from_poly(PolyFp(d_->p, std::move(c)));
}

FieldElement ExtField::from_poly(const PolyFp& f) const {
    PolyFp r = f % d_->modulus;
    std::vector<u64> c(d_->k, 0);
    for (int i = 0; i <= r.degree(); ++i) c[i] = r.coeff(i);
    return FieldElement(d_, c);
}

FieldElement ExtField::from_index(u64 idx) const {
    std::vector<u64> c(d_->k, 0);
    for (int i = 0; i < d_->k; ++i) {
        c[i] = idx % d_->p;
        idx /= d_->p;
    }
    return FieldElement(d_, c);
}

FieldElement ExtField::primitive_element() const {
    u64 n = d_->q - 1;
    auto rs = prime_factors(n);
    for (u64 idx = 1; idx < d_->q; ++idx) {
        FieldElement g = from_index(idx);
        bool ok = true;
        for (u64 r : rs)
            if (g.pow(n / r).is_one()) {
                ok = false;
                break;
            }
        if (ok) return g;
    }
    throw InvariantError("NoPrimitive", "multiplicative group not cyclic?");
}

// ---- FieldElement -----------------------------------------------------------

FieldElement::FieldElement(std::shared_ptr<const ExtField::Data> f, std::vector<u64> c)
    : f_(std::move(f)), c_(std::move(c)) {}

ExtField FieldElement::field() const { return ExtField(f_); }

FieldElement FieldElement::operator+(const FieldElement& o) const {
    std::vector<u64> c(c_.size());
    for (size_t i = 0; i < c.size(); ++i) c[i] = (c_[i] + o.c_[i]) % f_->p;
    return FieldElement(f_, c);
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
    std::vector<u64> c(c_.size());
    for (size_t i = 0; i < c.size(); ++i) c[i] = (c_[i] + f_->p - o.c_[i]) % f_->p;
    return FieldElement(f_, c);
}

FieldElement FieldElement::operator-() const {
    std::vector<u64> c(c_.size());
    for (size_t i = 0; i < c.size(); ++i) c[i] = (f_->p - c_[i]) % f_->p;
    return FieldElement(f_, c);
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
    const u64 p = f_->p;
    const int k = f_->k;
    std::vector<u64> prod(2 * k - 1, 0);
    for (int i = 0; i < k; ++i) {
        if (c_[i] == 0) continue;
        for (int j = 0; j < k; ++j) prod[i + j] = (prod[i + j] + mulmod(c_[i], o.c_[j], p)) % p;
    }
    const auto& m = f_->modulus.coeffs();
    for (int i = 2 * k - 2; i >= k; --i) {
        u64 c = prod[i];
        if (c == 0) continue;
        prod[i] = 0;
        for (int j = 0; j < k; ++j) prod[i - k + j] = (prod[i - k + j] + p - mulmod(c, m[j], p)) % p;
    }
    prod.resize(k);
    return FieldElement(f_, prod);
}

FieldElement FieldElement::inverse() const {
    if (is_zero()) throw MathError("DivisionByZero", "inverse of zero");
    return pow(f_->q - 2);
}

FieldElement FieldElement::operator/(const FieldElement& o) const { return *this * o.inverse(); }

FieldElement FieldElement::pow(u64 e) const {
    std::vector<u64> one(f_->k, 0);
    one[0] = 1;
    FieldElement r(f_, one), b = *this;
    while (e) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

FieldElement FieldElement::frobenius(int i) const {
    int k = f_->k;
    i = static_cast<int>(mod(i, k));
    FieldElement r = *this;
    for (int j = 0; j < i; ++j) r = r.pow(f_->p);
    return r;
}

bool FieldElement::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](u64 v) { return v == 0; });
}

bool FieldElement::is_one() const {
    if (c_.empty() || c_[0] != 1) return false;
    return std::all_of(c_.begin() + 1, c_.end(), [](u64 v) { return v == 0; });
}

u64 FieldElement::index() const {
    u64 r = 0;
    for (size_t i = c_.size(); i-- > 0;) r = r * f_->p + c_[i];
    return r;
}

bool FieldElement::in_subfield(int s) const {
    if (f_->k % s != 0) return false;
    return frobenius(s) == *this;
}

u64 FieldElement::prime_value() const {
    if (!std::all_of(c_.begin() + 1, c_.end(), [](u64 v) { return v == 0; }))
        throw InvariantError("NotInPrimeField", str());
    return c_[0];
}

u64 FieldElement::trace(int s) const {
    if (s <= 0) s = f_->k;
    if (!in_subfield(s)) throw InvariantError("NotInSubfield", str());
    FieldElement acc = *this, cur = *this;
    for (int i = 1; i < s; ++i) {
        cur = cur.frobenius(1);
        acc = acc + cur;
    }
    return acc.prime_value();
}

FieldElement FieldElement::norm_to(int s) const {
    int k = f_->k;
    if (k % s != 0) throw InputError("BadSubfield", "s must divide k");
    FieldElement acc = *this, cur = *this;
    for (int i = 1; i < k / s; ++i) {
        cur = cur.frobenius(s);
        acc = acc * cur;
    }
    return acc;
}

std::string FieldElement::str() const {
    return PolyFp(f_->p, c_).str("t");
}

cplx additive_character(const FieldElement& x, int s) {
    u64 t = x.trace(s);
    return std::polar(1.0, kTwoPi * static_cast<double>(t) / static_cast<double>(x.p()));
}

// ---- CyclicGroup ------------------------------------------------------------

CyclicGroup CyclicGroup::from_generator(const FieldElement& g, u64 order) {
    CyclicGroup G(g.field());
    G.elems_.reserve(order);
    FieldElement cur = g.field().one();
    for (u64 t = 0; t < order; ++t) {
        G.log_.emplace(cur.index(), t);
        G.elems_.push_back(cur);
        cur = cur * g;
    }
    if (!cur.is_one()) throw InvariantError("BadGenerator", "g^order != 1");
    if (G.log_.size() != order) throw InvariantError("BadGenerator", "order not exact");
    return G;
}

CyclicGroup CyclicGroup::multiplicative(const ExtField& F, int s) {
    int k = F.degree();
    if (s <= 0) s = k;
    if (k % s != 0) throw InputError("BadSubfield", "s must divide the degree");
    u64 qs = checked_pow(F.p(), s);
    FieldElement gamma = F.primitive_element();
    u64 n = F.order() - 1;
    return from_generator(gamma.pow(n / (qs - 1)), qs - 1);
}

CyclicGroup CyclicGroup::norm_one(const ExtField& F) {
    int k = F.degree();
    if (k % 2 != 0) throw InputError("OddDegree", "norm-one group needs an even-degree field");
    u64 q = checked_pow(F.p(), k / 2);
    FieldElement gamma = F.primitive_element();
    return from_generator(gamma.pow(q - 1), q + 1);
}

bool CyclicGroup::contains(const FieldElement& x) const {
    return log_.count(x.index()) > 0;
}

u64 CyclicGroup::dlog(const FieldElement& x) const {
    auto it = log_.find(x.index());
    if (it == log_.end()) throw InvariantError("NotInGroup", x.str());
    return it->second;
}

cplx MultCharacter::at_exponent(u64 t) const {
    u64 e = static_cast<u64>((static_cast<unsigned __int128>(j % m) * (t % m)) % m);
    return std::polar(1.0, kTwoPi * static_cast<double>(e) / static_cast<double>(m));
}

}  // namespace torusq
