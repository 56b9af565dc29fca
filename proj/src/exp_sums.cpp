#include "torusq/exp_sums.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace torusq {

ExpSumContext ExpSumContext::from_orbit(const FrobeniusOrbit& o) {
    ExpSumContext c;
    c.field = o.field;
    c.s = o.d_theta;
    c.q = o.q;
    c.group = o.group;
    c.kappa = o.kappa;
    c.symmetric = o.symmetric;
    return c;
}

ExpSumContext ExpSumContext::standalone(u64 p, int s, bool symmetric) {
    ExpSumContext c;
    c.s = s;
    c.q = checked_pow(p, s);
    c.symmetric = symmetric;
    if (symmetric) {
        c.field = ExtField::standard(p, 2 * s);
        c.group = CyclicGroup::norm_one(c.field);
        c.kappa = c.field.primitive_element().pow((c.q + 1) / 2);
    } else {
        c.field = ExtField::standard(p, s);
        c.group = CyclicGroup::multiplicative(c.field);
        c.kappa = c.field.one();
    }
    return c;
}

std::vector<FieldElement> ExpSumContext::nonzero_nu() const {
    return CyclicGroup::multiplicative(field, s).elements();
}

namespace {

// y_t = kappa (x_t + 1)/(x_t - 1) for x_t = g^t, t = 1..m-1
std::vector<FieldElement> cayley_points(const ExpSumContext& ctx) {
    std::vector<FieldElement> ys;
    const auto& el = ctx.group.elements();
    FieldElement one = ctx.field.one();
    for (size_t t = 1; t < el.size(); ++t) ys.push_back(ctx.kappa * (el[t] + one) / (el[t] - one));
    return ys;
}

std::vector<cplx> dft_row(const ExpSumContext& ctx, const std::vector<FieldElement>& ys, const FieldElement& nu) {
    const u64 m = ctx.order();
    std::vector<cplx> a(m, 0.0);
    for (u64 t = 1; t < m; ++t) a[t] = ctx.e_q(nu * ys[t - 1]) * ((t % 2 == 0) ? 1.0 : -1.0);
    std::vector<cplx> w(m);
    for (u64 k = 0; k < m; ++k) w[k] = std::polar(1.0, kTwoPi * static_cast<double>(k) / static_cast<double>(m));
    std::vector<cplx> out(m);
    for (u64 j = 0; j < m; ++j) {
        cplx s = 0;
        for (u64 t = 1; t < m; ++t) s += a[t] * w[(j * t) % m];
        out[j] = s / static_cast<double>(m);
    }
    return out;
}

}  // namespace

cplx expsum(const ExpSumContext& ctx, const FieldElement& nu, u64 j) {
    const u64 m = ctx.order();
    MultCharacter chi{m, j};
    MultCharacter chi2{m, m / 2};
    FieldElement one = ctx.field.one();
    cplx s = 0;
    for (u64 t = 1; t < m; ++t) {
        const FieldElement& x = ctx.group.element(t);
        s += ctx.e_q(nu * ctx.kappa * (x + one) / (x - one)) * chi.at_exponent(t) * chi2.at_exponent(t);
    }
    return s / static_cast<double>(m);
}

std::vector<cplx> expsum_all_chars(const ExpSumContext& ctx, const FieldElement& nu) {
    return dft_row(ctx, cayley_points(ctx), nu);
}

std::vector<std::vector<cplx>> expsum_grid(const ExpSumContext& ctx, const std::vector<FieldElement>& nus,
                                           Backend backend) {
    auto ys = cayley_points(ctx);
    std::vector<std::vector<cplx>> out(nus.size());
    const i64 n = static_cast<i64>(nus.size());
    if (backend == Backend::Serial) {
        for (i64 i = 0; i < n; ++i) out[i] = dft_row(ctx, ys, nus[i]);
    } else {
#pragma omp parallel for schedule(dynamic)
        for (i64 i = 0; i < n; ++i) out[i] = dft_row(ctx, ys, nus[i]);
    }
    return out;
}

cplx kloosterman_sum(const ExpSumContext& ctx, const FieldElement& a) {
    cplx s = 0;
    for (const auto& x : ctx.group.elements()) s += ctx.e_q(a * (x * x - ctx.field.one()) / x);
    return s;
}

FieldElement q_mod_p(const FrobeniusOrbit& o, const IVec& n) {
    FieldElement nu = omega_field(n, o.v) * omega_field(n, o.v_star);
    if (!nu.in_subfield(o.d_theta)) throw InvariantError("QNotInFq", "Q(n) is not fixed by Frobenius^{d_theta}");
    return nu;
}

bool touches_orbit(const FrobeniusOrbit& o, const IVec& n) {
    return !omega_field(n, o.v).is_zero() || !omega_field(n, o.v_star).is_zero();
}

cplx matrix_element_formula(const OrbitsModP& orbits, const std::vector<ExpSumContext>& ctx,
                            const std::vector<int>& labels, const IVec& n) {
    cplx r = 1.0;
    for (size_t t = 0; t < orbits.orbits.size(); ++t) {
        const auto& o = orbits.orbits[t];
        if (!touches_orbit(o, n)) continue;
        u64 m = ctx[t].order();
        u64 j = (m - static_cast<u64>(labels[t]) % m) % m;
        cplx e = expsum(ctx[t], q_mod_p(o, n), j);
        r *= o.symmetric ? -e : e;
    }
    return r;
}

std::vector<cplx> formula_multiset(const OrbitsModP& orbits, const IVec& n) {
    size_t k = orbits.orbits.size();
    std::vector<std::vector<cplx>> factors(k);
    std::vector<u64> orders(k);
    for (size_t t = 0; t < k; ++t) {
        const auto& o = orbits.orbits[t];
        auto ctx = ExpSumContext::from_orbit(o);
        orders[t] = ctx.order();
        if (!touches_orbit(o, n)) {
            factors[t].assign(orders[t], 1.0);
        } else {
            factors[t] = expsum_all_chars(ctx, q_mod_p(o, n));
            if (o.symmetric)
                for (auto& v : factors[t]) v = -v;
        }
    }
    std::vector<cplx> out;
    std::vector<u64> lab(k, 0);
    for (;;) {
        bool skip = false;
        cplx v = 1.0;
        for (size_t t = 0; t < k; ++t) {
            if (lab[t] == orders[t] / 2) skip = true;
            v *= factors[t][lab[t]];
        }
        if (!skip) out.push_back(v);
        size_t pos = 0;
        while (pos < k) {
            if (++lab[pos] < orders[pos]) break;
            lab[pos] = 0;
            ++pos;
        }
        if (pos == k) break;
    }
    return out;
}

std::vector<cplx> direct_multiset(const HeckeSystem& S, const IVec& n, Backend backend) {
    HilbertSpace H(static_cast<int>(S.orbits.p), S.orbits.d);
    auto all = diagonal_elements(elementary_op(H, n), S.basis.vectors, backend);
    std::vector<cplx> out;
    for (size_t i = 0; i < all.size(); ++i)
        if (!S.basis.carries_quad(i)) out.push_back(all[i]);
    return out;
}

double multiset_distance(std::vector<cplx> a, std::vector<cplx> b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    auto key = [](const cplx& z) { return std::make_pair(z.real(), z.imag()); };
    std::sort(a.begin(), a.end(), [&](const cplx& x, const cplx& y) { return key(x) < key(y); });
    std::vector<bool> used(b.size(), false);
    double worst = 0;
    for (const auto& x : a) {
        size_t best = b.size();
        double bd = std::numeric_limits<double>::infinity();
        for (size_t j = 0; j < b.size(); ++j) {
            if (used[j]) continue;
            double dd = std::abs(x - b[j]);
            if (dd < bd) {
                bd = dd;
                best = j;
            }
        }
        used[best] = true;
        worst = std::max(worst, bd);
    }
    return worst;
}

double semicircle_cdf(double x) {
    if (x <= -2) return 0.0;
    if (x >= 2) return 1.0;
    const double pi = kTwoPi / 2;
    return 0.5 + x * std::sqrt(4 - x * x) / (4 * pi) + std::asin(x / 2) / pi;
}

KsResult sato_tate_stats(std::vector<double> samples, int bins) {
    if (samples.empty()) throw InputError("EmptySample", "no samples");
    std::sort(samples.begin(), samples.end());
    KsResult r;
    const double n = static_cast<double>(samples.size());
    for (size_t i = 0; i < samples.size(); ++i) {
        double F = semicircle_cdf(samples[i]);
        r.distance = std::max({r.distance, std::abs(F - i / n), std::abs((i + 1) / n - F)});
    }
    r.histogram.assign(bins, 0.0);
    for (int b = 0; b <= bins; ++b) r.bin_edges.push_back(-2.0 + 4.0 * b / bins);
    for (double x : samples) {
        int b = static_cast<int>(std::floor((x + 2.0) / 4.0 * bins));
        b = std::clamp(b, 0, bins - 1);
        r.histogram[b] += 1.0 / (n * (4.0 / bins));
    }
    return r;
}

}  // namespace torusq
