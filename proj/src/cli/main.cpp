#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "torusq/exp_sums.hpp"
#include "torusq/io.hpp"
#include "torusq/scars.hpp"
#include "torusq/stats.hpp"

using namespace torusq;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvariant = static_cast<int>(ErrorCategory::Invariant);

struct Globals {
    bool json = false;
    int jobs = 1;
    std::string out = ".";
    u64 seed = 1;
};

/// Text goes to stdout unless --json is set, in which case only the JSON document is printed.
struct Report {
    std::ostringstream text;
    json doc;
    explicit Report(const std::string& command) { doc = {{"schema_version", kSchemaVersion}, {"command", command}}; }
    void emit(const Globals& g) const {
        if (g.json)
            std::cout << doc.dump(2) << "\n";
        else
            std::cout << text.str();
    }
};

/// Kernels run in parallel; nested inside a prime sweep they fall back to one thread.
Backend backend_for(const Globals&) { return Backend::Parallel; }

std::string out_path(const Globals& g, const std::string& file) {
    std::filesystem::create_directories(g.out);
    return (std::filesystem::path(g.out) / file).string();
}

std::string join(const IVec& n, const char* sep = ";") {
    std::string s;
    for (size_t i = 0; i < n.size(); ++i) s += (i ? sep : "") + std::to_string(n[i]);
    return s;
}

json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

std::string multiplicity_table(const HeckeBasis& B) {
    std::map<int, int, std::greater<>> by_dim;
    for (auto& kv : B.multiplicity)
        if (kv.second > 0) ++by_dim[kv.second];
    std::string s;
    for (auto& [dim, count] : by_dim) s += (s.empty() ? "" : " + ") + std::to_string(count) + "×" + std::to_string(dim);
    return s;
}

IVec random_frequency(std::mt19937_64& rng, int d, int radius) {
    for (;;) {
        IVec n(2 * d);
        for (auto& x : n) x = static_cast<i64>(rng() % (2 * radius + 1)) - radius;
        if (std::any_of(n.begin(), n.end(), [](i64 x) { return x != 0; })) return n;
    }
}

int require_odd_primes(const std::vector<u64>& ps) {
    if (ps.empty()) throw InputError("NoPrimes", "the prime list is empty");
    for (u64 p : ps)
        if (p == 2 || !is_prime(p)) throw InputError("NotPrime", std::to_string(p) + " is not an odd prime");
    return 0;
}

// ---- analyze ------------------------------------------------------------------

int cmd_analyze(const Globals& g, const std::string& path) {
    auto fx = load_matrix(path);
    const auto& A = fx.A;
    auto D = rational_orbit_decomposition(A);
    Report r("analyze");
    r.text << "matrix: " << (fx.name.empty() ? path : fx.name) << " (d = " << A.d() << ")\n";
    r.text << "characteristic polynomial: " << D.char_poly.str() << "\n";
    std::string fac;
    json jf = json::array();
    for (auto& f : factor_over_z(D.char_poly)) {
        fac += (fac.empty() ? "" : " * ") + ("(" + f.str() + ")");
        jf.push_back(f.str());
    }
    r.text << "factorization: " << fac << "\n";
    r.text << "discriminant: " << D.discriminant << "\n";
    r.text << "theta flag: " << (A.theta_flag() ? "yes" : "no") << "\n";
    r.text << "orbits:\n";
    json jo = json::array();
    for (size_t i = 0; i < D.orbits.size(); ++i) {
        auto& o = D.orbits[i];
        r.text << "  [" << i << "] " << o.poly.str() << "  degree " << o.degree() << "  "
               << (o.symmetric ? "symmetric" : "nonsymmetric") << "  partner " << o.partner << "\n";
        jo.push_back({{"poly", o.poly.str()}, {"degree", o.degree()}, {"symmetric", o.symmetric}, {"partner", o.partner}});
    }
    json jw = json::array();
    for (auto& w : D.witness) {
        json row = json::array();
        for (auto& x : w) row.push_back(static_cast<i64>(x));
        jw.push_back(row);
    }
    if (D.aque) {
        r.text << "AQUE: yes\n";
    } else {
        r.text << "AQUE: no, isotropic subspace dim " << rank_q(to_q(D.witness)) << "\n";
        for (auto& w : jw) r.text << "  witness " << w.dump() << "\n";
    }
    r.doc["name"] = fx.name;
    r.doc["d"] = A.d();
    r.doc["char_poly"] = D.char_poly.str();
    r.doc["factors"] = jf;
    r.doc["discriminant"] = D.discriminant.str();
    r.doc["theta_flag"] = A.theta_flag();
    r.doc["orbits"] = jo;
    r.doc["aque"] = D.aque;
    r.doc["witness"] = jw;
    r.emit(g);
    return kExitOk;
}

// ---- egorov -------------------------------------------------------------------

int cmd_egorov(const Globals& g, const std::string& path, const std::vector<int>& Ns, int samples) {
    auto fx = load_matrix(path);
    Report r("egorov");
    json rows = json::array();
    double worst = 0;
    for (int N : Ns) {
        HilbertSpace H(N, fx.A.d());
        json row{{"N", N}};
        if (N % 2 == 1) {
            auto P = propagator_averaging(H, fx.A.entries(), backend_for(g));
            double dev = egorov_deviation(H, P.U, fx.A.entries(), samples);
            double rel = std::abs(P.c2_measured - P.c2_expected) / P.c2_expected;
            worst = std::max(worst, dev);
            row["averaging_deviation"] = dev;
            row["c2_expected"] = P.c2_expected;
            row["c2_relative_error"] = rel;
            r.text << "N=" << N << " averaging: max deviation " << fmt(dev) << ", |c|^2 = " << fmt(P.c2_expected)
                   << " (relative error " << fmt(rel) << ")\n";
        }
        if (!fx.word.empty()) {
            CMatrix U = propagator_from_word(H, fx.word);
            double dev = egorov_deviation(H, U, fx.A.entries(), samples);
            worst = std::max(worst, dev);
            row["word_deviation"] = dev;
            r.text << "N=" << N << " generator word: max deviation " << fmt(dev) << "\n";
        } else if (N % 2 == 0) {
            throw MathError("EvenN", "even N needs a generator word in the matrix file");
        }
        rows.push_back(row);
    }
    bool ok = worst < 1e-9;
    r.text << "max deviation " << fmt(worst) << (ok ? " < 1e-9\n" : " >= 1e-9 (violation)\n");
    r.doc["results"] = rows;
    r.doc["max_deviation"] = worst;
    r.doc["ok"] = ok;
    r.emit(g);
    return ok ? kExitOk : kExitInvariant;
}

// ---- hecke --------------------------------------------------------------------

int cmd_hecke(const Globals& g, const std::string& path, u64 p) {
    require_odd_primes({p});
    auto fx = load_matrix(path);
    auto S = build_hecke_system(fx.A, p, backend_for(g));
    Report r("hecke");
    r.text << "p = " << p << ", dim = " << S.basis.vectors.rows() << ", |C_p(A)| = " << S.group.size() << "\n";
    json jo = json::array();
    for (size_t t = 0; t < S.orbits.orbits.size(); ++t) {
        auto& o = S.orbits.orbits[t];
        r.text << "  orbit " << t << ": factor " << o.factor.str() << ", " << (o.symmetric ? "symmetric" : "nonsymmetric")
               << ", d_theta " << o.d_theta << ", q " << o.q << ", group order " << S.group.orders[t] << "\n";
        jo.push_back({{"factor", o.factor.str()},
                      {"symmetric", o.symmetric},
                      {"d_theta", o.d_theta},
                      {"q", o.q},
                      {"order", S.group.orders[t]}});
    }
    std::string why;
    bool ok = multiplicity_table_ok(S.basis, &why);
    std::string table = multiplicity_table(S.basis);
    r.text << "multiplicity table: " << table << "\n";
    if (!ok) r.text << "multiplicity check failed: " << why << "\n";
    export_basis(g.out, S.basis);
    r.text << "basis written to " << out_path(g, "basis.json") << "\n";
    r.doc["p"] = p;
    r.doc["group_size"] = S.group.size();
    r.doc["orbits"] = jo;
    r.doc["multiplicity_table"] = table;
    r.doc["ok"] = ok;
    r.emit(g);
    return ok ? kExitOk : kExitInvariant;
}

// ---- matel --------------------------------------------------------------------

int cmd_matel(const Globals& g, const std::string& path, u64 p, const std::vector<std::string>& ns, int count) {
    require_odd_primes({p});
    auto fx = load_matrix(path);
    const int d = fx.A.d();
    std::vector<IVec> freqs;
    for (auto& s : ns) freqs.push_back(parse_vector(s, d));
    std::mt19937_64 rng(g.seed);
    for (int i = 0; i < count; ++i) freqs.push_back(random_frequency(rng, d, 3));
    if (freqs.empty()) throw InputError("NoFrequency", "give --n or --count");

    auto S = build_hecke_system(fx.A, p, backend_for(g));
    HilbertSpace H(static_cast<int>(p), d);
    std::vector<ExpSumContext> ctx;
    for (auto& o : S.orbits.orbits) ctx.push_back(ExpSumContext::from_orbit(o));

    Report r("matel");
    json jn = json::array();
    double worst = 0;
    for (auto& n : freqs) {
        auto direct = diagonal_elements(elementary_op(H, n), S.basis.vectors, backend_for(g));
        double dist = multiset_distance(direct_multiset(S, n, backend_for(g)), formula_multiset(S.orbits, n));
        worst = std::max(worst, dist);
        r.text << "n = (" << join(n, ", ") << "): multiset distance " << fmt(dist) << "\n";
        json elems = json::array();
        for (size_t i = 0; i < direct.size(); ++i) {
            json e{{"index", i}, {"labels", S.basis.labels[i]}, {"direct", cplx_json(direct[i])}};
            r.text << "  psi_" << i << " labels " << json(S.basis.labels[i]).dump() << "  " << fmt(direct[i].real())
                   << " " << fmt(direct[i].imag());
            if (S.basis.carries_quad(i)) {
                e["quad_flag"] = true;
                r.text << "  (quadratic character)\n";
            } else {
                cplx f = matrix_element_formula(S.orbits, ctx, S.basis.labels[i], n);
                e["formula"] = cplx_json(f);
                r.text << "  formula " << fmt(f.real()) << " " << fmt(f.imag()) << "\n";
            }
            elems.push_back(e);
        }
        jn.push_back({{"n", n}, {"multiset_distance", dist}, {"elements", elems}});
    }
    bool ok = worst <= 1e-8;
    r.doc["p"] = p;
    r.doc["frequencies"] = jn;
    r.doc["max_multiset_distance"] = worst;
    r.doc["ok"] = ok;
    r.emit(g);
    return ok ? kExitOk : kExitInvariant;
}

// ---- expsums ------------------------------------------------------------------

int cmd_expsums(const Globals& g, const std::vector<u64>& qs, const std::string& kind) {
    if (qs.empty()) throw InputError("NoModulus", "give --q");
    std::vector<bool> kinds;
    if (kind == "sym" || kind == "both") kinds.push_back(true);
    if (kind == "nonsym" || kind == "both") kinds.push_back(false);
    CsvWriter csv(out_path(g, "expsums.csv"), {"q", "orbit_type", "nu_repr", "chi_index", "re", "im", "normalized"});
    Report r("expsums");
    json rows = json::array();
    bool ok = true;
    for (u64 q : qs) {
        auto f = prime_factors(q);
        if (f.size() != 1 || f[0] == 2) throw InputError("NotOddPrimePower", std::to_string(q));
        int s = 0;
        for (u64 x = q; x > 1; x /= f[0]) ++s;
        for (bool sym : kinds) {
            auto ctx = ExpSumContext::standalone(f[0], s, sym);
            auto nus = ctx.nonzero_nu();
            auto grid = expsum_grid(ctx, nus, backend_for(g));
            const u64 m = ctx.order(), quad = m / 2;
            const double sq = std::sqrt(static_cast<double>(q));
            double worst = 0;
            for (size_t a = 0; a < nus.size(); ++a)
                for (u64 j = 0; j < m; ++j) {
                    cplx v = grid[a][j];
                    double w = sq * std::abs(v);
                    if (j != quad) worst = std::max(worst, w);
                    csv.row({std::to_string(q), sym ? "sym" : "nonsym", std::to_string(nus[a].index()), std::to_string(j),
                             fmt(v.real()), fmt(v.imag()), fmt(w)});
                }
            std::vector<double> samples;
            for (u64 j = 0; j < m; ++j)
                if (j != quad) samples.push_back(sq * grid[0][j].real());
            double ks = sato_tate_stats(samples).distance;
            double bound = 2 + 10 / sq;
            bool pass = worst <= bound;
            ok = ok && pass;
            r.text << "q=" << q << " " << (sym ? "sym" : "nonsym") << ": max sqrt(q)|E| = " << fmt(worst) << " (bound "
                   << fmt(bound) << (pass ? ")" : ", violated)") << ", KS distance " << fmt(ks) << "\n";
            rows.push_back({{"q", q}, {"orbit_type", sym ? "sym" : "nonsym"}, {"max_normalized", worst}, {"ks", ks}});
        }
    }
    r.text << "wrote " << csv.rows() << " rows to " << out_path(g, "expsums.csv") << "\n";
    r.doc["results"] = rows;
    r.doc["ok"] = ok;
    r.emit(g);
    return ok ? kExitOk : kExitInvariant;
}

// ---- scars --------------------------------------------------------------------

int cmd_scars(const Globals& g, const std::string& path, const std::vector<u64>& primes, int radius,
              const std::string& obs_path) {
    require_odd_primes(primes);
    auto fx = load_matrix(path);
    if (fx.e0.empty()) throw InputError("MissingE0", "the matrix file has no e0 rows");
    auto M = scar_manifold(fx.A, fx.e0);
    auto D = rational_orbit_decomposition(fx.A);
    ZMat comp = partner_subspace(D, M.e0);
    auto ns = box(fx.A.d(), radius);
    Observable f;
    if (!obs_path.empty()) f = load_observable(obs_path, fx.A.d());

    struct Out {
        ScarSpectrum spec;
        double measure = -1;
    };
    const Backend be = backend_for(g);
    auto res = sweep_primes<Out>(primes, g.jobs, [&](u64 p) {
        auto st = build_scar(fx.A, M, p, be);
        Out o{scar_spectrum(st, comp, ns)};
        if (!f.n.empty()) o.measure = scar_measure_deviation(st, f);
        return o;
    });

    CsvWriter csv(out_path(g, "scars.csv"), {"p", "n", "class", "re", "im", "p^{1/4}|value|"});
    Report r("scars");
    json rows = json::array();
    bool ok = true;
    for (size_t i = 0; i < primes.size(); ++i) {
        const u64 p = primes[i];
        const auto& sp = res[i].spec;
        const double s = std::pow(static_cast<double>(p), 0.25);
        for (auto& v : sp.values)
            csv.row({std::to_string(p), join(v.n), scar_class_name(v.cls), fmt(v.value.real()), fmt(v.value.imag()),
                     fmt(s * std::abs(v.value))});
        bool pass = sp.z0_deviation < 1e-9 && sp.complement_max < 1e-9;
        ok = ok && pass;
        r.text << "p=" << p << ": Z0 deviation " << fmt(sp.z0_deviation) << ", complement max " << fmt(sp.complement_max)
               << ", generic p^{1/4} max " << fmt(sp.generic_constant);
        if (res[i].measure >= 0) r.text << ", measure deviation " << fmt(res[i].measure);
        r.text << (pass ? "\n" : " (violation)\n");
        json row{{"p", p},
                 {"z0_deviation", sp.z0_deviation},
                 {"complement_max", sp.complement_max},
                 {"generic_constant", sp.generic_constant}};
        if (res[i].measure >= 0) row["measure_deviation"] = res[i].measure;
        rows.push_back(row);
    }
    r.doc["results"] = rows;
    r.doc["ok"] = ok;
    r.emit(g);
    return ok ? kExitOk : kExitInvariant;
}

// ---- variance -----------------------------------------------------------------

int cmd_variance(const Globals& g, const std::string& path, const std::string& obs_path,
                 const std::vector<u64>& primes) {
    require_odd_primes(primes);
    auto fx = load_matrix(path);
    auto D = rational_orbit_decomposition(fx.A);
    if (!D.aque) throw MathError("NotAQUE", "variance needs every rational orbit symmetric");
    auto f = load_observable(obs_path, fx.A.d());
    auto norms = n0_norms(D, f);
    std::vector<u64> used;
    for (u64 p : primes)
        if (prime_allowed(norms, D.discriminant, p))
            used.push_back(p);
        else
            std::cerr << "skipping p=" << p << " (reduction guard)\n";
    const Backend be = backend_for(g);
    auto res = sweep_primes<VarianceResult>(used, g.jobs, [&](u64 p) {
        return variance(D, build_hecke_system(fx.A, p, be), f, be);
    });

    CsvWriter csv(out_path(g, "variance.csv"), {"p", "d_f", "S2", "S2_times_p_df", "V_f"});
    Report r("variance");
    json rows = json::array();
    bool ok = true;
    for (auto& v : res) {
        csv.row({std::to_string(v.p), std::to_string(v.d_f), fmt(v.S2), fmt(v.S2_scaled), fmt(v.V_f)});
        bool pass = std::abs(v.S2 - v.S2_via_sharp) < 1e-9;
        ok = ok && pass;
        r.text << "p=" << v.p << ": S2 " << fmt(v.S2) << ", S2 p^d_f " << fmt(v.S2_scaled) << ", V(f) " << fmt(v.V_f)
               << (pass ? "\n" : " (two-way mismatch)\n");
        rows.push_back({{"p", v.p},
                        {"d_f", v.d_f},
                        {"S2", v.S2},
                        {"S2_times_p_df", v.S2_scaled},
                        {"V_f", v.V_f},
                        {"S2_via_sharp", v.S2_via_sharp}});
    }
    r.doc["results"] = rows;
    r.doc["ok"] = ok;
    r.emit(g);
    return ok ? kExitOk : kExitInvariant;
}

// ---- moments ------------------------------------------------------------------

int cmd_moments(const Globals& g, const std::string& path, const std::vector<u64>& primes, const std::string& n_str,
                const std::string& m_str) {
    require_odd_primes(primes);
    auto fx = load_matrix(path);
    const int d = fx.A.d();
    IVec n = parse_vector(n_str, d);
    IVec m = m_str.empty() ? fx.A.act(n) : parse_vector(m_str, d);
    auto D = rational_orbit_decomposition(fx.A);
    const int dn = d_n_dimension(D, n);

    struct Out {
        cplx second, mixed;
        std::optional<double> fourth;
        u64 q4 = 0;
    };
    const Backend be = backend_for(g);
    auto res = sweep_primes<Out>(primes, g.jobs, [&](u64 p) {
        auto S = build_hecke_system(fx.A, p, be);
        Out o{mixed_moment(S, n, n, be), mixed_moment(S, n, m, be), std::nullopt, 0};
        if (S.orbits.single_orbit() && S.orbits.orbits[0].symmetric && S.orbits.orbits[0].d_theta == d) {
            o.fourth = fourth_moment(S, n, be);
            o.q4 = S.orbits.orbits[0].q;
        }
        return o;
    });

    CsvWriter csv(out_path(g, "moments.csv"), {"p", "q", "kind", "value_re", "value_im", "normalized"});
    Report r("moments");
    json rows = json::array();
    for (size_t i = 0; i < primes.size(); ++i) {
        const u64 p = primes[i];
        const auto& o = res[i];
        const double q = std::pow(static_cast<double>(p), dn);
        csv.row({std::to_string(p), fmt(q), "second", fmt(o.second.real()), fmt(o.second.imag()), fmt(q * o.second.real())});
        csv.row({std::to_string(p), fmt(q), "mixed", fmt(o.mixed.real()), fmt(o.mixed.imag()), fmt(q * std::abs(o.mixed))});
        r.text << "p=" << p << ": q*second " << fmt(q * o.second.real()) << ", q*|mixed| " << fmt(q * std::abs(o.mixed));
        json row{{"p", p}, {"second", cplx_json(o.second)}, {"mixed", cplx_json(o.mixed)}};
        if (o.fourth) {
            const double q4 = static_cast<double>(o.q4);
            csv.row({std::to_string(p), fmt(q4), "fourth", fmt(*o.fourth), "0", fmt(q4 * q4 * *o.fourth)});
            r.text << ", q^2*fourth " << fmt(q4 * q4 * *o.fourth);
            row["fourth"] = *o.fourth;
        }
        r.text << "\n";
        rows.push_back(row);
    }
    r.doc["n"] = n;
    r.doc["m"] = m;
    r.doc["results"] = rows;
    r.emit(g);
    return kExitOk;
}

// ---- dist ---------------------------------------------------------------------

int cmd_dist(const Globals& g, const std::string& path, const std::string& obs_path, const std::vector<u64>& primes,
             bool classify) {
    require_odd_primes(primes);
    auto fx = load_matrix(path);
    auto D = rational_orbit_decomposition(fx.A);
    Report r("dist");

    std::vector<PrimeClass> classes;
    json jc = json::array();
    if (classify) {
        CsvWriter csv(out_path(g, "primes.csv"), {"p", "k", "degree_pattern", "density_running"});
        std::map<int, u64> seen;
        u64 total = 0;
        for (u64 p : primes) {
            if (D.discriminant % p == 0) continue;
            auto c = classify_prime(D.char_poly, p);
            ++total;
            ++seen[c.k];
            double density = static_cast<double>(seen[c.k]) / static_cast<double>(total);
            csv.row({std::to_string(p), std::to_string(c.k), c.pattern(), fmt(density)});
            classes.push_back(c);
        }
        r.text << "classified " << total << " primes:";
        for (auto& [k, cnt] : seen) {
            double density = static_cast<double>(cnt) / static_cast<double>(total);
            r.text << " k=" << k << " density " << fmt(density);
            jc.push_back({{"k", k}, {"count", cnt}, {"density", density}});
        }
        r.text << "\n";
    }
    r.doc["classes"] = jc;

    if (!obs_path.empty()) {
        if (!D.aque) throw MathError("NotAQUE", "distributions need every rational orbit symmetric");
        auto f = load_observable(obs_path, fx.A.d());
        const int d_f = d_f_of(D, f);
        auto norms = n0_norms(D, f);
        std::vector<u64> used;
        for (u64 p : primes)
            if (prime_allowed(norms, D.discriminant, p))
                used.push_back(p);
            else
                std::cerr << "skipping p=" << p << " (reduction guard)\n";
        const Backend be = backend_for(g);
        auto res = sweep_primes<Samples>(used, g.jobs, [&](u64 p) {
            return normalized_elements(build_hecke_system(fx.A, p, be), f, d_f, be);
        });
        CsvWriter csv(out_path(g, "dist.csv"), {"p", "k_class", "sample_index", "w_re", "w_im"});
        json rows = json::array();
        for (size_t i = 0; i < used.size(); ++i) {
            const u64 p = used[i];
            const int k = classify_prime(D.char_poly, p).k;
            for (size_t s = 0; s < res[i].w.size(); ++s)
                csv.row({std::to_string(p), std::to_string(k), std::to_string(s), fmt(res[i].w[s].real()),
                         fmt(res[i].w[s].imag())});
            r.text << "p=" << p << " (k=" << k << "): " << res[i].w.size() << " samples, mean "
                   << fmt(std::abs(res[i].mean)) << ", variance " << fmt(res[i].variance) << "\n";
            rows.push_back({{"p", p},
                            {"k", k},
                            {"samples", res[i].w.size()},
                            {"mean", cplx_json(res[i].mean)},
                            {"variance", res[i].variance}});
        }
        r.doc["results"] = rows;
    } else if (!classify) {
        throw InputError("NothingToDo", "give --obs, --classify or both");
    }
    r.emit(g);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantized symplectic maps on the torus: Hecke bases, exponential sums, scars and statistics."};
    app.footer(
        "Exit codes: 0 ok, 2 input error (parse, schema, bad arguments), 3 math precondition "
        "(bad prime, repeated eigenvalues, not AQUE), 4 invariant violation.");
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML config file; keys match long option names, one [section] per subcommand");
    app.allow_config_extras(CLI::config_extras_mode::error);

    Globals g;
    app.add_flag("--json", g.json, "Print a schema-versioned JSON document instead of text");
    app.add_option("--jobs", g.jobs, "Threads for prime sweeps")->check(CLI::PositiveNumber);
    app.add_option("--out", g.out, "Output directory for CSV and basis files");
    app.add_option("--seed", g.seed, "Seed for sampled frequencies");

    std::string matrix, obs, primes_str, n_str, m_str, kind = "both";
    std::vector<int> Ns;
    std::vector<std::string> ns;
    std::vector<u64> qs;
    u64 p = 0;
    int samples = 48, count = 0, radius = 2;
    bool classify = false;

    auto add_matrix = [&](CLI::App* c) {
        c->add_option("matrix", matrix, "Matrix JSON file")->required()->check(CLI::ExistingFile);
    };
    auto add_primes = [&](CLI::App* c) {
        c->add_option("--primes", primes_str, "Primes: \"5,7,11\" or a range \"13:101\"")->required();
    };
    auto add_obs = [&](CLI::App* c, bool required) {
        auto o = c->add_option("--obs", obs, "Observable JSON file")->check(CLI::ExistingFile);
        if (required) o->required();
    };

    auto* analyze = app.add_subcommand("analyze", "Rational orbit structure and AQUE verdict");
    add_matrix(analyze);

    auto* egorov = app.add_subcommand("egorov", "Intertwining deviation of the propagator at modulus N");
    add_matrix(egorov);
    egorov->add_option("--N", Ns, "Moduli")->required()->delimiter(',')->check(CLI::Range(2, 1000));
    egorov->add_option("--samples", samples, "Sampled frequencies when the full check is too large");

    auto* hecke = app.add_subcommand("hecke", "Hecke eigenbasis at a prime; writes basis.json and basis.npy");
    add_matrix(hecke);
    hecke->add_option("--p", p, "Prime")->required();

    auto* matel = app.add_subcommand("matel", "Diagonal matrix elements, direct and by exponential sums");
    add_matrix(matel);
    matel->add_option("--p", p, "Prime")->required();
    matel->add_option("--n", ns, "Frequencies \"1,0,...\"");
    matel->add_option("--count", count, "Additional random frequencies");

    auto* expsums = app.add_subcommand("expsums", "Exponential sums E_q(nu, chi); writes expsums.csv");
    expsums->add_option("--q", qs, "Odd prime powers")->required()->delimiter(',');
    expsums->add_option("--kind", kind, "sym, nonsym or both")->check(CLI::IsMember({"sym", "nonsym", "both"}));

    auto* scars = app.add_subcommand("scars", "Super-scar states; writes scars.csv");
    add_matrix(scars);
    add_primes(scars);
    scars->add_option("--radius", radius, "Frequency box radius")->check(CLI::Range(1, 4));
    add_obs(scars, false);

    auto* var = app.add_subcommand("variance", "Quantum variance in the Hecke basis; writes variance.csv");
    add_matrix(var);
    add_obs(var, true);
    add_primes(var);

    auto* moments = app.add_subcommand("moments", "Second, mixed and fourth moments; writes moments.csv");
    add_matrix(moments);
    add_primes(moments);
    moments->add_option("--n", n_str, "Frequency")->required();
    moments->add_option("--m", m_str, "Second frequency for the mixed moment (default nA)");

    auto* dist = app.add_subcommand("dist", "Normalized matrix elements (dist.csv) and prime classes (primes.csv)");
    add_matrix(dist);
    add_obs(dist, false);
    add_primes(dist);
    dist->add_flag("--classify", classify, "Write primes.csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : static_cast<int>(ErrorCategory::Input);
    }

    try {
        if (*analyze) return cmd_analyze(g, matrix);
        if (*egorov) return cmd_egorov(g, matrix, Ns, samples);
        if (*hecke) return cmd_hecke(g, matrix, p);
        if (*matel) return cmd_matel(g, matrix, p, ns, count);
        if (*expsums) return cmd_expsums(g, qs, kind);
        if (*scars) return cmd_scars(g, matrix, parse_primes(primes_str), radius, obs);
        if (*var) return cmd_variance(g, matrix, obs, parse_primes(primes_str));
        if (*moments) return cmd_moments(g, matrix, parse_primes(primes_str), n_str, m_str);
        if (*dist) return cmd_dist(g, matrix, obs, parse_primes(primes_str), classify);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.category());
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(ErrorCategory::Input);
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(ErrorCategory::Input);
    }
    return kExitOk;
}
