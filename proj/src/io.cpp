#include "torusq/io.hpp"

#include <charconv>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "torusq/ff.hpp"

namespace torusq {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& what) {
    if (!j.is_object()) throw InputError("ParseError", what + " must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) throw InputError("UnknownKey", what + ": unknown key '" + it.key() + "'");
}

IMat int_matrix(const json& j, size_t rows, size_t cols, const std::string& what) {
    if (!j.is_array() || (rows && j.size() != rows)) throw InputError("BadShape", what + " has the wrong shape");
    IMat M;
    for (auto& r : j) {
        if (!r.is_array() || r.size() != cols) throw InputError("BadShape", what + " has the wrong shape");
        std::vector<i64> row;
        for (auto& v : r) {
            if (!v.is_number_integer()) throw InputError("ParseError", what + " entries must be integers");
            row.push_back(v.get<i64>());
        }
        M.push_back(row);
    }
    return M;
}

}  // namespace

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("FileNotFound", "cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw InputError("ParseError", path + ": " + e.what());
    }
}

MatrixFixture parse_matrix(const json& j) {
    check_keys(j, {"name", "d", "entries", "word", "e0"}, "matrix");
    if (!j.contains("d") || !j["d"].is_number_integer()) throw InputError("ParseError", "matrix needs integer 'd'");
    if (!j.contains("entries")) throw InputError("ParseError", "matrix needs 'entries'");
    int d = j["d"].get<int>();
    if (d < 1 || d > 4) throw InputError("BadDimension", "d must be in 1..4");
    size_t n = 2 * static_cast<size_t>(d);
    MatrixFixture F{j.value("name", std::string("matrix")), IntSymplectic(d, int_matrix(j["entries"], n, n, "entries")),
                    {}, {}};
    if (j.contains("word")) {
        for (auto& s : j["word"]) {
            check_keys(s, {"gen", "F", "E"}, "word step");
            WordStep w{s.value("gen", std::string()), {}};
            if (w.gen == "shear")
                w.block = int_matrix(s.at("F"), d, d, "F");
            else if (w.gen == "linear")
                w.block = int_matrix(s.at("E"), d, d, "E");
            else if (w.gen != "fourier")
                throw InputError("UnknownGenerator", "generator '" + w.gen + "'");
            F.word.push_back(w);
        }
        if (matrix_from_word(d, F.word) != F.A.entries())
            throw InputError("WordMismatch", "the word does not multiply out to the entries");
    }
    if (j.contains("e0")) F.e0 = to_z(int_matrix(j["e0"], 0, n, "e0"));
    return F;
}

MatrixFixture load_matrix(const std::string& path) { return parse_matrix(read_json(path)); }

Observable parse_observable(const json& j, int d) {
    const json* terms = &j;
    bool real = false;
    if (j.is_object()) {
        check_keys(j, {"real", "terms"}, "observable");
        real = j.value("real", false);
        if (!j.contains("terms")) throw InputError("ParseError", "observable needs 'terms'");
        terms = &j["terms"];
    }
    if (!terms->is_array() || terms->empty()) throw InputError("ParseError", "observable needs a nonempty term list");
    Observable f;
    for (auto& t : *terms) {
        check_keys(t, {"n", "re", "im"}, "observable term");
        if (!t.contains("n")) throw InputError("ParseError", "term needs 'n'");
        auto n = int_matrix(json::array({t["n"]}), 1, 2 * d, "n")[0];
        double re = t.value("re", 0.0), im = t.value("im", 0.0);
        f.n.push_back(n);
        f.c.push_back(cplx(re, im));
    }
    if (real) {
        for (size_t i = 0; i < f.n.size(); ++i) {
            IVec neg = f.n[i];
            for (auto& v : neg) v = -v;
            cplx partner = 0;
            for (size_t k = 0; k < f.n.size(); ++k)
                if (f.n[k] == neg) partner += f.c[k];
            if (std::abs(partner - std::conj(f.c[i])) > 1e-12)
                throw InputError("NotReal", "coefficients are not conjugate-symmetric under n -> -n");
        }
    }
    return f;
}

Observable load_observable(const std::string& path, int d) { return parse_observable(read_json(path), d); }

IVec parse_vector(const std::string& s, int d) {
    IVec v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        i64 x = 0;
        auto b = tok.data(), e = tok.data() + tok.size();
        while (b < e && *b == ' ') ++b;
        auto r = std::from_chars(b, e, x);
        if (r.ec != std::errc() || r.ptr != e) throw InputError("ParseError", "bad integer '" + tok + "'");
        v.push_back(x);
    }
    if (static_cast<int>(v.size()) != 2 * d)
        throw InputError("BadShape", "vector '" + s + "' must have " + std::to_string(2 * d) + " entries");
    return v;
}

std::vector<u64> parse_primes(const std::string& s) {
    auto num = [&](const std::string& t) {
        u64 x = 0;
        auto r = std::from_chars(t.data(), t.data() + t.size(), x);
        if (r.ec != std::errc() || r.ptr != t.data() + t.size()) throw InputError("ParseError", "bad prime '" + t + "'");
        return x;
    };
    auto colon = s.find(':');
    if (colon != std::string::npos) {
        u64 lo = num(s.substr(0, colon)), hi = num(s.substr(colon + 1));
        if (lo > hi) throw InputError("ParseError", "empty prime range " + s);
        return primes_between(lo, hi);
    }
    std::vector<u64> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        u64 p = num(tok);
        if (!is_prime(p)) throw InputError("NotPrime", tok + " is not prime");
        out.push_back(p);
    }
    if (out.empty()) throw InputError("ParseError", "no primes given");
    return out;
}

std::string fmt(double x) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

CsvWriter::CsvWriter(const std::string& path, std::vector<std::string> header) : path_(path), width_(header.size()) {
    auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    out_.open(path_, std::ios::trunc);
    if (!out_) throw InputError("FileNotWritable", "cannot write " + path_);
    for (size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << "\n";
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != width_) throw InvariantError("CsvWidth", path_ + ": row width does not match the header");
    for (size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << "\n";
    ++rows_;
}

void write_npy_columns(const std::string& path, const CMatrix& M) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("FileNotWritable", "cannot write " + path);
    std::string dict = "{'descr': '<c16', 'fortran_order': False, 'shape': (" + std::to_string(M.cols()) + ", " +
                       std::to_string(M.rows()) + "), }";
    size_t total = 10 + dict.size() + 1;
    dict.append((64 - total % 64) % 64, ' ');
    dict.push_back('\n');
    const char magic[] = "\x93NUMPY\x01\x00";
    out.write(magic, 8);
    uint16_t len = static_cast<uint16_t>(dict.size());
    char lb[2] = {static_cast<char>(len & 0xff), static_cast<char>(len >> 8)};
    out.write(lb, 2);
    out << dict;
    for (Eigen::Index c = 0; c < M.cols(); ++c)
        for (Eigen::Index r = 0; r < M.rows(); ++r) {
            double v[2] = {M(r, c).real(), M(r, c).imag()};
            out.write(reinterpret_cast<const char*>(v), sizeof v);
        }
}

void export_basis(const std::string& dir, const HeckeBasis& B) {
    std::filesystem::create_directories(dir);
    write_npy_columns((std::filesystem::path(dir) / "basis.npy").string(), B.vectors);
    json j;
    j["schema_version"] = kSchemaVersion;
    j["p"] = B.p;
    j["d"] = B.d;
    j["orders"] = B.orders;
    j["symmetric"] = B.symmetric;
    j["quad_label"] = B.quad_label;
    j["vectors_file"] = "basis.npy";
    json vs = json::array();
    for (size_t i = 0; i < B.labels.size(); ++i) {
        json labels = json::object(), phases = json::array();
        for (size_t t = 0; t < B.labels[i].size(); ++t) {
            labels[std::to_string(t)] = B.labels[i][t];
            phases.push_back(kTwoPi * B.labels[i][t] / static_cast<double>(B.orders[t]));
        }
        vs.push_back({{"index", i}, {"labels", labels}, {"quad_flag", B.carries_quad(i)}, {"phases", phases}});
    }
    j["vectors"] = vs;
    std::ofstream out((std::filesystem::path(dir) / "basis.json").string(), std::ios::trunc);
    out << j.dump(2) << "\n";
}

}  // namespace torusq
