#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "torusq/hecke.hpp"
#include "torusq/quantizer.hpp"
#include "torusq/rational_structure.hpp"

namespace torusq {

inline constexpr int kSchemaVersion = 1;

/// A matrix file: {"d", "entries"} plus optional "name", "word" and "e0".
struct MatrixFixture {
    std::string name;
    IntSymplectic A;
    std::vector<WordStep> word;
    ZMat e0;
};

MatrixFixture parse_matrix(const nlohmann::json& j);
MatrixFixture load_matrix(const std::string& path);

/// Observable file: a list of {"n", "re", "im"} or {"real": bool, "terms": [...]}.
Observable parse_observable(const nlohmann::json& j, int d);
Observable load_observable(const std::string& path, int d);
/// "1,0,-2,3" -> vector of length 2d.
IVec parse_vector(const std::string& s, int d);
/// "5,7,11" or "13:101" (primes in the closed range).
std::vector<u64> parse_primes(const std::string& s);

nlohmann::json read_json(const std::string& path);

/// Shortest round-trip text for a double.
std::string fmt(double x);

class CsvWriter {
public:
    CsvWriter(const std::string& path, std::vector<std::string> header);
    void row(const std::vector<std::string>& cells);
    size_t rows() const { return rows_; }

private:
    std::string path_;
    std::ofstream out_;
    size_t width_;
    size_t rows_ = 0;
};

/// Complex128 array in NPY format; rows of the file are the columns of M.
void write_npy_columns(const std::string& path, const CMatrix& M);
/// basis.json plus basis.npy in dir.
void export_basis(const std::string& dir, const HeckeBasis& B);

}  // namespace torusq
