#include "doctest.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "torusq/io.hpp"

using namespace torusq;
using nlohmann::json;

namespace {

std::string fixture_path(const std::string& name) { return std::string(TORUSQ_FIXTURE_DIR) + "/" + name + ".json"; }

std::string kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return "";
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("torusq_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("shipped fixtures load") {
    for (const char* name : {"cat", "a4", "block", "sp4", "phi10"}) {
        auto fx = load_matrix(fixture_path(name));
        CHECK(fx.name == name);
        CHECK(is_symplectic(fx.A.entries()));
        if (!fx.word.empty()) CHECK(matrix_from_word(fx.A.d(), fx.word) == fx.A.entries());
    }
    CHECK(load_matrix(fixture_path("block")).e0.size() == 2);
    CHECK(load_matrix(fixture_path("sp4")).word.size() == 8);
    auto f = load_observable(fixture_path("obs_sum"), 1);
    CHECK(f.n.size() == 2);
    CHECK(f.mean() == cplx(0, 0));
}

TEST_CASE("matrix parsing rejects bad input") {
    CHECK(kind_of([] { parse_matrix(json::parse(R"({"d":1,"entries":[[2,1],[3,2]],"colour":1})")); }) == "UnknownKey");
    CHECK(kind_of([] { parse_matrix(json::parse(R"({"d":1,"entries":[[1,1],[1,1]]})")); }) == "NotSymplectic");
    CHECK(kind_of([] { parse_matrix(json::parse(R"({"d":5,"entries":[]})")); }) == "BadDimension");
    CHECK(kind_of([] { parse_matrix(json::parse(R"({"d":1,"entries":[[2,1]]})")); }) == "BadShape");
    CHECK(kind_of([] { parse_matrix(json::parse(R"({"d":1,"entries":[[2,1],[3,2.5]]})")); }) == "ParseError");
    CHECK(kind_of([] {
              parse_matrix(json::parse(R"({"d":1,"entries":[[2,1],[3,2]],"word":[{"gen":"fourier"}]})"));
          }) == "WordMismatch");
    CHECK(kind_of([] {
              parse_matrix(json::parse(R"({"d":1,"entries":[[1,0],[0,1]],"word":[{"gen":"twist"}]})"));
          }) == "UnknownGenerator");
    CHECK(kind_of([] { load_matrix("/nonexistent/matrix.json"); }) == "FileNotFound");
    auto fx = parse_matrix(json::parse(R"({"d":1,"entries":[[0,1],[-1,0]],"word":[{"gen":"fourier"}]})"));
    CHECK(fx.word.size() == 1);
}

TEST_CASE("observable parsing") {
    auto f = parse_observable(json::parse(R"([{"n":[1,0],"re":1,"im":0.5},{"n":[0,0],"re":2,"im":0}])"), 1);
    CHECK(f.n.size() == 2);
    CHECK(f.mean() == cplx(2, 0));
    auto g = parse_observable(
        json::parse(R"({"real":true,"terms":[{"n":[1,2],"re":1,"im":1},{"n":[-1,-2],"re":1,"im":-1}]})"), 1);
    CHECK(g.c.size() == 2);
    CHECK(kind_of([] {
              parse_observable(json::parse(R"({"real":true,"terms":[{"n":[1,2],"re":1,"im":1}]})"), 1);
          }) == "NotReal");
    CHECK(kind_of([] { parse_observable(json::parse(R"([{"n":[1,0,0],"re":1}])"), 1); }) == "BadShape");
}

TEST_CASE("vector and prime list parsing") {
    CHECK(parse_vector("1,-2,0,3", 2) == IVec{1, -2, 0, 3});
    CHECK(kind_of([] { parse_vector("1,2,3", 2); }) == "BadShape");
    CHECK(kind_of([] { parse_vector("1,x", 1); }) == "ParseError");
    CHECK(parse_primes("5,7,11") == std::vector<u64>{5, 7, 11});
    CHECK(parse_primes("13:31") == std::vector<u64>{13, 17, 19, 23, 29, 31});
    CHECK(kind_of([] { parse_primes("9"); }) == "NotPrime");
    CHECK(kind_of([] { parse_primes("31:13"); }) == "ParseError");
}

TEST_CASE("number formatting round-trips") {
    for (double x : {0.1, 1.0 / 3.0, -2.5e-17, 1e300, 0.0}) CHECK(std::stod(fmt(x)) == x);
    CHECK(fmt(2.0) == "2");
}

TEST_CASE("csv writer keeps the header width") {
    auto dir = scratch("csv");
    std::string path = (dir / "t.csv").string();
    {
        CsvWriter w(path, {"p", "value"});
        w.row({"5", "0.5"});
        CHECK(w.rows() == 1);
        CHECK(kind_of([&] { w.row({"7"}); }) == "CsvWidth");
    }
    CHECK(slurp(path) == "p,value\n5,0.5\n");
}

TEST_CASE("npy export") {
    auto dir = scratch("npy");
    CMatrix M(3, 2);
    M << cplx(1, 2), cplx(3, 4), cplx(5, 6), cplx(7, 8), cplx(9, 10), cplx(11, 12);
    std::string path = (dir / "m.npy").string();
    write_npy_columns(path, M);
    std::string s = slurp(path);
    REQUIRE(s.size() > 10);
    CHECK(s.substr(0, 6) == "\x93NUMPY");
    size_t header_len = static_cast<unsigned char>(s[8]) | (static_cast<unsigned char>(s[9]) << 8);
    std::string header = s.substr(10, header_len);
    CHECK(header.find("'descr': '<c16'") != std::string::npos);
    CHECK(header.find("'shape': (2, 3)") != std::string::npos);
    CHECK((10 + header_len) % 64 == 0);
    CHECK(s.size() == 10 + header_len + 6 * 16);
    double first[2];
    std::memcpy(first, s.data() + 10 + header_len + 16, sizeof first);
    CHECK(first[0] == 5.0);
    CHECK(first[1] == 6.0);
}

TEST_CASE("sp4 generator word propagator intertwines at even and odd N") {
    auto fx = load_matrix(fixture_path("sp4"));
    for (int N : {2, 4, 5, 6}) {
        HilbertSpace H(N, 2);
        CMatrix U = propagator_from_word(H, fx.word);
        CHECK((U * U.adjoint() - CMatrix::Identity(H.dim, H.dim)).cwiseAbs().maxCoeff() < 1e-9);
        CHECK(egorov_deviation(H, U, fx.A.entries()) < 1e-9);
    }
}
