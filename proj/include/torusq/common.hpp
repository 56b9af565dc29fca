#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

namespace torusq {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Integer vector in Z^{2d} (frequency or lattice vector).
using IVec = std::vector<i64>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

enum class ErrorCategory { Input = 2, MathPrecondition = 3, Invariant = 4 };

/// Base error; the category maps to the CLI exit code.
class Error : public std::runtime_error {
public:
    Error(ErrorCategory cat, std::string kind, const std::string& msg)
        : std::runtime_error(kind + ": " + msg), cat_(cat), kind_(std::move(kind)) {}
    ErrorCategory category() const { return cat_; }
    const std::string& kind() const { return kind_; }

private:
    ErrorCategory cat_;
    std::string kind_;
};

struct InputError : Error {
    InputError(std::string kind, const std::string& msg)
        : Error(ErrorCategory::Input, std::move(kind), msg) {}
};

struct MathError : Error {
    MathError(std::string kind, const std::string& msg)
        : Error(ErrorCategory::MathPrecondition, std::move(kind), msg) {}
};

struct InvariantError : Error {
    InvariantError(std::string kind, const std::string& msg)
        : Error(ErrorCategory::Invariant, std::move(kind), msg) {}
};

inline i64 mod(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

}  // namespace torusq
