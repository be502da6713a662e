#pragma once

#include <stdexcept>
#include <string>

namespace excon {

/// Absolute tolerance used for every equality decision in the library.
inline constexpr double EPS = 1e-9;

inline bool approx_equal(double x, double y, double tol = EPS) {
    return (x - y <= tol) && (y - x <= tol);
}

/// Serial loops are the reference path; Parallel fans independent work out
/// over OpenMP threads and must reproduce the serial result bit for bit.
enum class Execution { Serial, Parallel };

/// Expected (agent, principal) utilities of a policy under a contract.
struct UtilityPair {
    double agent = 0.0;
    double principal = 0.0;
};

/// Lexicographic order on (agent, principal) with an EPS band on the agent
/// component. Returns true when `x` is strictly preferred to `y`.
inline bool lex_greater(const UtilityPair& x, const UtilityPair& y) {
    if (x.agent > y.agent + EPS) return true;
    if (y.agent > x.agent + EPS) return false;
    return x.principal > y.principal;
}

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input files or JSON documents.
struct ParseError : Error {
    using Error::Error;
};

/// Data that parses but violates a domain invariant or a solver precondition.
struct ValidationError : Error {
    using Error::Error;
};

/// Structural problems in a policy or an internal reduction.
struct StructureError : Error {
    using Error::Error;
};

/// File system failures while reading or writing artifacts.
struct IoError : Error {
    using Error::Error;
};

/// Brute-force oracles refuse inputs above their size limits.
struct SizeGuardError : Error {
    using Error::Error;
};

}  // namespace excon
