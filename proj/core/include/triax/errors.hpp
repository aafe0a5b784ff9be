#pragma once

#include <stdexcept>
#include <string>

namespace triax {

// Error taxonomy used across the library. The CLI maps these onto its
// exit-code contract: argument/usage -> 1, data/format -> 2, numerical -> 3.

class ArgumentError : public std::invalid_argument {
public:
    explicit ArgumentError(const std::string& what) : std::invalid_argument(what) {}
};

// Input content is structurally valid to read but semantically unusable
// (empty image directory, non-finite values, degenerate spectrum, ...).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// A byte-level container violation (bad magic, truncated payload, ...).
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical routine failed to deliver its contract (eigensolver
// non-convergence, singular normal equations, iterate overflow, ...).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace triax
