#pragma once

#include <stdexcept>
#include <string>

namespace srreg {

// Bad inputs, malformed files, over-trimmed samples.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Factorization failures, collinear designs.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace srreg
