#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace fembem {

/// Bad user input: out-of-range indices, unknown names, malformed files.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Geometric or topological defect in a mesh (degenerate element, non-manifold boundary).
class StructuralError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A linear solve failed its residual contract.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& message, double residual)
        : std::runtime_error(format(message, residual)), message_(message), residual_(residual) {}

    double residual() const noexcept { return residual_; }
    /// The description without the residual suffix.
    const std::string& message() const noexcept { return message_; }

private:
    static std::string format(const std::string& message, double residual) {
        char buf[64];
        std::snprintf(buf, sizeof buf, " (relative residual %.3e)", residual);
        return message + buf;
    }

    std::string message_;
    double residual_;
};

}  // namespace fembem
