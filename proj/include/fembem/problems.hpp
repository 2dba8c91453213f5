#pragma once

#include "fembem/bem.hpp"
#include "fembem/fem.hpp"
#include "fembem/mesh.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

namespace fembem {

struct ExactSolution {
    ScalarField u;
    VectorField grad_u;
};

/**
 * Data of one transmission problem: -Lap u = f in Omega, u^ext harmonic outside,
 * u - u^ext = g and d/dn (u - u^ext) = phi on Gamma.
 */
struct ProblemSpec {
    std::string name;
    Triangulation initial_mesh;
    ScalarField f;
    BoundaryField phi;
    DirichletData g;
    std::optional<ExactSolution> exact;
    std::optional<ExactSolution> exterior;  // u^ext, when known
};

/// "square", "lshape" or "zshape".
ProblemSpec builtin_problem(std::string_view name);

/// Initial meshes of the built-in domains (16, 12 and 14 elements).
Triangulation builtin_mesh(std::string_view name);

struct CompatibilityReport {
    double residual = 0.0;  // int_Omega f + int_Gamma phi
    double scale = 0.0;     // ||f||_L1 + ||phi||_L1
    bool compatible() const { return std::abs(residual) <= 1e-6 * scale; }
};

/// Quadrature of int_Omega f + int_Gamma phi: collapsed Gauss per element, adaptive Gauss per boundary edge.
CompatibilityReport compatibility_check(const ProblemSpec& spec, const Triangulation& mesh);

/**
 * Replaces u^ext by u^ext - w with w(y) = -C G(x0 - y), C the compatibility
 * residual measured on `mesh`; g and phi are shifted by the traces of w.
 * x0 must lie strictly inside the domain.
 */
ProblemSpec compatibility_shift(const ProblemSpec& spec, const Point& x0, const Triangulation& mesh);

}  // namespace fembem
