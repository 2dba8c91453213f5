#pragma once

#include "fembem/mesh.hpp"
#include "fembem/sparse.hpp"

#include <Eigen/Core>

#include <functional>

namespace fembem {

using ScalarField = std::function<double(const Point&)>;
using VectorField = std::function<Eigen::Vector2d(const Point&)>;
/// Field on the boundary, evaluated with the outward unit normal at the point.
using BoundaryField = std::function<double(const Point& x, const Point& normal)>;

/// Continuous piecewise-affine function in the nodal basis. The mesh is not owned.
struct FeFunction {
    const Triangulation* mesh = nullptr;
    Eigen::VectorXd coefficients;

    FeFunction() = default;
    FeFunction(const Triangulation& m, Eigen::VectorXd c);

    Eigen::Vector2d gradient(int e, const ElementGeometry& geometry) const;
    double at_barycentric(int e, const Eigen::Vector3d& lambda) const;
};

FeFunction operator+(const FeFunction& a, const FeFunction& b);

/// Exact P1 stiffness matrix, A_ij = (grad phi_i, grad phi_j).
SparseMatrix assemble_stiffness(const Triangulation& mesh);

/// m_i = integral of phi_i over the domain.
Eigen::VectorXd assemble_constant_load(const Triangulation& mesh);

/// b_i = (f, phi_i)_Omega + (phi, phi_i)_Gamma; degree-4 triangle rule and 4-point Gauss per boundary edge.
Eigen::VectorXd assemble_load(const Triangulation& mesh, const ScalarField& f, const BoundaryField& phi);

struct NeumannDiagnostics {
    double multiplier = 0.0;
    double compatibility_defect = 0.0;
    bool compatible = true;
};

/// Mean-zero P1 solution of the pure Neumann problem -Lap u = f, du/dn = phi.
FeFunction solve_neumann_meanzero(const Triangulation& mesh, const ScalarField& f, const BoundaryField& phi,
                                  NeumannDiagnostics* diagnostics = nullptr);

/// Discrete harmonic extension of nodal boundary values (indexed by boundary node).
FeFunction solve_dirichlet(const Triangulation& mesh, const BoundaryMesh& boundary,
                           const Eigen::VectorXd& boundary_values);

/// Full H1 norm of u - uh, degree-4 rule per element.
double h1_error(const Triangulation& mesh, const FeFunction& uh, const ScalarField& exact_u,
                const VectorField& exact_grad_u);

}  // namespace fembem
