#include "fembem/fem.hpp"

#include "fembem/errors.hpp"
#include "fembem/quadrature.hpp"

#include <cmath>
#include <vector>

namespace fembem {

FeFunction::FeFunction(const Triangulation& m, Eigen::VectorXd c) : mesh(&m), coefficients(std::move(c)) {
    if (coefficients.size() != m.num_vertices())
        throw InputError("FeFunction: coefficient count must equal vertex count");
}

Eigen::Vector2d FeFunction::gradient(int e, const ElementGeometry& geometry) const {
    const auto v = mesh->element(e);
    return (coefficients(v[0]) * geometry.gradients.row(0) + coefficients(v[1]) * geometry.gradients.row(1) +
            coefficients(v[2]) * geometry.gradients.row(2))
        .transpose();
}

double FeFunction::at_barycentric(int e, const Eigen::Vector3d& lambda) const {
    const auto v = mesh->element(e);
    return lambda(0) * coefficients(v[0]) + lambda(1) * coefficients(v[1]) + lambda(2) * coefficients(v[2]);
}

FeFunction operator+(const FeFunction& a, const FeFunction& b) {
    if (a.mesh != b.mesh) throw InputError("FeFunction: cannot add functions on different meshes");
    return FeFunction(*a.mesh, a.coefficients + b.coefficients);
}

namespace {

Point physical_point(const Triangulation& mesh, int e, const Eigen::Vector3d& lambda) {
    const auto v = mesh.element(e);
    return lambda(0) * mesh.vertex(v[0]) + lambda(1) * mesh.vertex(v[1]) + lambda(2) * mesh.vertex(v[2]);
}

}  // namespace

SparseMatrix assemble_stiffness(const Triangulation& mesh) {
    std::vector<Triplet> triplets;
    triplets.reserve(9 * static_cast<std::size_t>(mesh.num_elements()));
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const ElementGeometry g = element_geometry(mesh, e);
        const Eigen::Matrix3d local = g.area * g.gradients * g.gradients.transpose();
        const auto v = mesh.element(e);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) triplets.emplace_back(v[i], v[j], local(i, j));
    }
    return from_triplets(mesh.num_vertices(), triplets);
}

Eigen::VectorXd assemble_constant_load(const Triangulation& mesh) {
    Eigen::VectorXd m = Eigen::VectorXd::Zero(mesh.num_vertices());
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const double third = mesh.area(e) / 3.0;
        for (int v : mesh.element(e)) m(v) += third;
    }
    return m;
}

Eigen::VectorXd assemble_load(const Triangulation& mesh, const ScalarField& f, const BoundaryField& phi) {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(mesh.num_vertices());
    const TriangleRule& tri = triangle_rule_degree4();
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const double area = mesh.area(e);
        const auto v = mesh.element(e);
        for (std::size_t q = 0; q < tri.weights.size(); ++q) {
            const Eigen::Vector3d& lambda = tri.barycentric[q];
            const double fq = tri.weights[q] * area * f(physical_point(mesh, e, lambda));
            for (int i = 0; i < 3; ++i) b(v[i]) += fq * lambda(i);
        }
    }
    const GaussRule& gauss = gauss_legendre(4);
    for (const auto& be : mesh.boundary_edges()) {
        const Point a = mesh.vertex(be.vertices[0]);
        const Point c = mesh.vertex(be.vertices[1]);
        const double len = (c - a).norm();
        const Point normal((c - a).y() / len, -(c - a).x() / len);
        for (Eigen::Index q = 0; q < gauss.size(); ++q) {
            const double t = gauss.nodes(q);
            const double val = gauss.weights(q) * len * phi(a + t * (c - a), normal);
            b(be.vertices[0]) += val * (1.0 - t);
            b(be.vertices[1]) += val * t;
        }
    }
    return b;
}

FeFunction solve_neumann_meanzero(const Triangulation& mesh, const ScalarField& f, const BoundaryField& phi,
                                  NeumannDiagnostics* diagnostics) {
    const SparseMatrix A = assemble_stiffness(mesh);
    const Eigen::VectorXd b = assemble_load(mesh, f, phi);
    const Eigen::VectorXd m = assemble_constant_load(mesh);
    MeanConstrainedSolution sol = solve_mean_constrained(A, b, m);
    if (diagnostics) {
        diagnostics->multiplier = sol.multiplier;
        diagnostics->compatibility_defect = sol.compatibility_defect;
        diagnostics->compatible = sol.compatible;
    }
    return FeFunction(mesh, std::move(sol.x));
}

FeFunction solve_dirichlet(const Triangulation& mesh, const BoundaryMesh& boundary,
                           const Eigen::VectorXd& boundary_values) {
    if (boundary_values.size() != boundary.num_nodes())
        throw InputError("solve_dirichlet: one value per boundary node required");
    const int nv = mesh.num_vertices();
    Eigen::VectorXd x = Eigen::VectorXd::Zero(nv);
    std::vector<int> interior;
    for (int v = 0; v < nv; ++v) {
        const int node = boundary.vertex_to_node[v];
        if (node >= 0)
            x(v) = boundary_values(node);
        else
            interior.push_back(v);
    }
    if (interior.empty()) return FeFunction(mesh, std::move(x));

    const SparseMatrix A = assemble_stiffness(mesh);
    // rhs = -A_IB x_B, read off the interior rows with interior columns skipped.
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(interior.size()));
    for (std::size_t i = 0; i < interior.size(); ++i) {
        double s = 0.0;
        for (SparseMatrix::InnerIterator it(A, interior[i]); it; ++it)
            if (boundary.vertex_to_node[it.col()] >= 0) s -= it.value() * x(it.col());
        rhs(static_cast<Eigen::Index>(i)) = s;
    }
    const Eigen::VectorXd xi = solve_spd(principal_submatrix(A, interior), rhs);
    for (std::size_t i = 0; i < interior.size(); ++i) x(interior[i]) = xi(static_cast<Eigen::Index>(i));
    return FeFunction(mesh, std::move(x));
}

double h1_error(const Triangulation& mesh, const FeFunction& uh, const ScalarField& exact_u,
                const VectorField& exact_grad_u) {
    const TriangleRule& tri = triangle_rule_degree4();
    double sum = 0.0;
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const ElementGeometry g = element_geometry(mesh, e);
        const Eigen::Vector2d grad_h = uh.gradient(e, g);
        double local = 0.0;
        for (std::size_t q = 0; q < tri.weights.size(); ++q) {
            const Point x = physical_point(mesh, e, tri.barycentric[q]);
            const double du = exact_u(x) - uh.at_barycentric(e, tri.barycentric[q]);
            local += tri.weights[q] * (du * du + (exact_grad_u(x) - grad_h).squaredNorm());
        }
        sum += g.area * local;
    }
    return std::sqrt(sum);
}

}  // namespace fembem
