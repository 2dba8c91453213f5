#pragma once

#include <Eigen/Core>

#include <array>

namespace fembem {

/// Gauss-Legendre rule on [0, 1]: nodes in (0, 1), weights summing to 1.
struct GaussRule {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;

    Eigen::Index size() const { return nodes.size(); }
};

/// Cached n-point Gauss-Legendre rule on [0, 1] (Golub-Welsch).
const GaussRule& gauss_legendre(int n);

/// Symmetric 6-point rule on the reference triangle, exact for degree 4.
/// Barycentric coordinates per point; weights sum to 1 (multiply by area).
struct TriangleRule {
    std::array<Eigen::Vector3d, 6> barycentric;
    std::array<double, 6> weights;
};

const TriangleRule& triangle_rule_degree4();

}  // namespace fembem
