#pragma once

#include "fembem/bem.hpp"
#include "fembem/fem.hpp"
#include "fembem/mesh.hpp"

#include <Eigen/Core>

#include <functional>
#include <span>

namespace fembem {

/// Batched evaluation of a function living on edge interiors.
using EdgeSampler = std::function<Eigen::VectorXd(std::span<const BoundaryPoint>)>;

/// Adapts an ambient field to an EdgeSampler.
EdgeSampler sample_field(const BoundaryMesh& boundary, ScalarField field);
EdgeSampler sample_field(const BoundaryMesh& boundary, BoundaryField field);

/// Gauss order shared by the boundary projections and the boundary estimator terms.
inline constexpr int kBoundaryGaussOrder = 8;

/**
 * L2-dual weights of the P1 hat functions on one edge, in the edge parameter t:
 * psi_start(t) = (4 - 6t) / |E| and psi_end(t) = (6t - 2) / |E|.
 */
struct DualEdgeWeights {
    static double start(double t, double length) { return (4.0 - 6.0 * t) / length; }
    static double end(double t, double length) { return (6.0 * t - 2.0) / length; }
};

/// Edge on which the dual functional of boundary node k is taken: the segment leaving k.
inline int scott_zhang_edge(const BoundaryMesh&, int node) { return node; }

/// Boundary Scott-Zhang quasi-interpolation; one value per boundary node.
Eigen::VectorXd scott_zhang_boundary(const BoundaryMesh& boundary, const EdgeSampler& w);

/// Same projection from samples at boundary_gauss_points(boundary, kBoundaryGaussOrder).
Eigen::VectorXd scott_zhang_from_samples(const BoundaryMesh& boundary, const Eigen::VectorXd& samples);

/// L2 projection onto piecewise constants on the boundary mesh.
Eigen::VectorXd project_edge_means(const BoundaryMesh& boundary, const EdgeSampler& v);

/// Edge means from samples at boundary_gauss_points(boundary, kBoundaryGaussOrder).
Eigen::VectorXd edge_means_from_samples(const BoundaryMesh& boundary, const Eigen::VectorXd& samples);

/// L2 projection onto piecewise constants on the triangulation (degree-4 rule).
Eigen::VectorXd project_element_means(const Triangulation& mesh, const ScalarField& f);

}  // namespace fembem
