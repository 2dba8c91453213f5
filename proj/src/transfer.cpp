#include "fembem/transfer.hpp"

#include "fembem/errors.hpp"
#include "fembem/quadrature.hpp"

namespace fembem {

EdgeSampler sample_field(const BoundaryMesh& boundary, ScalarField field) {
    return [&boundary, field = std::move(field)](std::span<const BoundaryPoint> points) {
        Eigen::VectorXd out(static_cast<Eigen::Index>(points.size()));
        for (std::size_t i = 0; i < points.size(); ++i)
            out(static_cast<Eigen::Index>(i)) = field(boundary.point(points[i].segment, points[i].t));
        return out;
    };
}

EdgeSampler sample_field(const BoundaryMesh& boundary, BoundaryField field) {
    return [&boundary, field = std::move(field)](std::span<const BoundaryPoint> points) {
        Eigen::VectorXd out(static_cast<Eigen::Index>(points.size()));
        for (std::size_t i = 0; i < points.size(); ++i) {
            const auto& p = points[i];
            out(static_cast<Eigen::Index>(i)) = field(boundary.point(p.segment, p.t), boundary.segments[p.segment].normal);
        }
        return out;
    };
}

namespace {

void check_samples(const BoundaryMesh& boundary, const Eigen::VectorXd& samples) {
    if (samples.size() != static_cast<Eigen::Index>(boundary.num_segments()) * kBoundaryGaussOrder)
        throw InputError("boundary samples must hold one value per Gauss point of every segment");
}

}  // namespace

Eigen::VectorXd scott_zhang_from_samples(const BoundaryMesh& boundary, const Eigen::VectorXd& samples) {
    check_samples(boundary, samples);
    const GaussRule& rule = gauss_legendre(kBoundaryGaussOrder);
    Eigen::VectorXd out(boundary.num_nodes());
    for (int node = 0; node < boundary.num_nodes(); ++node) {
        const int s = scott_zhang_edge(boundary, node);
        const double length = boundary.segments[s].length;
        double sum = 0.0;
        for (int q = 0; q < kBoundaryGaussOrder; ++q)
            sum += rule.weights(q) * length * DualEdgeWeights::start(rule.nodes(q), length) *
                   samples(s * kBoundaryGaussOrder + q);
        out(node) = sum;
    }
    return out;
}

Eigen::VectorXd scott_zhang_boundary(const BoundaryMesh& boundary, const EdgeSampler& w) {
    const auto points = boundary_gauss_points(boundary, kBoundaryGaussOrder);
    return scott_zhang_from_samples(boundary, w(points));
}

Eigen::VectorXd edge_means_from_samples(const BoundaryMesh& boundary, const Eigen::VectorXd& samples) {
    check_samples(boundary, samples);
    const GaussRule& rule = gauss_legendre(kBoundaryGaussOrder);
    Eigen::VectorXd out(boundary.num_segments());
    for (int s = 0; s < boundary.num_segments(); ++s)
        out(s) = rule.weights.dot(samples.segment(s * kBoundaryGaussOrder, kBoundaryGaussOrder));
    return out;
}

Eigen::VectorXd project_edge_means(const BoundaryMesh& boundary, const EdgeSampler& v) {
    const auto points = boundary_gauss_points(boundary, kBoundaryGaussOrder);
    return edge_means_from_samples(boundary, v(points));
}

Eigen::VectorXd project_element_means(const Triangulation& mesh, const ScalarField& f) {
    const TriangleRule& tri = triangle_rule_degree4();
    Eigen::VectorXd out(mesh.num_elements());
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const auto v = mesh.element(e);
        double sum = 0.0;
        for (std::size_t q = 0; q < tri.weights.size(); ++q) {
            const Eigen::Vector3d& l = tri.barycentric[q];
            sum += tri.weights[q] * f(l(0) * mesh.vertex(v[0]) + l(1) * mesh.vertex(v[1]) + l(2) * mesh.vertex(v[2]));
        }
        out(e) = sum;
    }
    return out;
}

}  // namespace fembem
