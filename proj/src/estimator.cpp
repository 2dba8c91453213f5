#include "fembem/estimator.hpp"

#include "fembem/errors.hpp"
#include "fembem/quadrature.hpp"
#include "fembem/transfer.hpp"

#include <algorithm>
#include <numeric>

namespace fembem {

namespace {

Point at_barycentric(const Triangulation& mesh, int e, const Eigen::Vector3d& l) {
    const auto v = mesh.element(e);
    return l(0) * mesh.vertex(v[0]) + l(1) * mesh.vertex(v[1]) + l(2) * mesh.vertex(v[2]);
}

Eigen::VectorXd volume_term(const Triangulation& mesh, const std::vector<ElementGeometry>& geometry,
                            const ScalarField& f, bool subtract_mean) {
    const TriangleRule& tri = triangle_rule_degree4();
    Eigen::VectorXd out(mesh.num_elements());
    std::array<double, 6> values{};
    for (int e = 0; e < mesh.num_elements(); ++e) {
        double mean = 0.0;
        for (std::size_t q = 0; q < values.size(); ++q) {
            values[q] = f(at_barycentric(mesh, e, tri.barycentric[q]));
            mean += tri.weights[q] * values[q];
        }
        if (!subtract_mean) mean = 0.0;
        double sq = 0.0;
        for (std::size_t q = 0; q < values.size(); ++q) sq += tri.weights[q] * (values[q] - mean) * (values[q] - mean);
        const auto& g = geometry[e];
        out(e) = g.h * g.h * g.area * sq;
    }
    return out;
}

}  // namespace

Eigen::VectorXd jump_term(const Triangulation& mesh, const FeFunction& uh) {
    const auto geometry = element_geometry(mesh);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(mesh.num_elements());
    std::vector<Eigen::Vector2d> gradients(mesh.num_elements());
    for (int e = 0; e < mesh.num_elements(); ++e) gradients[e] = uh.gradient(e, geometry[e]);
    for (int i = 0; i < mesh.num_edges(); ++i) {
        const auto [plus, minus] = mesh.edge_elements(i);
        if (minus < 0) continue;
        int k = 0;
        while (mesh.element_edge(plus, k) != i) ++k;
        const Eigen::Vector2d n = geometry[plus].normals.row(k).transpose();
        const double jump = (gradients[plus] - gradients[minus]).dot(n);
        const double edge_sq = geometry[plus].edge_lengths(k) * jump * jump;
        out(plus) += geometry[plus].h * edge_sq;
        out(minus) += geometry[minus].h * edge_sq;
    }
    return out;
}

Eigen::VectorXd compute_eta1(const Triangulation& mesh, const FeFunction& u1h, const ScalarField& f,
                             const BoundaryField& phi) {
    const auto geometry = element_geometry(mesh);
    Eigen::VectorXd out = volume_term(mesh, geometry, f, false) + jump_term(mesh, u1h);
    const GaussRule& gauss = gauss_legendre(4);
    for (const auto& be : mesh.boundary_edges()) {
        const auto& g = geometry[be.element];
        const Eigen::Vector2d n = g.normals.row(be.local_edge).transpose();
        const double flux = u1h.gradient(be.element, g).dot(n);
        const Point a = mesh.vertex(be.vertices[0]);
        const Point b = mesh.vertex(be.vertices[1]);
        const double length = g.edge_lengths(be.local_edge);
        double sq = 0.0;
        for (Eigen::Index q = 0; q < gauss.size(); ++q) {
            const double r = phi(a + gauss.nodes(q) * (b - a), n) - flux;
            sq += gauss.weights(q) * r * r;
        }
        out(be.element) += g.h * length * sq;
    }
    return out;
}

Eigen::VectorXd dirichlet_boundary_term(const Triangulation& mesh, const BoundaryMesh& boundary,
                                        const FeFunction& u1h, const DirichletData& g) {
    const auto points = boundary_gauss_points(boundary, kBoundaryGaussOrder);
    const Eigen::VectorXd d = eval_K_tangential_derivative(boundary, trace(boundary, u1h), g, points);
    const Eigen::VectorXd means = edge_means_from_samples(boundary, d);
    const GaussRule& rule = gauss_legendre(kBoundaryGaussOrder);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(mesh.num_elements());
    for (int s = 0; s < boundary.num_segments(); ++s) {
        const auto& seg = boundary.segments[s];
        double sq = 0.0;
        for (int q = 0; q < kBoundaryGaussOrder; ++q) {
            const double r = d(s * kBoundaryGaussOrder + q) - means(s);
            sq += rule.weights(q) * r * r;
        }
        out(seg.element) += std::sqrt(mesh.area(seg.element)) * seg.length * sq;
    }
    return out;
}

Eigen::VectorXd compute_eta2(const Triangulation& mesh, const BoundaryMesh& boundary, const FeFunction& u1h,
                             const FeFunction& u2h, const DirichletData& g) {
    return jump_term(mesh, u2h) + dirichlet_boundary_term(mesh, boundary, u1h, g);
}

IndicatorField make_indicator_field(Eigen::VectorXd eta1_sq, Eigen::VectorXd eta2_sq) {
    IndicatorField out;
    out.eta1_sq = std::move(eta1_sq);
    out.eta2_sq = std::move(eta2_sq);
    out.eta1_total_sq = out.eta1_sq.sum();
    out.eta2_total_sq = out.eta2_sq.sum();
    out.total_sq = out.eta1_total_sq + out.eta2_total_sq;
    return out;
}

namespace {

OscillationField oscillations_with(const Triangulation& mesh, const BoundaryMesh& boundary, const ScalarField& f,
                                   const BoundaryField& phi, Eigen::VectorXd dirichlet) {
    const auto geometry = element_geometry(mesh);
    OscillationField out;
    out.osc_rhs_sq = volume_term(mesh, geometry, f, true);

    const auto points = boundary_gauss_points(boundary, kBoundaryGaussOrder);
    const Eigen::VectorXd samples = sample_field(boundary, phi)(points);
    const Eigen::VectorXd means = edge_means_from_samples(boundary, samples);
    const GaussRule& rule = gauss_legendre(kBoundaryGaussOrder);
    out.osc_neumann_sq = Eigen::VectorXd::Zero(mesh.num_elements());
    for (int s = 0; s < boundary.num_segments(); ++s) {
        const auto& seg = boundary.segments[s];
        double sq = 0.0;
        for (int q = 0; q < kBoundaryGaussOrder; ++q) {
            const double r = samples(s * kBoundaryGaussOrder + q) - means(s);
            sq += rule.weights(q) * r * r;
        }
        out.osc_neumann_sq(seg.element) += geometry[seg.element].h * seg.length * sq;
    }
    out.osc_dirichlet_sq = std::move(dirichlet);
    out.rhs_total_sq = out.osc_rhs_sq.sum();
    out.neumann_total_sq = out.osc_neumann_sq.sum();
    out.dirichlet_total_sq = out.osc_dirichlet_sq.sum();
    return out;
}

}  // namespace

OscillationField compute_oscillations(const Triangulation& mesh, const BoundaryMesh& boundary, const FeFunction& u1h,
                                      const ScalarField& f, const BoundaryField& phi, const DirichletData& g) {
    return oscillations_with(mesh, boundary, f, phi, dirichlet_boundary_term(mesh, boundary, u1h, g));
}

Estimate estimate(const Triangulation& mesh, const BoundaryMesh& boundary, const FeFunction& u1h,
                  const FeFunction& u2h, const ScalarField& f, const BoundaryField& phi, const DirichletData& g) {
    Eigen::VectorXd dirichlet = dirichlet_boundary_term(mesh, boundary, u1h, g);
    Estimate out;
    out.indicators = make_indicator_field(compute_eta1(mesh, u1h, f, phi), jump_term(mesh, u2h) + dirichlet);
    out.oscillations = oscillations_with(mesh, boundary, f, phi, std::move(dirichlet));
    return out;
}

std::vector<int> dorfler_mark(std::span<const double> indicators_sq, double theta) {
    if (indicators_sq.empty()) throw InputError("dorfler_mark: no elements");
    if (!(theta > 0.0 && theta <= 1.0)) throw InputError("dorfler_mark: theta must lie in (0, 1]");
    for (double v : indicators_sq)
        if (!(v >= 0.0)) throw InputError("dorfler_mark: indicators must be nonnegative");

    std::vector<int> order(indicators_sq.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return indicators_sq[i] > indicators_sq[j]; });
    // Total accumulated in the same order as the prefix so that theta = 1 terminates exactly.
    double total = 0.0;
    for (int i : order) total += indicators_sq[i];
    const double goal = theta * total;

    std::vector<int> marked;
    double sum = 0.0;
    for (int i : order) {
        if (sum >= goal) break;
        marked.push_back(i);
        sum += indicators_sq[i];
    }
    std::sort(marked.begin(), marked.end());
    return marked;
}

}  // namespace fembem
