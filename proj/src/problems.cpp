#include "fembem/problems.hpp"

#include "fembem/errors.hpp"
#include "fembem/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <array>
#include <map>
#include <numbers>
#include <vector>

namespace fembem {

namespace {

using std::numbers::pi;

// Quadrants of (-1/4, 1/4)^2, each split into four triangles around its centre.
// Vertex order puts the outer (longest) edge first.
class MeshBuilder {
public:
    int vertex(double x, double y) {
        const auto key = std::make_pair(x, y);
        auto it = index_.find(key);
        if (it != index_.end()) return it->second;
        const int id = static_cast<int>(points_.size());
        points_.push_back(Point(x, y));
        index_.emplace(key, id);
        return id;
    }

    void triangle(int a, int b, int c) { triangles_.push_back({a, b, c}); }

    void quadrant(double x0, double y0, bool upper_left_half_only = false) {
        const double x1 = x0 + 0.25;
        const double y1 = y0 + 0.25;
        const int p00 = vertex(x0, y0), p10 = vertex(x1, y0), p11 = vertex(x1, y1), p01 = vertex(x0, y1);
        const int c = vertex(x0 + 0.125, y0 + 0.125);
        if (!upper_left_half_only) {
            triangle(p00, p10, c);
            triangle(p10, p11, c);
        }
        triangle(p11, p01, c);
        triangle(p01, p00, c);
    }

    Triangulation build() const {
        Coordinates coordinates(static_cast<Eigen::Index>(points_.size()), 2);
        for (std::size_t i = 0; i < points_.size(); ++i) coordinates.row(static_cast<Eigen::Index>(i)) = points_[i];
        Elements elements(static_cast<Eigen::Index>(triangles_.size()), 3);
        for (std::size_t i = 0; i < triangles_.size(); ++i)
            elements.row(static_cast<Eigen::Index>(i)) << triangles_[i][0], triangles_[i][1], triangles_[i][2];
        return Triangulation::with_longest_edge_reference(std::move(coordinates), std::move(elements));
    }

private:
    std::vector<Point> points_;
    std::vector<std::array<int, 3>> triangles_;
    std::map<std::pair<double, double>, int> index_;
};

ExactSolution square_interior() {
    return {[](const Point& x) { return std::cos(2 * pi * x.x()) * std::cos(2 * pi * x.y()); },
            [](const Point& x) -> Eigen::Vector2d {
                return Eigen::Vector2d(-2 * pi * std::sin(2 * pi * x.x()) * std::cos(2 * pi * x.y()),
                                       -2 * pi * std::cos(2 * pi * x.x()) * std::sin(2 * pi * x.y()));
            }};
}

ExactSolution square_exterior() {
    return {[](const Point& x) { return (x.x() + x.y()) / x.squaredNorm(); },
            [](const Point& x) -> Eigen::Vector2d {
                const double r2 = x.squaredNorm();
                const double a = x.x(), b = x.y();
                return Eigen::Vector2d(b * b - a * a - 2 * a * b, a * a - b * b - 2 * a * b) / (r2 * r2);
            }};
}

// Polar angle in [pi/2, 5pi/2); the cut lies on the reentrant edge x = 0, y > 0, so u is smooth up to it.
double lshape_angle(const Point& x) {
    double phi = std::atan2(x.y(), x.x());
    if (phi < pi / 2) phi += 2 * pi;
    return phi;
}

ExactSolution lshape_interior() {
    constexpr double a = 2.0 / 3.0;
    return {[](const Point& x) { return std::pow(x.norm(), a) * std::sin(a * lshape_angle(x)); },
            [](const Point& x) -> Eigen::Vector2d {
                // grad Im(z^a) = (Im, Re) of a z^(a-1)
                const double r = x.norm();
                const double phi = lshape_angle(x);
                const double s = a * std::pow(r, a - 1);
                return Eigen::Vector2d(s * std::sin((a - 1) * phi), s * std::cos((a - 1) * phi));
            }};
}

ExactSolution lshape_exterior() {
    const Point p1(-0.125, 0.125);
    const Point p2(0.125, -0.125);
    return {[=](const Point& x) {
                return 0.5 * std::log((x - p1).squaredNorm()) - 0.5 * std::log((x - p2).squaredNorm());
            },
            [=](const Point& x) -> Eigen::Vector2d {
                return Eigen::Vector2d((x - p1) / (x - p1).squaredNorm() - (x - p2) / (x - p2).squaredNorm());
            }};
}

// Jump data g = u - u^ext and phi = d/dn (u - u^ext) from known interior and exterior solutions.
void set_jump_data(ProblemSpec& spec, const ExactSolution& in, const ExactSolution& out) {
    spec.exact = in;
    spec.exterior = out;
    spec.g.g = [in, out](const Point& x) { return in.u(x) - out.u(x); };
    spec.g.grad_g = [in, out](const Point& x) { return Eigen::Vector2d(in.grad_u(x) - out.grad_u(x)); };
    spec.phi = [in, out](const Point& x, const Point& n) { return n.dot(in.grad_u(x) - out.grad_u(x)); };
}

constexpr int kVolumeOrder = 12;
constexpr int kEdgeOrder = 16;
constexpr int kEdgeMaxDepth = 40;

// Integrals of v and |v| over [0, 1] times len, bisecting until the Gauss rule is
// stable under one split; endpoint singularities of the data are resolved this way.
std::pair<double, double> edge_piece(const std::function<double(double)>& v, double t0, double t1, double len,
                                     double coarse_value, int depth) {
    const GaussRule& gauss = gauss_legendre(kEdgeOrder);
    auto piece = [&](double l, double r) {
        double value = 0.0, magnitude = 0.0;
        for (Eigen::Index q = 0; q < gauss.size(); ++q) {
            const double fq = v(l + (r - l) * gauss.nodes(q));
            value += gauss.weights(q) * (r - l) * len * fq;
            magnitude += gauss.weights(q) * (r - l) * len * std::abs(fq);
        }
        return std::make_pair(value, magnitude);
    };
    const double tm = 0.5 * (t0 + t1);
    const auto left = piece(t0, tm);
    const auto right = piece(tm, t1);
    const double fine = left.first + right.first;
    if (depth >= kEdgeMaxDepth || std::abs(fine - coarse_value) <= 1e-15 * std::max(1.0, left.second + right.second))
        return {fine, left.second + right.second};
    const auto l = edge_piece(v, t0, tm, len, left.first, depth + 1);
    const auto r = edge_piece(v, tm, t1, len, right.first, depth + 1);
    return {l.first + r.first, l.second + r.second};
}

std::pair<double, double> edge_integral(const std::function<double(double)>& v, double len) {
    const GaussRule& gauss = gauss_legendre(kEdgeOrder);
    double value = 0.0, magnitude = 0.0;
    for (Eigen::Index q = 0; q < gauss.size(); ++q) {
        const double fq = v(gauss.nodes(q));
        value += gauss.weights(q) * len * fq;
        magnitude += gauss.weights(q) * len * std::abs(fq);
    }
    return edge_piece(v, 0.0, 1.0, len, value, 0);
}

}  // namespace

Triangulation builtin_mesh(std::string_view name) {
    MeshBuilder builder;
    if (name == "square") {
        builder.quadrant(-0.25, -0.25);
        builder.quadrant(0.0, -0.25);
        builder.quadrant(-0.25, 0.0);
        builder.quadrant(0.0, 0.0);
    } else if (name == "lshape") {
        builder.quadrant(-0.25, -0.25);
        builder.quadrant(0.0, -0.25);
        builder.quadrant(-0.25, 0.0);
    } else if (name == "zshape") {
        builder.quadrant(-0.25, -0.25);
        builder.quadrant(0.0, -0.25);
        builder.quadrant(-0.25, 0.0);
        builder.quadrant(0.0, 0.0, true);
    } else {
        throw InputError("unknown problem '" + std::string(name) + "' (expected square, lshape or zshape)");
    }
    return builder.build();
}

ProblemSpec builtin_problem(std::string_view name) {
    ProblemSpec spec;
    spec.name = std::string(name);
    spec.initial_mesh = builtin_mesh(name);
    if (name == "square") {
        spec.f = [](const Point& x) { return 8 * pi * pi * std::cos(2 * pi * x.x()) * std::cos(2 * pi * x.y()); };
        set_jump_data(spec, square_interior(), square_exterior());
    } else if (name == "lshape") {
        spec.f = [](const Point&) { return 0.0; };
        set_jump_data(spec, lshape_interior(), lshape_exterior());
    } else {
        const double phi = -7.0 / (8.0 * (8.0 + std::sqrt(2.0)));
        spec.f = [](const Point&) { return 1.0; };
        spec.phi = [phi](const Point&, const Point&) { return phi; };
        spec.g = DirichletData{};
    }
    return spec;
}

CompatibilityReport compatibility_check(const ProblemSpec& spec, const Triangulation& mesh) {
    CompatibilityReport report;
    // Collapsed Gauss rule on each element: (s, t) in [0,1]^2 -> a + s (b - a) + s t (c - b), Jacobian 2|T| s.
    const GaussRule& gauss = gauss_legendre(kVolumeOrder);
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const auto v = mesh.element(e);
        const Point a = mesh.vertex(v[0]), b = mesh.vertex(v[1]), c = mesh.vertex(v[2]);
        const double jacobian = 2.0 * mesh.area(e);
        for (Eigen::Index i = 0; i < gauss.size(); ++i) {
            const double s = gauss.nodes(i);
            for (Eigen::Index j = 0; j < gauss.size(); ++j) {
                const double fq = spec.f(a + s * (b - a) + s * gauss.nodes(j) * (c - b));
                const double w = gauss.weights(i) * gauss.weights(j) * jacobian * s;
                report.residual += w * fq;
                report.scale += w * std::abs(fq);
            }
        }
    }
    for (const auto& be : mesh.boundary_edges()) {
        const Point a = mesh.vertex(be.vertices[0]);
        const Point b = mesh.vertex(be.vertices[1]);
        const double len = (b - a).norm();
        const Point n((b - a).y() / len, -(b - a).x() / len);
        const auto [value, magnitude] = edge_integral([&](double t) { return spec.phi(a + t * (b - a), n); }, len);
        report.residual += value;
        report.scale += magnitude;
    }
    return report;
}

ProblemSpec compatibility_shift(const ProblemSpec& spec, const Point& x0, const Triangulation& mesh) {
    const BoundaryMesh boundary = boundary_of(mesh);
    // The double-layer potential of 1 is -1 inside and 0 outside.
    const BoundaryDensity one(boundary, Eigen::VectorXd::Ones(boundary.num_nodes()));
    double indicator = 0.0;
    try {
        indicator = eval_potential(boundary, one, x0);
    } catch (const InputError&) {
        throw InputError("compatibility_shift: x0 lies on the boundary");
    }
    if (!(indicator < -0.5)) throw InputError("compatibility_shift: x0 must lie inside the domain");

    const double c = compatibility_check(spec, mesh).residual;
    if (c == 0.0) return spec;

    ProblemSpec out = spec;
    // w(y) = (C / 2 pi) log |y - x0|, so grad w(y) = (C / 2 pi) (y - x0) / |y - x0|^2.
    const double scale = c / (2.0 * pi);
    auto w = [=](const Point& y) { return scale * std::log((y - x0).norm()); };
    auto grad_w = [=](const Point& y) { return Eigen::Vector2d(scale * (y - x0) / (y - x0).squaredNorm()); };
    const BoundaryField phi = spec.phi;
    out.phi = [phi, grad_w](const Point& y, const Point& n) { return phi(y, n) - n.dot(grad_w(y)); };
    const DirichletData g = spec.g;
    out.g.g = [g, w](const Point& y) { return (g.g ? g.g(y) : 0.0) - w(y); };
    out.g.grad_g = [g, grad_w](const Point& y) {
        return Eigen::Vector2d((g.grad_g ? g.grad_g(y) : Eigen::Vector2d::Zero()) - grad_w(y));
    };
    if (spec.exterior) {
        const ExactSolution ext = *spec.exterior;
        out.exterior = ExactSolution{[ext, w](const Point& y) { return ext.u(y) - w(y); },
                                     [ext, grad_w](const Point& y) { return Eigen::Vector2d(ext.grad_u(y) - grad_w(y)); }};
    }
    return out;
}

}  // namespace fembem
