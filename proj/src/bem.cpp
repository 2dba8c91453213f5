#include "fembem/bem.hpp"

#include "fembem/errors.hpp"
#include "fembem/quadrature.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace fembem {

BoundaryDensity::BoundaryDensity(const BoundaryMesh& b, Eigen::VectorXd v) : boundary(&b), values(std::move(v)) {
    if (values.size() != b.num_nodes()) throw InputError("BoundaryDensity: one value per boundary node required");
}

double BoundaryDensity::at(int segment, double t) const {
    const auto& s = boundary->segments[segment];
    return (1.0 - t) * values(s.start_node) + t * values(s.end_node);
}

double BoundaryDensity::slope(int segment) const {
    const auto& s = boundary->segments[segment];
    return (values(s.end_node) - values(s.start_node)) / s.length;
}

BoundaryDensity trace(const BoundaryMesh& boundary, const FeFunction& u) {
    Eigen::VectorXd v(boundary.num_nodes());
    for (int k = 0; k < boundary.num_nodes(); ++k) v(k) = u.coefficients(boundary.node_to_vertex[k]);
    return BoundaryDensity(boundary, std::move(v));
}

std::vector<BoundaryPoint> boundary_gauss_points(const BoundaryMesh& boundary, int order) {
    const GaussRule& rule = gauss_legendre(order);
    std::vector<BoundaryPoint> points;
    points.reserve(static_cast<std::size_t>(boundary.num_segments()) * order);
    for (int s = 0; s < boundary.num_segments(); ++s)
        for (Eigen::Index q = 0; q < rule.size(); ++q) points.push_back({s, rule.nodes(q)});
    return points;
}

namespace {

constexpr int kRemainderOrder = 16;
constexpr int kMaxSubdivision = 48;

double point_segment_distance(const Point& x, const Point& a, const Point& b) {
    const Point d = b - a;
    const double t = std::clamp((x - a).dot(d) / d.squaredNorm(), 0.0, 1.0);
    return (a + t * d - x).norm();
}

// Gauss data for g_interp - g on one segment, where g_interp is the nodal interpolant of g.
struct RemainderSamples {
    std::vector<Point> points;
    std::vector<double> weighted;  // quadrature weight * length * remainder
};

class Evaluator {
public:
    Evaluator(const BoundaryMesh& boundary, const BoundaryDensity& w, const DirichletData& g)
        : boundary_(boundary), w_(w), g_(g), rule_(gauss_legendre(kRemainderOrder)) {
        if (w.values.size() != boundary.num_nodes())
            throw InputError("density does not belong to this boundary");
        const int nn = boundary.num_nodes();
        g_nodes_ = Eigen::VectorXd::Zero(nn);
        if (g_.g) {
            for (int k = 0; k < nn; ++k) g_nodes_(k) = g_.g(boundary.segments[k].a);
            remainder_.resize(boundary.num_segments());
            for (int s = 0; s < boundary.num_segments(); ++s) {
                auto& r = remainder_[s];
                for (Eigen::Index q = 0; q < rule_.size(); ++q) {
                    const double t = rule_.nodes(q);
                    const Point y = boundary.point(s, t);
                    r.points.push_back(y);
                    r.weighted.push_back(rule_.weights(q) * boundary.segments[s].length * remainder(s, t, y));
                }
            }
        }
        density_ = w.values - g_nodes_;
    }

    double value(const BoundaryPoint& p) const { return evaluate(p, false); }
    double derivative(const BoundaryPoint& p) const { return evaluate(p, true); }

private:
    double remainder(int s, double t, const Point& y) const {
        const auto& seg = boundary_.segments[s];
        return (1.0 - t) * g_nodes_(seg.start_node) + t * g_nodes_(seg.end_node) - g_.g(y);
    }

    double kernel(const Point& x, const Point& y, const Point& n, const Point& direction, bool derivative) const {
        return derivative ? dlp_kernel_gradient(x, y, n).dot(direction) : dlp_kernel(x, y, n);
    }

    // Remainder integral over [t0, t1] of segment s, bisected until the piece is
    // no longer than its distance to x.
    double near_remainder(int s, double t0, double t1, const Point& x, const Point& direction, bool derivative,
                          int depth) const {
        const auto& seg = boundary_.segments[s];
        const Point a = boundary_.point(s, t0);
        const Point b = boundary_.point(s, t1);
        const double len = (t1 - t0) * seg.length;
        if (point_segment_distance(x, a, b) < len && depth < kMaxSubdivision) {
            const double tm = 0.5 * (t0 + t1);
            return near_remainder(s, t0, tm, x, direction, derivative, depth + 1) +
                   near_remainder(s, tm, t1, x, direction, derivative, depth + 1);
        }
        double sum = 0.0;
        for (Eigen::Index q = 0; q < rule_.size(); ++q) {
            const double t = t0 + (t1 - t0) * rule_.nodes(q);
            const Point y = boundary_.point(s, t);
            sum += rule_.weights(q) * len * kernel(x, y, seg.normal, direction, derivative) * remainder(s, t, y);
        }
        return sum;
    }

    double evaluate(const BoundaryPoint& p, bool derivative) const {
        if (p.segment < 0 || p.segment >= boundary_.num_segments())
            throw InputError("boundary point references segment " + std::to_string(p.segment));
        if (!(p.t > 0.0 && p.t < 1.0))
            throw InputError("boundary point must lie in the open interior of its segment");
        const auto& host = boundary_.segments[p.segment];
        const Point x = boundary_.point(p.segment, p.t);
        const Point& direction = host.tangent;

        double sum = 0.0;
        for (int s = 0; s < boundary_.num_segments(); ++s) {
            if (s == p.segment) continue;
            const auto& seg = boundary_.segments[s];
            if (detail::segment_frame<double>(seg.a, seg.b, seg.normal, x).collinear) continue;
            const SegmentMoments<double> m = derivative
                ? dlp_segment_affine_derivative<double>(seg.a, seg.b, seg.normal, x, direction)
                : dlp_segment_affine<double>(seg.a, seg.b, seg.normal, x);
            sum += density_(seg.start_node) * m.i0 + density_(seg.end_node) * m.i1;
            if (!g_.g) continue;
            if (point_segment_distance(x, seg.a, seg.b) >= seg.length) {
                const auto& r = remainder_[s];
                for (std::size_t q = 0; q < r.points.size(); ++q)
                    sum += r.weighted[q] * kernel(x, r.points[q], seg.normal, direction, derivative);
            } else {
                sum += near_remainder(s, 0.0, 1.0, x, direction, derivative, 0);
            }
        }

        // Local term -(w - g)/2 of (K - 1/2)(w - g); the host segment's own integral vanishes.
        if (derivative) {
            const double dg = g_.g ? g_.grad_g(x).dot(direction) : 0.0;
            return sum - 0.5 * (w_.slope(p.segment) - dg);
        }
        const double gx = g_.g ? g_.g(x) : 0.0;
        return sum - 0.5 * (w_.at(p.segment, p.t) - gx);
    }

    const BoundaryMesh& boundary_;
    const BoundaryDensity& w_;
    DirichletData g_;
    const GaussRule& rule_;
    Eigen::VectorXd g_nodes_;
    Eigen::VectorXd density_;
    std::vector<RemainderSamples> remainder_;
};

}  // namespace

Eigen::VectorXd eval_K_density(const BoundaryMesh& boundary, const BoundaryDensity& w,
                               std::span<const BoundaryPoint> points) {
    const Evaluator evaluator(boundary, w, DirichletData{});
    Eigen::VectorXd out(static_cast<Eigen::Index>(points.size()));
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        out(static_cast<Eigen::Index>(i)) = evaluator.value(p) + 0.5 * w.at(p.segment, p.t);
    }
    return out;
}

Eigen::VectorXd eval_K_data(const BoundaryMesh& boundary, const BoundaryDensity& w, const DirichletData& g,
                            std::span<const BoundaryPoint> points) {
    const Evaluator evaluator(boundary, w, g);
    Eigen::VectorXd out(static_cast<Eigen::Index>(points.size()));
    for (std::size_t i = 0; i < points.size(); ++i) out(static_cast<Eigen::Index>(i)) = evaluator.value(points[i]);
    return out;
}

Eigen::VectorXd eval_K_tangential_derivative(const BoundaryMesh& boundary, const BoundaryDensity& w,
                                             const DirichletData& g, std::span<const BoundaryPoint> points) {
    if (g.g && !g.grad_g) throw InputError("tangential derivative needs the gradient of g");
    const Evaluator evaluator(boundary, w, g);
    Eigen::VectorXd out(static_cast<Eigen::Index>(points.size()));
    for (std::size_t i = 0; i < points.size(); ++i)
        out(static_cast<Eigen::Index>(i)) = evaluator.derivative(points[i]);
    return out;
}

double eval_potential(const BoundaryMesh& boundary, const BoundaryDensity& w, const Point& x) {
    if (w.values.size() != boundary.num_nodes()) throw InputError("density does not belong to this boundary");
    double sum = 0.0;
    for (const auto& seg : boundary.segments) {
        if (point_segment_distance(x, seg.a, seg.b) <= 1e-14 * seg.length)
            throw InputError("eval_potential: point lies on the boundary");
        const SegmentMoments<double> m = dlp_segment_affine<double>(seg.a, seg.b, seg.normal, x);
        sum += w.values(seg.start_node) * m.i0 + w.values(seg.end_node) * m.i1;
    }
    return sum;
}

}  // namespace fembem
