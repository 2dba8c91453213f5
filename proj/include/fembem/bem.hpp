#pragma once

#include "fembem/fem.hpp"
#include "fembem/mesh.hpp"

#include <Eigen/Core>

#include <cmath>
#include <limits>
#include <numbers>
#include <span>

namespace fembem {

/// Integrals of the double-layer kernel against the two hat functions of a segment.
template <typename Scalar>
struct SegmentMoments {
    Scalar i0 = Scalar(0);  // weight (1 - t), attached to the start point
    Scalar i1 = Scalar(0);  // weight t, attached to the end point
};

namespace detail {

// Local coordinates of a segment seen from x: y(s) - x = p + s * tau, s in [0, L].
template <typename Scalar>
struct SegmentFrame {
    Scalar length, h, alpha;
    bool collinear;
};

template <typename Scalar>
SegmentFrame<Scalar> segment_frame(const Eigen::Matrix<Scalar, 2, 1>& a, const Eigen::Matrix<Scalar, 2, 1>& b,
                                   const Eigen::Matrix<Scalar, 2, 1>& n, const Eigen::Matrix<Scalar, 2, 1>& x) {
    using std::abs;
    const Eigen::Matrix<Scalar, 2, 1> d = b - a;
    const Scalar length = d.norm();
    const Eigen::Matrix<Scalar, 2, 1> p = a - x;
    const Scalar h = p.dot(n);
    const Scalar alpha = p.dot(d) / length;
    const Scalar scale = abs(alpha) + length;
    return {length, h, alpha, abs(h) <= Scalar(64) * std::numeric_limits<Scalar>::epsilon() * scale};
}

}  // namespace detail

/**
 * Closed-form double-layer integrals over the segment [a, b] with unit normal n,
 *   i0 = int k(x, y(t)) (1 - t) |b - a| dt,   i1 = int k(x, y(t)) t |b - a| dt,
 * k(x, y) = (1 / 2 pi) (x - y).n / |x - y|^2 (normal derivative in y of the
 * Newtonian kernel G(x - y)). Both vanish when x lies on the segment's line.
 */
template <typename Scalar>
SegmentMoments<Scalar> dlp_segment_affine(const Eigen::Matrix<Scalar, 2, 1>& a, const Eigen::Matrix<Scalar, 2, 1>& b,
                                          const Eigen::Matrix<Scalar, 2, 1>& n,
                                          const Eigen::Matrix<Scalar, 2, 1>& x) {
    using std::atan2;
    using std::log1p;
    const auto f = detail::segment_frame(a, b, n, x);
    if (f.collinear) return {};
    const Scalar u1 = f.alpha;
    const Scalar u2 = f.alpha + f.length;
    const Scalar h2 = f.h * f.h;
    // angle subtended by the segment, i.e. int h / ((s + alpha)^2 + h^2) ds
    const Scalar angle = atan2(f.h * f.length, h2 + u1 * u2);
    const Scalar log_ratio = log1p(f.length * (u1 + u2) / (u1 * u1 + h2));
    const Scalar first = f.h / Scalar(2) * log_ratio - f.alpha * angle;  // int s h / (...) ds
    const Scalar c = Scalar(-1) / (Scalar(2) * std::numbers::pi_v<Scalar>);
    return {c * (angle - first / f.length), c * first / f.length};
}

/// Derivative of dlp_segment_affine with respect to x in the given direction.
/// For x on the segment's line the result is only valid for directions along that line (it is zero).
template <typename Scalar>
SegmentMoments<Scalar> dlp_segment_affine_derivative(const Eigen::Matrix<Scalar, 2, 1>& a,
                                                     const Eigen::Matrix<Scalar, 2, 1>& b,
                                                     const Eigen::Matrix<Scalar, 2, 1>& n,
                                                     const Eigen::Matrix<Scalar, 2, 1>& x,
                                                     const Eigen::Matrix<Scalar, 2, 1>& direction) {
    using std::atan2;
    using std::log1p;
    const auto f = detail::segment_frame(a, b, n, x);
    if (f.collinear) return {};
    const Eigen::Matrix<Scalar, 2, 1> tau = (b - a) / f.length;
    const Scalar dh = -n.dot(direction);
    const Scalar dalpha = -tau.dot(direction);
    const Scalar u1 = f.alpha;
    const Scalar u2 = f.alpha + f.length;
    const Scalar h2 = f.h * f.h;
    const Scalar r1 = u1 * u1 + h2;
    const Scalar r2 = u2 * u2 + h2;
    const Scalar angle = atan2(f.h * f.length, h2 + u1 * u2);
    const Scalar log_ratio = log1p(f.length * (u1 + u2) / r1);
    const Scalar dangle = (f.h * dalpha - u2 * dh) / r2 - (f.h * dalpha - u1 * dh) / r1;
    const Scalar dlog = Scalar(2) * ((u2 * dalpha + f.h * dh) / r2 - (u1 * dalpha + f.h * dh) / r1);
    const Scalar dfirst = dh / Scalar(2) * log_ratio + f.h / Scalar(2) * dlog - dalpha * angle - f.alpha * dangle;
    const Scalar c = Scalar(-1) / (Scalar(2) * std::numbers::pi_v<Scalar>);
    return {c * (dangle - dfirst / f.length), c * dfirst / f.length};
}

/// Pointwise double-layer kernel k(x, y) for a source point y with normal n(y).
inline double dlp_kernel(const Point& x, const Point& y, const Point& n) {
    const Point r = x - y;
    return r.dot(n) / (2.0 * std::numbers::pi * r.squaredNorm());
}

/// Gradient in x of dlp_kernel.
inline Eigen::Vector2d dlp_kernel_gradient(const Point& x, const Point& y, const Point& n) {
    const Point r = x - y;
    const double r2 = r.squaredNorm();
    return (n - 2.0 * r.dot(n) / r2 * r) / (2.0 * std::numbers::pi * r2);
}

/// Continuous piecewise-affine density, one value per boundary node.
struct BoundaryDensity {
    const BoundaryMesh* boundary = nullptr;
    Eigen::VectorXd values;

    BoundaryDensity() = default;
    BoundaryDensity(const BoundaryMesh& b, Eigen::VectorXd v);

    double at(int segment, double t) const;
    /// Arc-length derivative along a segment.
    double slope(int segment) const;
};

/// Trace of a volume P1 function on the boundary nodes.
BoundaryDensity trace(const BoundaryMesh& boundary, const FeFunction& u);

/// Point inside a boundary segment, segment parameter t in (0, 1).
struct BoundaryPoint {
    int segment;
    double t;
};

/// Gauss points of an order-n rule on every segment, segment-major.
std::vector<BoundaryPoint> boundary_gauss_points(const BoundaryMesh& boundary, int order);

/// Dirichlet jump datum g with an ambient gradient. An empty g means g = 0.
struct DirichletData {
    ScalarField g;
    VectorField grad_g;
};

/// (K w)(x) on edge interiors: the direct boundary integral of the density.
Eigen::VectorXd eval_K_density(const BoundaryMesh& boundary, const BoundaryDensity& w,
                               std::span<const BoundaryPoint> points);

/// (K - 1/2)(w - g) on edge interiors.
Eigen::VectorXd eval_K_data(const BoundaryMesh& boundary, const BoundaryDensity& w, const DirichletData& g,
                            std::span<const BoundaryPoint> points);

/// Arc-length derivative of (K - 1/2)(w - g) along the host segment of each point.
Eigen::VectorXd eval_K_tangential_derivative(const BoundaryMesh& boundary, const BoundaryDensity& w,
                                             const DirichletData& g, std::span<const BoundaryPoint> points);

/// Double-layer potential evaluated off the boundary.
double eval_potential(const BoundaryMesh& boundary, const BoundaryDensity& w, const Point& x);

}  // namespace fembem
