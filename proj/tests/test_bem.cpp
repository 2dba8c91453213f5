#include "fembem/bem.hpp"
#include "fembem/errors.hpp"
#include "fembem/problems.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace fembem;
using boost::math::quadrature::gauss_kronrod;
using std::numbers::pi;

namespace {

// Independent oracle: the kernel written directly, integrated adaptively with a split
// at the foot point of x so the near-singular peak lies on a panel boundary.
std::pair<double, double> oracle_moments(const Point& a, const Point& b, const Point& n, const Point& x) {
    const Point d = b - a;
    const double len = d.norm();
    auto k = [&](double t) {
        const Point r = x - (a + t * d);
        return r.dot(n) / (2.0 * pi * r.squaredNorm()) * len;
    };
    const double foot = std::clamp((x - a).dot(d) / d.squaredNorm(), 0.0, 1.0);
    double i0 = 0.0, i1 = 0.0;
    for (auto [lo, hi] : {std::pair{0.0, foot}, std::pair{foot, 1.0}}) {
        if (hi - lo <= 0.0) continue;
        i0 += gauss_kronrod<double, 61>::integrate([&](double t) { return k(t) * (1.0 - t); }, lo, hi, 15, 1e-13);
        i1 += gauss_kronrod<double, 61>::integrate([&](double t) { return k(t) * t; }, lo, hi, 15, 1e-13);
    }
    return {i0, i1};
}

Triangulation refined(const char* name, int steps) {
    Triangulation mesh = builtin_mesh(name);
    for (int i = 0; i < steps; ++i) mesh = refine_uniform(mesh);
    return mesh;
}

Eigen::VectorXd nodal(const BoundaryMesh& b, const std::function<double(const Point&)>& f) {
    Eigen::VectorXd v(b.num_nodes());
    for (int k = 0; k < b.num_nodes(); ++k) v(k) = f(b.segments[k].a);
    return v;
}

}  // namespace

TEST(DlpSegment, AboveUnitSegment) {
    // kernel (x - y).n / (2 pi |x - y|^2) with n = (0,-1): the segment is seen from its inner side
    const auto m = dlp_segment_affine<double>({0, 0}, {1, 0}, {0, -1}, {0.5, 1});
    EXPECT_NEAR(m.i0 + m.i1, -std::atan(0.5) / pi, 1e-15);
    EXPECT_NEAR(m.i0, m.i1, 1e-15);
    EXPECT_NEAR(m.i0, -0.0737918, 1e-7);
}

TEST(DlpSegment, Collinear) {
    const auto m = dlp_segment_affine<double>({0, 0}, {1, 0}, {0, -1}, {2, 0});
    EXPECT_EQ(m.i0, 0.0);
    EXPECT_EQ(m.i1, 0.0);
}

TEST(DlpSegment, RandomCasesAgainstAdaptiveQuadrature) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> logd(-3.0, 0.5);
    int tested = 0;
    while (tested < 100) {
        const Point a(u(rng), u(rng));
        const Point b(u(rng), u(rng));
        const double len = (b - a).norm();
        if (len < 0.1) continue;
        const Point t = (b - a) / len;
        const Point n(t.y(), -t.x());
        // x at distance 10^logd * len from a random point near the segment
        const double s = 1.5 * u(rng) + 0.5;
        const Point base = a + s * (b - a);
        const Point x = base + std::pow(10.0, logd(rng)) * len * n * (u(rng) > 0 ? 1.0 : -1.0);
        const double foot = std::clamp((x - a).dot(b - a) / (len * len), 0.0, 1.0);
        if ((a + foot * (b - a) - x).norm() < 1e-3 * len) continue;
        const auto m = dlp_segment_affine<double>(a, b, n, x);
        const auto [i0, i1] = oracle_moments(a, b, n, x);
        EXPECT_NEAR(m.i0, i0, 1e-10);
        EXPECT_NEAR(m.i1, i1, 1e-10);
        ++tested;
    }
}

TEST(DlpSegment, DerivativeAgainstCentralDifferences) {
    const Point a(0.1, -0.2), b(0.7, 0.3);
    const Point t = (b - a).normalized();
    const Point n(t.y(), -t.x());
    const Point x(0.2, 0.4);
    const Point dir = Point(0.6, -0.8);
    const auto d = dlp_segment_affine_derivative<double>(a, b, n, x, dir);
    const double h = 1e-5;
    const auto p = dlp_segment_affine<double>(a, b, n, x + h * dir);
    const auto q = dlp_segment_affine<double>(a, b, n, x - h * dir);
    EXPECT_NEAR(d.i0, (p.i0 - q.i0) / (2 * h), 1e-8);
    EXPECT_NEAR(d.i1, (p.i1 - q.i1) / (2 * h), 1e-8);
}

TEST(DlpKernel, GradientMatchesDifferences) {
    const Point x(0.3, 0.1), y(-0.2, 0.4), n(0.6, 0.8);
    const Eigen::Vector2d g = dlp_kernel_gradient(x, y, n);
    const double h = 1e-6;
    EXPECT_NEAR(g.x(), (dlp_kernel(x + Point(h, 0), y, n) - dlp_kernel(x - Point(h, 0), y, n)) / (2 * h), 1e-7);
    EXPECT_NEAR(g.y(), (dlp_kernel(x + Point(0, h), y, n) - dlp_kernel(x - Point(0, h), y, n)) / (2 * h), 1e-7);
}

TEST(EvalK, ConstantDensity) {
    const Triangulation mesh = refined("zshape", 1);
    const BoundaryMesh b = boundary_of(mesh);
    const BoundaryDensity one(b, Eigen::VectorXd::Ones(b.num_nodes()));
    const auto points = boundary_gauss_points(b, 3);
    const Eigen::VectorXd k = eval_K_density(b, one, points);
    EXPECT_LT((k.array() + 0.5).abs().maxCoeff(), 1e-13);
    const Eigen::VectorXd kd = eval_K_data(b, one, DirichletData{}, points);
    EXPECT_LT((kd.array() + 1.0).abs().maxCoeff(), 1e-13);
}

TEST(EvalK, ZeroDensityUnitDatum) {
    const Triangulation mesh = builtin_mesh("lshape");
    const BoundaryMesh b = boundary_of(mesh);
    const BoundaryDensity zero(b, Eigen::VectorXd::Zero(b.num_nodes()));
    DirichletData one{[](const Point&) { return 1.0; }, [](const Point&) { return Eigen::Vector2d::Zero().eval(); }};
    const auto points = boundary_gauss_points(b, 4);
    const Eigen::VectorXd v = eval_K_data(b, zero, one, points);
    EXPECT_LT((v.array() - 1.0).abs().maxCoeff(), 1e-13);
}

TEST(EvalK, DataWithoutGMatchesDensityShift) {
    const Triangulation mesh = refined("square", 1);
    const BoundaryMesh b = boundary_of(mesh);
    const BoundaryDensity w(b, nodal(b, [](const Point& x) { return std::sin(5 * x.x()) + x.y(); }));
    const auto points = boundary_gauss_points(b, 5);
    const Eigen::VectorXd k = eval_K_density(b, w, points);
    const Eigen::VectorXd kd = eval_K_data(b, w, DirichletData{}, points);
    for (std::size_t i = 0; i < points.size(); ++i)
        EXPECT_NEAR(kd(i), k(i) - 0.5 * w.at(points[i].segment, points[i].t), 1e-14);
}

TEST(EvalK, Linearity) {
    const Triangulation mesh = refined("lshape", 1);
    const BoundaryMesh b = boundary_of(mesh);
    const BoundaryDensity w1(b, nodal(b, [](const Point& x) { return x.x() * x.x(); }));
    const BoundaryDensity w2(b, nodal(b, [](const Point& x) { return std::cos(3 * x.y()); }));
    const BoundaryDensity w12(b, w1.values + w2.values);
    const auto points = boundary_gauss_points(b, 2);
    const Eigen::VectorXd sum = eval_K_density(b, w1, points) + eval_K_density(b, w2, points);
    EXPECT_LT((eval_K_density(b, w12, points) - sum).lpNorm<Eigen::Infinity>(), 1e-13);
}

TEST(EvalK, AffineDensityMatchesInteriorLimit) {
    // (K - 1/2) w is the interior trace of the double-layer potential; approach from inside.
    const Triangulation mesh = builtin_mesh("square");
    const BoundaryMesh b = boundary_of(mesh);
    const BoundaryDensity w(b, nodal(b, [](const Point& x) { return x.x() + 2.0 * x.y(); }));
    for (const BoundaryPoint p : {BoundaryPoint{1, 0.3}, BoundaryPoint{4, 0.5}, BoundaryPoint{6, 0.8}}) {
        const auto& seg = b.segments[p.segment];
        const Point x = b.point(p.segment, p.t);
        const double trace = eval_K_data(b, w, DirichletData{}, std::span(&p, 1))(0);
        const double near = eval_potential(b, w, x - 1e-7 * seg.normal);
        EXPECT_NEAR(trace, near, 1e-6);
        // the exterior limit differs by the density
        const double outside = eval_potential(b, w, x + 1e-7 * seg.normal);
        EXPECT_NEAR(outside - near, w.at(p.segment, p.t), 1e-6);
    }
}

TEST(EvalK, SquareDataConvergesUnderRefinedQuadrature) {
    // oracle: the remainder of g integrated by adaptive quadrature segment by segment
    const ProblemSpec spec = builtin_problem("square");
    const Triangulation mesh = refined("square", 1);
    const BoundaryMesh b = boundary_of(mesh);
    const BoundaryDensity w(b, Eigen::VectorXd::Zero(b.num_nodes()));
    const auto points = boundary_gauss_points(b, 3);
    const Eigen::VectorXd v = eval_K_data(b, w, spec.g, points);
    for (std::size_t i = 0; i < points.size(); i += 7) {
        const Point x = b.point(points[i].segment, points[i].t);
        double sum = 0.5 * spec.g.g(x);
        for (int s = 0; s < b.num_segments(); ++s) {
            if (s == points[i].segment) continue;
            const auto& seg = b.segments[s];
            const double foot = std::clamp((x - seg.a).dot(seg.b - seg.a) / (seg.length * seg.length), 0.0, 1.0);
            auto integrand = [&](double t) {
                const Point y = b.point(s, t);
                return -dlp_kernel(x, y, seg.normal) * spec.g.g(y) * seg.length;
            };
            for (auto [lo, hi] : {std::pair{0.0, foot}, std::pair{foot, 1.0}})
                if (hi > lo) sum += gauss_kronrod<double, 61>::integrate(integrand, lo, hi, 15, 1e-13);
        }
        EXPECT_NEAR(v(static_cast<Eigen::Index>(i)), sum, 1e-8 * std::max(1.0, std::abs(sum)));
    }
}

TEST(EvalKDerivative, ConstantsGiveZero) {
    const Triangulation mesh = refined("zshape", 1);
    const BoundaryMesh b = boundary_of(mesh);
    const BoundaryDensity w(b, Eigen::VectorXd::Constant(b.num_nodes(), 3.0));
    DirichletData g{[](const Point&) { return 1.5; }, [](const Point&) { return Eigen::Vector2d::Zero().eval(); }};
    const auto points = boundary_gauss_points(b, 4);
    EXPECT_LT(eval_K_tangential_derivative(b, w, g, points).lpNorm<Eigen::Infinity>(), 1e-12);
}

TEST(EvalKDerivative, CentralDifferencesSecondOrder) {
    const ProblemSpec spec = builtin_problem("square");
    const Triangulation mesh = refined("square", 1);
    const BoundaryMesh b = boundary_of(mesh);
    const BoundaryDensity w(b, nodal(b, [](const Point& x) { return std::exp(x.x()) * std::cos(4 * x.y()); }));
    for (const BoundaryPoint p : {BoundaryPoint{2, 0.4}, BoundaryPoint{9, 0.55}, BoundaryPoint{13, 0.7}}) {
        const double exact = eval_K_tangential_derivative(b, w, spec.g, std::span(&p, 1))(0);
        const double len = b.segments[p.segment].length;
        auto central = [&](double h) {
            const BoundaryPoint pts[2] = {{p.segment, p.t + h / len}, {p.segment, p.t - h / len}};
            const Eigen::VectorXd v = eval_K_data(b, w, spec.g, pts);
            return (v(0) - v(1)) / (2.0 * h);
        };
        const double e1 = std::abs(central(1e-2 * len) - exact);
        const double e2 = std::abs(central(5e-3 * len) - exact);
        EXPECT_GT(std::log2(e1 / e2), 1.9);
        // at the small steps only round-off separates the two
        EXPECT_NEAR(central(1e-4 * len), exact, 1e-6 * std::max(1.0, std::abs(exact)));
    }
}

TEST(EvalKDerivative, Linearity) {
    const ProblemSpec spec = builtin_problem("lshape");
    const Triangulation mesh = builtin_mesh("lshape");
    const BoundaryMesh b = boundary_of(mesh);
    const BoundaryDensity w(b, nodal(b, [](const Point& x) { return x.x() * x.y(); }));
    const BoundaryDensity w2(b, 2.0 * w.values);
    DirichletData g2{[&](const Point& x) { return 2.0 * spec.g.g(x); },
                     [&](const Point& x) { return Eigen::Vector2d(2.0 * spec.g.grad_g(x)); }};
    const auto points = boundary_gauss_points(b, 3);
    const Eigen::VectorXd once = eval_K_tangential_derivative(b, w, spec.g, points);
    const Eigen::VectorXd twice = eval_K_tangential_derivative(b, w2, g2, points);
    EXPECT_LT((twice - 2.0 * once).lpNorm<Eigen::Infinity>(), 1e-11 * once.lpNorm<Eigen::Infinity>());
}

TEST(EvalKDerivative, RequiresGradient) {
    const Triangulation mesh = builtin_mesh("square");
    const BoundaryMesh b = boundary_of(mesh);
    const BoundaryDensity w(b, Eigen::VectorXd::Zero(b.num_nodes()));
    DirichletData g{[](const Point&) { return 1.0; }, {}};
    const auto points = boundary_gauss_points(b, 1);
    EXPECT_THROW(eval_K_tangential_derivative(b, w, g, points), InputError);
}

TEST(EvalPotential, IndicatorOfDomain) {
    const BoundaryMesh b = boundary_of(builtin_mesh("zshape"));
    const BoundaryDensity one(b, Eigen::VectorXd::Ones(b.num_nodes()));
    EXPECT_NEAR(eval_potential(b, one, {-0.1, -0.1}), -1.0, 1e-14);
    EXPECT_NEAR(eval_potential(b, one, {0.2, 0.05}), 0.0, 1e-14);  // inside the removed triangle
    EXPECT_NEAR(eval_potential(b, one, {3.0, -2.0}), 0.0, 1e-14);
    const BoundaryDensity two(b, 2.0 * one.values);
    EXPECT_NEAR(eval_potential(b, two, {-0.1, 0.2}), 2.0 * eval_potential(b, one, {-0.1, 0.2}), 1e-14);
}

TEST(EvalPotential, ExteriorAgainstQuadrature) {
    const BoundaryMesh b = boundary_of(builtin_mesh("square"));
    const BoundaryDensity w(b, nodal(b, [](const Point& x) { return x.x() * x.x() - x.y(); }));
    const Point x(0.4, 0.1);
    double sum = 0.0;
    for (int s = 0; s < b.num_segments(); ++s) {
        const auto& seg = b.segments[s];
        sum += gauss_kronrod<double, 61>::integrate(
            [&](double t) { return dlp_kernel(x, b.point(s, t), seg.normal) * w.at(s, t) * seg.length; }, 0.0, 1.0,
            15, 1e-13);
    }
    EXPECT_NEAR(eval_potential(b, w, x), sum, 1e-13);
}

TEST(EvalPotential, RejectsBoundaryPoint) {
    const BoundaryMesh b = boundary_of(builtin_mesh("square"));
    const BoundaryDensity one(b, Eigen::VectorXd::Ones(b.num_nodes()));
    EXPECT_THROW(eval_potential(b, one, {0.25, 0.1}), InputError);
}
