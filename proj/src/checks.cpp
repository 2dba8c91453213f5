#include "fembem/checks.hpp"

#include "fembem/bem.hpp"
#include "fembem/fem.hpp"
#include "fembem/problems.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>

namespace fembem {

namespace {

std::string format(const char* fmt, double a, double b = 0.0) {
    char buf[128];
    std::snprintf(buf, sizeof buf, fmt, a, b);
    return buf;
}

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                    double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    return simpson_step(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 50);
}

Triangulation refined(const std::string& name, int steps) {
    Triangulation mesh = builtin_mesh(name);
    for (int i = 0; i < steps; ++i) mesh = refine_uniform(mesh);
    return mesh;
}

CheckResult check_constant_density() {
    double worst = 0.0;
    for (const char* name : {"square", "lshape", "zshape"}) {
        const Triangulation mesh = refined(name, 2);
        const BoundaryMesh boundary = boundary_of(mesh);
        const BoundaryDensity one(boundary, Eigen::VectorXd::Ones(boundary.num_nodes()));
        const auto points = boundary_gauss_points(boundary, 4);
        const Eigen::VectorXd v = eval_K_data(boundary, one, DirichletData{}, points);
        worst = std::max(worst, (v.array() + 1.0).abs().maxCoeff());
    }
    return {"(K - 1/2)1 = -1 on the boundary", worst <= 1e-12, format("max deviation %.3e", worst)};
}

CheckResult check_potential_of_one() {
    const Triangulation mesh = builtin_mesh("lshape");
    const BoundaryMesh boundary = boundary_of(mesh);
    const BoundaryDensity one(boundary, Eigen::VectorXd::Ones(boundary.num_nodes()));
    double worst = 0.0;
    for (const Point x : {Point(-0.1, -0.1), Point(0.1, -0.2), Point(-0.2, 0.2), Point(0.0, -0.01)})
        worst = std::max(worst, std::abs(eval_potential(boundary, one, x) + 1.0));
    for (const Point x : {Point(0.1, 0.1), Point(0.3, 0.0), Point(-1.0, 2.0), Point(0.01, 0.24)})
        worst = std::max(worst, std::abs(eval_potential(boundary, one, x)));
    return {"double-layer potential of 1 is -1 inside, 0 outside", worst <= 1e-10, format("max deviation %.3e", worst)};
}

CheckResult check_segment_integrals() {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const Point a(u(rng), u(rng));
        Point b(u(rng), u(rng));
        const Point x(u(rng), u(rng));
        const Point d = b - a;
        const double len = d.norm();
        const Point n(d.y() / len, -d.x() / len);
        if (std::abs((a - x).dot(n)) < 0.05) continue;
        const auto m = dlp_segment_affine<double>(a, b, n, x);
        const double i0 = adaptive_simpson(
            [&](double t) { return dlp_kernel(x, a + t * d, n) * (1.0 - t) * len; }, 0.0, 1.0, 1e-14);
        const double i1 = adaptive_simpson([&](double t) { return dlp_kernel(x, a + t * d, n) * t * len; }, 0.0, 1.0,
                                           1e-14);
        worst = std::max({worst, std::abs(m.i0 - i0), std::abs(m.i1 - i1)});
    }
    return {"closed-form segment integrals match adaptive quadrature", worst <= 1e-10,
            format("max abs difference %.3e", worst)};
}

CheckResult check_tangential_derivative() {
    const ProblemSpec spec = builtin_problem("square");
    const Triangulation mesh = refined("square", 1);
    const BoundaryMesh boundary = boundary_of(mesh);
    Eigen::VectorXd values(boundary.num_nodes());
    for (int k = 0; k < boundary.num_nodes(); ++k) values(k) = std::sin(3.0 * boundary.segments[k].a.x()) + k % 3;
    const BoundaryDensity w(boundary, values);
    const BoundaryPoint p{5, 0.37};
    const double exact = eval_K_tangential_derivative(boundary, w, spec.g, std::span(&p, 1))(0);
    const double len = boundary.segments[p.segment].length;
    auto central = [&](double dt) {
        const BoundaryPoint pts[2] = {{p.segment, p.t + dt}, {p.segment, p.t - dt}};
        const Eigen::VectorXd v = eval_K_data(boundary, w, spec.g, pts);
        return (v(0) - v(1)) / (2.0 * dt * len);
    };
    const double e1 = std::abs(central(0.02) - exact);
    const double e2 = std::abs(central(0.01) - exact);
    const double order = std::log2(e1 / e2);
    return {"tangential derivative against central differences", order >= 1.9,
            format("observed order %.3f (error %.3e)", order, e2)};
}

CheckResult check_compatibility() {
    double worst = 0.0;
    for (const char* name : {"square", "lshape", "zshape"}) {
        const ProblemSpec spec = builtin_problem(name);
        const CompatibilityReport r = compatibility_check(spec, refined(name, 3));
        worst = std::max(worst, std::abs(r.residual) / r.scale);
    }
    return {"built-in problems satisfy the compatibility condition", worst <= 1e-8,
            format("max relative residual %.3e", worst)};
}

CheckResult check_refinement() {
    Triangulation mesh = builtin_mesh("zshape");
    bool ok = true;
    for (int step = 0; step < 6 && ok; ++step) {
        std::vector<int> marked;
        for (int e = 0; e < mesh.num_elements(); e += 3 + step) marked.push_back(e);
        mesh = refine_nvb(mesh, marked);
        ok = is_conforming(mesh);
    }
    return {"newest vertex bisection keeps the mesh conforming", ok, format("%.0f elements", mesh.num_elements())};
}

CheckResult check_galerkin_orthogonality() {
    const ProblemSpec spec = builtin_problem("zshape");
    const Triangulation mesh = refined("zshape", 2);
    const FeFunction u = solve_neumann_meanzero(mesh, spec.f, spec.phi);
    const Eigen::VectorXd b = assemble_load(mesh, spec.f, spec.phi);
    const Eigen::VectorXd r = assemble_stiffness(mesh) * u.coefficients - b;
    const double ratio = r.lpNorm<Eigen::Infinity>() / b.norm();
    return {"Neumann solution satisfies the Galerkin equations", ratio <= 1e-9,
            format("max residual / ||rhs|| = %.3e", ratio)};
}

}  // namespace

std::vector<CheckResult> run_invariant_checks() {
    const std::vector<std::function<CheckResult()>> checks = {
        check_constant_density, check_potential_of_one, check_segment_integrals, check_tangential_derivative,
        check_compatibility,    check_refinement,       check_galerkin_orthogonality,
    };
    std::vector<CheckResult> results;
    for (const auto& c : checks) {
        try {
            results.push_back(c());
        } catch (const std::exception& e) {
            results.push_back({"check raised an exception", false, e.what()});
        }
    }
    return results;
}

}  // namespace fembem
