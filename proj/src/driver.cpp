#include "fembem/driver.hpp"

#include "fembem/transfer.hpp"

#include <chrono>
#include <cmath>

namespace fembem {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

double field_value(const AdaptiveRecord& r, RateField field) {
    switch (field) {
        case RateField::eta: return r.eta;
        case RateField::eta1: return r.eta1;
        case RateField::eta2: return r.eta2;
        case RateField::err_h1:
            if (!r.err_h1) throw InputError("fit_rate: record without err_h1");
            return *r.err_h1;
    }
    return 0.0;
}

}  // namespace

Eigen::VectorXd dirichlet_boundary_values(const BoundaryMesh& boundary, const FeFunction& u1,
                                          const DirichletData& g) {
    const auto points = boundary_gauss_points(boundary, kBoundaryGaussOrder);
    const Eigen::VectorXd samples = eval_K_data(boundary, trace(boundary, u1), g, points);
    return scott_zhang_from_samples(boundary, samples);
}

LevelSolution solve_level(const ProblemSpec& spec, const Triangulation& mesh) {
    LevelSolution s;
    auto start = Clock::now();
    s.boundary = boundary_of(mesh);
    s.u1 = solve_neumann_meanzero(mesh, spec.f, spec.phi, &s.neumann);
    s.u2 = solve_dirichlet(mesh, s.boundary, dirichlet_boundary_values(s.boundary, s.u1, spec.g));
    s.uh = s.u1 + s.u2;
    s.t_solve = seconds_since(start);

    start = Clock::now();
    s.estimate = estimate(mesh, s.boundary, s.u1, s.u2, spec.f, spec.phi, spec.g);
    s.t_estimate = seconds_since(start);

    if (spec.exact) s.err_h1 = h1_error(mesh, s.uh, spec.exact->u, spec.exact->grad_u);
    return s;
}

AdaptiveRun adaptive_loop(const ProblemSpec& spec, const LoopOptions& options) {
    if (!(options.theta > 0.0 && options.theta <= 1.0)) throw InputError("theta must lie in (0, 1]");
    if (options.max_levels && *options.max_levels < 0) throw InputError("max_levels must be nonnegative");
    if (options.max_dofs <= 0) throw InputError("max_dofs must be positive");

    AdaptiveRun run;
    run.mesh = spec.initial_mesh;
    for (int level = 0;; ++level) {
        LevelSolution s;
        try {
            s = solve_level(spec, run.mesh);
        } catch (const SolverError& e) {
            throw LoopAborted(e, run.records);
        }
        const IndicatorField& ind = s.estimate.indicators;

        AdaptiveRecord r;
        r.level = level;
        r.n_elements = run.mesh.num_elements();
        r.n_vertices = run.mesh.num_vertices();
        r.n_boundary_edges = s.boundary.num_segments();
        r.eta = std::sqrt(ind.total_sq);
        r.eta1 = std::sqrt(ind.eta1_total_sq);
        r.eta2 = std::sqrt(ind.eta2_total_sq);
        r.err_h1 = s.err_h1;
        r.theta = options.theta;
        r.t_solve = s.t_solve;
        r.t_estimate = s.t_estimate;

        if (options.max_levels && level >= *options.max_levels) {
            run.records.push_back(r);
            break;
        }

        auto start = Clock::now();
        const Eigen::VectorXd eta_sq = ind.combined();
        const std::vector<int> marked = dorfler_mark({eta_sq.data(), static_cast<std::size_t>(eta_sq.size())},
                                                     options.theta);
        r.n_marked = static_cast<int>(marked.size());
        r.t_mark = seconds_since(start);

        start = Clock::now();
        Triangulation next = refine_nvb(run.mesh, marked);
        r.t_refine = seconds_since(start);
        run.records.push_back(r);

        if (marked.empty() || next.num_vertices() > options.max_dofs) break;
        run.mesh = std::move(next);
    }
    return run;
}

RateField parse_rate_field(const std::string& name) {
    if (name == "eta") return RateField::eta;
    if (name == "eta1") return RateField::eta1;
    if (name == "eta2") return RateField::eta2;
    if (name == "err" || name == "err_h1") return RateField::err_h1;
    throw InputError("unknown rate field '" + name + "' (expected eta, eta1, eta2 or err)");
}

double fit_rate(std::span<const AdaptiveRecord> records, RateField field, int tail) {
    if (tail < 2) throw InputError("fit_rate: tail must be at least 2");
    if (records.size() < static_cast<std::size_t>(tail))
        throw InputError("fit_rate: " + std::to_string(records.size()) + " records, tail " + std::to_string(tail));
    const auto window = records.last(static_cast<std::size_t>(tail));
    Eigen::VectorXd x(tail), y(tail);
    for (int i = 0; i < tail; ++i) {
        const double v = field_value(window[i], field);
        if (!(v > 0.0) || window[i].n_vertices <= 0) throw InputError("fit_rate: nonpositive value");
        x(i) = std::log(static_cast<double>(window[i].n_vertices));
        y(i) = std::log(v);
    }
    const Eigen::VectorXd dx = x.array() - x.mean();
    const double denom = dx.squaredNorm();
    if (!(denom > 0.0)) throw InputError("fit_rate: all records have the same N");
    return dx.dot(y.array().matrix() - Eigen::VectorXd::Constant(tail, y.mean())) / denom;
}

}  // namespace fembem
