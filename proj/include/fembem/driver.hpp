#pragma once

#include "fembem/errors.hpp"
#include "fembem/estimator.hpp"
#include "fembem/fem.hpp"
#include "fembem/problems.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fembem {

struct AdaptiveRecord {
    int level = 0;
    int n_elements = 0;
    int n_vertices = 0;  // N, the number of degrees of freedom
    int n_boundary_edges = 0;
    double eta = 0.0;
    double eta1 = 0.0;
    double eta2 = 0.0;
    std::optional<double> err_h1;
    int n_marked = 0;
    double theta = 0.0;
    double t_solve = 0.0;
    double t_estimate = 0.0;
    double t_mark = 0.0;
    double t_refine = 0.0;
};

struct LoopOptions {
    double theta = 0.25;
    int max_dofs = 200000;
    std::optional<int> max_levels;
};

/// Discrete solution and indicators on one mesh. References `mesh`, which must outlive it.
struct LevelSolution {
    BoundaryMesh boundary;
    FeFunction u1;
    FeFunction u2;
    FeFunction uh;
    Estimate estimate;
    NeumannDiagnostics neumann;
    std::optional<double> err_h1;
    double t_solve = 0.0;
    double t_estimate = 0.0;
};

/// SOLVE and ESTIMATE on a fixed mesh.
LevelSolution solve_level(const ProblemSpec& spec, const Triangulation& mesh);

/// u2 boundary values: Scott-Zhang projection of (K - 1/2)(u1 - g).
Eigen::VectorXd dirichlet_boundary_values(const BoundaryMesh& boundary, const FeFunction& u1,
                                          const DirichletData& g);

struct AdaptiveRun {
    std::vector<AdaptiveRecord> records;
    Triangulation mesh;  // mesh of the last record
};

/// Thrown when a linear solve fails inside the loop; carries the levels completed so far.
class LoopAborted : public SolverError {
public:
    LoopAborted(const SolverError& cause, std::vector<AdaptiveRecord> history)
        : SolverError(std::string("adaptive loop aborted after ") + std::to_string(history.size()) +
                          " levels: " + cause.message(),
                      cause.residual()),
          history_(std::move(history)) {}

    const std::vector<AdaptiveRecord>& history() const { return history_; }

private:
    std::vector<AdaptiveRecord> history_;
};

/**
 * SOLVE, ESTIMATE, MARK (Doerfler on eta1^2 + eta2^2), REFINE (NVB) until
 * `max_levels` records exist beyond level 0 or the next mesh exceeds `max_dofs` vertices.
 */
AdaptiveRun adaptive_loop(const ProblemSpec& spec, const LoopOptions& options);

enum class RateField { eta, eta1, eta2, err_h1 };

RateField parse_rate_field(const std::string& name);

/// Least-squares slope of log(field) against log(n_vertices) over the last `tail` records.
double fit_rate(std::span<const AdaptiveRecord> records, RateField field, int tail);

struct CsvOptions {
    bool timings = true;  // false writes zero timings, for byte-reproducible output
};

std::string emit_csv(std::span<const AdaptiveRecord> records, const CsvOptions& options = {});
std::vector<AdaptiveRecord> parse_csv(const std::string& text);

}  // namespace fembem
