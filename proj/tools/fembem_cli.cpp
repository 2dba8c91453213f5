#include "fembem/checks.hpp"
#include "fembem/driver.hpp"
#include "fembem/errors.hpp"
#include "fembem/problems.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kInputError = 1;
constexpr int kSolverError = 2;
constexpr int kInvariantFailure = 3;

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw fembem::InputError("cannot write " + path);
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw fembem::InputError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive FEM-BEM solver for 2D Laplace transmission problems"};
    app.require_subcommand(1);

    std::string problem;
    double theta = 0.25;
    int max_dofs = 200000;
    int max_levels = -1;
    std::string out_path;
    std::string mesh_dir;
    bool no_timings = false;
    auto* run = app.add_subcommand("run", "Run the adaptive loop and write per-level results as CSV");
    run->add_option("--problem", problem, "Built-in problem")->required()->check(CLI::IsMember({"square", "lshape", "zshape"}));
    run->add_option("--theta", theta, "Doerfler parameter in (0, 1]; 1 gives uniform refinement")->required();
    run->add_option("--max-dofs", max_dofs, "Stop before a mesh with more vertices");
    run->add_option("--max-levels", max_levels, "Stop after this refinement level");
    run->add_option("--out", out_path, "CSV output file (default: stdout)");
    run->add_option("--mesh-dir", mesh_dir, "Initial mesh directory (coordinates, elements) replacing the built-in one");
    run->add_flag("--no-timings", no_timings, "Write zero timings so that reruns are byte-identical");

    std::string in_path;
    std::string field = "eta";
    int tail = 4;
    auto* rates = app.add_subcommand("rates", "Fit the convergence rate of a CSV result");
    rates->add_option("--in", in_path, "CSV produced by run")->required();
    rates->add_option("--field", field, "eta, eta1, eta2 or err");
    rates->add_option("--tail", tail, "Number of final levels in the fit");

    auto* check = app.add_subcommand("check", "Run the invariant suite");

    std::string mesh_problem;
    std::string mesh_out;
    auto* mesh = app.add_subcommand("mesh", "Write a built-in initial mesh in the text format");
    mesh->add_option("--problem", mesh_problem, "Built-in problem")->required()->check(CLI::IsMember({"square", "lshape", "zshape"}));
    mesh->add_option("--out", mesh_out, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kInputError;
    }

    try {
        if (*run) {
            fembem::ProblemSpec spec = fembem::builtin_problem(problem);
            if (!mesh_dir.empty()) spec.initial_mesh = fembem::read_mesh(mesh_dir);
            const auto report = fembem::compatibility_check(spec, spec.initial_mesh);
            if (!report.compatible())
                std::fprintf(stderr, "warning: compatibility residual %.3e exceeds 1e-6 * %.3e\n", report.residual,
                             report.scale);
            fembem::LoopOptions options;
            options.theta = theta;
            options.max_dofs = max_dofs;
            if (max_levels >= 0) options.max_levels = max_levels;
            std::vector<fembem::AdaptiveRecord> records;
            int status = 0;
            try {
                records = fembem::adaptive_loop(spec, options).records;
            } catch (const fembem::LoopAborted& e) {
                std::fprintf(stderr, "error: %s\n", e.what());
                records = e.history();
                status = kSolverError;
            }
            if (!records.empty()) write_text(out_path, fembem::emit_csv(records, {.timings = !no_timings}));
            return status;
        }
        if (*rates) {
            const auto records = fembem::parse_csv(read_text(in_path));
            const double slope = fembem::fit_rate(records, fembem::parse_rate_field(field), tail);
            std::printf("%.6f\n", slope);
            return 0;
        }
        if (*mesh) {
            fembem::write_mesh(fembem::builtin_mesh(mesh_problem), mesh_out);
            return 0;
        }
        if (*check) {
            bool ok = true;
            for (const auto& r : fembem::run_invariant_checks()) {
                std::printf("[%s] %s: %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
                ok = ok && r.passed;
            }
            return ok ? 0 : kInvariantFailure;
        }
    } catch (const fembem::InputError& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return kInputError;
    } catch (const fembem::StructuralError& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return kInputError;
    } catch (const fembem::SolverError& e) {
        std::fprintf(stderr, "solver error: %s\n", e.what());
        return kSolverError;
    }
    return 0;
}
