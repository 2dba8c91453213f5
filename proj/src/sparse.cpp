#include "fembem/sparse.hpp"

#include "fembem/errors.hpp"

#include <Eigen/SparseCholesky>

#include <string>

namespace fembem {

namespace {

constexpr double kResidualTolerance = 1e-10;
constexpr int kRefinementSteps = 3;

double relative_residual(const SparseMatrix& A, const Eigen::VectorXd& x, const Eigen::VectorXd& b) {
    const double bn = b.norm();
    const double rn = (A * x - b).norm();
    return bn > 0.0 ? rn / bn : rn;
}

}  // namespace

SparseMatrix from_triplets(int n, std::span<const Triplet> triplets) {
    for (const auto& t : triplets) {
        if (t.row() < 0 || t.row() >= n || t.col() < 0 || t.col() >= n)
            throw InputError("from_triplets: index (" + std::to_string(t.row()) + ", " + std::to_string(t.col()) +
                             ") out of range for size " + std::to_string(n));
    }
    SparseMatrix A(n, n);
    A.setFromTriplets(triplets.begin(), triplets.end());
    A.prune([](int, int, double v) { return v != 0.0; });
    A.makeCompressed();
    return A;
}

namespace {

using Factorization = Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>;

// Solves with an existing factorization plus a few steps of iterative refinement.
Eigen::VectorXd refined_solve(const Factorization& ldlt, const SparseMatrix& A, const Eigen::VectorXd& b,
                              double& residual) {
    Eigen::VectorXd x = ldlt.solve(b);
    residual = relative_residual(A, x, b);
    for (int step = 0; step < kRefinementSteps && !(residual <= kResidualTolerance); ++step) {
        x += ldlt.solve(b - A * x);
        residual = relative_residual(A, x, b);
    }
    return x;
}

}  // namespace

Eigen::VectorXd solve_spd(const SparseMatrix& A, const Eigen::VectorXd& b) {
    if (A.rows() != A.cols() || A.rows() != b.size()) throw InputError("solve_spd: dimension mismatch");
    if (A.rows() == 0) return Eigen::VectorXd(0);

    const Factorization ldlt{Eigen::SparseMatrix<double>(A)};
    if (ldlt.info() != Eigen::Success) throw SolverError("solve_spd: factorization failed", 1.0);
    double res = 0.0;
    Eigen::VectorXd x = refined_solve(ldlt, A, b, res);
    if (!(res <= kResidualTolerance)) throw SolverError("solve_spd: residual contract not met", res);
    return x;
}

SparseMatrix principal_submatrix(const SparseMatrix& A, std::span<const int> keep) {
    std::vector<int> position(A.rows(), -1);
    for (std::size_t i = 0; i < keep.size(); ++i) position[keep[i]] = static_cast<int>(i);
    std::vector<Triplet> triplets;
    triplets.reserve(A.nonZeros());
    for (int row : keep) {
        for (SparseMatrix::InnerIterator it(A, row); it; ++it) {
            const int col = position[it.col()];
            if (col >= 0) triplets.emplace_back(position[row], col, it.value());
        }
    }
    SparseMatrix S(static_cast<int>(keep.size()), static_cast<int>(keep.size()));
    S.setFromTriplets(triplets.begin(), triplets.end());
    S.makeCompressed();
    return S;
}

MeanConstrainedSolution solve_mean_constrained(const SparseMatrix& A, const Eigen::VectorXd& b,
                                               const Eigen::VectorXd& m) {
    const Eigen::Index n = A.rows();
    if (A.cols() != n || b.size() != n || m.size() != n)
        throw InputError("solve_mean_constrained: dimension mismatch");
    MeanConstrainedSolution out;
    out.x = Eigen::VectorXd::Zero(n);
    if (n == 0) return out;

    const double mass = m.sum();
    if (!(mass > 0.0)) throw InputError("solve_mean_constrained: constraint vector must have positive sum");

    // Summing the first block row against 1 (A 1 = 0) gives lambda * sum(m) = sum(b).
    out.compatibility_defect = b.sum();
    out.multiplier = out.compatibility_defect / mass;
    out.compatible = std::abs(out.compatibility_defect) <= 1e-6 * b.cwiseAbs().sum();
    const Eigen::VectorXd rhs = b - out.multiplier * m;

    // rhs is now compatible: any solution of the singular system differs from the
    // constrained one by a constant, so fix one dof and remove the m-weighted mean.
    std::vector<int> free(static_cast<std::size_t>(n - 1));
    for (Eigen::Index i = 1; i < n; ++i) free[i - 1] = static_cast<int>(i);
    const SparseMatrix reduced = principal_submatrix(A, free);
    const Factorization ldlt{Eigen::SparseMatrix<double>(reduced)};
    if (ldlt.info() != Eigen::Success) throw SolverError("solve_mean_constrained: factorization failed", 1.0);

    const double scale = b.norm() + std::abs(out.multiplier) * m.norm();
    auto full_residual = [&] {
        const double res = (A * out.x + out.multiplier * m - b).norm();
        return scale > 0.0 ? res / scale : res;
    };
    // Refinement on the full system: the pinned solve alone loses accuracy at large n.
    double rel = 0.0;
    for (int step = 0; step <= kRefinementSteps; ++step) {
        const Eigen::VectorXd r = rhs - A * out.x;
        double reduced_res = 0.0;
        const Eigen::VectorXd y = refined_solve(ldlt, reduced, r.tail(n - 1), reduced_res);
        out.x.tail(n - 1) += y;
        out.x.array() -= m.dot(out.x) / mass;
        rel = full_residual();
        if (rel <= kResidualTolerance) break;
    }
    if (!(rel <= kResidualTolerance)) throw SolverError("solve_mean_constrained: residual contract not met", rel);
    return out;
}

}  // namespace fembem
