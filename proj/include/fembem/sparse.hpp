#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <span>
#include <vector>

namespace fembem {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;
using Triplet = Eigen::Triplet<double, int>;

/// Compressed n x n matrix; duplicate triplets are summed, exact zeros dropped.
SparseMatrix from_triplets(int n, std::span<const Triplet> triplets);

/// Solves A x = b for symmetric positive definite A to relative residual 1e-10.
Eigen::VectorXd solve_spd(const SparseMatrix& A, const Eigen::VectorXd& b);

/// Rows/columns `keep` of A, renumbered consecutively.
SparseMatrix principal_submatrix(const SparseMatrix& A, std::span<const int> keep);

struct MeanConstrainedSolution {
    Eigen::VectorXd x;
    double multiplier = 0.0;          // lambda of [[A, m], [m^T, 0]] [x; lambda] = [b; 0]
    double compatibility_defect = 0.0; // sum_i b_i
    bool compatible = true;           // |sum b| <= 1e-6 sum |b|
};

/**
 * Solves the saddle system [[A, m], [m^T, 0]] [x; lambda] = [b; 0] for A symmetric
 * positive semidefinite with kernel span{1} and m the load vector of the constant 1.
 * An incompatible right-hand side is reported through `compatible` and the
 * multiplier; the projected system is solved regardless.
 */
MeanConstrainedSolution solve_mean_constrained(const SparseMatrix& A, const Eigen::VectorXd& b,
                                               const Eigen::VectorXd& m);

}  // namespace fembem
