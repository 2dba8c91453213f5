#include "fembem/errors.hpp"
#include "fembem/fem.hpp"
#include "fembem/sparse.hpp"

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <random>

using namespace fembem;

TEST(FromTriplets, SumsDuplicates) {
    const std::vector<Triplet> t = {{0, 0, 1.0}, {0, 0, 2.0}};
    const SparseMatrix A = from_triplets(2, t);
    EXPECT_EQ(A.nonZeros(), 1);
    EXPECT_DOUBLE_EQ(A.coeff(0, 0), 3.0);
}

TEST(FromTriplets, EmptyIsZero) {
    const SparseMatrix A = from_triplets(3, {});
    EXPECT_EQ(A.rows(), 3);
    EXPECT_EQ(A.nonZeros(), 0);
}

TEST(FromTriplets, DropsCancelledEntries) {
    const std::vector<Triplet> t = {{0, 1, 1.0}, {0, 1, -1.0}, {1, 1, 2.0}};
    const SparseMatrix A = from_triplets(2, t);
    EXPECT_EQ(A.nonZeros(), 1);
}

TEST(FromTriplets, RejectsOutOfRange) {
    const std::vector<Triplet> t = {{0, 2, 1.0}};
    EXPECT_THROW(from_triplets(2, t), InputError);
}

TEST(FromTriplets, TriangleStiffnessTwiceIsDoubled) {
    // hand P1 stiffness of the unit right triangle: 1/2 [[2,-1,-1],[-1,1,0],[-1,0,1]]
    const Eigen::Matrix3d K = 0.5 * (Eigen::Matrix3d() << 2, -1, -1, -1, 1, 0, -1, 0, 1).finished();
    std::vector<Triplet> t;
    for (int rep = 0; rep < 2; ++rep)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) t.emplace_back(i, j, K(i, j));
    const Eigen::MatrixXd A = Eigen::MatrixXd(from_triplets(3, t));
    EXPECT_LT((A - 2.0 * K).norm(), 1e-15);
}

TEST(SolveSpd, Identity) {
    std::vector<Triplet> t;
    for (int i = 0; i < 4; ++i) t.emplace_back(i, i, 1.0);
    const Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(4, 1.0, 4.0);
    EXPECT_LT((solve_spd(from_triplets(4, t), b) - b).norm(), 1e-15);
}

TEST(SolveSpd, Diagonal) {
    const std::vector<Triplet> t = {{0, 0, 1.0}, {1, 1, 2.0}, {2, 2, 4.0}};
    const Eigen::VectorXd x = solve_spd(from_triplets(3, t), Eigen::Vector3d(1, 2, 4));
    EXPECT_LT((x - Eigen::Vector3d::Ones()).norm(), 1e-15);
}

TEST(SolveSpd, TridiagonalAgainstDenseElimination) {
    const int n = 5;
    std::vector<Triplet> t;
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        t.emplace_back(i, i, 2.0);
        dense(i, i) = 2.0;
        if (i + 1 < n) {
            t.emplace_back(i, i + 1, -1.0);
            t.emplace_back(i + 1, i, -1.0);
            dense(i, i + 1) = dense(i + 1, i) = -1.0;
        }
    }
    const Eigen::VectorXd b = Eigen::VectorXd::Ones(n);
    const Eigen::VectorXd oracle = dense.partialPivLu().solve(b);
    EXPECT_LT((solve_spd(from_triplets(n, t), b) - oracle).norm(), 1e-13);
    // x_i = i (n + 1 - i) / 2 for 1-based i
    for (int i = 0; i < n; ++i) EXPECT_NEAR(oracle(i), (i + 1) * (n - i) / 2.0, 1e-13);
}

TEST(SolveSpd, RandomizedSpdContract) {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 30;
        Eigen::MatrixXd B(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) B(i, j) = (std::abs(i - j) < 3) ? u(rng) : 0.0;
        const Eigen::MatrixXd A = B.transpose() * B + Eigen::MatrixXd::Identity(n, n);
        std::vector<Triplet> t;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (A(i, j) != 0.0) t.emplace_back(i, j, A(i, j));
        Eigen::VectorXd b(n);
        for (int i = 0; i < n; ++i) b(i) = u(rng);
        const Eigen::VectorXd x = solve_spd(from_triplets(n, t), b);
        EXPECT_LE((A * x - b).norm() / b.norm(), 1e-10);
    }
}

TEST(SolveSpd, SingularMatrixFails) {
    const std::vector<Triplet> singular = {{0, 0, 1.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 1.0}};
    EXPECT_THROW(solve_spd(from_triplets(2, singular), Eigen::Vector2d(1, 0)), SolverError);
}

namespace {

Triangulation unit_triangle() {
    Coordinates c(3, 2);
    c << 0, 0, 1, 0, 0, 1;
    Elements e(1, 3);
    e << 0, 1, 2;
    return Triangulation(c, e);
}

}  // namespace

TEST(SolveMeanConstrained, ZeroRhs) {
    const Triangulation mesh = unit_triangle();
    const auto s = solve_mean_constrained(assemble_stiffness(mesh), Eigen::VectorXd::Zero(3),
                                          assemble_constant_load(mesh));
    EXPECT_EQ(s.x.norm(), 0.0);
    EXPECT_TRUE(s.compatible);
}

TEST(SolveMeanConstrained, RecoversMeanZeroVector) {
    Coordinates c(4, 2);
    c << 0, 0, 1, 0, 1, 1, 0, 1;
    Elements e(2, 3);
    e << 1, 3, 0, 3, 1, 2;
    const Triangulation mesh(c, e);
    const SparseMatrix A = assemble_stiffness(mesh);
    const Eigen::VectorXd m = assemble_constant_load(mesh);
    Eigen::VectorXd v(4);
    v << 1.0, -2.0, 0.5, 3.0;
    v.array() -= m.dot(v) / m.sum();
    const auto s = solve_mean_constrained(A, A * v, m);
    EXPECT_LT((s.x - v).norm(), 1e-12);
    EXPECT_NEAR(s.multiplier, 0.0, 1e-14);
}

TEST(SolveMeanConstrained, TriangleAgainstDenseSaddleSolve) {
    const Triangulation mesh = unit_triangle();
    const SparseMatrix A = assemble_stiffness(mesh);
    const Eigen::VectorXd m = assemble_constant_load(mesh);
    const Eigen::Vector3d b(0.3, -0.1, -0.2);  // sums to zero
    Eigen::Matrix4d saddle = Eigen::Matrix4d::Zero();
    saddle.topLeftCorner<3, 3>() = Eigen::MatrixXd(A);
    saddle.block<3, 1>(0, 3) = m;
    saddle.block<1, 3>(3, 0) = m.transpose();
    Eigen::Vector4d rhs;
    rhs << b, 0.0;
    const Eigen::Vector4d oracle = saddle.fullPivLu().solve(rhs);
    const auto s = solve_mean_constrained(A, b, m);
    EXPECT_LT((s.x - oracle.head<3>()).norm(), 1e-14);
    EXPECT_NEAR(s.multiplier, oracle(3), 1e-14);
    EXPECT_TRUE(s.compatible);
}

TEST(SolveMeanConstrained, IncompatibleRhsReportsMultiplier) {
    const Triangulation mesh = unit_triangle();
    const SparseMatrix A = assemble_stiffness(mesh);
    const Eigen::VectorXd m = assemble_constant_load(mesh);
    const Eigen::Vector3d b(1.0, 0.0, 0.0);
    Eigen::Matrix4d saddle = Eigen::Matrix4d::Zero();
    saddle.topLeftCorner<3, 3>() = Eigen::MatrixXd(A);
    saddle.block<3, 1>(0, 3) = m;
    saddle.block<1, 3>(3, 0) = m.transpose();
    Eigen::Vector4d rhs;
    rhs << b, 0.0;
    const Eigen::Vector4d oracle = saddle.fullPivLu().solve(rhs);
    const auto s = solve_mean_constrained(A, b, m);
    EXPECT_FALSE(s.compatible);
    EXPECT_NEAR(s.multiplier, oracle(3), 1e-14);
    EXPECT_LT((s.x - oracle.head<3>()).norm(), 1e-14);
    EXPECT_NEAR(m.dot(s.x), 0.0, 1e-15);
}

TEST(PrincipalSubmatrix, SelectsRowsAndColumns) {
    const std::vector<Triplet> t = {{0, 0, 1.0}, {1, 1, 2.0}, {2, 2, 3.0}, {0, 2, 4.0}, {2, 0, 4.0}};
    const SparseMatrix A = from_triplets(3, t);
    const std::vector<int> keep = {0, 2};
    const Eigen::MatrixXd S = Eigen::MatrixXd(principal_submatrix(A, keep));
    EXPECT_EQ(S, (Eigen::Matrix2d() << 1, 4, 4, 3).finished());
}
