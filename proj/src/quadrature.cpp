#include "fembem/quadrature.hpp"

#include "fembem/errors.hpp"

#include <Eigen/Eigenvalues>

#include <map>
#include <mutex>

namespace fembem {

namespace {

GaussRule golub_welsch(int n) {
    // Jacobi matrix of the Legendre recurrence on [-1, 1].
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double beta = k / std::sqrt(4.0 * k * k - 1.0);
        jacobi(k, k - 1) = beta;
        jacobi(k - 1, k) = beta;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);

    GaussRule rule;
    rule.nodes = (eig.eigenvalues().array() + 1.0) * 0.5;
    rule.weights = eig.eigenvectors().row(0).transpose().array().square();

    // Symmetrize so that mirrored nodes are bitwise mirrored.
    for (int i = 0; i < n / 2; ++i) {
        const int j = n - 1 - i;
        const double x = 0.5 * (rule.nodes(i) + (1.0 - rule.nodes(j)));
        const double w = 0.5 * (rule.weights(i) + rule.weights(j));
        rule.nodes(i) = x;
        rule.nodes(j) = 1.0 - x;
        rule.weights(i) = w;
        rule.weights(j) = w;
    }
    if (n % 2 == 1) rule.nodes(n / 2) = 0.5;
    rule.weights /= rule.weights.sum();
    return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
    if (n < 1 || n > 64) throw InputError("gauss_legendre: order must lie in [1, 64]");
    static std::mutex mutex;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, golub_welsch(n)).first;
    return it->second;
}

const TriangleRule& triangle_rule_degree4() {
    static const TriangleRule rule = [] {
        constexpr double a1 = 0.445948490915964886318329253883;
        constexpr double w1 = 0.223381589678011465944512923115;
        constexpr double a2 = 0.091576213509770743459571463402;
        constexpr double w2 = 0.109951743655321867388820410219;
        TriangleRule r;
        r.barycentric = {Eigen::Vector3d(a1, a1, 1.0 - 2.0 * a1), Eigen::Vector3d(a1, 1.0 - 2.0 * a1, a1),
                         Eigen::Vector3d(1.0 - 2.0 * a1, a1, a1), Eigen::Vector3d(a2, a2, 1.0 - 2.0 * a2),
                         Eigen::Vector3d(a2, 1.0 - 2.0 * a2, a2), Eigen::Vector3d(1.0 - 2.0 * a2, a2, a2)};
        r.weights = {w1, w1, w1, w2, w2, w2};
        return r;
    }();
    return rule;
}

}  // namespace fembem
