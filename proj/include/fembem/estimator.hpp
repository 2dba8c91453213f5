#pragma once

#include "fembem/bem.hpp"
#include "fembem/fem.hpp"
#include "fembem/mesh.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace fembem {

/// Squared residual indicators per element.
struct IndicatorField {
    Eigen::VectorXd eta1_sq;
    Eigen::VectorXd eta2_sq;
    double eta1_total_sq = 0.0;
    double eta2_total_sq = 0.0;
    double total_sq = 0.0;

    /// eta(T)^2 = eta1(T)^2 + eta2(T)^2
    Eigen::VectorXd combined() const { return eta1_sq + eta2_sq; }
};

struct OscillationField {
    Eigen::VectorXd osc_rhs_sq;
    Eigen::VectorXd osc_neumann_sq;
    Eigen::VectorXd osc_dirichlet_sq;
    double rhs_total_sq = 0.0;
    double neumann_total_sq = 0.0;
    double dirichlet_total_sq = 0.0;
};

/// h_T^2 ||f||_T^2 + h_T ||[du/dn]||^2_{dT in Omega} + h_T ||phi - du/dn||^2_{dT on Gamma}.
Eigen::VectorXd compute_eta1(const Triangulation& mesh, const FeFunction& u1h, const ScalarField& f,
                             const BoundaryField& phi);

/// h_T ||(1 - Pi) d/ds (K - 1/2)(u1h - g)||^2 on each boundary edge, attributed to its element.
Eigen::VectorXd dirichlet_boundary_term(const Triangulation& mesh, const BoundaryMesh& boundary,
                                        const FeFunction& u1h, const DirichletData& g);

/// Normal-flux jumps of uh across interior edges, h_T |E| [du/dn]^2 summed into both neighbours.
Eigen::VectorXd jump_term(const Triangulation& mesh, const FeFunction& uh);

/// Jump term of u2h plus the Dirichlet boundary term (the volume term vanishes for P1).
Eigen::VectorXd compute_eta2(const Triangulation& mesh, const BoundaryMesh& boundary, const FeFunction& u1h,
                             const FeFunction& u2h, const DirichletData& g);

/// Assembles the indicator field from per-element parts.
IndicatorField make_indicator_field(Eigen::VectorXd eta1_sq, Eigen::VectorXd eta2_sq);

OscillationField compute_oscillations(const Triangulation& mesh, const BoundaryMesh& boundary, const FeFunction& u1h,
                                      const ScalarField& f, const BoundaryField& phi, const DirichletData& g);

/// Indicators and oscillations sharing one evaluation of the Dirichlet boundary term.
struct Estimate {
    IndicatorField indicators;
    OscillationField oscillations;
};

Estimate estimate(const Triangulation& mesh, const BoundaryMesh& boundary, const FeFunction& u1h,
                  const FeFunction& u2h, const ScalarField& f, const BoundaryField& phi, const DirichletData& g);

/**
 * Doerfler marking: the shortest prefix of the indicators sorted by decreasing
 * value (ties by increasing index) whose sum reaches theta times the total.
 * Returns element indices in ascending order.
 */
std::vector<int> dorfler_mark(std::span<const double> indicators_sq, double theta);

}  // namespace fembem
