#pragma once

#include <map>
#include <utility>
#include <vector>

#include "modal.hpp"

namespace rmc {

// One critical real coordinate: column `col` of the basis of `idx`.
struct CriticalCoord {
    ModeIndex idx;
    int col = 0;
};

// Exponent tuple of a monomial in the critical coordinates (length = dimension).
using Monomial = std::vector<int>;

struct SlavedAmplitude {
    ModeIndex idx;
    int col = 0;
    cplx beta;
    std::map<Monomial, double> coef;  // quadratic monomial -> amplitude of this slaved column
};

struct CenterManifoldResult {
    int dim = 0;
    Eigen::MatrixXd Lc;                             // linear part on the critical coordinates
    double quadratic_leak = 0.0;                    // largest quadratic projection onto critical columns
    std::vector<std::map<Monomial, double>> cubic;  // per equation: cubic monomial -> coefficient
    std::vector<SlavedAmplitude> slaved;
    // Projection of G(psi_a, psi_K) + G(psi_K, psi_a) onto each critical equation, per slaved column.
    std::map<std::pair<int, std::pair<ModeIndex, int>>, std::vector<double>> interaction;
    int grid_n1 = 0, grid_n2 = 0, grid_n3 = 0;

    double cubic_coef(int eq, const Monomial& m) const;
};

// Quadratic center-manifold reduction evaluated by exact trigonometric quadrature.
// With at_criticality the critical linear part is replaced by its neutral form
// (real eigenvalues set to 0, pair real parts set to 0).
CenterManifoldResult reduce_center_manifold(const Params& p, const std::vector<CriticalCoord>& crit,
                                            bool at_criticality = true, double resonance_tol = 1e-8);

}  // namespace rmc
