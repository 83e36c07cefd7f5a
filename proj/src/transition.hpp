#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "centermanifold.hpp"
#include "criticality.hpp"
#include "model.hpp"
#include "spectrum.hpp"

namespace rmc {

// Simple real transition number and its intermediate scalars.
struct DeltaWorksheet {
    ModeIndex J0;
    double ra = 0.0;
    double beta = 0.0;  // critical eigenvalue at ra
    EigvecCoeffs vec;
    AdjointCoeffs adj;
    double phi1 = 0.0;
    double phi2 = 0.0;
    double denom = 0.0;
    double delta = 0.0;
    // Independent value from the quadrature center-manifold reduction.
    std::optional<double> delta_quadrature;
};

DeltaWorksheet delta_number(const Params& p, const ModeIndex& J0, bool with_quadrature = true);

// Six coefficients a111, a112, a122, b111, b112, b122 of the planar Hopf system.
using HopfCoeffs = std::array<double, 6>;

inline double hopf_a_number(const HopfCoeffs& c) { return 3.0 * c[0] + c[2] + c[4]; }

struct HopfRoute {
    std::string name;
    HopfCoeffs coeffs{};
    double a_number = 0.0;
};

struct HopfWorksheet {
    ModeIndex J1;
    double ra = 0.0;
    double sigma = 0.0;
    double rho = 0.0;
    EigvecCoeffs vec;
    AdjointCoeffs adj;  // at conj(beta)
    double alpha_mix = 0.0;
    // Projection scalars A11, A12, A21, A22.
    std::array<double, 4> A_printed{};    // pairing factor pi^2 (a1 a2)^-2
    std::array<double, 4> A_corrected{};  // pairing factor pi^2 / (a1 a2)
    std::array<double, 4> A_quadrature{};
    // C1..C6: x^2, xy, y^2 amplitudes of the (2j,2k,0) mode (odd) and the (0,0,2l) mode (even).
    std::array<double, 6> C_printed{};
    std::array<double, 6> C_displays{};        // recomputed from the Phi/M displays as printed
    std::array<double, 6> C_displays_fixed{};  // with the M1/M2 argument fix
    std::array<double, 6> C_exact{};           // slaved amplitudes of the quadrature reduction
    std::vector<HopfRoute> routes;
    std::string adopted_route;
    HopfCoeffs coeffs{};  // adopted
    double a_number = 0.0;
    double y3_x = 0.0, y3_y = 0.0;  // y^3 coefficients of the exact reduction (absent from the printed form)
    std::vector<std::string> notes;
};

HopfWorksheet hopf_number(const Params& p, const ModeIndex& J1);

// Data of one sub-mode branch used by the double-real formulas.
struct SubModeBranch {
    cplx beta;
    EigvecCoeffs vec;
    AdjointCoeffs adj;  // at the same beta, paired without conjugation
};

struct GammaWorksheet {
    ModeIndex J2, J3;
    double ra = 0.0;
    std::array<ModeIndex, 7> K{};
    double P1 = 0.0, P2 = 0.0, P1t = 0.0, P2t = 0.0;
    double q = 0.0;
    double GK1 = 0.0, GK2 = 0.0, GK3 = 0.0, GK4 = 0.0, GK5 = 0.0;
    std::array<cplx, 3> GK6{}, GK7{};
    std::array<SubModeBranch, 3> K6_branches{}, K7_branches{};
    bool complex_sub_mode = false;  // a conjugate pair among the K6/K7 eigenvalues
    std::string selected_case;      // "i" or "ii"
    // Case-i formulas evaluated with the (possibly complex) sub-mode data.
    std::array<double, 3> gammas_case_i{};
    double case_i_imag = 0.0;
    // Case-ii alternates: literal substitution, and with sign/constant bookkeeping made consistent.
    std::optional<std::array<double, 3>> gammas_case_ii_literal;
    std::optional<std::array<double, 3>> gammas_case_ii_consistent;
    std::optional<std::array<double, 3>> gammas_quadrature;
    std::array<double, 3> gammas{};  // adopted
    std::string adopted_route;
};

GammaWorksheet gamma_numbers(const Params& p, const ModeIndex& J2, bool with_quadrature = true);

struct Scenario {
    std::string label;
    std::string summary;
    int equilibrium_count = 0;  // nonzero bifurcated equilibria (a periodic orbit counts as 0)
};

Scenario classify_simple(double delta, double tol = 1e-10);
Scenario classify_hopf(double a, double tol = 1e-10);
Scenario classify_double(const std::array<double, 3>& g, double tol = 1e-10);

}  // namespace rmc
