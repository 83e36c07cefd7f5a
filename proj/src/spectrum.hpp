#pragma once

#include <array>
#include <complex>
#include <vector>

#include "model.hpp"

namespace rmc {

using cplx = std::complex<double>;

struct CubicCoeffs {
    double a3 = 0.0;
    double a2 = 0.0;
    double a1 = 0.0;
    double a0 = 0.0;

    cplx eval(cplx b) const { return ((a3 * b + a2) * b + a1) * b + a0; }
    double max_abs() const;
};

CubicCoeffs char_coeffs(const Params& p, const ModeIndex& idx);

// Derivatives of the coefficients with respect to Ra (a3, a2 do not depend on Ra).
CubicCoeffs char_coeffs_dRa(const Params& p, const ModeIndex& idx);

// Real-root threshold shared by every module.
inline bool is_real_root(cplx b) { return std::abs(b.imag()) <= 1e-9 * (1.0 + std::abs(b.real())); }

// Closed-form roots with one Newton step each, sorted by descending real part then descending imaginary part.
std::array<cplx, 3> cubic_roots(const CubicCoeffs& c);

void sort_eigenvalues(std::vector<cplx>& v);

// Spatial pattern of a branch.
//   Standard: u1,u2 ~ sin f cos(l pi z); u3,theta ~ cos f sin(l pi z), f = j a1 x1 + k a2 x2.
//   Vertical: u1,u2 ~ cos(l pi z) with no horizontal dependence (I3 velocity modes).
enum class Pattern { Standard, Vertical };

struct EigvecCoeffs {
    cplx u1{0.0}, u2{0.0}, u3{1.0}, theta{0.0};
};

using AdjointCoeffs = EigvecCoeffs;

struct Branch {
    cplx beta;
    EigvecCoeffs vec;
    AdjointCoeffs adj;  // evaluated at conj(beta)
    cplx pairing;       // <Psi, Psi*> with the Hermitian L2 product
    Pattern pattern = Pattern::Standard;
    bool in_H = true;   // false for the I3 horizontal-velocity modes
};

struct ModeSpectrum {
    ModeIndex idx;
    IndexClass cls = IndexClass::I1;
    std::vector<Branch> branches;
};

EigvecCoeffs eigenvector(const Params& p, const ModeIndex& idx, cplx beta);
AdjointCoeffs adjoint_eigenvector(const Params& p, const ModeIndex& idx, cplx beta_star);

// Volume integral of the squared trigonometric pattern over one cell.
double pattern_norm(const Params& p, const ModeIndex& idx, Pattern pat = Pattern::Standard);

// pi^2/(a1 a2) (u1 conj(u1s) + u2 conj(u2s) + u3 conj(u3s) + theta conj(thetas)) for I1 patterns.
cplx self_pairing(const Params& p, const ModeIndex& idx, const EigvecCoeffs& vec, const AdjointCoeffs& adj);

ModeSpectrum mode_spectrum(const Params& p, const ModeIndex& idx);

// Max-norm residual of the vertical system (b and p eliminated) for an I1/I2/I3 candidate pair.
double linear_residual(const Params& p, const ModeIndex& idx, cplx beta, const EigvecCoeffs& vec);
double adjoint_residual(const Params& p, const ModeIndex& idx, cplx beta_star, const AdjointCoeffs& adj);

// Leading real part over all branches of a mode.
double leading_real(const Params& p, const ModeIndex& idx);

}  // namespace rmc
