#pragma once

#include <array>
#include <string>
#include <vector>

#include "criticality.hpp"
#include "modal.hpp"

namespace rmc {

struct GridSpec {
    int n1 = 64;
    int n2 = 64;
    int n3 = 33;
};

// Sampled fields. x1, x2 are periodic samples of [0, 2 pi L); x3 includes both walls.
// values[(i1 * n2 + i2) * n3 + i3] = (u1, u2, u3, theta, b1, b2, b3).
struct FieldGrid {
    std::vector<double> x1, x2, x3;
    std::vector<std::array<double, 7>> values;
    ModalField modal;  // source coefficients, empty after import
    std::string label;
    std::string warning;

    size_t at(size_t i1, size_t i2, size_t i3) const { return (i1 * x2.size() + i2) * x3.size() + i3; }
};

// Complex eigenfunction of branch `branch` of mode_spectrum(idx) at point x.
std::array<cplx, 4> eigenfield(const Params& p, const ModeIndex& idx, int branch, const std::array<double, 3>& x);

// Induced magnetic field of the same eigenfunction, solving Laplacian(b) = -d u / d x2 per mode.
std::array<cplx, 3> induced_b(const Params& p, const ModeIndex& idx, int branch, const std::array<double, 3>& x);

// Samples a real modal field (with its induced magnetic field) on a grid.
FieldGrid evaluate_grid(const Params& p, const ModalField& f, const GridSpec& g);

struct FieldNumbers {
    double delta = 0.0;
    double a = 0.0;
    std::array<double, 3> gamma{};
};

// Leading-order steady state `which` (1-based). SimpleReal: Psi_m = (-1)^m sqrt(beta/-delta) Psi.
// DoubleReal: Psi1..Psi8 built from gamma, xi, eta. Throws NoSuchState when the state does not exist.
FieldGrid bifurcated_steady(const Params& p, const CriticalReport& rep, const FieldNumbers& nums, int which,
                            const GridSpec& g = {});

// R sin(rho t) Psi^1 + R cos(rho t) Psi^2 with R = (4 sigma / (-pi a))^{1/2}.
FieldGrid periodic_snapshot(const Params& p, const CriticalReport& rep, const FieldNumbers& nums, double t,
                            const GridSpec& g = {});

// Largest |u3|, |theta|, |b3| on the walls.
double boundary_residual(const FieldGrid& grid);

// Largest pointwise divergence of u evaluated from the modal coefficients.
double spectral_divergence(const Params& p, const FieldGrid& grid);

std::string grid_csv(const FieldGrid& grid);
std::string grid_json(const FieldGrid& grid);
FieldGrid grid_from_json(const std::string& text);

// Writes csv or json; throws Io with the path on failure.
void export_grid(const FieldGrid& grid, const std::string& path, const std::string& format);

}  // namespace rmc
