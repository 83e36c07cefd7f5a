#pragma once

#include <array>
#include <complex>
#include <map>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "model.hpp"
#include "spectrum.hpp"

namespace rmc {

// Real coefficients of a field in the symmetric trigonometric patterns of H.
// For a half-lattice index (j,k,l) with f = j a1 x1 + k a2 x2:
//   u1 = c[0] sin f cos(l pi z), u2 = c[1] sin f cos(l pi z),
//   u3 = c[2] cos f sin(l pi z), theta = c[3] cos f sin(l pi z).
struct ModalField {
    std::map<ModeIndex, std::array<double, 4>> c;

    void add(const ModeIndex& idx, const std::array<double, 4>& v, double scale = 1.0);
    void add(const ModalField& other, double scale = 1.0);
    double max_abs() const;
};

struct Bounds3 {
    int jmax = 0;
    int kmax = 0;
    int lmax = 0;
};

// Real eigenbasis of one index: columns of V are Re/Im parts of eigenvectors,
// Lambda is the real block form of the linear operator on those columns and
// Proj maps pattern coefficients to basis coefficients (gradient parts drop out).
struct IndexBasis {
    ModeIndex idx;
    IndexClass cls = IndexClass::I1;
    int n = 0;
    Eigen::Matrix<double, 4, Eigen::Dynamic> V;
    Eigen::Matrix<double, 4, Eigen::Dynamic> Adj;
    Eigen::MatrixXd Lambda;
    Eigen::MatrixXd Proj;
    std::vector<cplx> beta;  // eigenvalue attached to each column (pairs repeat the upper one)
    std::vector<bool> pair_re;  // column holds the real part of a complex pair
    std::vector<bool> pair_im;  // column holds the imaginary part of a complex pair

    std::array<double, 4> column(int s) const { return {V(0, s), V(1, s), V(2, s), V(3, s)}; }
    Eigen::VectorXd project(const std::array<double, 4>& f) const;
};

// Builds the H-basis of one index at the Ra carried by p. I3 indices keep only the temperature mode.
// Throws Degenerate when two eigenvalues of the index are closer than defect_tol.
IndexBasis index_basis(const Params& p, const ModeIndex& idx, double defect_tol = 1e-6);

// Fields and gradients on a tensor grid, x3 at midpoints.
struct PhysField {
    std::vector<double> v[4];
    std::vector<double> g[4][3];
};

// Pseudo-spectral evaluator for the advection form G(A,B) = -((u_A . grad) u_B, (u_A . grad) theta_B).
// The grid is sized so that every product of two fields within `field` bounds, projected onto
// `out` bounds, is integrated exactly (no aliasing).
class SpectralGrid {
public:
    SpectralGrid(const Params& p, Bounds3 field_a, Bounds3 field_b, Bounds3 out);
    ~SpectralGrid();
    SpectralGrid(const SpectralGrid&) = delete;
    SpectralGrid& operator=(const SpectralGrid&) = delete;

    int n1() const { return n1_; }
    int n2() const { return n2_; }
    int n3() const { return n3_; }

    PhysField synth(const ModalField& f) const;
    // Pattern coefficients of G(A,B) for every index within output bounds.
    ModalField advect(const PhysField& a, const PhysField& b) const;
    ModalField bilinear(const ModalField& a, const ModalField& b) const { return advect(synth(a), synth(b)); }

private:
    struct Impl;
    Params p_;
    Bounds3 out_;
    int n1_ = 0, n2_ = 0, n3_ = 0;
    std::unique_ptr<Impl> impl_;
};

// FFT-friendly size strictly greater than `reach`.
int fft_size_above(int reach);

}  // namespace rmc
