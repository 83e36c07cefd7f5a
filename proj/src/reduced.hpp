#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "criticality.hpp"
#include "transition.hpp"

namespace rmc {

// Cubic truncations of the center-manifold equations.
//   SimpleReal:  x' = beta x + delta x^3
//   ComplexPair: x' = sigma x + rho y + a111 x^3 + a112 x^2 y + a122 x y^2
//                y' = -rho x + sigma y + b111 x^3 + b112 x^2 y + b122 x y^2
//   DoubleReal:  y' = beta y + y (G1 y^2 + G2 z^2),  z' = beta z + z (G3 y^2 + G1 z^2)
struct ReducedSystem {
    TransitionKind kind = TransitionKind::SimpleReal;
    int dim = 1;
    double beta = 0.0;
    double sigma = 0.0;
    double rho = 0.0;
    double delta = 0.0;
    HopfCoeffs hopf{};
    std::array<double, 3> gamma{};

    std::vector<double> rhs(const std::vector<double>& x) const;
    Eigen::MatrixXd jacobian(const std::vector<double>& x) const;
};

ReducedSystem build_simple(double beta, double delta);
ReducedSystem build_hopf(double sigma, double rho, const HopfCoeffs& c);
ReducedSystem build_double(double beta, const std::array<double, 3>& gamma);

struct Equilibrium {
    std::string name;
    std::vector<double> x;
    std::vector<cplx> eigenvalues;
    std::string stability;  // stable, unstable, saddle, or degenerate
};

struct EquilibriumSet {
    std::vector<Equilibrium> points;
    double gamma = 0.0, xi = 0.0, eta = 0.0;  // double-real radicands
};

// Throws Degenerate for delta = 0, Gamma1 = 0 or Gamma1^2 = Gamma2 Gamma3.
EquilibriumSet equilibria(const ReducedSystem& sys);

struct Trajectory {
    std::vector<double> t;
    std::vector<std::vector<double>> x;
    bool blow_up = false;
    double exit_time = 0.0;
};

double default_dt(const ReducedSystem& sys);

// Fixed-step RK4; dt <= 0 selects default_dt. Samples every `stride` steps (and the final state).
Trajectory integrate(const ReducedSystem& sys, const std::vector<double>& x0, double t_end, double dt = 0.0,
                     int stride = 1);

std::string trajectory_csv(const Trajectory& tr);

struct ProbeResult {
    int n_rays = 0;
    std::vector<std::string> ray_limit;   // equilibrium name per ray, empty when unresolved
    std::vector<std::string> limits;      // sorted union of reached equilibria
    std::vector<std::string> predicted;   // stable set predicted for the scenario
    std::string scenario;
    bool matches = false;
    bool inconclusive = false;
};

// Rays start on a circle of radius 1e-3 times the nearest equilibrium scale; t_end <= 0 picks 150/|beta|.
ProbeResult attractor_probe(const ReducedSystem& sys, int n_rays = 64, double t_end = 0.0, double dt = 0.0);

// Periodic-orbit radius laws for the planar Hopf system.
double hopf_radius_printed(double sigma, double a);   // (4 sigma / (-pi a))^{1/2}
double hopf_radius_averaged(double sigma, double a);  // first-order averaging, (-8 sigma / a)^{1/2}

// Mean radius over the last orbit after integrating from a small initial state.
double hopf_radius_measured(const ReducedSystem& sys, double t_end = 0.0);

}  // namespace rmc
