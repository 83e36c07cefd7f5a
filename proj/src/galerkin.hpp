#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "criticality.hpp"
#include "modal.hpp"

namespace rmc {

struct BasisMode {
    ModeIndex idx;
    int col = 0;
    IndexClass cls = IndexClass::I1;
    cplx beta;
    bool pair_re = false;
    bool pair_im = false;
    std::string id() const;  // "j,k,l#col"
};

// Truncated real eigenbasis: I1 (three columns per index), I2 (one), I3 (temperature mode only).
struct Basis {
    Params params;
    Bounds3 bounds;
    std::vector<IndexBasis> blocks;  // ordered by class, then index
    std::vector<int> offset;         // first state entry of each block
    std::vector<BasisMode> modes;    // one per state entry
    int size = 0;

    int find(const ModeIndex& idx, int col) const;  // -1 when absent
};

// Closed-form count of (index, column) pairs for the given bounds.
int basis_size_formula(const Bounds3& b);

// Refuses critical modes outside the bounds and near-defective indices.
Basis build_basis(const Params& p, const Bounds3& bounds, const std::vector<ModeIndex>& critical = {});

class GalerkinModel {
public:
    explicit GalerkinModel(const Basis& basis);
    ~GalerkinModel();

    const Basis& basis() const { return basis_; }
    // Projected quadratic term for a state vector.
    Eigen::VectorXd nonlinear(const Eigen::VectorXd& c) const;
    Eigen::VectorXd linear(const Eigen::VectorXd& c) const;
    ModalField field_of(const Eigen::VectorXd& c) const;

private:
    Basis basis_;
    std::unique_ptr<SpectralGrid> grid_;
};

struct GalerkinRun {
    std::vector<double> t;
    std::vector<std::vector<double>> samples;  // recorded state entries per sample
    std::vector<double> norm;
    std::vector<int> recorded;
    bool blow_up = false;
    double exit_time = 0.0;
    Eigen::VectorXd final_state;
};

struct EvolveOptions {
    double t_end = 1.0;
    double dt = 1e-2;
    int sample_every = 1;
    bool nonlinear = true;
    std::vector<int> record;  // state entries to sample; empty records nothing but the norm
};

// Exponential time differencing of second order: the linear part is integrated exactly per step.
GalerkinRun evolve(const GalerkinModel& model, const Eigen::VectorXd& c0, const EvolveOptions& opt);

// CSV "t,mode_id,re,im"; pair columns are emitted as one complex amplitude.
std::string run_csv(const GalerkinRun& run, const Basis& basis);

struct Measurement {
    double value = 0.0;
    double spread = 0.0;  // tail variation used as the confidence indicator
    bool inconclusive = false;
    std::string note;
};

Measurement measure_plateau(const std::vector<double>& t, const std::vector<double>& x, double rel_tol = 1e-2);
Measurement measure_period(const std::vector<double>& t, const std::vector<double>& x);
Measurement measure_decay(const std::vector<double>& t, const std::vector<double>& x);

struct OracleCheck {
    std::string name;
    double predicted = 0.0;
    double measured = 0.0;
    double relative_error = 0.0;
    double tolerance = 0.0;
    std::string verdict;  // pass, fail, inconclusive
    std::string detail;
};

struct OracleOptions {
    Bounds3 bounds{8, 8, 4};
    double ra_factor = 1.01;
    double dt = 0.0;      // 0 picks a per-check default
    double t_end = 0.0;   // 0 picks a per-check default
};

// Steady amplitude near a simple real onset against sqrt(beta / -delta).
OracleCheck oracle_plateau(const CriticalReport& rep, double delta, const OracleOptions& opt);
// Oscillation period near a Hopf onset against 2 pi / rho; also reports the oscillation radius.
OracleCheck oracle_period(const CriticalReport& rep, const OracleOptions& opt, double* radius_out = nullptr);
// Decay rate below onset against the leading eigenvalue.
OracleCheck oracle_decay(const CriticalReport& rep, const OracleOptions& opt);

}  // namespace rmc
