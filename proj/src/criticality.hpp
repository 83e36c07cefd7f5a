#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "model.hpp"
#include "spectrum.hpp"

namespace rmc {

enum class TransitionKind { SimpleReal, ComplexPair, DoubleReal };
const char* kind_name(TransitionKind k);

struct SearchBounds {
    int jmax = 8;
    int kmax = 8;
    int lmax = 2;
};

struct CriticalReport {
    Params params;
    double ra_c1 = std::numeric_limits<double>::infinity();
    double ra_c2 = std::numeric_limits<double>::infinity();
    double ra_c = std::numeric_limits<double>::infinity();
    ModeIndex argmin_f;
    std::optional<ModeIndex> argmin_g;
    std::vector<ModeIndex> X;
    TransitionKind kind = TransitionKind::SimpleReal;
    int multiplicity = 1;
    std::optional<double> hopf_rho;
    bool non_generic = false;
    std::string non_generic_reason;
    bool pes_ok = false;
    SearchBounds search_bounds_used;
};

// Ra at which a0 vanishes for an I1 index.
double f_of(const Params& p, const ModeIndex& idx);

// Ra at which the cubic has a pure imaginary pair; empty unless a1 > 0 there.
std::optional<double> g_of(const Params& p, const ModeIndex& idx);

// rho = sqrt(a1/a3) at Ra = g(J); throws NoHopf when g is undefined.
double hopf_frequency(const Params& p, const ModeIndex& idx);

// Minimizes f and g over the half-lattice, growing the box until the boundary shell
// exceeds the incumbent by a factor of 1.5. Fills everything except pes_ok.
CriticalReport critical_search(const Params& p, SearchBounds initial = {});

struct PesResult {
    bool ok = false;
    double dRa_a0 = 0.0;                   // real kinds
    double max_other_real = -1e300;        // largest Re beta among non-critical branches
    std::optional<ModeIndex> worst_mode;
    std::optional<double> sigma_prime;     // complex kind, closed form
    std::optional<double> sigma_prime_fd;  // complex kind, centered difference
    std::string diagnostics;
};

PesResult pes_check(const CriticalReport& rep);

// Centered-difference and closed-form slope of the critical pair's real part.
double sigma_prime_closed(const Params& p, const ModeIndex& idx, double ra_c2);
double sigma_prime_fd(const Params& p, const ModeIndex& idx, double ra_c2, double rel_step = 1e-4);

enum class SweepPlane { TaPr, L1L2 };

struct SweepSpec {
    SweepPlane plane = SweepPlane::TaPr;
    std::vector<double> axis1;
    std::vector<double> axis2;
    Params fixed;
    SearchBounds bounds;
};

struct SweepRow {
    double axis1 = 0.0;
    double axis2 = 0.0;
    double ra_c1 = 0.0;
    double ra_c2 = 0.0;
    std::string relation;
    ModeIndex idx;
    int multiplicity = 0;
    std::string kind;  // kind name, "NonGeneric", or "error: <message>"
};

// Rows in row-major order (axis1 outer). Grid points are independent and may be run on
// several threads; ordering does not depend on the thread count.
std::vector<SweepRow> sweep(const SweepSpec& spec, int threads = 1);

std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace rmc
