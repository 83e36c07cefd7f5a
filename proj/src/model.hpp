#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

namespace rmc {

inline constexpr double kPi = std::numbers::pi;

enum class ErrorCode {
    Validation = 1,
    InvalidIndex,
    DegenerateCubic,
    SingularEigenvector,
    NoHopf,
    SearchFailure,
    Degenerate,
    ResonantSubMode,
    NonGeneric,
    NoSuchState,
    BoundaryAmbiguous,
    Io,
    BlowUp,
    Inconclusive,
    Internal
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

struct Params {
    double Ta = 0.0;
    double Q = 0.0;
    double Pr = 1.0;
    double L1 = 1.0;
    double L2 = 1.0;
    std::optional<double> Ra;

    Params with_ra(double ra) const {
        Params p = *this;
        p.Ra = ra;
        return p;
    }
    double ra() const;
};

// Throws Error(Validation) naming the offending field.
Params make_params(double Ta, double Q, double Pr, double L1, double L2,
                   std::optional<double> Ra = std::nullopt);
void validate(const Params& p);

struct ModeIndex {
    int j = 0;
    int k = 0;
    int l = 0;

    auto operator<=>(const ModeIndex&) const = default;
    ModeIndex reflected() const { return {j, -k, l}; }
    std::string str() const;
};

enum class IndexClass { I1, I2, I3 };

IndexClass index_class(const ModeIndex& idx);
const char* class_name(IndexClass c);

struct ModeGeometry {
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double alpha_jk_sq = 0.0;
    double r_sq = 0.0;

    // Convenience quantities shared by the formulas.
    double kx = 0.0;  // j alpha1
    double ky = 0.0;  // k alpha2
    double kz = 0.0;  // l pi
    double qk = 0.0;  // Q k^2 alpha2^2
};

ModeGeometry geometry(const Params& p, const ModeIndex& idx);

// Half-lattice canonical form: j >= 0, and k >= 0 when j == 0; l taken as |l|.
ModeIndex canonical(int j, int k, int l);

}  // namespace rmc
