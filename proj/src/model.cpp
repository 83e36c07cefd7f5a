#include "model.hpp"

#include <sstream>

namespace rmc {

double Params::ra() const {
    if (!Ra) throw Error(ErrorCode::Validation, "Ra: required but absent");
    return *Ra;
}

void validate(const Params& p) {
    auto bad = [](const char* name, const char* rule) {
        throw Error(ErrorCode::Validation, std::string(name) + ": must be " + rule);
    };
    if (!(std::isfinite(p.Ta) && p.Ta >= 0.0)) bad("Ta", "finite and >= 0");
    if (!(std::isfinite(p.Q) && p.Q >= 0.0)) bad("Q", "finite and >= 0");
    if (!(std::isfinite(p.Pr) && p.Pr > 0.0)) bad("Pr", "finite and > 0");
    if (!(std::isfinite(p.L1) && p.L1 > 0.0)) bad("L1", "finite and > 0");
    if (!(std::isfinite(p.L2) && p.L2 > 0.0)) bad("L2", "finite and > 0");
    if (p.Ra && !std::isfinite(*p.Ra)) bad("Ra", "finite");
}

Params make_params(double Ta, double Q, double Pr, double L1, double L2, std::optional<double> Ra) {
    Params p{Ta, Q, Pr, L1, L2, Ra};
    validate(p);
    return p;
}

std::string ModeIndex::str() const {
    std::ostringstream os;
    os << '(' << j << ',' << k << ',' << l << ')';
    return os.str();
}

IndexClass index_class(const ModeIndex& idx) {
    if (idx.l < 0) throw Error(ErrorCode::InvalidIndex, "negative l in " + idx.str());
    if (idx.j < 0) throw Error(ErrorCode::InvalidIndex, "negative j in " + idx.str());
    if (idx.j == 0 && idx.k == 0) {
        if (idx.l == 0) throw Error(ErrorCode::InvalidIndex, "(0,0,0) is not a mode");
        return IndexClass::I3;
    }
    return idx.l == 0 ? IndexClass::I2 : IndexClass::I1;
}

const char* class_name(IndexClass c) {
    switch (c) {
        case IndexClass::I1: return "I1";
        case IndexClass::I2: return "I2";
        case IndexClass::I3: return "I3";
    }
    return "?";
}

ModeGeometry geometry(const Params& p, const ModeIndex& idx) {
    ModeGeometry g;
    g.alpha1 = 1.0 / p.L1;
    g.alpha2 = 1.0 / p.L2;
    g.kx = idx.j * g.alpha1;
    g.ky = idx.k * g.alpha2;
    g.kz = idx.l * kPi;
    g.alpha_jk_sq = g.kx * g.kx + g.ky * g.ky;
    g.r_sq = g.alpha_jk_sq + g.kz * g.kz;
    g.qk = p.Q * g.ky * g.ky;
    return g;
}

ModeIndex canonical(int j, int k, int l) {
    if (l < 0) l = -l;
    if (j < 0 || (j == 0 && k < 0)) {
        j = -j;
        k = -k;
    }
    return {j, k, l};
}

}  // namespace rmc
