#include "fields.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "format.hpp"

namespace rmc {

namespace {

const char* kNames[7] = {"u1", "u2", "u3", "theta", "b1", "b2", "b3"};

const Branch& branch_of(const ModeSpectrum& ms, int branch) {
    if (branch < 0 || branch >= static_cast<int>(ms.branches.size()))
        throw Error(ErrorCode::Validation, "branch out of range for " + ms.idx.str());
    return ms.branches[branch];
}

double phase(const ModeGeometry& g, const std::array<double, 3>& x) { return g.kx * x[0] + g.ky * x[1]; }

}  // namespace

std::array<cplx, 4> eigenfield(const Params& p, const ModeIndex& idx, int branch, const std::array<double, 3>& x) {
    const auto ms = mode_spectrum(p, idx);
    const Branch& b = branch_of(ms, branch);
    const auto g = geometry(p, idx);
    const double cz = std::cos(g.kz * x[2]), sz = std::sin(g.kz * x[2]);
    if (b.pattern == Pattern::Vertical) return {b.vec.u1 * cz, b.vec.u2 * cz, 0.0, 0.0};
    const double f = phase(g, x), sf = std::sin(f), cf = std::cos(f);
    return {b.vec.u1 * sf * cz, b.vec.u2 * sf * cz, b.vec.u3 * cf * sz, b.vec.theta * cf * sz};
}

std::array<cplx, 3> induced_b(const Params& p, const ModeIndex& idx, int branch, const std::array<double, 3>& x) {
    const auto ms = mode_spectrum(p, idx);
    const Branch& b = branch_of(ms, branch);
    const auto g = geometry(p, idx);
    if (b.pattern == Pattern::Vertical || g.ky == 0.0) return {0.0, 0.0, 0.0};
    const double cz = std::cos(g.kz * x[2]), sz = std::sin(g.kz * x[2]);
    const double f = phase(g, x), sf = std::sin(f), cf = std::cos(f);
    const double s = g.ky / g.r_sq;
    return {s * b.vec.u1 * cf * cz, s * b.vec.u2 * cf * cz, -s * b.vec.u3 * sf * sz};
}

FieldGrid evaluate_grid(const Params& p, const ModalField& f, const GridSpec& gs) {
    if (gs.n1 < 1 || gs.n2 < 1 || gs.n3 < 2) throw Error(ErrorCode::Validation, "grid needs n1, n2 >= 1 and n3 >= 2");
    FieldGrid grid;
    grid.modal = f;
    for (int i = 0; i < gs.n1; ++i) grid.x1.push_back(2.0 * kPi * p.L1 * i / gs.n1);
    for (int i = 0; i < gs.n2; ++i) grid.x2.push_back(2.0 * kPi * p.L2 * i / gs.n2);
    for (int i = 0; i < gs.n3; ++i) grid.x3.push_back(static_cast<double>(i) / (gs.n3 - 1));
    grid.x3.back() = 1.0;
    grid.values.assign(static_cast<size_t>(gs.n1) * gs.n2 * gs.n3, {});
    std::vector<double> cz(gs.n3), sz(gs.n3);
    for (const auto& [idx, c] : f.c) {
        const auto g = geometry(p, idx);
        const double s = g.ky / g.r_sq;
        for (int k = 0; k < gs.n3; ++k) {
            cz[k] = std::cos(g.kz * grid.x3[k]);
            sz[k] = idx.l == 0 ? 0.0 : std::sin(g.kz * grid.x3[k]);
        }
        // Exact zeros on the walls for the sine factors.
        sz.front() = 0.0;
        sz.back() = 0.0;
        for (int i = 0; i < gs.n1; ++i)
            for (int j = 0; j < gs.n2; ++j) {
                const double ph = g.kx * grid.x1[i] + g.ky * grid.x2[j];
                const double sf = std::sin(ph), cf = std::cos(ph);
                auto* v = &grid.values[grid.at(i, j, 0)];
                for (int k = 0; k < gs.n3; ++k) {
                    auto& w = v[k];
                    w[0] += c[0] * sf * cz[k];
                    w[1] += c[1] * sf * cz[k];
                    w[2] += c[2] * cf * sz[k];
                    w[3] += c[3] * cf * sz[k];
                    w[4] += s * c[0] * cf * cz[k];
                    w[5] += s * c[1] * cf * cz[k];
                    w[6] -= s * c[2] * sf * sz[k];
                }
            }
    }
    return grid;
}

namespace {

double critical_real_beta(const Params& p, const ModeIndex& J) {
    const auto r = cubic_roots(char_coeffs(p, J));
    if (!is_real_root(r[0])) throw Error(ErrorCode::NoSuchState, "critical eigenvalue of " + J.str() + " is not real");
    double b = r[0].real();
    const double scale = std::abs(char_coeffs(p, J).a2) / std::max(std::abs(char_coeffs(p, J).a3), 1e-300);
    if (std::abs(b) <= 1e-12 * scale) b = 0.0;
    return b;
}

double checked_sqrt(double v, const std::string& what) {
    if (v < 0) throw Error(ErrorCode::NoSuchState, what + " has a negative radicand in this scenario");
    return std::sqrt(v);
}

}  // namespace

FieldGrid bifurcated_steady(const Params& p, const CriticalReport& rep, const FieldNumbers& nums, int which,
                            const GridSpec& g) {
    if (rep.X.empty()) throw Error(ErrorCode::Validation, "empty critical set");
    ModalField f;
    const std::string name = "Psi" + std::to_string(which);
    if (rep.kind == TransitionKind::SimpleReal) {
        if (which < 1 || which > 2) throw Error(ErrorCode::NoSuchState, name + " does not exist for a simple real transition");
        if (nums.delta == 0.0) throw Error(ErrorCode::Degenerate, "delta = 0");
        const ModeIndex J = rep.X[0];
        const double beta = critical_real_beta(p, J);
        const double amp = (which == 1 ? -1.0 : 1.0) * checked_sqrt(beta / -nums.delta, name);
        const IndexBasis B = index_basis(p, J);
        f.add(J, B.column(0), amp);
    } else if (rep.kind == TransitionKind::DoubleReal) {
        if (which < 1 || which > 8) throw Error(ErrorCode::NoSuchState, name + " does not exist for a double real transition");
        if (rep.X.size() != 2) throw Error(ErrorCode::Validation, "double real transition needs two critical modes");
        const ModeIndex J2 = rep.X[0], J3 = rep.X[1];
        const double beta = critical_real_beta(p, J2);
        const double G1 = nums.gamma[0], G2 = nums.gamma[1], G3 = nums.gamma[2];
        const double det = G1 * G1 - G2 * G3;
        if (G1 == 0.0 || det == 0.0) throw Error(ErrorCode::Degenerate, "degenerate Gamma triple");
        double y = 0.0, z = 0.0;
        if (which <= 4) {
            const double s = checked_sqrt(-beta / G1, name);
            if (which <= 2) z = which == 1 ? s : -s;
            else y = which == 3 ? s : -s;
        } else {
            const double sx = checked_sqrt((G2 * beta - G1 * beta) / det, name);
            const double se = checked_sqrt((G3 * beta - G1 * beta) / det, name);
            // Psi5 = -Psi8 = (xi, eta), Psi6 = -Psi7 = (xi, -eta).
            const int sy[4] = {1, 1, -1, -1}, szs[4] = {1, -1, 1, -1};
            y = sy[which - 5] * sx;
            z = szs[which - 5] * se;
        }
        const IndexBasis B2 = index_basis(p, J2), B3 = index_basis(p, J3);
        f.add(J2, B2.column(0), y);
        f.add(J3, B3.column(0), z);
    } else {
        throw Error(ErrorCode::NoSuchState, "no steady bifurcated state for a complex pair transition");
    }
    FieldGrid grid = evaluate_grid(p, f, g);
    grid.label = name;
    return grid;
}

FieldGrid periodic_snapshot(const Params& p, const CriticalReport& rep, const FieldNumbers& nums, double t,
                            const GridSpec& g) {
    if (rep.kind != TransitionKind::ComplexPair || rep.X.empty())
        throw Error(ErrorCode::NoSuchState, "periodic orbit requires a complex pair transition");
    const ModeIndex J = rep.X[0];
    const IndexBasis B = index_basis(p, J);
    if (!B.pair_re[0]) throw Error(ErrorCode::NoSuchState, "critical eigenvalue of " + J.str() + " is real at this Ra");
    const double sigma = B.beta[0].real(), rho = B.beta[0].imag();
    if (nums.a == 0.0) throw Error(ErrorCode::Degenerate, "a = 0");
    const double ratio = 4.0 * sigma / (-kPi * nums.a);
    std::string warning;
    if (nums.a >= 0 && sigma > 0) warning = "a >= 0 above Ra_c2: the orbit is unstable";
    const double R = std::sqrt(std::abs(ratio));
    ModalField f;
    f.add(J, B.column(0), R * std::sin(rho * t));
    f.add(J, B.column(1), R * std::cos(rho * t));
    FieldGrid grid = evaluate_grid(p, f, g);
    grid.label = "periodic t=" + fmt9(t);
    grid.warning = warning;
    return grid;
}

double boundary_residual(const FieldGrid& grid) {
    double m = 0.0;
    const size_t n3 = grid.x3.size();
    for (size_t i = 0; i < grid.x1.size(); ++i)
        for (size_t j = 0; j < grid.x2.size(); ++j)
            for (size_t k : {size_t{0}, n3 - 1}) {
                const auto& v = grid.values[grid.at(i, j, k)];
                m = std::max({m, std::abs(v[2]), std::abs(v[3]), std::abs(v[6])});
            }
    return m;
}

double spectral_divergence(const Params& p, const FieldGrid& grid) {
    double m = 0.0;
    for (size_t i = 0; i < grid.x1.size(); ++i)
        for (size_t j = 0; j < grid.x2.size(); ++j)
            for (size_t k = 0; k < grid.x3.size(); ++k) {
                double div = 0.0;
                for (const auto& [idx, c] : grid.modal.c) {
                    const auto g = geometry(p, idx);
                    const double d = g.kx * c[0] + g.ky * c[1] + g.kz * c[2];
                    div += d * std::cos(g.kx * grid.x1[i] + g.ky * grid.x2[j]) * std::cos(g.kz * grid.x3[k]);
                }
                m = std::max(m, std::abs(div));
            }
    return m;
}

std::string grid_csv(const FieldGrid& grid) {
    std::string out = "x1,x2,x3,u1,u2,u3,theta,b1,b2,b3\n";
    out.reserve(grid.values.size() * 120);
    for (size_t i = 0; i < grid.x1.size(); ++i)
        for (size_t j = 0; j < grid.x2.size(); ++j)
            for (size_t k = 0; k < grid.x3.size(); ++k) {
                out += fmt9(grid.x1[i]);
                out += ',';
                out += fmt9(grid.x2[j]);
                out += ',';
                out += fmt9(grid.x3[k]);
                for (double v : grid.values[grid.at(i, j, k)]) {
                    out += ',';
                    out += fmt9(v);
                }
                out += '\n';
            }
    return out;
}

std::string grid_json(const FieldGrid& grid) {
    nlohmann::ordered_json j;
    auto axis = [](const std::vector<double>& a) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (double v : a) arr.push_back(round9(v));
        return arr;
    };
    j["axes"]["x1"] = axis(grid.x1);
    j["axes"]["x2"] = axis(grid.x2);
    j["axes"]["x3"] = axis(grid.x3);
    for (int c = 0; c < 7; ++c) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& v : grid.values) arr.push_back(round9(v[c]));
        j["values"][kNames[c]] = std::move(arr);
    }
    return j.dump() + "\n";
}

FieldGrid grid_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw Error(ErrorCode::Io, std::string("grid json parse error: ") + e.what());
    }
    FieldGrid g;
    try {
        g.x1 = j.at("axes").at("x1").get<std::vector<double>>();
        g.x2 = j.at("axes").at("x2").get<std::vector<double>>();
        g.x3 = j.at("axes").at("x3").get<std::vector<double>>();
        const size_t n = g.x1.size() * g.x2.size() * g.x3.size();
        g.values.assign(n, {});
        for (int c = 0; c < 7; ++c) {
            const auto col = j.at("values").at(kNames[c]).get<std::vector<double>>();
            if (col.size() != n) throw Error(ErrorCode::Io, std::string("grid json column size mismatch: ") + kNames[c]);
            for (size_t i = 0; i < n; ++i) g.values[i][c] = col[i];
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Io, std::string("grid json schema error: ") + e.what());
    }
    return g;
}

void export_grid(const FieldGrid& grid, const std::string& path, const std::string& format) {
    std::string body;
    if (format == "csv") body = grid_csv(grid);
    else if (format == "json") body = grid_json(grid);
    else throw Error(ErrorCode::Validation, "unknown grid format: " + format);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(ErrorCode::Io, "cannot open " + path + " for writing");
    os << body;
    if (!os) throw Error(ErrorCode::Io, "write failed for " + path);
}

}  // namespace rmc
