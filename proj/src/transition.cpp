#include "transition.hpp"

#include <algorithm>
#include <cmath>

#include "modal.hpp"

namespace rmc {

namespace {

constexpr double kPi2 = kPi * kPi;

void require_i1(const ModeIndex& J, const char* what) {
    if (index_class(J) != IndexClass::I1) throw Error(ErrorCode::InvalidIndex, std::string(what) + " must lie in I1");
}

void require_nonzero(double v, double scale, const char* what) {
    if (!(std::abs(v) > 1e-14 * std::max(scale, 1e-300)))
        throw Error(ErrorCode::Degenerate, std::string("vanishing denominator: ") + what);
}

void require_nonzero(cplx v, double scale, const char* what) { require_nonzero(std::abs(v), scale, what); }

// Column of the basis of J that carries the leading real eigenvalue.
int leading_real_column(const IndexBasis& B) {
    if (B.pair_re[0] || B.pair_im[0]) throw Error(ErrorCode::Validation, "leading eigenvalue of " + B.idx.str() + " is not real");
    return 0;
}

}  // namespace

// ---------------------------------------------------------------- delta

DeltaWorksheet delta_number(const Params& p, const ModeIndex& J0, bool with_quadrature) {
    require_i1(J0, "J0");
    DeltaWorksheet w;
    w.J0 = J0;
    w.ra = p.ra();
    const auto roots = cubic_roots(char_coeffs(p, J0));
    if (!is_real_root(roots[0])) throw Error(ErrorCode::Validation, "critical eigenvalue of " + J0.str() + " is not real");
    w.beta = roots[0].real();
    w.vec = eigenvector(p, J0, w.beta);
    w.adj = adjoint_eigenvector(p, J0, w.beta);
    const auto g = geometry(p, J0);
    const double u1 = w.vec.u1.real(), u2 = w.vec.u2.real(), th = w.vec.theta.real();
    const double u1s = w.adj.u1.real(), u2s = w.adj.u2.real(), ths = w.adj.theta.real();
    const double a4 = g.alpha_jk_sq * g.alpha_jk_sq;
    const double d2 = 4.0 * g.qk + 16.0 * a4;
    require_nonzero(d2, a4, "4 Q k^2 a2^2 + 16 alpha^4");
    w.phi1 = -p.Pr * th / (8.0 * kPi);
    w.phi2 = -kPi * (g.kx * u2 - g.ky * u1) / d2;
    w.denom = u1 * u1s + u2 * u2s + 1.0 + th * ths;
    require_nonzero(w.denom, 1.0 + std::abs(th * ths), "delta pairing");
    w.delta = kPi * (2.0 * g.kx * w.phi2 * u2s + w.phi1 * ths - 2.0 * g.ky * w.phi2 * u1s) / w.denom;
    if (with_quadrature) {
        const IndexBasis B = index_basis(p, J0);
        const auto cm = reduce_center_manifold(p, {{J0, leading_real_column(B)}});
        w.delta_quadrature = cm.cubic_coef(0, {3});
    }
    return w;
}

// ---------------------------------------------------------------- Hopf

namespace {

struct HopfData {
    double sigma, rho;
    double kx, ky, kz, a1, a2, A, qk, Pr, l;
    double uR1, uI1, uR2, uI2, tR, tI;
    double sR1, sI1, sR2, sI2, tsR, tsI;
    double alpha;
};

std::array<double, 4> hopf_A(const HopfData& d, double fac) {
    const double R1 = d.uR1 * d.sR1 + d.uR2 * d.sR2 + 1.0 + d.tR * d.tsR;
    const double Rx = d.uR1 * d.sI1 + d.uR2 * d.sI2 + d.tR * d.tsI;
    const double ip1 = fac * R1 + fac * d.alpha * Rx;
    const double ip2 = fac * (d.uI1 * d.sI1 + d.uI2 * d.sI2 + d.tI * d.tsI) -
                       fac * d.alpha * (d.uI1 * d.sR1 + d.uI2 * d.sR2 + d.tI * d.tsR);
    require_nonzero(ip1, fac, "Hopf pairing ip1");
    require_nonzero(ip2, fac * 1e-6, "Hopf pairing ip2");
    const double pre = d.l * kPi * kPi2 / (d.a1 * d.a2);
    std::array<double, 4> A{};
    A[0] = 2.0 * pre / ip1 * (d.kx * d.sR2 + d.kx * d.alpha * d.sI2 - d.ky * d.sR1 - d.ky * d.alpha * d.sI1);
    A[1] = pre / ip1 * (d.tsR + d.alpha * d.tsI);
    A[2] = 2.0 * pre / ip2 * (d.kx * d.sI2 - d.kx * d.alpha * d.sR2 - d.ky * d.sI1 + d.ky * d.alpha * d.sR1);
    A[3] = pre / ip2 * (d.tsI - d.alpha * d.tsR);
    return A;
}

std::array<double, 6> hopf_C_printed(const HopfData& d) {
    const double l = d.l, Pr = d.Pr, rho = d.rho, A = d.A;
    const double D = d.qk + 4.0 * A * A;
    const double E = D * D + 4.0 * A * rho * rho;
    const double D5 = (d.qk + 4.0 * A) * (d.qk + 4.0 * A) + 4.0 * A * A * rho * rho;
    const double l2p2 = l * l * kPi2, l4p4 = l2p2 * l2p2;
    const double kx = d.kx, ky = d.ky;
    std::array<double, 6> C{};
    C[0] = l * kPi * (ky * d.uR1 - kx * d.uR2) / (4.0 * D) +
           (l * kPi * rho * rho * (kx * d.uR2 - ky * d.uR1) * A / (2.0 * D)) / E +
           l * kPi * rho * (ky * d.uI1 - kx * d.uI2) * A / (4.0 * E);
    C[1] = -Pr * d.tR / (8.0 * l * kPi) + Pr * Pr * Pr * rho * rho * d.tR / (4.0 * l * kPi * (16.0 * l4p4 + 4.0 * Pr * Pr * rho * rho)) -
           l * kPi * rho * Pr * Pr * d.tI / (32.0 * l2p2 + 8.0 * Pr * Pr * rho * rho);
    C[2] = l * kPi * (ky * d.uI1 - kx * d.uI2) / (4.0 * D) +
           (l * kPi * rho * rho * (kx * d.uI2 - ky * d.uI1) / D) / E +
           l * kPi * rho * (ky * d.uR1 - kx * d.uR2) / (2.0 * E);
    C[3] = -Pr * d.tI / (8.0 * l * kPi) + Pr * Pr * Pr * rho * rho * d.tI / (2.0 * l * kPi * (16.0 * l4p4 + 4.0 * Pr * Pr * rho * rho)) +
           l * kPi * rho * Pr * Pr * d.tR / (16.0 * l2p2 + 4.0 * Pr * Pr * rho * rho);
    C[4] = (l * kPi * rho * rho * (ky * d.uR1 - kx * d.uR2) / (2.0 * D)) / D5 +
           l * kPi * rho * (kx * d.uI2 - ky * d.uI1) / (4.0 * D5);
    C[5] = -Pr * Pr * Pr * rho * rho * d.tR / (4.0 * l * kPi * (16.0 * l4p4 + 4.0 * Pr * Pr * rho * rho)) +
           l * kPi * Pr * Pr * rho * d.tI / (32.0 * l2p2 + 8.0 * Pr * Pr * rho * rho);
    return C;
}

// Phi/M displays evaluated at (x, y): sums of the (2j,2k,0) parts and of the temperature parts.
std::array<double, 2> hopf_phi_displays(const HopfData& d, double x, double y, bool fixM) {
    const double l = d.l, Pr = d.Pr, rho = d.rho, A = d.A, kx = d.kx, ky = d.ky;
    const double D = d.qk + 4.0 * A * A;
    const double E = D * D + 4.0 * A * rho * rho;
    double M1, M2;
    if (fixM) {
        M1 = l * kPi * x / 2.0 * (x * d.uR1 + y * d.uI1);
        M2 = l * kPi * x / 2.0 * (x * d.uR2 + y * d.uI2);
    } else {
        M1 = l * kPi * x / 2.0 * (y * d.uR1 + y * d.uI1);
        M2 = l * kPi * x / 2.0 * (y * d.uR2 + y * d.uI2);
    }
    const double M3 = l * kPi * x / 2.0 * (x * d.tR + y * d.tI);
    const double M4 = l * kPi * rho * rho * ((x * x - y * y) * d.uR1 + 2.0 * x * y * d.uI1);
    const double M5 = l * kPi * rho * rho * ((x * x - y * y) * d.uR2 + 2.0 * x * y * d.uI2);
    const double M6 = l * kPi * rho * rho * ((x * x - y * y) * d.tR + 2.0 * x * y * d.tI);
    const double M7 = l * kPi * rho * ((x * x - y * y) * d.uI1 + 2.0 * x * y * d.uR1);
    const double M8 = l * kPi * rho * ((x * x - y * y) * d.uI2 + 2.0 * x * y * d.uR2);
    const double M9 = l * kPi * rho / 2.0 * ((y * y - x * x) * d.tI + 2.0 * x * y * d.tR);
    const double l2p2 = l * l * kPi2;
    const double P11 = (ky * M1 - kx * M2) / (2.0 * D);
    const double P12 = -M3 * Pr / (4.0 * l2p2);
    const double P21 = ((kx * M5 - ky * M4) * A / (2.0 * D)) / E;
    const double P22 = M6 * Pr * Pr * Pr / (16.0 * l2p2 * (4.0 * l2p2 * l2p2 + rho * rho * Pr * Pr));
    const double P31 = (ky * M7 - kx * M8) * A / (4.0 * E);
    const double P32 = M9 * Pr * Pr / (16.0 * l2p2 + 4.0 * rho * rho * Pr * Pr);
    return {P11 + P21 + P31, P12 + P22 + P32};
}

std::array<double, 6> hopf_C_from_displays(const HopfData& d, bool fixM) {
    const auto a = hopf_phi_displays(d, 1.0, 0.0, fixM);
    const auto c = hopf_phi_displays(d, 0.0, 1.0, fixM);
    const auto b = hopf_phi_displays(d, 1.0, 1.0, fixM);
    // Quadratic forms: coefficient of xy is f(1,1) - f(1,0) - f(0,1).
    return {a[0], a[1], b[0] - a[0] - c[0], b[1] - a[1] - c[1], c[0], c[1]};
}

HopfCoeffs pair_coeffs(const std::array<double, 6>& C, const std::array<double, 4>& A, bool transposed) {
    const double A11 = A[0], A12 = A[1], A21 = A[2], A22 = A[3];
    if (!transposed)
        return {C[0] * A11 + C[1] * A21, C[2] * A11 + C[3] * A21, C[4] * A11 + C[5] * A21,
                C[0] * A12 + C[1] * A22, C[2] * A12 + C[3] * A22, C[4] * A12 + C[5] * A22};
    return {C[0] * A11 + C[1] * A12, C[2] * A11 + C[3] * A12, C[4] * A11 + C[5] * A12,
            C[0] * A21 + C[1] * A22, C[2] * A21 + C[3] * A22, C[4] * A21 + C[5] * A22};
}

}  // namespace

HopfWorksheet hopf_number(const Params& p, const ModeIndex& J1) {
    require_i1(J1, "J1");
    if (J1.j * J1.k != 0) throw Error(ErrorCode::Validation, "Hopf formulas require j k = 0 for " + J1.str());
    HopfWorksheet w;
    w.J1 = J1;
    w.ra = p.ra();
    const auto roots = cubic_roots(char_coeffs(p, J1));
    const cplx b = roots[0];
    if (is_real_root(b)) throw Error(ErrorCode::NoHopf, "leading eigenvalue of " + J1.str() + " is real");
    w.sigma = b.real();
    w.rho = b.imag();
    w.vec = eigenvector(p, J1, b);
    w.adj = adjoint_eigenvector(p, J1, std::conj(b));
    const auto g = geometry(p, J1);

    HopfData d{};
    d.sigma = w.sigma;
    d.rho = w.rho;
    d.kx = g.kx;
    d.ky = g.ky;
    d.kz = g.kz;
    d.a1 = g.alpha1;
    d.a2 = g.alpha2;
    d.A = g.alpha_jk_sq;
    d.qk = g.qk;
    d.Pr = p.Pr;
    d.l = J1.l;
    d.uR1 = w.vec.u1.real();
    d.uI1 = w.vec.u1.imag();
    d.uR2 = w.vec.u2.real();
    d.uI2 = w.vec.u2.imag();
    d.tR = w.vec.theta.real();
    d.tI = w.vec.theta.imag();
    d.sR1 = w.adj.u1.real();
    d.sI1 = w.adj.u1.imag();
    d.sR2 = w.adj.u2.real();
    d.sI2 = w.adj.u2.imag();
    d.tsR = w.adj.theta.real();
    d.tsI = w.adj.theta.imag();
    const double den = d.uR1 * d.sR1 + d.uR2 * d.sR2 + 1.0 + d.tR * d.tsR;
    require_nonzero(den, 1.0, "adjoint mixing scalar");
    d.alpha = (d.uR1 * d.sI1 + d.uR2 * d.sI2 + d.tR * d.tsI) / den;
    w.alpha_mix = d.alpha;

    w.A_printed = hopf_A(d, kPi2 / std::pow(d.a1 * d.a2, 2));
    w.A_corrected = hopf_A(d, kPi2 / (d.a1 * d.a2));
    w.C_printed = hopf_C_printed(d);
    w.C_displays = hopf_C_from_displays(d, false);
    w.C_displays_fixed = hopf_C_from_displays(d, true);

    // Quadrature reduction on the real and imaginary parts of the critical pair.
    const auto cm = reduce_center_manifold(p, {{J1, 0}, {J1, 1}});
    const ModeIndex K = canonical(2 * J1.j, 2 * J1.k, 0);
    const ModeIndex T{0, 0, 2 * J1.l};
    auto inter = [&](const ModeIndex& idx) {
        auto it = cm.interaction.find({0, {idx, 0}});
        return it == cm.interaction.end() ? std::vector<double>{0.0, 0.0} : it->second;
    };
    const auto iK = inter(K), iT = inter(T);
    w.A_quadrature = {iK[0], iT[0], iK[1], iT[1]};
    for (const auto& sa : cm.slaved) {
        auto get = [&](const Monomial& m) {
            auto it = sa.coef.find(m);
            return it == sa.coef.end() ? 0.0 : it->second;
        };
        const int off = sa.idx == K ? 0 : (sa.idx == T ? 1 : -1);
        if (off < 0 || sa.col != 0) continue;
        w.C_exact[off] = get({2, 0});
        w.C_exact[2 + off] = get({1, 1});
        w.C_exact[4 + off] = get({0, 2});
    }

    auto add_route = [&](const std::string& name, const HopfCoeffs& c) {
        w.routes.push_back({name, c, hopf_a_number(c)});
    };
    add_route("printed", pair_coeffs(w.C_printed, w.A_printed, false));
    add_route("printed-transposed", pair_coeffs(w.C_printed, w.A_printed, true));
    add_route("printed-C-corrected-A-transposed", pair_coeffs(w.C_printed, w.A_corrected, true));
    add_route("displays-transposed", pair_coeffs(w.C_displays, w.A_corrected, true));
    add_route("displays-fixed-transposed", pair_coeffs(w.C_displays_fixed, w.A_corrected, true));
    add_route("exact-C-quadrature-A-printed-pairing", pair_coeffs(w.C_exact, w.A_quadrature, false));
    add_route("exact-C-quadrature-A-transposed", pair_coeffs(w.C_exact, w.A_quadrature, true));
    const HopfCoeffs full = {cm.cubic_coef(0, {3, 0}), cm.cubic_coef(0, {2, 1}), cm.cubic_coef(0, {1, 2}),
                             cm.cubic_coef(1, {3, 0}), cm.cubic_coef(1, {2, 1}), cm.cubic_coef(1, {1, 2})};
    add_route("center-manifold", full);
    w.y3_x = cm.cubic_coef(0, {0, 3});
    w.y3_y = cm.cubic_coef(1, {0, 3});
    w.adopted_route = "center-manifold";
    w.coeffs = full;
    w.a_number = hopf_a_number(full);

    for (int i = 0; i < 6; ++i) {
        const double ref = std::max(std::abs(w.C_printed[i]), 1e-300);
        if (std::abs(w.C_displays_fixed[i] - w.C_printed[i]) > 1e-8 * ref)
            w.notes.push_back("C" + std::to_string(i + 1) + " printed form differs from the Phi/M displays");
    }
    return w;
}

// ---------------------------------------------------------------- Gamma

namespace {

struct Vec4 {
    cplx u1, u2, u3, th;
};

Vec4 to4(const EigvecCoeffs& e) { return {e.u1, e.u2, e.u3, e.theta}; }
cplx dot(const Vec4& a, const Vec4& b) { return a.u1 * b.u1 + a.u2 * b.u2 + a.u3 * b.u3 + a.th * b.th; }
Vec4 re(const Vec4& a) { return {a.u1.real(), a.u2.real(), a.u3.real(), a.th.real()}; }
Vec4 im(const Vec4& a) { return {a.u1.imag(), a.u2.imag(), a.u3.imag(), a.th.imag()}; }
Vec4 lin(cplx s, const Vec4& a, cplx t, const Vec4& b) {
    return {s * a.u1 + t * b.u1, s * a.u2 + t * b.u2, s * a.u3 + t * b.u3, s * a.th + t * b.th};
}

struct GammaCore {
    double kx, ky;          // j a1, k a2 of J2
    double u11, u21, t2;    // J2 eigenvector
    double s11, s21, ts2;   // J2 adjoint
    double w11, w21, t3;    // J3 eigenvector
    double r11, r21, ts3;   // J3 adjoint
    double P1, P2, P1t, P2t;
    double c32p, c32m, c23p, c23m;
};

// Contribution factors of a K6 / K7 sub-mode with coefficients x, to the y z^2 and y^2 z equations.
// With literal constants the u3 component enters as the printed 1 and pi.
std::array<cplx, 2> k6_factors(const GammaCore& c, const Vec4& x, bool literal) {
    const cplx one = literal ? cplx(1.0) : x.u3;
    const cplx piu = literal ? cplx(kPi) : kPi * x.u3;
    const cplx G61 = -0.25 * (c.kx * x.u1 - c.ky * x.u2 + piu) * c.c32p;
    const cplx G62 = 0.5 * c.ky * c.w21 * (x.u1 * c.s11 + x.u2 * c.s21 + one + x.th * c.ts2);
    const cplx G63 = 0.5 * c.ky * c.u21 * (x.u1 * c.r11 + x.u2 * c.r21 + one + x.th * c.ts3);
    const cplx G64 = 0.25 * (c.kx * x.u1 + c.ky * x.u2 + piu) * c.c23p;
    return {G61 + G62, G63 + G64};
}

std::array<cplx, 2> k7_factors(const GammaCore& c, const Vec4& x, bool literal) {
    const cplx one = literal ? cplx(1.0) : x.u3;
    const cplx piu = literal ? cplx(kPi) : kPi * x.u3;
    const cplx G71 = 0.5 * c.kx * c.w11 * (x.u1 * c.s11 + x.u2 * c.s21 + one + x.th * c.ts2);
    const cplx G72 = 0.25 * (c.kx * x.u1 - c.ky * x.u2 - piu) * c.c32m;
    const cplx G73 = 0.5 * c.kx * c.u11 * (x.u1 * c.r11 + x.u2 * c.r21 - one - x.th * c.ts3);
    const cplx G74 = 0.25 * (c.kx * x.u1 + c.ky * x.u2 + piu) * c.c23m;
    return {G71 + G72, G73 + G74};
}

// Projection numerators of the y z forcing onto a K6 / K7 adjoint.
cplx k6_numer(const GammaCore& c, const Vec4& v) {
    return (c.P2 * c.w11 - c.P2t * c.u11) * v.u1 + (c.P2 * c.w21 - c.P2t * c.u21) * v.u2 + (c.P2 - c.P2t) * v.u3 +
           (c.P2 * c.t3 - c.P2t * c.t2) * v.th;
}

cplx k7_numer(const GammaCore& c, const Vec4& v) {
    return (c.P1 * c.w11 - c.P1t * c.u11) * v.u1 + (c.P1 * c.w21 - c.P1t * c.u21) * v.u2 - (c.P1 + c.P1t) * v.u3 -
           (c.P1 * c.t2 + c.P1t * c.t3) * v.th;
}

std::array<SubModeBranch, 3> sub_mode(const Params& p, const ModeIndex& K, double tol) {
    const auto roots = cubic_roots(char_coeffs(p, K));
    std::array<SubModeBranch, 3> out;
    for (int s = 0; s < 3; ++s) {
        cplx b = roots[s];
        if (is_real_root(b)) b = b.real();
        if (std::abs(b) < tol) throw Error(ErrorCode::ResonantSubMode, "sub-mode " + K.str() + " is neutral");
        out[s] = {b, eigenvector(p, K, b), adjoint_eigenvector(p, K, b)};
    }
    return out;
}

}  // namespace

GammaWorksheet gamma_numbers(const Params& p, const ModeIndex& J2, bool with_quadrature) {
    require_i1(J2, "J2");
    if (J2.k == 0 || J2.l != 1) throw Error(ErrorCode::Validation, "double-real formulas require k != 0 and l = 1");
    const double tol = 1e-8;
    GammaWorksheet w;
    w.J2 = J2;
    w.J3 = J2.reflected();
    w.ra = p.ra();
    const int j = J2.j, k = J2.k;
    w.K = {ModeIndex{0, 0, 2}, ModeIndex{2 * j, 0, 0}, ModeIndex{0, 2 * k, 0}, ModeIndex{2 * j, 2 * k, 0},
           ModeIndex{2 * j, -2 * k, 0}, ModeIndex{2 * j, 0, 2}, ModeIndex{0, 2 * k, 2}};

    const auto bJ = cubic_roots(char_coeffs(p, J2));
    if (!is_real_root(bJ[0])) throw Error(ErrorCode::Validation, "critical eigenvalue of " + J2.str() + " is not real");
    const double beta = bJ[0].real();
    const auto g = geometry(p, J2);
    const double a1 = g.alpha1, a2 = g.alpha2, A = g.alpha_jk_sq;
    GammaCore c{};
    c.kx = g.kx;
    c.ky = g.ky;
    {
        const auto v = eigenvector(p, J2, beta), s = adjoint_eigenvector(p, J2, beta);
        const auto v3 = eigenvector(p, w.J3, beta), s3 = adjoint_eigenvector(p, w.J3, beta);
        c.u11 = v.u1.real(), c.u21 = v.u2.real(), c.t2 = v.theta.real();
        c.s11 = s.u1.real(), c.s21 = s.u2.real(), c.ts2 = s.theta.real();
        c.w11 = v3.u1.real(), c.w21 = v3.u2.real(), c.t3 = v3.theta.real();
        c.r11 = s3.u1.real(), c.r21 = s3.u2.real(), c.ts3 = s3.theta.real();
    }
    c.P1 = c.kx * c.u11 / 2.0;
    c.P2 = c.ky * c.u21 / 2.0;
    c.P1t = c.kx * c.w11 / 2.0;
    c.P2t = c.ky * c.w21 / 2.0;
    w.P1 = c.P1, w.P2 = c.P2, w.P1t = c.P1t, w.P2t = c.P2t;

    auto i2beta = [&](const ModeIndex& K) {
        const auto gk = geometry(p, K);
        const double b = -(gk.qk + gk.alpha_jk_sq * gk.alpha_jk_sq) / gk.alpha_jk_sq;
        if (std::abs(b) < tol) throw Error(ErrorCode::ResonantSubMode, "sub-mode " + K.str() + " is neutral");
        return b;
    };
    const double bK1 = -4.0 * kPi2 / p.Pr;
    const double bK2 = i2beta(w.K[1]), bK3 = i2beta(w.K[2]), bK4 = i2beta(w.K[3]), bK5 = i2beta(w.K[4]);
    w.GK1 = kPi * c.t2 / (2.0 * bK1);
    w.GK4 = kPi * (c.kx * c.u21 - c.ky * c.u11) / (4.0 * A * bK4);
    w.GK5 = kPi * (c.kx * c.w21 + c.ky * c.w11) / (4.0 * A * bK5);
    w.GK2 = (c.u11 * c.w21 + c.u21 * c.w11) / (4.0 * bK2);
    w.GK3 = (c.u21 * c.w11 + c.u11 * c.w21) / (4.0 * bK3);
    const double pair = c.u11 * c.s11 + c.u21 * c.s21 + 1.0 + c.t2 * c.ts2;
    w.q = kPi2 * pair / (a1 * a2);
    require_nonzero(w.q, 1.0, "self-pairing q");
    const double pref = kPi2 / (w.q * a1 * a2);

    const double G1 = pref * (kPi * w.GK1 * c.ts2 + 2.0 * kPi * w.GK4 * (c.kx * c.s21 - c.ky * c.s11));
    const double GKK1 = 2.0 * c.kx * c.kx * c.w11 * c.s21 * w.GK2 + 2.0 * c.ky * c.ky * c.w21 * c.s11 * w.GK3;
    const double GKK3 = 2.0 * c.kx * c.kx * c.u11 * c.r21 * w.GK2 + 2.0 * c.ky * c.ky * c.u21 * c.r11 * w.GK3;
    c.c32p = c.w11 * c.s11 + c.w21 * c.s21 + 1.0 + c.t3 * c.ts2;
    c.c32m = c.w11 * c.s11 + c.w21 * c.s21 - 1.0 - c.t3 * c.ts2;
    c.c23p = c.u11 * c.r11 + c.u21 * c.r21 + 1.0 + c.t2 * c.ts3;
    c.c23m = c.u11 * c.r11 + c.u21 * c.r21 - 1.0 - c.t2 * c.ts3;
    const double GKK2 = c.kx * c.ky * (w.GK2 * c.c32m + w.GK3 * c.c32p);
    const double GKK4 = c.kx * c.ky * (w.GK2 * c.c23m + w.GK3 * c.c23p);

    w.K6_branches = sub_mode(p, w.K[5], tol);
    w.K7_branches = sub_mode(p, w.K[6], tol);

    // Case i with the sub-mode data as they are (complex pairs paired bilinearly).
    cplx S2 = 0.0, S3 = 0.0;
    for (int s = 0; s < 3; ++s) {
        const auto& br = w.K6_branches[s];
        const Vec4 x = to4(br.vec), v = to4(br.adj);
        const cplx nrm = dot(x, v);
        require_nonzero(nrm * br.beta, 1e-12, "K6 pairing");
        w.GK6[s] = k6_numer(c, v) / (nrm * br.beta);
        const auto f = k6_factors(c, x, true);
        S2 += f[0] * w.GK6[s];
        S3 += f[1] * w.GK6[s];
    }
    for (int s = 0; s < 3; ++s) {
        const auto& br = w.K7_branches[s];
        const Vec4 x = to4(br.vec), v = to4(br.adj);
        const cplx nrm = dot(x, v);
        require_nonzero(nrm * br.beta, 1e-12, "K7 pairing");
        w.GK7[s] = k7_numer(c, v) / (nrm * br.beta);
        const auto f = k7_factors(c, x, true);
        S2 += f[0] * w.GK7[s];
        S3 += f[1] * w.GK7[s];
    }
    const cplx G2c = pref * (w.GK1 * kPi * c.ts2 + GKK1 + GKK2 - S2);
    const cplx G3c = pref * (w.GK1 * kPi * c.ts3 + GKK3 - GKK4 + S3);
    w.gammas_case_i = {G1, G2c.real(), G3c.real()};
    w.case_i_imag = std::max(std::abs(G2c.imag()), std::abs(G3c.imag()));

    for (const auto& br : w.K6_branches) w.complex_sub_mode = w.complex_sub_mode || !is_real_root(br.beta);
    for (const auto& br : w.K7_branches) w.complex_sub_mode = w.complex_sub_mode || !is_real_root(br.beta);
    w.selected_case = w.complex_sub_mode ? "ii" : "i";

    if (w.complex_sub_mode) {
        // Real form of each conjugate pair with the alpha-tilde adjusted adjoints.
        auto case_ii = [&](bool literal) {
            double T2 = 0.0, T3 = 0.0;
            auto family = [&](const ModeIndex& K, const std::array<SubModeBranch, 3>& brs, bool is6) {
                for (int s = 0; s < 3; ++s) {
                    const auto& br = brs[s];
                    auto numer = [&](const Vec4& v) { return is6 ? k6_numer(c, v) : -k7_numer(c, v); };
                    auto factors = [&](const Vec4& x) { return is6 ? k6_factors(c, x, literal) : k7_factors(c, x, literal); };
                    if (is_real_root(br.beta)) {
                        const Vec4 x = to4(br.vec), v = to4(br.adj);
                        const double G = (is6 ? k6_numer(c, v) : k7_numer(c, v)).real() / (dot(x, v).real() * br.beta.real());
                        const auto f = factors(x);
                        T2 += f[0].real() * G;
                        T3 += f[1].real() * G;
                        continue;
                    }
                    const double sg = br.beta.real(), rh = br.beta.imag();
                    const Vec4 V = to4(br.vec);
                    const Vec4 W = to4(adjoint_eigenvector(p, K, std::conj(br.beta)));
                    const Vec4 a = re(V), b = im(V), cc = re(W), dd = im(W);
                    const double den = dot(a, cc).real();
                    require_nonzero(den, 1e-12, "alpha-tilde");
                    const double at = dot(a, dd).real() / den;
                    const Vec4 t1 = lin(1.0, cc, at, dd), t2 = lin(-at, cc, 1.0, dd);
                    const double n1 = numer(t1).real() / dot(a, t1).real();
                    const double n2 = numer(t2).real() / dot(b, t2).real();
                    const double mod2 = sg * sg + rh * rh;
                    const double x1 = (rh * n2 - sg * n1) / mod2;
                    const double x2 = -(rh * n1 + sg * n2) / mod2;
                    // Phi carries -G for K6 and +G for K7 in the expansion the Gamma formulas assume.
                    const double G1v = literal ? x1 : (is6 ? -x1 : x1);
                    const double G2v = literal ? x2 : (is6 ? -x2 : x2);
                    const auto fa = factors(a), fb = factors(b);
                    T2 += fa[0].real() * G1v + fb[0].real() * G2v;
                    T3 += fa[1].real() * G1v + fb[1].real() * G2v;
                    ++s;
                }
            };
            family(w.K[5], w.K6_branches, true);
            family(w.K[6], w.K7_branches, false);
            const double G2 = pref * (w.GK1 * kPi * c.ts2 + GKK1 + GKK2 - T2);
            const double G3 = pref * (w.GK1 * kPi * c.ts3 + GKK3 - GKK4 + T3);
            return std::array<double, 3>{G1, G2, G3};
        };
        w.gammas_case_ii_literal = case_ii(true);
        w.gammas_case_ii_consistent = case_ii(false);
    }

    if (with_quadrature) {
        const IndexBasis B2 = index_basis(p, w.J2), B3 = index_basis(p, w.J3);
        const auto cm = reduce_center_manifold(p, {{w.J2, leading_real_column(B2)}, {w.J3, leading_real_column(B3)}});
        w.gammas_quadrature = std::array<double, 3>{cm.cubic_coef(0, {3, 0}), cm.cubic_coef(0, {1, 2}), cm.cubic_coef(1, {2, 1})};
        w.gammas = *w.gammas_quadrature;
        w.adopted_route = "center-manifold";
    } else {
        w.gammas = w.gammas_case_ii_consistent ? *w.gammas_case_ii_consistent : w.gammas_case_i;
        w.adopted_route = w.gammas_case_ii_consistent ? "case-ii-consistent" : "case-i";
    }
    return w;
}

// ---------------------------------------------------------------- classification

namespace {

void check_boundary(double v, double tol, const char* what) {
    if (std::abs(v) <= tol)
        throw Error(ErrorCode::BoundaryAmbiguous, std::string(what) + " is within tolerance of a decision boundary");
}

}  // namespace

Scenario classify_simple(double delta, double tol) {
    check_boundary(delta, tol, "delta");
    if (delta < 0)
        return {"Continuous-2states", "continuous transition; two stable steady states bifurcate on Ra > Ra_c1", 2};
    return {"Jump-2points", "jump transition; two unstable steady states bifurcate on Ra < Ra_c1", 2};
}

Scenario classify_hopf(double a, double tol) {
    check_boundary(a, tol, "a");
    if (a < 0) return {"Continuous-limit-cycle", "continuous transition; a stable periodic orbit bifurcates on Ra > Ra_c2", 0};
    return {"Jump-limit-cycle", "jump transition; an unstable periodic orbit bifurcates on Ra < Ra_c2", 0};
}

Scenario classify_double(const std::array<double, 3>& g, double tol) {
    const double G1 = g[0], G2 = g[1], G3 = g[2];
    const double D = G2 * G3 - G1 * G1;
    const double d2 = G1 - G2, d3 = G1 - G3;
    check_boundary(G1, tol, "Gamma1");
    check_boundary(d2, tol, "Gamma1 - Gamma2");
    check_boundary(d3, tol, "Gamma1 - Gamma3");
    const bool mixed = (d2 > 0) != (d3 > 0);
    if (!mixed) check_boundary(D, tol, "Gamma2 Gamma3 - Gamma1^2");
    if (G1 < 0) {
        if (D > 0 && G1 > G2 && G1 > G3)
            return {"DR-1", "continuous transition to an S1 attractor with 8 equilibria; Psi1-Psi4 stable, Psi5-Psi8 unstable", 8};
        if (G1 < G2 && G1 > G3)
            return {"DR-2", "continuous transition to an S1 attractor with 4 equilibria; Psi3, Psi4 stable, Psi1, Psi2 unstable", 4};
        if (D < 0 && G1 < G2 && G1 < G3)
            return {"DR-R1", "continuous transition to an S1 attractor with 8 equilibria; Psi1-Psi4 unstable, Psi5-Psi8 stable", 8};
        if (D > 0 && G1 < G2 && G1 < G3)
            return {"DR-R2", "jump transition; 8 unstable equilibria bifurcate on both sides of Ra_c1", 8};
        if (G1 > G2 && G1 < G3)
            return {"DR-R3", "continuous transition to an S1 attractor with 4 equilibria; Psi1, Psi2 stable, Psi3, Psi4 unstable", 4};
    } else {
        if (d2 * D > 0 && d3 * D > 0)
            return {"DR-3", "jump transition; 8 unstable equilibria bifurcate on both sides of Ra_c1", 8};
        if (d2 * d3 < 0) return {"DR-4", "jump transition; 4 unstable equilibria bifurcate on Ra < Ra_c1", 4};
        if (d2 * D < 0 && d3 * D < 0)
            return {"DR-5", "jump transition; 8 unstable equilibria bifurcate on Ra < Ra_c1", 8};
    }
    return {"NonGeneric", "no classified scenario applies", 0};
}

}  // namespace rmc
