#include "spectrum.hpp"

#include <algorithm>

namespace rmc {

double CubicCoeffs::max_abs() const {
    return std::max({std::abs(a3), std::abs(a2), std::abs(a1), std::abs(a0)});
}

CubicCoeffs char_coeffs(const Params& p, const ModeIndex& idx) {
    if (index_class(idx) != IndexClass::I1)
        throw Error(ErrorCode::InvalidIndex, "characteristic cubic needs an I1 index, got " + idx.str());
    const double Ra = p.ra();
    const auto g = geometry(p, idx);
    const double r2 = g.r_sq, r4 = r2 * r2, A = g.alpha_jk_sq, qk = g.qk;
    const double l2pi2 = g.kz * g.kz;
    CubicCoeffs c;
    c.a3 = p.Pr * r4;
    c.a2 = (r4 + 2.0 * p.Pr * (r4 + qk)) * r2;
    c.a1 = (r4 + qk) * (p.Pr * qk + r4 * (p.Pr + 2.0)) + p.Pr * p.Ta * l2pi2 * r2 - Ra * A * r2;
    // (r^5 + qk r)^2 = r2 (r4 + qk)^2
    c.a0 = r2 * (r4 + qk) * (r4 + qk) + r4 * l2pi2 * p.Ta - Ra * A * (r4 + qk);
    return c;
}

CubicCoeffs char_coeffs_dRa(const Params& p, const ModeIndex& idx) {
    const auto g = geometry(p, idx);
    CubicCoeffs c;
    c.a1 = -g.alpha_jk_sq * g.r_sq;
    c.a0 = -g.alpha_jk_sq * (g.r_sq * g.r_sq + g.qk);
    return c;
}

void sort_eigenvalues(std::vector<cplx>& v) {
    std::sort(v.begin(), v.end(), [](cplx a, cplx b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });
}

namespace {

cplx newton_step(const CubicCoeffs& c, cplx b) {
    const cplx d = (3.0 * c.a3 * b + 2.0 * c.a2) * b + c.a1;
    if (std::abs(d) == 0.0) return b;
    const cplx nb = b - c.eval(b) / d;
    // Keep the polished value only if it does not increase the residual.
    return std::abs(c.eval(nb)) <= std::abs(c.eval(b)) ? nb : b;
}

}  // namespace

std::array<cplx, 3> cubic_roots(const CubicCoeffs& c) {
    if (c.a3 == 0.0) throw Error(ErrorCode::DegenerateCubic, "leading cubic coefficient is zero");
    const double b = c.a2 / c.a3, cc = c.a1 / c.a3, d = c.a0 / c.a3;
    const double shift = -b / 3.0;
    const double p = cc - b * b / 3.0;
    const double q = 2.0 * b * b * b / 27.0 - b * cc / 3.0 + d;
    const double disc = q * q / 4.0 + p * p * p / 27.0;

    std::vector<cplx> roots;
    if (disc > 0.0) {
        // One real root and a conjugate pair.
        const double s = std::sqrt(disc);
        const double w = (q > 0.0) ? -q / 2.0 - s : -q / 2.0 + s;  // avoid cancellation
        const double u = std::cbrt(w);
        const double v = (u != 0.0) ? -p / (3.0 * u) : 0.0;
        const double t1 = u + v;
        const double re = -t1 / 2.0 + shift;
        const double im = std::sqrt(3.0) / 2.0 * std::abs(u - v);
        double real_root = t1 + shift;
        cplx z(re, im);
        real_root = newton_step(c, cplx(real_root, 0.0)).real();
        z = newton_step(c, z);
        if (is_real_root(z)) {
            // Pair collapsed within the threshold: report two equal real roots.
            roots = {cplx(real_root, 0.0), cplx(z.real(), 0.0), cplx(z.real(), 0.0)};
        } else {
            roots = {cplx(real_root, 0.0), z, std::conj(z)};
        }
    } else {
        // Three real roots (trigonometric form).
        std::array<double, 3> t;
        if (p == 0.0) {
            t = {0.0, 0.0, 0.0};
        } else {
            const double m = 2.0 * std::sqrt(-p / 3.0);
            double arg = 3.0 * q / (p * m);
            arg = std::clamp(arg, -1.0, 1.0);
            const double phi = std::acos(arg) / 3.0;
            for (int k = 0; k < 3; ++k) t[k] = m * std::cos(phi - 2.0 * kPi * k / 3.0);
        }
        for (double tk : t) roots.push_back(newton_step(c, cplx(tk + shift, 0.0)));
        for (auto& r : roots) r = cplx(r.real(), 0.0);
    }
    sort_eigenvalues(roots);
    return {roots[0], roots[1], roots[2]};
}

EigvecCoeffs eigenvector(const Params& p, const ModeIndex& idx, cplx beta) {
    const auto g = geometry(p, idx);
    const double sT = std::sqrt(p.Ta);
    const cplx d = (beta + g.r_sq) * g.r_sq + g.qk;
    const cplx dth = g.r_sq + p.Pr * beta;
    const double scale = g.r_sq * g.r_sq + g.qk;
    if (std::abs(d) <= 1e-14 * scale)
        throw Error(ErrorCode::SingularEigenvector, "denominator (beta + r^2) r^2 + Q k^2 a2^2 vanishes");
    if (std::abs(dth) <= 1e-14 * g.r_sq)
        throw Error(ErrorCode::SingularEigenvector, "denominator r^2 + Pr beta vanishes");
    EigvecCoeffs v;
    const double f = -g.kz / g.alpha_jk_sq;
    v.u1 = f * (g.kx + sT * g.ky * g.r_sq / d);
    v.u2 = f * (g.ky - sT * g.kx * g.r_sq / d);
    v.u3 = 1.0;
    v.theta = 1.0 / dth;
    return v;
}

AdjointCoeffs adjoint_eigenvector(const Params& p, const ModeIndex& idx, cplx bs) {
    const auto g = geometry(p, idx);
    const double sT = std::sqrt(p.Ta);
    const double Ra = p.ra();
    const cplx d = g.r_sq * (g.r_sq + bs) + g.qk;
    const cplx dth = bs * p.Pr + g.r_sq;
    const double scale = g.r_sq * g.r_sq + g.qk;
    if (std::abs(d) <= 1e-14 * scale)
        throw Error(ErrorCode::SingularEigenvector, "adjoint denominator r^2 (r^2 + beta*) + Q k^2 a2^2 vanishes");
    if (std::abs(dth) <= 1e-14 * g.r_sq)
        throw Error(ErrorCode::SingularEigenvector, "adjoint denominator beta* Pr + r^2 vanishes");
    AdjointCoeffs a;
    const double f = -g.kz / g.alpha_jk_sq;
    a.u1 = f * (-sT * g.ky * g.r_sq / d + g.kx);
    a.u2 = f * (sT * g.kx * g.r_sq / d + g.ky);
    a.u3 = 1.0;
    a.theta = p.Pr * Ra / dth;
    return a;
}

double pattern_norm(const Params& p, const ModeIndex& idx, Pattern pat) {
    // (2 pi L1)(2 pi L2) times the mean square of the trigonometric factors.
    const double cell = 4.0 * kPi * kPi * p.L1 * p.L2;
    const bool horiz = !(idx.j == 0 && idx.k == 0) && pat == Pattern::Standard;
    const double fh = horiz ? 0.5 : 1.0;
    const double fz = idx.l == 0 ? 1.0 : 0.5;
    return cell * fh * fz;
}

cplx self_pairing(const Params& p, const ModeIndex& idx, const EigvecCoeffs& v, const AdjointCoeffs& a) {
    const cplx s = v.u1 * std::conj(a.u1) + v.u2 * std::conj(a.u2) + v.u3 * std::conj(a.u3) +
                   v.theta * std::conj(a.theta);
    return pattern_norm(p, idx) * s;
}

ModeSpectrum mode_spectrum(const Params& p, const ModeIndex& idx) {
    ModeSpectrum ms;
    ms.idx = idx;
    ms.cls = index_class(idx);
    const auto g = geometry(p, idx);
    if (ms.cls == IndexClass::I2) {
        Branch b;
        b.beta = -(g.qk + g.alpha_jk_sq * g.alpha_jk_sq) / g.alpha_jk_sq;
        b.vec = {g.ky, -g.kx, 0.0, 0.0};
        b.adj = b.vec;
        b.pairing = pattern_norm(p, idx) * (g.ky * g.ky + g.kx * g.kx);
        ms.branches.push_back(b);
        return ms;
    }
    if (ms.cls == IndexClass::I3) {
        const double l2 = g.kz * g.kz, sT = std::sqrt(p.Ta);
        Branch v1, v2, th;
        v1.beta = cplx(-l2, sT);
        v2.beta = cplx(-l2, -sT);
        v1.vec = {1.0, cplx(0.0, 1.0), 0.0, 0.0};
        v2.vec = {1.0, cplx(0.0, -1.0), 0.0, 0.0};
        v1.adj = v1.vec;
        v2.adj = v2.vec;
        for (Branch* b : {&v1, &v2}) {
            b->pattern = Pattern::Vertical;
            b->in_H = false;
            b->pairing = pattern_norm(p, idx, Pattern::Vertical) * 2.0;
        }
        th.beta = -l2 / p.Pr;
        th.vec = {0.0, 0.0, 0.0, 1.0};
        th.adj = th.vec;
        th.pairing = pattern_norm(p, idx);
        std::vector<Branch> all = {v1, v2, th};
        std::sort(all.begin(), all.end(), [](const Branch& a, const Branch& b) {
            if (a.beta.real() != b.beta.real()) return a.beta.real() > b.beta.real();
            return a.beta.imag() > b.beta.imag();
        });
        ms.branches = all;
        return ms;
    }
    const auto roots = cubic_roots(char_coeffs(p, idx));
    for (const cplx& beta : roots) {
        Branch b;
        b.beta = beta;
        b.vec = eigenvector(p, idx, beta);
        b.adj = adjoint_eigenvector(p, idx, std::conj(beta));
        b.pairing = self_pairing(p, idx, b.vec, b.adj);
        ms.branches.push_back(b);
    }
    return ms;
}

double linear_residual(const Params& p, const ModeIndex& idx, cplx beta, const EigvecCoeffs& v) {
    const auto g = geometry(p, idx);
    const double sT = std::sqrt(p.Ta);
    const auto cls = index_class(idx);
    if (cls == IndexClass::I2) {
        const cplx lin = -(g.alpha_jk_sq + beta + g.qk / g.alpha_jk_sq);
        // Component along the divergence-free direction; Coriolis is a pure gradient here.
        const double a = std::sqrt(g.alpha_jk_sq);
        const cplx along = (g.ky * (lin * v.u1 + sT * v.u2) - g.kx * (lin * v.u2 - sT * v.u1)) / a;
        const cplx div = g.kx * v.u1 + g.ky * v.u2;
        return std::max({std::abs(along), std::abs(div), std::abs(v.u3), std::abs(v.theta)});
    }
    if (cls == IndexClass::I3) {
        const double l2 = g.kz * g.kz;
        const cplx e1 = (l2 + beta) * v.u1 - sT * v.u2;
        const cplx e2 = (l2 + beta) * v.u2 + sT * v.u1;
        const cplx e4 = (l2 / p.Pr + beta) * v.theta;
        return std::max({std::abs(e1), std::abs(e2), std::abs(e4), std::abs(v.u3)});
    }
    const double Ra = p.ra();
    const double r2 = g.r_sq;
    const cplx P = ((r2 + beta) * v.u3 - Ra * v.theta + g.qk * v.u3 / r2) / g.kz;
    const cplx e1 = -(r2 + beta) * v.u1 + sT * v.u2 - g.qk * v.u1 / r2 + g.kx * P;
    const cplx e2 = -(r2 + beta) * v.u2 - sT * v.u1 - g.qk * v.u2 / r2 + g.ky * P;
    const cplx e4 = -(r2 + p.Pr * beta) * v.theta + v.u3;
    const cplx e8 = g.kx * v.u1 + g.ky * v.u2 + g.kz * v.u3;
    return std::max({std::abs(e1), std::abs(e2), std::abs(e4), std::abs(e8)});
}

double adjoint_residual(const Params& p, const ModeIndex& idx, cplx mu, const AdjointCoeffs& a) {
    const auto g = geometry(p, idx);
    const double sT = std::sqrt(p.Ta);
    const auto cls = index_class(idx);
    if (cls != IndexClass::I1) {
        // I2 is self-adjoint; I3 adjoint flips the Coriolis sign.
        if (cls == IndexClass::I2) return linear_residual(p, idx, mu, a);
        const double l2 = g.kz * g.kz;
        const cplx e1 = (l2 + mu) * a.u1 + sT * a.u2;
        const cplx e2 = (l2 + mu) * a.u2 - sT * a.u1;
        const cplx e4 = (l2 / p.Pr + mu) * a.theta;
        return std::max({std::abs(e1), std::abs(e2), std::abs(e4), std::abs(a.u3)});
    }
    const double Ra = p.ra();
    const double r2 = g.r_sq;
    const cplx P = (mu * a.u3 + r2 * a.u3 + g.qk * a.u3 / r2 - a.theta / p.Pr) / g.kz;
    const cplx e1 = -(r2 + mu) * a.u1 - sT * a.u2 - g.qk * a.u1 / r2 + g.kx * P;
    const cplx e2 = -(r2 + mu) * a.u2 + sT * a.u1 - g.qk * a.u2 / r2 + g.ky * P;
    const cplx e4 = -(r2 / p.Pr + mu) * a.theta + Ra * a.u3;
    const cplx e8 = g.kx * a.u1 + g.ky * a.u2 + g.kz * a.u3;
    return std::max({std::abs(e1), std::abs(e2), std::abs(e4), std::abs(e8)});
}

double leading_real(const Params& p, const ModeIndex& idx) {
    const auto ms = mode_spectrum(p, idx);
    double best = -1e300;
    for (const auto& b : ms.branches) best = std::max(best, b.beta.real());
    return best;
}

}  // namespace rmc
