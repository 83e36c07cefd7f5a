#include "reduced.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "format.hpp"

namespace rmc {

namespace {

// Allocation-free right-hand side shared by rhs() and the integrator.
void eval_rhs(const ReducedSystem& s, const double* x, double* f) {
    switch (s.kind) {
    case TransitionKind::SimpleReal:
        f[0] = s.beta * x[0] + s.delta * x[0] * x[0] * x[0];
        return;
    case TransitionKind::ComplexPair: {
        const double X = x[0], Y = x[1];
        const auto& h = s.hopf;
        f[0] = s.sigma * X + s.rho * Y + h[0] * X * X * X + h[1] * X * X * Y + h[2] * X * Y * Y;
        f[1] = -s.rho * X + s.sigma * Y + h[3] * X * X * X + h[4] * X * X * Y + h[5] * X * Y * Y;
        return;
    }
    case TransitionKind::DoubleReal: {
        const double y = x[0], z = x[1];
        const auto& g = s.gamma;
        f[0] = s.beta * y + y * (g[0] * y * y + g[1] * z * z);
        f[1] = s.beta * z + z * (g[2] * y * y + g[0] * z * z);
        return;
    }
    }
}

}  // namespace

std::vector<double> ReducedSystem::rhs(const std::vector<double>& x) const {
    std::vector<double> f(static_cast<size_t>(dim));
    eval_rhs(*this, x.data(), f.data());
    return f;
}

Eigen::MatrixXd ReducedSystem::jacobian(const std::vector<double>& x) const {
    Eigen::MatrixXd J(dim, dim);
    switch (kind) {
    case TransitionKind::SimpleReal:
        J(0, 0) = beta + 3.0 * delta * x[0] * x[0];
        break;
    case TransitionKind::ComplexPair: {
        const double X = x[0], Y = x[1];
        J(0, 0) = sigma + 3.0 * hopf[0] * X * X + 2.0 * hopf[1] * X * Y + hopf[2] * Y * Y;
        J(0, 1) = rho + hopf[1] * X * X + 2.0 * hopf[2] * X * Y;
        J(1, 0) = -rho + 3.0 * hopf[3] * X * X + 2.0 * hopf[4] * X * Y + hopf[5] * Y * Y;
        J(1, 1) = sigma + hopf[4] * X * X + 2.0 * hopf[5] * X * Y;
        break;
    }
    case TransitionKind::DoubleReal: {
        const double y = x[0], z = x[1];
        J(0, 0) = beta + 3.0 * gamma[0] * y * y + gamma[1] * z * z;
        J(0, 1) = 2.0 * gamma[1] * y * z;
        J(1, 0) = 2.0 * gamma[2] * y * z;
        J(1, 1) = beta + gamma[2] * y * y + 3.0 * gamma[0] * z * z;
        break;
    }
    }
    return J;
}

ReducedSystem build_simple(double beta, double delta) {
    ReducedSystem s;
    s.kind = TransitionKind::SimpleReal;
    s.dim = 1;
    s.beta = beta;
    s.delta = delta;
    return s;
}

ReducedSystem build_hopf(double sigma, double rho, const HopfCoeffs& c) {
    ReducedSystem s;
    s.kind = TransitionKind::ComplexPair;
    s.dim = 2;
    s.sigma = sigma;
    s.rho = rho;
    s.hopf = c;
    return s;
}

ReducedSystem build_double(double beta, const std::array<double, 3>& gamma) {
    ReducedSystem s;
    s.kind = TransitionKind::DoubleReal;
    s.dim = 2;
    s.beta = beta;
    s.gamma = gamma;
    return s;
}

namespace {

Equilibrium make_point(const ReducedSystem& sys, const std::string& name, std::vector<double> x) {
    Equilibrium e;
    e.name = name;
    e.x = std::move(x);
    const Eigen::MatrixXd J = sys.jacobian(e.x);
    Eigen::EigenSolver<Eigen::MatrixXd> es(J);
    double scale = 0.0;
    for (int i = 0; i < J.size(); ++i) scale = std::max(scale, std::abs(J.data()[i]));
    int pos = 0, neg = 0, zero = 0;
    for (int i = 0; i < J.rows(); ++i) {
        const cplx ev = es.eigenvalues()(i);
        e.eigenvalues.push_back(ev);
        if (std::abs(ev.real()) <= 1e-12 * std::max(scale, 1e-300)) ++zero;
        else if (ev.real() > 0) ++pos;
        else ++neg;
    }
    if (zero > 0) e.stability = "degenerate";
    else if (pos == 0) e.stability = "stable";
    else if (neg == 0) e.stability = "unstable";
    else e.stability = "saddle";
    return e;
}

}  // namespace

EquilibriumSet equilibria(const ReducedSystem& sys) {
    EquilibriumSet out;
    if (sys.kind == TransitionKind::ComplexPair)
        throw Error(ErrorCode::Validation, "equilibria are defined for the real transition kinds");
    if (sys.kind == TransitionKind::SimpleReal) {
        if (sys.delta == 0.0) throw Error(ErrorCode::Degenerate, "delta = 0");
        out.points.push_back(make_point(sys, "0", {0.0}));
        const double r = sys.beta / -sys.delta;
        if (r > 0) {
            // Psi_m = (-1)^m sqrt(beta / -delta) Psi.
            out.points.push_back(make_point(sys, "Psi1", {-std::sqrt(r)}));
            out.points.push_back(make_point(sys, "Psi2", {std::sqrt(r)}));
        }
        return out;
    }
    const double G1 = sys.gamma[0], G2 = sys.gamma[1], G3 = sys.gamma[2], b = sys.beta;
    const double det = G1 * G1 - G2 * G3;
    if (G1 == 0.0) throw Error(ErrorCode::Degenerate, "Gamma1 = 0");
    if (det == 0.0) throw Error(ErrorCode::Degenerate, "Gamma1^2 = Gamma2 Gamma3");
    out.gamma = -b / G1;
    out.xi = (G2 * b - G1 * b) / det;
    out.eta = (G3 * b - G1 * b) / det;
    out.points.push_back(make_point(sys, "0", {0.0, 0.0}));
    if (out.gamma > 0) {
        const double s = std::sqrt(out.gamma);
        out.points.push_back(make_point(sys, "Y1", {0.0, s}));
        out.points.push_back(make_point(sys, "Y2", {0.0, -s}));
        out.points.push_back(make_point(sys, "Y3", {s, 0.0}));
        out.points.push_back(make_point(sys, "Y4", {-s, 0.0}));
    }
    if (out.xi > 0 && out.eta > 0) {
        const double sx = std::sqrt(out.xi), se = std::sqrt(out.eta);
        out.points.push_back(make_point(sys, "Y5", {sx, se}));
        out.points.push_back(make_point(sys, "Y6", {sx, -se}));
        out.points.push_back(make_point(sys, "Y7", {-sx, se}));
        out.points.push_back(make_point(sys, "Y8", {-sx, -se}));
    }
    return out;
}

double default_dt(const ReducedSystem& sys) {
    const double m = std::max({std::abs(sys.beta), std::abs(sys.sigma), std::abs(sys.rho), 1.0});
    return 1e-3 / m;
}

Trajectory integrate(const ReducedSystem& sys, const std::vector<double>& x0, double t_end, double dt, int stride) {
    if (static_cast<int>(x0.size()) != sys.dim) throw Error(ErrorCode::Validation, "initial state dimension mismatch");
    for (double v : x0)
        if (!std::isfinite(v)) throw Error(ErrorCode::Validation, "initial state is not finite");
    if (dt <= 0) dt = default_dt(sys);
    if (!(t_end >= 0)) throw Error(ErrorCode::Validation, "t_end must be nonnegative");
    stride = std::max(stride, 1);
    Trajectory tr;
    std::vector<double> x = x0;
    tr.t.push_back(0.0);
    tr.x.push_back(x);
    const long long n = static_cast<long long>(std::ceil(t_end / dt - 1e-9));
    const int d = sys.dim;
    double xs[2] = {x[0], d > 1 ? x[1] : 0.0}, tmp[2], k1[2], k2[2], k3[2], k4[2];
    for (long long i = 1; i <= n; ++i) {
        eval_rhs(sys, xs, k1);
        for (int c = 0; c < d; ++c) tmp[c] = xs[c] + 0.5 * dt * k1[c];
        eval_rhs(sys, tmp, k2);
        for (int c = 0; c < d; ++c) tmp[c] = xs[c] + 0.5 * dt * k2[c];
        eval_rhs(sys, tmp, k3);
        for (int c = 0; c < d; ++c) tmp[c] = xs[c] + dt * k3[c];
        eval_rhs(sys, tmp, k4);
        double nrm = 0.0;
        for (int c = 0; c < d; ++c) {
            xs[c] += dt / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
            if (std::abs(xs[c]) < 1e-280) xs[c] = 0.0;  // keep decayed components out of the subnormal range
            nrm += xs[c] * xs[c];
        }
        const double t = static_cast<double>(i) * dt;
        const bool blown = !(std::sqrt(nrm) <= 1e6);
        if (blown || i % stride == 0 || i == n) std::copy(xs, xs + d, x.begin());
        if (blown) {
            tr.blow_up = true;
            tr.exit_time = t;
            tr.t.push_back(t);
            tr.x.push_back(x);
            return tr;
        }
        if (i % stride == 0 || i == n) {
            tr.t.push_back(t);
            tr.x.push_back(x);
        }
    }
    tr.exit_time = tr.t.back();
    return tr;
}

std::string trajectory_csv(const Trajectory& tr) {
    std::ostringstream os;
    const size_t d = tr.x.empty() ? 1 : tr.x.front().size();
    os << (d == 1 ? "t,y\n" : "t,y,z\n");
    for (size_t i = 0; i < tr.t.size(); ++i) {
        os << fmt9(tr.t[i]);
        for (double v : tr.x[i]) os << ',' << fmt9(v);
        os << '\n';
    }
    return os.str();
}

namespace {

std::vector<std::string> predicted_stable(const std::string& label) {
    if (label == "DR-1") return {"Y1", "Y2", "Y3", "Y4"};
    if (label == "DR-2") return {"Y3", "Y4"};
    if (label == "DR-R1") return {"Y5", "Y6", "Y7", "Y8"};
    if (label == "DR-R3") return {"Y1", "Y2"};
    return {};
}

}  // namespace

ProbeResult attractor_probe(const ReducedSystem& sys, int n_rays, double t_end, double dt) {
    if (sys.kind != TransitionKind::DoubleReal) throw Error(ErrorCode::Validation, "attractor_probe needs a double-real system");
    if (n_rays < 1) throw Error(ErrorCode::Validation, "n_rays must be positive");
    ProbeResult res;
    res.n_rays = n_rays;
    const auto eq = equilibria(sys);
    if (sys.beta < 0) {
        res.scenario = "subcritical";
        res.predicted = {"0"};
    } else {
        res.scenario = classify_double(sys.gamma).label;
        res.predicted = predicted_stable(res.scenario);
    }
    double scale = 0.0;
    for (const auto& p : eq.points)
        if (p.name != "0") {
            const double r = std::hypot(p.x[0], p.x[1]);
            scale = scale == 0.0 ? r : std::min(scale, r);
        }
    if (scale == 0.0) scale = std::sqrt(std::abs(sys.beta / sys.gamma[0]));
    if (scale == 0.0) scale = 1.0;
    const double bmag = std::max(std::abs(sys.beta), 1e-12);
    if (t_end <= 0) t_end = 150.0 / bmag;
    if (dt <= 0) {
        double lmax = bmag;
        for (const auto& p : eq.points)
            for (const auto& ev : p.eigenvalues) lmax = std::max(lmax, std::abs(ev));
        dt = std::min(0.02 / bmag, 0.5 / lmax);
    }
    const double r0 = 1e-3 * scale;
    std::set<std::string> reached;
    for (int i = 0; i < n_rays; ++i) {
        const double th = 2.0 * kPi * (i + 0.5) / n_rays;
        const auto tr = integrate(sys, {r0 * std::cos(th), r0 * std::sin(th)}, t_end, dt, 1 << 30);
        std::string hit;
        if (!tr.blow_up) {
            const auto& xf = tr.x.back();
            for (const auto& p : eq.points) {
                const double dist = std::hypot(xf[0] - p.x[0], xf[1] - p.x[1]);
                if (dist <= 1e-4 * scale) hit = p.name;
            }
        }
        if (hit.empty()) res.inconclusive = true;
        else reached.insert(hit);
        res.ray_limit.push_back(hit);
    }
    res.limits.assign(reached.begin(), reached.end());
    std::vector<std::string> pred = res.predicted;
    std::sort(pred.begin(), pred.end());
    res.matches = !res.inconclusive && res.limits == pred;
    return res;
}

double hopf_radius_printed(double sigma, double a) { return std::sqrt(4.0 * sigma / (-kPi * a)); }

double hopf_radius_averaged(double sigma, double a) { return std::sqrt(-8.0 * sigma / a); }

double hopf_radius_measured(const ReducedSystem& sys, double t_end) {
    if (sys.kind != TransitionKind::ComplexPair) throw Error(ErrorCode::Validation, "hopf_radius_measured needs a Hopf system");
    const double a = hopf_a_number(sys.hopf);
    if (!(sys.sigma > 0 && a < 0)) throw Error(ErrorCode::Validation, "no stable periodic orbit (needs sigma > 0, a < 0)");
    const double r_ref = hopf_radius_averaged(sys.sigma, a);
    if (t_end <= 0) t_end = 60.0 / sys.sigma;
    const double dt = 0.01 / std::max({std::abs(sys.sigma), std::abs(sys.rho), 1.0});
    const double period = 2.0 * kPi / std::abs(sys.rho);
    const auto head = integrate(sys, {0.1 * r_ref, 0.0}, std::max(t_end - period, 0.0), dt, 1 << 30);
    if (head.blow_up) throw Error(ErrorCode::BlowUp, "Hopf trajectory diverged");
    const auto tr = integrate(sys, head.x.back(), period, dt);
    if (tr.blow_up) throw Error(ErrorCode::BlowUp, "Hopf trajectory diverged");
    double sum = 0.0, wsum = 0.0;
    for (size_t i = 1; i < tr.t.size(); ++i) {
        const double h = tr.t[i] - tr.t[i - 1];
        sum += h * std::hypot(tr.x[i][0], tr.x[i][1]);
        wsum += h;
    }
    return sum / wsum;
}

}  // namespace rmc
