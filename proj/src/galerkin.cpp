#include "galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "format.hpp"

namespace rmc {

std::string BasisMode::id() const {
    return std::to_string(idx.j) + "," + std::to_string(idx.k) + "," + std::to_string(idx.l) + "#" + std::to_string(col);
}

int Basis::find(const ModeIndex& idx, int col) const {
    for (size_t b = 0; b < blocks.size(); ++b)
        if (blocks[b].idx == idx) return col < blocks[b].n ? offset[b] + col : -1;
    return -1;
}

int basis_size_formula(const Bounds3& b) {
    const int horizontal = b.jmax * (2 * b.kmax + 1) + b.kmax;
    return horizontal * (3 * b.lmax + 1) + b.lmax;
}

Basis build_basis(const Params& p, const Bounds3& bounds, const std::vector<ModeIndex>& critical) {
    if (bounds.jmax < 0 || bounds.kmax < 0 || bounds.lmax < 1) throw Error(ErrorCode::Validation, "invalid basis bounds");
    for (const auto& c : critical)
        if (std::abs(c.j) > bounds.jmax || std::abs(c.k) > bounds.kmax || c.l > bounds.lmax)
            throw Error(ErrorCode::Validation, "critical mode " + c.str() + " lies outside the basis bounds");
    Basis B;
    B.params = p;
    B.bounds = bounds;
    std::vector<ModeIndex> i1, i2, i3;
    for (int j = 0; j <= bounds.jmax; ++j)
        for (int k = -bounds.kmax; k <= bounds.kmax; ++k) {
            if (j == 0 && k <= 0) continue;
            for (int l = 1; l <= bounds.lmax; ++l) i1.push_back({j, k, l});
            i2.push_back({j, k, 0});
        }
    for (int l = 1; l <= bounds.lmax; ++l) i3.push_back({0, 0, l});
    for (const auto* group : {&i1, &i2, &i3})
        for (const auto& idx : *group) {
            B.offset.push_back(B.size);
            B.blocks.push_back(index_basis(p, idx));
            const IndexBasis& ib = B.blocks.back();
            for (int s = 0; s < ib.n; ++s) {
                BasisMode m;
                m.idx = idx;
                m.col = s;
                m.cls = ib.cls;
                m.beta = ib.beta[s];
                m.pair_re = ib.pair_re[s];
                m.pair_im = ib.pair_im[s];
                B.modes.push_back(m);
            }
            B.size += ib.n;
        }
    return B;
}

GalerkinModel::GalerkinModel(const Basis& basis) : basis_(basis) {
    grid_ = std::make_unique<SpectralGrid>(basis_.params, basis_.bounds, basis_.bounds, basis_.bounds);
}

GalerkinModel::~GalerkinModel() = default;

ModalField GalerkinModel::field_of(const Eigen::VectorXd& c) const {
    ModalField f;
    for (size_t b = 0; b < basis_.blocks.size(); ++b) {
        const IndexBasis& ib = basis_.blocks[b];
        const Eigen::Vector4d v = ib.V * c.segment(basis_.offset[b], ib.n);
        if (v.cwiseAbs().maxCoeff() == 0.0) continue;
        f.c[ib.idx] = {v(0), v(1), v(2), v(3)};
    }
    return f;
}

Eigen::VectorXd GalerkinModel::nonlinear(const Eigen::VectorXd& c) const {
    if (c.size() != basis_.size) throw Error(ErrorCode::Validation, "state dimension does not match the basis");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(basis_.size);
    const ModalField f = field_of(c);
    if (f.c.empty()) return out;
    const PhysField ph = grid_->synth(f);
    const ModalField F = grid_->advect(ph, ph);
    for (size_t b = 0; b < basis_.blocks.size(); ++b) {
        const IndexBasis& ib = basis_.blocks[b];
        auto it = F.c.find(ib.idx);
        if (it == F.c.end()) continue;
        out.segment(basis_.offset[b], ib.n) = ib.project(it->second);
    }
    return out;
}

Eigen::VectorXd GalerkinModel::linear(const Eigen::VectorXd& c) const {
    Eigen::VectorXd out(basis_.size);
    for (size_t b = 0; b < basis_.blocks.size(); ++b) {
        const IndexBasis& ib = basis_.blocks[b];
        out.segment(basis_.offset[b], ib.n) = ib.Lambda * c.segment(basis_.offset[b], ib.n);
    }
    return out;
}

namespace {

// phi1(z) = (e^z - 1)/z and phi2(z) = (e^z - 1 - z)/z^2.
void phi_functions(cplx z, cplx& p1, cplx& p2) {
    if (std::abs(z) < 1e-3) {
        p1 = 1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0));
        p2 = 0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z / 120.0));
        return;
    }
    const cplx e = std::exp(z);
    p1 = (e - 1.0) / z;
    p2 = (e - 1.0 - z) / (z * z);
}

struct Unit {
    int re = 0;
    int im = -1;  // second entry of a pair
    cplx E, F1, F2;
};

}  // namespace

GalerkinRun evolve(const GalerkinModel& model, const Eigen::VectorXd& c0, const EvolveOptions& opt) {
    const Basis& B = model.basis();
    if (c0.size() != B.size) throw Error(ErrorCode::Validation, "initial state dimension does not match the basis");
    if (!(opt.dt > 0) || !(opt.t_end >= 0)) throw Error(ErrorCode::Validation, "need dt > 0 and t_end >= 0");
    for (int r : opt.record)
        if (r < 0 || r >= B.size) throw Error(ErrorCode::Validation, "recorded entry out of range");
    const double h = opt.dt;
    std::vector<Unit> units;
    for (int i = 0; i < B.size; ++i) {
        const BasisMode& m = B.modes[i];
        if (m.pair_im) continue;
        Unit u;
        u.re = i;
        // A pair (c1, c2) evolves as w = c1 + i c2 with w' = conj(beta) w.
        const cplx lam = m.pair_re ? std::conj(m.beta) : cplx(m.beta.real(), 0.0);
        if (m.pair_re) u.im = i + 1;
        cplx p1, p2;
        phi_functions(lam * h, p1, p2);
        u.E = std::exp(lam * h);
        u.F1 = h * p1;
        u.F2 = h * p2;
        units.push_back(u);
    }
    auto get = [](const Eigen::VectorXd& v, const Unit& u) { return cplx(v(u.re), u.im >= 0 ? v(u.im) : 0.0); };
    auto set = [](Eigen::VectorXd& v, const Unit& u, cplx w) {
        v(u.re) = w.real();
        if (u.im >= 0) v(u.im) = w.imag();
    };

    GalerkinRun run;
    run.recorded = opt.record;
    Eigen::VectorXd c = c0;
    auto sample = [&](double t) {
        run.t.push_back(t);
        std::vector<double> s;
        for (int r : opt.record) s.push_back(c(r));
        run.samples.push_back(std::move(s));
        run.norm.push_back(c.norm());
    };
    sample(0.0);
    const long long n = static_cast<long long>(std::ceil(opt.t_end / h - 1e-9));
    const int every = std::max(opt.sample_every, 1);
    Eigen::VectorXd a(B.size), N0, N1;
    for (long long step = 1; step <= n; ++step) {
        if (opt.nonlinear) N0 = model.nonlinear(c);
        for (const Unit& u : units) {
            cplx w = u.E * get(c, u);
            if (opt.nonlinear) w += u.F1 * get(N0, u);
            set(a, u, w);
        }
        if (opt.nonlinear) {
            N1 = model.nonlinear(a);
            for (const Unit& u : units) set(c, u, get(a, u) + u.F2 * (get(N1, u) - get(N0, u)));
        } else {
            c = a;
        }
        const double t = static_cast<double>(step) * h;
        const double nrm = c.norm();
        if (!(nrm <= 1e6)) {
            run.blow_up = true;
            run.exit_time = t;
            sample(t);
            run.final_state = c;
            return run;
        }
        if (step % every == 0 || step == n) sample(t);
    }
    run.exit_time = run.t.back();
    run.final_state = c;
    return run;
}

std::string run_csv(const GalerkinRun& run, const Basis& basis) {
    std::ostringstream os;
    os << "t,mode_id,re,im\n";
    for (size_t s = 0; s < run.t.size(); ++s)
        for (size_t r = 0; r < run.recorded.size(); ++r) {
            const BasisMode& m = basis.modes[run.recorded[r]];
            if (m.pair_im) {
                // Emitted with its real partner when both are recorded.
                const bool partner = std::find(run.recorded.begin(), run.recorded.end(), run.recorded[r] - 1) != run.recorded.end();
                if (partner) continue;
                os << fmt9(run.t[s]) << ',' << m.id() << ",0," << fmt9(run.samples[s][r]) << '\n';
                continue;
            }
            double im = 0.0;
            if (m.pair_re)
                for (size_t q = 0; q < run.recorded.size(); ++q)
                    if (run.recorded[q] == run.recorded[r] + 1) im = run.samples[s][q];
            os << fmt9(run.t[s]) << ',' << m.id() << ',' << fmt9(run.samples[s][r]) << ',' << fmt9(im) << '\n';
        }
    return os.str();
}

Measurement measure_plateau(const std::vector<double>& t, const std::vector<double>& x, double rel_tol) {
    Measurement m;
    if (t.size() != x.size() || x.size() < 4) {
        m.inconclusive = true;
        m.note = "too few samples";
        return m;
    }
    const size_t start = x.size() - std::max<size_t>(x.size() / 4, 1);
    double sum = 0.0, lo = x[start], hi = x[start];
    for (size_t i = start; i < x.size(); ++i) {
        sum += x[i];
        lo = std::min(lo, x[i]);
        hi = std::max(hi, x[i]);
    }
    m.value = sum / static_cast<double>(x.size() - start);
    m.spread = (hi - lo) / std::max(std::abs(m.value), 1e-300);
    if (m.spread > rel_tol) {
        m.inconclusive = true;
        m.note = "tail is not stationary";
    }
    return m;
}

Measurement measure_period(const std::vector<double>& t, const std::vector<double>& x) {
    Measurement m;
    std::vector<double> cross;
    for (size_t i = 1; i < x.size() && i < t.size(); ++i)
        if (x[i - 1] < 0.0 && x[i] >= 0.0) {
            const double f = -x[i - 1] / (x[i] - x[i - 1]);
            cross.push_back(t[i - 1] + f * (t[i] - t[i - 1]));
        }
    if (cross.size() < 3) {
        m.inconclusive = true;
        m.note = "fewer than three zero up-crossings";
        return m;
    }
    m.value = (cross.back() - cross.front()) / static_cast<double>(cross.size() - 1);
    double var = 0.0;
    for (size_t i = 1; i < cross.size(); ++i) var += std::pow(cross[i] - cross[i - 1] - m.value, 2);
    m.spread = std::sqrt(var / static_cast<double>(cross.size() - 1)) / m.value;
    if (m.spread > 1e-2) {
        m.inconclusive = true;
        m.note = "crossing gaps vary by more than 1%";
    }
    return m;
}

Measurement measure_decay(const std::vector<double>& t, const std::vector<double>& x) {
    Measurement m;
    if (t.size() != x.size() || x.size() < 3) {
        m.inconclusive = true;
        m.note = "too few samples";
        return m;
    }
    double st = 0, sy = 0, stt = 0, sty = 0, syy = 0;
    const double n = static_cast<double>(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        if (!(std::abs(x[i]) > 0)) {
            m.inconclusive = true;
            m.note = "zero amplitude in the fit window";
            return m;
        }
        const double y = std::log(std::abs(x[i]));
        st += t[i];
        sy += y;
        stt += t[i] * t[i];
        sty += t[i] * y;
        syy += y * y;
    }
    const double vt = stt - st * st / n, vy = syy - sy * sy / n, cty = sty - st * sy / n;
    m.value = cty / vt;
    const double r2 = vy > 0 ? cty * cty / (vt * vy) : 1.0;
    m.spread = 1.0 - r2;
    if (r2 < 0.999) {
        m.inconclusive = true;
        m.note = "log amplitude is not linear in time";
    }
    return m;
}

namespace {

OracleCheck finish(OracleCheck c, const Measurement& m) {
    c.measured = m.value;
    c.relative_error = std::abs(m.value - c.predicted) / std::max(std::abs(c.predicted), 1e-300);
    if (m.inconclusive) {
        c.verdict = "inconclusive";
        c.detail = m.note;
    } else {
        c.verdict = c.relative_error <= c.tolerance ? "pass" : "fail";
    }
    return c;
}

}  // namespace

OracleCheck oracle_plateau(const CriticalReport& rep, double delta, const OracleOptions& opt) {
    if (rep.kind != TransitionKind::SimpleReal) throw Error(ErrorCode::Validation, "plateau check needs a simple real transition");
    const ModeIndex J = rep.X.at(0);
    const Params p = rep.params.with_ra(opt.ra_factor * rep.ra_c);
    const Basis B = build_basis(p, opt.bounds, {J});
    const GalerkinModel model(B);
    const int ic = B.find(J, 0);
    const double beta = B.modes[ic].beta.real();
    OracleCheck c;
    c.name = "plateau_amplitude";
    c.tolerance = 0.10;
    if (!(beta > 0) || !(delta < 0)) throw Error(ErrorCode::Validation, "plateau check needs beta > 0 and delta < 0");
    c.predicted = std::sqrt(beta / -delta);
    Eigen::VectorXd c0 = Eigen::VectorXd::Zero(B.size);
    c0(ic) = 0.1 * c.predicted;
    EvolveOptions eo;
    eo.dt = opt.dt > 0 ? opt.dt : 0.01;
    eo.t_end = opt.t_end > 0 ? opt.t_end : 40.0 / beta;
    eo.sample_every = std::max(1, static_cast<int>(0.05 / eo.dt));
    eo.record = {ic};
    const auto run = evolve(model, c0, eo);
    if (run.blow_up) return finish(c, {0.0, 0.0, true, "blow-up"});
    std::vector<double> amp;
    for (const auto& s : run.samples) amp.push_back(std::abs(s[0]));
    c.detail = "beta=" + fmt9(beta) + " basis=" + std::to_string(B.size);
    return finish(c, measure_plateau(run.t, amp));
}

OracleCheck oracle_period(const CriticalReport& rep, const OracleOptions& opt, double* radius_out) {
    if (rep.kind != TransitionKind::ComplexPair || !rep.hopf_rho)
        throw Error(ErrorCode::Validation, "period check needs a complex pair transition");
    const ModeIndex J = rep.X.at(0);
    const Params p = rep.params.with_ra(opt.ra_factor * rep.ra_c);
    const Basis B = build_basis(p, opt.bounds, {J});
    const GalerkinModel model(B);
    const int ir = B.find(J, 0), ii = B.find(J, 1);
    if (!B.modes[ir].pair_re) throw Error(ErrorCode::Validation, "critical mode is not a complex pair at this Ra");
    const double sigma = B.modes[ir].beta.real();
    OracleCheck c;
    c.name = "period";
    c.tolerance = 0.05;
    c.predicted = 2.0 * kPi / *rep.hopf_rho;
    Eigen::VectorXd c0 = Eigen::VectorXd::Zero(B.size);
    c0(ir) = 1.0;
    EvolveOptions eo;
    eo.dt = opt.dt > 0 ? opt.dt : c.predicted / 150.0;
    eo.t_end = opt.t_end > 0 ? opt.t_end : 4.0 / std::max(std::abs(sigma), 1e-3);
    eo.record = {ir, ii};
    const auto run = evolve(model, c0, eo);
    if (run.blow_up) return finish(c, {0.0, 0.0, true, "blow-up"});
    std::vector<double> tt, xr;
    const double t0 = run.t.back() / 2.0;
    for (size_t i = 0; i < run.t.size(); ++i)
        if (run.t[i] >= t0) {
            tt.push_back(run.t[i]);
            xr.push_back(run.samples[i][0]);
        }
    if (radius_out) {
        double sum = 0.0, w = 0.0;
        for (size_t i = 1; i < run.t.size(); ++i) {
            if (run.t[i] < run.t.back() - c.predicted) continue;
            const double h = run.t[i] - run.t[i - 1];
            sum += h * std::hypot(run.samples[i][0], run.samples[i][1]);
            w += h;
        }
        *radius_out = w > 0 ? sum / w : 0.0;
    }
    c.detail = "sigma=" + fmt9(sigma) + " basis=" + std::to_string(B.size);
    return finish(c, measure_period(tt, xr));
}

OracleCheck oracle_decay(const CriticalReport& rep, const OracleOptions& opt) {
    const ModeIndex J = rep.X.at(0);
    const double factor = opt.ra_factor < 1.0 ? opt.ra_factor : 0.99;
    const Params p = rep.params.with_ra(factor * rep.ra_c);
    std::vector<ModeIndex> crit = rep.X;
    const Basis B = build_basis(p, opt.bounds, crit);
    const GalerkinModel model(B);
    const int i0 = B.find(J, 0);
    const bool pair = B.modes[i0].pair_re;
    const double rate = B.modes[i0].beta.real();
    if (!(rate < 0)) throw Error(ErrorCode::Validation, "decay check needs a stable critical mode");
    OracleCheck c;
    c.name = "decay_rate";
    c.tolerance = 0.02;
    c.predicted = rate;
    // Small random state with a fixed seed, dominated by the critical mode.
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::VectorXd c0(B.size);
    for (int i = 0; i < B.size; ++i) c0(i) = 1e-6 * u(rng);
    c0(i0) = 1e-3;
    EvolveOptions eo;
    eo.dt = opt.dt > 0 ? opt.dt : std::min(0.01, 0.05 / std::max(std::abs(B.modes[i0].beta), 1.0));
    eo.t_end = opt.t_end > 0 ? opt.t_end : 20.0 / std::abs(rate);
    eo.record = pair ? std::vector<int>{i0, i0 + 1} : std::vector<int>{i0};
    const auto run = evolve(model, c0, eo);
    if (run.blow_up) return finish(c, {0.0, 0.0, true, "blow-up"});
    std::vector<double> tt, amp;
    for (size_t i = 0; i < run.t.size(); ++i)
        if (run.t[i] >= run.t.back() / 2.0) {
            tt.push_back(run.t[i]);
            amp.push_back(pair ? std::hypot(run.samples[i][0], run.samples[i][1]) : run.samples[i][0]);
        }
    c.detail = "Ra=" + fmt9(p.ra()) + " basis=" + std::to_string(B.size);
    return finish(c, measure_decay(tt, amp));
}

}  // namespace rmc
