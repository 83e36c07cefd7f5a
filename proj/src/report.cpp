#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "format.hpp"
#include "reduced.hpp"

namespace rmc {

Json num(double v) {
    if (!std::isfinite(v)) return nullptr;
    return round9(v);
}

std::string dump_report(const Json& j) { return j.dump(2) + "\n"; }

namespace {

Json cnum(cplx z) { return Json::array({num(z.real()), num(z.imag())}); }

Json idx_json(const ModeIndex& m) { return Json::array({m.j, m.k, m.l}); }

Json vec_json(const EigvecCoeffs& v) {
    Json j;
    j["u1"] = cnum(v.u1);
    j["u2"] = cnum(v.u2);
    j["u3"] = cnum(v.u3);
    j["theta"] = cnum(v.theta);
    return j;
}

template <size_t N>
Json arr_json(const std::array<double, N>& a) {
    Json j = Json::array();
    for (double v : a) j.push_back(num(v));
    return j;
}

Json scenario_json(const Scenario& s) {
    Json j;
    j["label"] = s.label;
    j["summary"] = s.summary;
    j["equilibrium_count"] = s.equilibrium_count;
    return j;
}

Json equilibria_json(const EquilibriumSet& set) {
    Json pts = Json::array();
    for (const auto& e : set.points) {
        Json p;
        p["name"] = e.name;
        Json x = Json::array();
        for (double v : e.x) x.push_back(num(v));
        p["x"] = x;
        Json ev = Json::array();
        for (cplx z : e.eigenvalues) ev.push_back(cnum(z));
        p["eigenvalues"] = ev;
        p["stability"] = e.stability;
        pts.push_back(p);
    }
    return pts;
}

Json strings_json(const std::vector<std::string>& v) {
    Json j = Json::array();
    for (const auto& s : v) j.push_back(s);
    return j;
}

cplx critical_beta(const Params& p, const ModeIndex& J) { return mode_spectrum(p, J).branches.at(0).beta; }

// Typed access to config values; every failure is a Validation error naming the key.
const Json* find_key(const Json& obj, const std::string& key) {
    if (!obj.is_object()) return nullptr;
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

double get_num(const Json& obj, const std::string& key, double def, const std::string& where) {
    const Json* v = find_key(obj, key);
    if (!v || v->is_null()) return def;
    if (!v->is_number()) throw Error(ErrorCode::Validation, where + "." + key + " must be a number");
    return v->get<double>();
}

int get_int(const Json& obj, const std::string& key, int def, const std::string& where) {
    const Json* v = find_key(obj, key);
    if (!v || v->is_null()) return def;
    if (!v->is_number_integer()) throw Error(ErrorCode::Validation, where + "." + key + " must be an integer");
    return v->get<int>();
}

std::string get_str(const Json& obj, const std::string& key, const std::string& def, const std::string& where) {
    const Json* v = find_key(obj, key);
    if (!v || v->is_null()) return def;
    if (!v->is_string()) throw Error(ErrorCode::Validation, where + "." + key + " must be a string");
    return v->get<std::string>();
}

std::array<int, 3> get_int3(const Json& obj, const std::string& key, std::array<int, 3> def, const std::string& where) {
    const Json* v = find_key(obj, key);
    if (!v || v->is_null()) return def;
    if (!v->is_array() || v->size() != 3) throw Error(ErrorCode::Validation, where + "." + key + " must be an array of 3 integers");
    std::array<int, 3> out{};
    for (int i = 0; i < 3; ++i) {
        if (!(*v)[i].is_number_integer()) throw Error(ErrorCode::Validation, where + "." + key + " must be an array of 3 integers");
        out[i] = (*v)[i].get<int>();
    }
    return out;
}

std::vector<double> get_axis(const Json& obj, const std::string& key, const std::string& where) {
    const Json* v = find_key(obj, key);
    const std::string name = where + "." + key;
    if (!v) throw Error(ErrorCode::Validation, name + " is required");
    std::vector<double> out;
    if (v->is_array()) {
        for (const auto& x : *v) {
            if (!x.is_number()) throw Error(ErrorCode::Validation, name + " must hold numbers");
            out.push_back(x.get<double>());
        }
    } else if (v->is_object()) {
        const double a = get_num(*v, "start", NAN, name), b = get_num(*v, "stop", NAN, name);
        const int n = get_int(*v, "count", 0, name);
        if (!std::isfinite(a) || !std::isfinite(b) || n < 1) throw Error(ErrorCode::Validation, name + " needs start, stop and count >= 1");
        for (int i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
    } else {
        throw Error(ErrorCode::Validation, name + " must be an array or {start, stop, count}");
    }
    if (out.empty()) throw Error(ErrorCode::Validation, name + " is empty");
    return out;
}

void check_keys(const Json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (obj.is_null()) return;
    if (!obj.is_object()) throw Error(ErrorCode::Validation, where + " must be an object");
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key())) throw Error(ErrorCode::Validation, "unknown key " + where + "." + it.key());
}

SearchBounds search_bounds(const Json& block, const std::string& where, const std::string& key = "bounds") {
    const auto b = get_int3(block, key, {8, 8, 2}, where);
    if (b[0] < 1 || b[1] < 0 || b[2] < 1) throw Error(ErrorCode::Validation, where + "." + key + " must be positive");
    return {b[0], b[1], b[2]};
}

Params config_params(const Json& cfg) {
    Json merged = Json::object();
    if (const Json* block = find_key(cfg, "params")) {
        if (!block->is_object()) throw Error(ErrorCode::Validation, "params must be an object");
        merged = *block;
    }
    for (const char* k : {"Ta", "Q", "Pr", "L1", "L2", "Ra"})
        if (const Json* v = find_key(cfg, k)) merged[k] = *v;
    return params_from_json(merged);
}

CriticalReport critical_of(const Params& p, const SearchBounds& sb) {
    CriticalReport rep = critical_search(p, sb);
    if (!rep.non_generic) rep.pes_ok = pes_check(rep).ok;
    return rep;
}

const Json& block_of(const Json& cfg, const std::string& name) {
    static const Json empty = Json::object();
    const Json* b = find_key(cfg, name);
    return b && !b->is_null() ? *b : empty;
}

}  // namespace

Json params_json(const Params& p) {
    Json j;
    j["Ta"] = num(p.Ta);
    j["Q"] = num(p.Q);
    j["Pr"] = num(p.Pr);
    j["L1"] = num(p.L1);
    j["L2"] = num(p.L2);
    if (p.Ra) j["Ra"] = num(*p.Ra);
    return j;
}

Params params_from_json(const Json& j) {
    if (!j.is_object()) throw Error(ErrorCode::Validation, "params must be an object");
    check_keys(j, {"Ta", "Q", "Pr", "L1", "L2", "Ra"}, "params");
    for (const char* k : {"Ta", "Q", "Pr", "L1", "L2"})
        if (!find_key(j, k)) throw Error(ErrorCode::Validation, std::string("params.") + k + " is required");
    std::optional<double> ra;
    if (const Json* v = find_key(j, "Ra"); v && !v->is_null()) ra = get_num(j, "Ra", 0.0, "params");
    return make_params(get_num(j, "Ta", 0, "params"), get_num(j, "Q", 0, "params"), get_num(j, "Pr", 0, "params"),
                       get_num(j, "L1", 0, "params"), get_num(j, "L2", 0, "params"), ra);
}

Json critical_json(const CriticalReport& rep, bool pes_ok) {
    Json j;
    j["params"] = params_json(rep.params);
    j["ra_c1"] = num(rep.ra_c1);
    j["ra_c2"] = num(rep.ra_c2);
    j["ra_c"] = num(rep.ra_c);
    Json X = Json::array();
    for (const auto& m : rep.X) X.push_back(idx_json(m));
    j["X"] = X;
    j["kind"] = rep.non_generic ? std::string("NonGeneric") : std::string(kind_name(rep.kind));
    j["multiplicity"] = rep.multiplicity;
    if (rep.kind == TransitionKind::ComplexPair && rep.hopf_rho) j["hopf_rho"] = num(*rep.hopf_rho);
    j["pes_ok"] = pes_ok;
    const auto& b = rep.search_bounds_used;
    j["search_bounds_used"] = Json::array({b.jmax, b.kmax, b.lmax});
    if (rep.non_generic) j["non_generic_reason"] = rep.non_generic_reason;
    return j;
}

double default_eval_ra(const CriticalReport& rep) { return rep.ra_c + 1.0; }

FieldNumbers transition_numbers(const CriticalReport& rep) {
    if (rep.non_generic) throw Error(ErrorCode::NonGeneric, "non-generic criticality: " + rep.non_generic_reason);
    const Params pc = rep.params.with_ra(rep.ra_c);
    FieldNumbers n;
    switch (rep.kind) {
        case TransitionKind::SimpleReal: n.delta = delta_number(pc, rep.X.at(0), false).delta; break;
        case TransitionKind::ComplexPair: n.a = hopf_number(pc, rep.X.at(0)).a_number; break;
        case TransitionKind::DoubleReal: n.gamma = gamma_numbers(pc, rep.X.at(0)).gammas; break;
    }
    return n;
}

Json transition_report(const CriticalReport& rep, double ra_eval, int probe_rays) {
    if (rep.non_generic) throw Error(ErrorCode::NonGeneric, "non-generic criticality: " + rep.non_generic_reason);
    const Params pc = rep.params.with_ra(rep.ra_c);
    const Params pe = rep.params.with_ra(ra_eval);
    Json j;
    j["params"] = params_json(rep.params);
    j["critical"] = critical_json(rep, rep.pes_ok);
    j["kind"] = kind_name(rep.kind);
    j["ra_eval"] = num(ra_eval);
    Json numbers, worksheet;
    if (rep.kind == TransitionKind::SimpleReal) {
        const DeltaWorksheet w = delta_number(pc, rep.X.at(0));
        const Scenario s = classify_simple(w.delta);
        numbers["delta"] = num(w.delta);
        numbers["delta_quadrature"] = w.delta_quadrature ? num(*w.delta_quadrature) : Json(nullptr);
        j["numbers"] = numbers;
        j["scenario"] = scenario_json(s);
        const double beta = critical_beta(pe, rep.X[0]).real();
        j["beta_eval"] = num(beta);
        j["equilibria"] = equilibria_json(equilibria(build_simple(beta, w.delta)));
        worksheet["J0"] = idx_json(w.J0);
        worksheet["ra"] = num(w.ra);
        worksheet["beta"] = num(w.beta);
        worksheet["eigenvector"] = vec_json(w.vec);
        worksheet["adjoint"] = vec_json(w.adj);
        worksheet["Phi1"] = num(w.phi1);
        worksheet["Phi2"] = num(w.phi2);
        worksheet["denominator"] = num(w.denom);
    } else if (rep.kind == TransitionKind::ComplexPair) {
        const HopfWorksheet w = hopf_number(pc, rep.X.at(0));
        const Scenario s = classify_hopf(w.a_number);
        const cplx be = critical_beta(pe, rep.X[0]);
        const double sigma = be.real(), rho = std::abs(be.imag());
        numbers["a"] = num(w.a_number);
        numbers["rho"] = num(w.rho);
        numbers["period"] = num(2.0 * kPi / w.rho);
        numbers["period_at_ra_eval"] = num(2.0 * kPi / rho);
        j["numbers"] = numbers;
        j["scenario"] = scenario_json(s);
        Json lc;
        lc["sigma"] = num(sigma);
        lc["rho"] = num(rho);
        lc["stable"] = w.a_number < 0;
        if (sigma > 0 && w.a_number < 0) {
            const ReducedSystem sys = build_hopf(sigma, rho, w.coeffs);
            lc["radius_printed_law"] = num(hopf_radius_printed(sigma, w.a_number));
            lc["radius_averaged"] = num(hopf_radius_averaged(sigma, w.a_number));
            lc["radius_measured"] = num(hopf_radius_measured(sys));
        }
        j["limit_cycle"] = lc;
        worksheet["J1"] = idx_json(w.J1);
        worksheet["ra"] = num(w.ra);
        worksheet["sigma"] = num(w.sigma);
        worksheet["rho"] = num(w.rho);
        worksheet["eigenvector"] = vec_json(w.vec);
        worksheet["adjoint"] = vec_json(w.adj);
        worksheet["alpha_mix"] = num(w.alpha_mix);
        worksheet["A_printed"] = arr_json(w.A_printed);
        worksheet["A_corrected"] = arr_json(w.A_corrected);
        worksheet["A_quadrature"] = arr_json(w.A_quadrature);
        worksheet["C_printed"] = arr_json(w.C_printed);
        worksheet["C_displays"] = arr_json(w.C_displays);
        worksheet["C_displays_fixed"] = arr_json(w.C_displays_fixed);
        worksheet["C_exact"] = arr_json(w.C_exact);
        Json routes = Json::array();
        for (const auto& r : w.routes) {
            Json rj;
            rj["name"] = r.name;
            rj["coefficients"] = arr_json(r.coeffs);
            rj["a"] = num(r.a_number);
            routes.push_back(rj);
        }
        worksheet["routes"] = routes;
        worksheet["adopted_route"] = w.adopted_route;
        worksheet["coefficients"] = arr_json(w.coeffs);
        worksheet["y3_coefficients"] = Json::array({num(w.y3_x), num(w.y3_y)});
        worksheet["notes"] = strings_json(w.notes);
    } else {
        const GammaWorksheet w = gamma_numbers(pc, rep.X.at(0));
        const Scenario s = classify_double(w.gammas);
        numbers["gammas"] = arr_json(w.gammas);
        j["numbers"] = numbers;
        j["scenario"] = scenario_json(s);
        const double beta = critical_beta(pe, rep.X[0]).real();
        j["beta_eval"] = num(beta);
        const ReducedSystem sys = build_double(beta, w.gammas);
        const EquilibriumSet eq = equilibria(sys);
        j["equilibria"] = equilibria_json(eq);
        if (beta > 0 && probe_rays > 0) {
            const ProbeResult pr = attractor_probe(sys, probe_rays);
            Json pj;
            pj["rays"] = pr.n_rays;
            pj["limits"] = strings_json(pr.limits);
            pj["predicted"] = strings_json(pr.predicted);
            pj["matches"] = pr.matches;
            pj["inconclusive"] = pr.inconclusive;
            j["probe"] = pj;
        }
        worksheet["J2"] = idx_json(w.J2);
        worksheet["J3"] = idx_json(w.J3);
        worksheet["ra"] = num(w.ra);
        Json K = Json::array();
        for (const auto& m : w.K) K.push_back(idx_json(m));
        worksheet["K"] = K;
        worksheet["P"] = Json::array({num(w.P1), num(w.P2), num(w.P1t), num(w.P2t)});
        worksheet["q"] = num(w.q);
        worksheet["G_K1_K5"] = Json::array({num(w.GK1), num(w.GK2), num(w.GK3), num(w.GK4), num(w.GK5)});
        Json g6 = Json::array(), g7 = Json::array();
        for (int s2 = 0; s2 < 3; ++s2) {
            g6.push_back(cnum(w.GK6[s2]));
            g7.push_back(cnum(w.GK7[s2]));
        }
        worksheet["G_K6"] = g6;
        worksheet["G_K7"] = g7;
        Json b6 = Json::array(), b7 = Json::array();
        for (int s2 = 0; s2 < 3; ++s2) {
            b6.push_back(cnum(w.K6_branches[s2].beta));
            b7.push_back(cnum(w.K7_branches[s2].beta));
        }
        worksheet["K6_eigenvalues"] = b6;
        worksheet["K7_eigenvalues"] = b7;
        worksheet["complex_sub_mode"] = w.complex_sub_mode;
        worksheet["selected_case"] = w.selected_case;
        worksheet["gammas_case_i"] = arr_json(w.gammas_case_i);
        worksheet["case_i_imaginary"] = num(w.case_i_imag);
        worksheet["gammas_case_ii_literal"] = w.gammas_case_ii_literal ? arr_json(*w.gammas_case_ii_literal) : Json(nullptr);
        worksheet["gammas_case_ii_consistent"] = w.gammas_case_ii_consistent ? arr_json(*w.gammas_case_ii_consistent) : Json(nullptr);
        worksheet["gammas_quadrature"] = w.gammas_quadrature ? arr_json(*w.gammas_quadrature) : Json(nullptr);
        worksheet["adopted_route"] = w.adopted_route;
    }
    j["worksheet"] = worksheet;
    return j;
}

Json oracle_json(const OracleCheck& c) {
    Json j;
    j["name"] = c.name;
    j["predicted"] = num(c.predicted);
    j["measured"] = num(c.measured);
    j["relative_error"] = num(c.relative_error);
    j["tolerance"] = num(c.tolerance);
    j["verdict"] = c.verdict;
    j["detail"] = c.detail;
    return j;
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {"params", "Ta", "Q", "Pr", "L1", "L2", "Ra", "out", "threads",
                                                  "critical", "transition", "sweep", "fields", "oracle"};
    return keys;
}

std::vector<Output> run_command(const std::string& command, const Json& cfg) {
    if (!cfg.is_object()) throw Error(ErrorCode::Validation, "config must be a JSON object");
    check_keys(cfg, std::set<std::string>(config_keys().begin(), config_keys().end()), "config");
    const int threads = get_int(cfg, "threads", 1, "config");
    if (threads < 1) throw Error(ErrorCode::Validation, "config.threads must be >= 1");

    if (command == "sweep") {
        const Json& b = block_of(cfg, "sweep");
        check_keys(b, {"plane", "axis1", "axis2", "bounds"}, "sweep");
        SweepSpec spec;
        const std::string plane = get_str(b, "plane", "TaPr", "sweep");
        if (plane == "TaPr") spec.plane = SweepPlane::TaPr;
        else if (plane == "L1L2") spec.plane = SweepPlane::L1L2;
        else throw Error(ErrorCode::Validation, "sweep.plane must be TaPr or L1L2");
        spec.axis1 = get_axis(b, "axis1", "sweep");
        spec.axis2 = get_axis(b, "axis2", "sweep");
        spec.fixed = config_params(cfg);
        spec.bounds = search_bounds(b, "sweep");
        return {{"sweep.csv", sweep_csv(sweep(spec, threads))}};
    }

    const Params p = config_params(cfg);
    if (command == "critical") {
        const Json& b = block_of(cfg, "critical");
        check_keys(b, {"bounds"}, "critical");
        const CriticalReport rep = critical_of(p, search_bounds(b, "critical"));
        return {{"critical.json", dump_report(critical_json(rep, rep.pes_ok))}};
    }
    if (command == "transition") {
        const Json& b = block_of(cfg, "transition");
        check_keys(b, {"bounds", "probe_rays"}, "transition");
        const CriticalReport rep = critical_of(p, search_bounds(b, "transition"));
        const double ra_eval = p.Ra ? *p.Ra : default_eval_ra(rep);
        const int rays = get_int(b, "probe_rays", 64, "transition");
        return {{"transition.json", dump_report(transition_report(rep, ra_eval, rays))}};
    }
    if (command == "fields") {
        const Json& b = block_of(cfg, "fields");
        check_keys(b, {"bounds", "states", "snapshots", "grid", "format"}, "fields");
        const CriticalReport rep = critical_of(p, search_bounds(b, "fields"));
        if (rep.non_generic) throw Error(ErrorCode::NonGeneric, "non-generic criticality: " + rep.non_generic_reason);
        const Params pe = rep.params.with_ra(p.Ra ? *p.Ra : default_eval_ra(rep));
        const auto gs = get_int3(b, "grid", {64, 64, 33}, "fields");
        if (gs[0] < 1 || gs[1] < 1 || gs[2] < 2) throw Error(ErrorCode::Validation, "fields.grid must be at least [1,1,2]");
        const GridSpec g{gs[0], gs[1], gs[2]};
        const std::string fmt = get_str(b, "format", "csv", "fields");
        if (fmt != "csv" && fmt != "json") throw Error(ErrorCode::Validation, "fields.format must be csv or json");
        std::vector<int> states;
        if (const Json* s = find_key(b, "states")) {
            if (!s->is_array()) throw Error(ErrorCode::Validation, "fields.states must be an array of integers");
            for (const auto& v : *s) {
                if (!v.is_number_integer()) throw Error(ErrorCode::Validation, "fields.states must be an array of integers");
                states.push_back(v.get<int>());
            }
        } else if (rep.kind != TransitionKind::ComplexPair) {
            states = {1};
        }
        const int snapshots = get_int(b, "snapshots", rep.kind == TransitionKind::ComplexPair ? 4 : 0, "fields");
        if (snapshots < 0) throw Error(ErrorCode::Validation, "fields.snapshots must be >= 0");
        const FieldNumbers nums = transition_numbers(rep);
        auto render = [&](const FieldGrid& grid) { return fmt == "csv" ? grid_csv(grid) : grid_json(grid); };
        std::vector<Output> out;
        for (int s : states) out.push_back({"state_" + std::to_string(s) + "." + fmt, render(bifurcated_steady(pe, rep, nums, s, g))});
        if (snapshots > 0) {
            if (rep.kind != TransitionKind::ComplexPair)
                throw Error(ErrorCode::NoSuchState, "periodic snapshots need a complex pair transition");
            const double rho = std::abs(critical_beta(pe, rep.X[0]).imag());
            const double period = 2.0 * kPi / rho;
            for (int i = 0; i < snapshots; ++i)
                out.push_back({"snapshot_" + std::to_string(i) + "." + fmt,
                               render(periodic_snapshot(pe, rep, nums, period * i / snapshots, g))});
        }
        if (out.empty()) throw Error(ErrorCode::Validation, "fields: nothing requested");
        return out;
    }
    if (command == "oracle") {
        const Json& b = block_of(cfg, "oracle");
        check_keys(b, {"bounds", "search_bounds", "checks", "plateau_ra_factor", "period_ra_factor", "decay_ra_factor", "dt",
                       "t_end"},
                   "oracle");
        const CriticalReport rep = critical_of(p, search_bounds(b, "oracle", "search_bounds"));
        if (rep.non_generic) throw Error(ErrorCode::NonGeneric, "non-generic criticality: " + rep.non_generic_reason);
        const auto bb = get_int3(b, "bounds", {8, 8, 4}, "oracle");
        OracleOptions o;
        o.bounds = {bb[0], bb[1], bb[2]};
        o.dt = get_num(b, "dt", 0.0, "oracle");
        o.t_end = get_num(b, "t_end", 0.0, "oracle");
        std::vector<std::string> checks;
        if (const Json* c = find_key(b, "checks")) {
            if (!c->is_array()) throw Error(ErrorCode::Validation, "oracle.checks must be an array of strings");
            for (const auto& v : *c) {
                if (!v.is_string()) throw Error(ErrorCode::Validation, "oracle.checks must be an array of strings");
                checks.push_back(v.get<std::string>());
            }
        } else {
            if (rep.kind == TransitionKind::SimpleReal) checks.push_back("plateau");
            if (rep.kind == TransitionKind::ComplexPair) checks.push_back("period");
            checks.push_back("decay");
        }
        Json report;
        report["params"] = params_json(rep.params);
        report["kind"] = kind_name(rep.kind);
        report["bounds"] = Json::array({bb[0], bb[1], bb[2]});
        Json arr = Json::array();
        for (const auto& name : checks) {
            Json cj;
            if (name == "plateau") {
                o.ra_factor = get_num(b, "plateau_ra_factor", 1.01, "oracle");
                const double delta = delta_number(rep.params.with_ra(rep.ra_c), rep.X.at(0), false).delta;
                cj = oracle_json(oracle_plateau(rep, delta, o));
            } else if (name == "period") {
                o.ra_factor = get_num(b, "period_ra_factor", 1.005, "oracle");
                double radius = 0.0;
                cj = oracle_json(oracle_period(rep, o, &radius));
                cj["radius"] = num(radius);
            } else if (name == "decay") {
                o.ra_factor = get_num(b, "decay_ra_factor", 0.99, "oracle");
                if (!(o.ra_factor < 1.0)) throw Error(ErrorCode::Validation, "oracle.decay_ra_factor must be < 1");
                cj = oracle_json(oracle_decay(rep, o));
            } else {
                throw Error(ErrorCode::Validation, "unknown oracle check " + name);
            }
            arr.push_back(cj);
        }
        report["checks"] = arr;
        return {{"oracle.json", dump_report(report)}};
    }
    throw Error(ErrorCode::Validation, "unknown command " + command);
}

}  // namespace rmc
