#include "criticality.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <sstream>
#include <thread>

#include "format.hpp"

namespace rmc {

const char* kind_name(TransitionKind k) {
    switch (k) {
        case TransitionKind::SimpleReal: return "SimpleReal";
        case TransitionKind::ComplexPair: return "ComplexPair";
        case TransitionKind::DoubleReal: return "DoubleReal";
    }
    return "?";
}

namespace {

void require_i1(const ModeIndex& idx) {
    if (index_class(idx) != IndexClass::I1)
        throw Error(ErrorCode::InvalidIndex, "expected an I1 index, got " + idx.str());
}

// Half-lattice I1 enumeration inside a box; visits each index once.
template <class F>
void for_each_i1(const SearchBounds& b, F&& fn) {
    for (int j = 0; j <= b.jmax; ++j)
        for (int k = -b.kmax; k <= b.kmax; ++k) {
            if (j == 0 && k <= 0) continue;
            for (int l = 1; l <= b.lmax; ++l) fn(ModeIndex{j, k, l});
        }
}

struct Extremum {
    double value = std::numeric_limits<double>::infinity();
    ModeIndex idx;
    bool found = false;
    void offer(double v, const ModeIndex& i) {
        if (v < value) {
            value = v;
            idx = i;
            found = true;
        }
    }
};

struct ShellMinima {
    double j = std::numeric_limits<double>::infinity();
    double k = std::numeric_limits<double>::infinity();
    double l = std::numeric_limits<double>::infinity();
};

}  // namespace

double f_of(const Params& p, const ModeIndex& idx) {
    require_i1(idx);
    const auto g = geometry(p, idx);
    const double r2 = g.r_sq, r4 = r2 * r2, s = r4 + g.qk;
    return (r2 * s * s + p.Ta * r4 * g.kz * g.kz) / (g.alpha_jk_sq * s);
}

std::optional<double> g_of(const Params& p, const ModeIndex& idx) {
    require_i1(idx);
    const auto g = geometry(p, idx);
    const double r2 = g.r_sq, r4 = r2 * r2;
    const double B = (1.0 + p.Pr) * r4 + p.Pr * g.qk;
    const double val = 2.0 * (g.qk + r4) / (g.alpha_jk_sq * r2) *
                       (B + p.Pr * p.Pr * p.Ta * r2 * g.kz * g.kz / B);
    const auto c = char_coeffs(p.with_ra(val), idx);
    if (!(c.a1 > 0.0)) return std::nullopt;
    return val;
}

double hopf_frequency(const Params& p, const ModeIndex& idx) {
    const auto gv = g_of(p, idx);
    if (!gv) throw Error(ErrorCode::NoHopf, "no pure imaginary pair for " + idx.str() + " (a1 <= 0 at Ra = g)");
    const auto c = char_coeffs(p.with_ra(*gv), idx);
    return std::sqrt(c.a1 / c.a3);
}

CriticalReport critical_search(const Params& p_in, SearchBounds b) {
    Params p = p_in;
    p.Ra.reset();
    validate(p);
    constexpr int kCapJK = 64, kCapL = 8;
    b.jmax = std::clamp(b.jmax, 1, kCapJK);
    b.kmax = std::clamp(b.kmax, 1, kCapJK);
    b.lmax = std::clamp(b.lmax, 1, kCapL);

    Extremum ef, eg;
    for (;;) {
        ef = {};
        eg = {};
        ShellMinima sf, sg;
        for_each_i1(b, [&](const ModeIndex& idx) {
            const double fv = f_of(p, idx);
            ef.offer(fv, idx);
            const auto gv = g_of(p, idx);
            if (gv) eg.offer(*gv, idx);
            auto shell = [&](ShellMinima& s, double v) {
                if (idx.j == b.jmax) s.j = std::min(s.j, v);
                if (std::abs(idx.k) == b.kmax) s.k = std::min(s.k, v);
                if (idx.l == b.lmax) s.l = std::min(s.l, v);
            };
            shell(sf, fv);
            if (gv) shell(sg, *gv);
        });
        // Either family can only improve beyond the box if its shell falls below 1.5x incumbent.
        const double inc = std::min(ef.value, eg.value);
        auto short_of = [&](double shell_f, double shell_g) {
            return std::min(shell_f, shell_g) < 1.5 * inc;
        };
        const bool grow_j = short_of(sf.j, sg.j), grow_k = short_of(sf.k, sg.k), grow_l = short_of(sf.l, sg.l);
        if (!grow_j && !grow_k && !grow_l) break;
        auto grow = [](int& v, int cap, bool need, const char* name) {
            if (!need) return;
            if (v >= cap)
                throw Error(ErrorCode::SearchFailure,
                            std::string("search box hit the hard cap in ") + name + " without a converged minimum");
            v = std::min(cap, v * 2);
        };
        grow(b.jmax, kCapJK, grow_j, "j");
        grow(b.kmax, kCapJK, grow_k, "k");
        if (grow_l) {
            if (b.lmax >= kCapL)
                throw Error(ErrorCode::SearchFailure, "search box hit the hard cap in l without a converged minimum");
            b.lmax = std::min(kCapL, b.lmax + 1);
        }
    }
    if (!ef.found) throw Error(ErrorCode::SearchFailure, "no I1 index in the search box");

    CriticalReport rep;
    rep.params = p;
    rep.search_bounds_used = b;
    rep.ra_c1 = ef.value;
    rep.argmin_f = ef.idx;
    if (eg.found) {
        rep.ra_c2 = eg.value;
        rep.argmin_g = eg.idx;
    }
    const bool complex_family = eg.found && eg.value < ef.value;
    rep.ra_c = complex_family ? eg.value : ef.value;

    const double tol = 1e-6 * std::abs(rep.ra_c);
    for_each_i1(b, [&](const ModeIndex& idx) {
        if (complex_family) {
            const auto gv = g_of(p, idx);
            if (gv && std::abs(*gv - rep.ra_c) <= tol) rep.X.push_back(idx);
        } else if (std::abs(f_of(p, idx) - rep.ra_c) <= tol) {
            rep.X.push_back(idx);
        }
    });
    std::sort(rep.X.begin(), rep.X.end(), [](const ModeIndex& a, const ModeIndex& c) {
        if (a.j != c.j) return a.j < c.j;
        if (std::abs(a.k) != std::abs(c.k)) return std::abs(a.k) < std::abs(c.k);
        if (a.k != c.k) return a.k > c.k;
        return a.l < c.l;
    });

    // Orbits under the k-reflection; more than one orbit is a non-generic tie.
    std::set<std::tuple<int, int, int>> orbits;
    for (const auto& idx : rep.X) orbits.insert({idx.j, std::abs(idx.k), idx.l});
    const ModeIndex& lead = rep.X.front();
    if (complex_family) {
        rep.kind = TransitionKind::ComplexPair;
        rep.hopf_rho = hopf_frequency(p, lead);
        rep.multiplicity = 2 * static_cast<int>(rep.X.size());
        if (lead.j != 0 && lead.k != 0) {
            rep.non_generic = true;
            rep.non_generic_reason = "critical pair index has j k != 0 (two simultaneous complex pairs)";
        }
    } else {
        rep.kind = (lead.k != 0 && lead.j != 0) ? TransitionKind::DoubleReal : TransitionKind::SimpleReal;
        rep.multiplicity = static_cast<int>(rep.X.size());
    }
    if (orbits.size() > 1) {
        rep.non_generic = true;
        rep.non_generic_reason = "near-tie between distinct critical indices";
    }
    if (eg.found && std::abs(ef.value - eg.value) <= tol) {
        rep.non_generic = true;
        rep.non_generic_reason = "Ra_c1 and Ra_c2 coincide";
    }
    return rep;
}

double sigma_prime_closed(const Params& p, const ModeIndex& idx, double ra) {
    const auto c = char_coeffs(p.with_ra(ra), idx);
    const auto d = char_coeffs_dRa(p, idx);
    const double rho2 = c.a1 / c.a3;
    return (c.a1 * d.a0 - c.a0 * d.a1) / (2.0 * c.a2 * c.a2 * rho2 + 2.0 * c.a1 * c.a1);
}

double sigma_prime_fd(const Params& p, const ModeIndex& idx, double ra, double rel_step) {
    const double h = rel_step * ra;
    auto lead = [&](double r) { return cubic_roots(char_coeffs(p.with_ra(r), idx))[0].real(); };
    return (lead(ra + h) - lead(ra - h)) / (2.0 * h);
}

PesResult pes_check(const CriticalReport& rep) {
    PesResult out;
    const Params p = rep.params.with_ra(rep.ra_c);
    std::set<ModeIndex> crit(rep.X.begin(), rep.X.end());
    std::ostringstream diag;
    bool ok = true;

    // Every non-critical branch in the box must be strictly stable at Ra_c.
    auto consider = [&](const ModeIndex& idx, double re) {
        if (re > out.max_other_real) {
            out.max_other_real = re;
            out.worst_mode = idx;
        }
        if (re >= -1e-8) {
            ok = false;
            diag << "mode " << idx.str() << " has Re beta = " << fmt9(re) << " at Ra_c; ";
        }
    };
    const auto& b = rep.search_bounds_used;
    for_each_i1(b, [&](const ModeIndex& idx) {
        const auto roots = cubic_roots(char_coeffs(p, idx));
        const bool is_crit = crit.count(idx) > 0;
        const size_t skip = is_crit ? (rep.kind == TransitionKind::ComplexPair ? 2 : 1) : 0;
        for (size_t s = skip; s < roots.size(); ++s) consider(idx, roots[s].real());
    });
    // I2 and I3 branches are stable in closed form; include the nearest ones for the record.
    for (int j = 0; j <= b.jmax; ++j)
        for (int k = -b.kmax; k <= b.kmax; ++k) {
            if (j == 0 && k <= 0) continue;
            consider({j, k, 0}, leading_real(p, {j, k, 0}));
        }
    for (int l = 1; l <= b.lmax; ++l) consider({0, 0, l}, leading_real(p, {0, 0, l}));

    const ModeIndex& lead = rep.X.front();
    if (rep.kind == TransitionKind::ComplexPair) {
        out.sigma_prime = sigma_prime_closed(rep.params, lead, rep.ra_c);
        out.sigma_prime_fd = sigma_prime_fd(rep.params, lead, rep.ra_c);
        if (!(*out.sigma_prime > 0.0)) {
            ok = false;
            diag << "sigma'(Ra_c2) = " << fmt9(*out.sigma_prime) << " is not positive; ";
        }
        const double rel = std::abs(*out.sigma_prime - *out.sigma_prime_fd) / std::abs(*out.sigma_prime);
        if (!(rel <= 1e-3)) {
            ok = false;
            diag << "closed form and finite-difference sigma' disagree (rel " << fmt9(rel) << "); ";
        }
    } else {
        out.dRa_a0 = char_coeffs_dRa(rep.params, lead).a0;
        if (!(out.dRa_a0 < 0.0)) {
            ok = false;
            diag << "d a0/dRa is not negative; ";
        }
    }
    out.ok = ok;
    out.diagnostics = diag.str();
    return out;
}

namespace {

std::string relation_of(double c1, double c2) {
    const double tol = 1e-9 * std::max(std::abs(c1), 1.0);
    if (std::isfinite(c2) && std::abs(c1 - c2) <= tol) return "Ra_c1 = Ra_c2";
    return c1 < c2 ? "Ra_c1 < Ra_c2" : "Ra_c2 < Ra_c1";
}

}  // namespace

std::vector<SweepRow> sweep(const SweepSpec& spec, int threads) {
    if (spec.axis1.size() < 2 || spec.axis2.size() < 2)
        throw Error(ErrorCode::Validation, "sweep: each axis needs at least 2 points");
    const size_t n2 = spec.axis2.size();
    const size_t total = spec.axis1.size() * n2;
    std::vector<SweepRow> rows(total);
    auto run_point = [&](size_t i) {
        SweepRow& row = rows[i];
        row.axis1 = spec.axis1[i / n2];
        row.axis2 = spec.axis2[i % n2];
        Params p = spec.fixed;
        p.Ra.reset();
        if (spec.plane == SweepPlane::TaPr) {
            p.Ta = row.axis1;
            p.Pr = row.axis2;
        } else {
            p.L1 = row.axis1;
            p.L2 = row.axis2;
        }
        try {
            validate(p);
            const auto rep = critical_search(p, spec.bounds);
            row.ra_c1 = rep.ra_c1;
            row.ra_c2 = rep.ra_c2;
            row.relation = relation_of(rep.ra_c1, rep.ra_c2);
            row.idx = rep.X.front();
            row.multiplicity = rep.multiplicity;
            row.kind = rep.non_generic ? "NonGeneric" : kind_name(rep.kind);
        } catch (const std::exception& e) {
            row.ra_c1 = row.ra_c2 = std::numeric_limits<double>::quiet_NaN();
            row.relation = "";
            row.kind = std::string("error: ") + e.what();
        }
    };
    threads = std::max(1, threads);
    if (threads == 1) {
        for (size_t i = 0; i < total; ++i) run_point(i);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (size_t i; (i = next.fetch_add(1)) < total;) run_point(i);
            });
        for (auto& th : pool) th.join();
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "axis1,axis2,ra_c1,ra_c2,relation,j,k,l,multiplicity,kind\n";
    for (const auto& r : rows) {
        std::string kind = r.kind;
        std::replace(kind.begin(), kind.end(), ',', ';');
        os << fmt9(r.axis1) << ',' << fmt9(r.axis2) << ',' << fmt9(r.ra_c1) << ',' << fmt9(r.ra_c2) << ','
           << r.relation << ',' << r.idx.j << ',' << r.idx.k << ',' << r.idx.l << ',' << r.multiplicity << ','
           << kind << '\n';
    }
    return os.str();
}

}  // namespace rmc
