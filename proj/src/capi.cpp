#include "rmc/rmc.h"

#include <algorithm>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "report.hpp"

struct rmc_session {
    std::string last_error;
};

struct rmc_result {
    std::vector<rmc::Output> items;
};

namespace {

template <class F>
rmc_status guarded(rmc_session* s, F&& body) {
    if (!s) return RMC_ERR_NULL_ARGUMENT;
    try {
        body();
        s->last_error.clear();
        return RMC_OK;
    } catch (const rmc::Error& e) {
        s->last_error = e.what();
        return static_cast<rmc_status>(static_cast<int>(e.code()));
    } catch (const nlohmann::json::exception& e) {
        s->last_error = std::string("config: ") + e.what();
        return RMC_ERR_VALIDATION;
    } catch (const std::bad_alloc&) {
        s->last_error = "out of memory";
        return RMC_ERR_INTERNAL;
    } catch (const std::exception& e) {
        s->last_error = e.what();
        return RMC_ERR_INTERNAL;
    } catch (...) {
        s->last_error = "unknown failure";
        return RMC_ERR_INTERNAL;
    }
}

rmc::Params to_params(const rmc_params* p) {
    if (!p) throw rmc::Error(rmc::ErrorCode::Validation, "params is null");
    std::optional<double> ra;
    if (p->has_ra) ra = p->Ra;
    return rmc::make_params(p->Ta, p->Q, p->Pr, p->L1, p->L2, ra);
}

}  // namespace

extern "C" {

const char* rmc_version(void) { return "1.0.0"; }

const char* rmc_status_name(rmc_status s) {
    switch (s) {
        case RMC_OK: return "ok";
        case RMC_ERR_VALIDATION: return "validation";
        case RMC_ERR_INVALID_INDEX: return "invalid_index";
        case RMC_ERR_DEGENERATE_CUBIC: return "degenerate_cubic";
        case RMC_ERR_SINGULAR_EIGENVECTOR: return "singular_eigenvector";
        case RMC_ERR_NO_HOPF: return "no_hopf";
        case RMC_ERR_SEARCH_FAILURE: return "search_failure";
        case RMC_ERR_DEGENERATE: return "degenerate";
        case RMC_ERR_RESONANT_SUB_MODE: return "resonant_sub_mode";
        case RMC_ERR_NON_GENERIC: return "non_generic";
        case RMC_ERR_NO_SUCH_STATE: return "no_such_state";
        case RMC_ERR_BOUNDARY_AMBIGUOUS: return "boundary_ambiguous";
        case RMC_ERR_IO: return "io";
        case RMC_ERR_BLOW_UP: return "blow_up";
        case RMC_ERR_INCONCLUSIVE: return "inconclusive";
        case RMC_ERR_INTERNAL: return "internal";
        case RMC_ERR_NULL_ARGUMENT: return "null_argument";
    }
    return "unknown";
}

int rmc_status_exit_code(rmc_status s) {
    switch (s) {
        case RMC_OK: return 0;
        case RMC_ERR_VALIDATION:
        case RMC_ERR_INVALID_INDEX:
        case RMC_ERR_IO:
        case RMC_ERR_NULL_ARGUMENT: return 2;
        case RMC_ERR_DEGENERATE:
        case RMC_ERR_RESONANT_SUB_MODE:
        case RMC_ERR_NON_GENERIC:
        case RMC_ERR_NO_SUCH_STATE:
        case RMC_ERR_BOUNDARY_AMBIGUOUS: return 3;
        default: return 4;
    }
}

rmc_status rmc_session_create(rmc_session** out) {
    if (!out) return RMC_ERR_NULL_ARGUMENT;
    *out = new (std::nothrow) rmc_session();
    return *out ? RMC_OK : RMC_ERR_INTERNAL;
}

void rmc_session_destroy(rmc_session* s) { delete s; }

const char* rmc_session_last_error(const rmc_session* s) { return s ? s->last_error.c_str() : "null session"; }

rmc_status rmc_run(rmc_session* s, const char* command, const char* config_json, rmc_result** out) {
    return guarded(s, [&] {
        if (!command || !config_json || !out) throw rmc::Error(rmc::ErrorCode::Validation, "null argument");
        *out = nullptr;
        rmc::Json cfg;
        try {
            cfg = rmc::Json::parse(config_json);
        } catch (const nlohmann::json::parse_error& e) {
            throw rmc::Error(rmc::ErrorCode::Validation, std::string("malformed config: ") + e.what());
        }
        auto r = std::make_unique<rmc_result>();
        r->items = rmc::run_command(command, cfg);
        *out = r.release();
    });
}

size_t rmc_result_count(const rmc_result* r) { return r ? r->items.size() : 0; }

const char* rmc_result_name(const rmc_result* r, size_t i) {
    return r && i < r->items.size() ? r->items[i].name.c_str() : nullptr;
}

const char* rmc_result_data(const rmc_result* r, size_t i, size_t* length) {
    if (!r || i >= r->items.size()) {
        if (length) *length = 0;
        return nullptr;
    }
    if (length) *length = r->items[i].data.size();
    return r->items[i].data.c_str();
}

void rmc_result_destroy(rmc_result* r) { delete r; }

rmc_status rmc_critical_search(rmc_session* s, const rmc_params* p, rmc_critical* out) {
    return guarded(s, [&] {
        if (!out) throw rmc::Error(rmc::ErrorCode::Validation, "output is null");
        rmc::CriticalReport rep = rmc::critical_search(to_params(p));
        if (!rep.non_generic) rep.pes_ok = rmc::pes_check(rep).ok;
        rmc_critical c{};
        c.ra_c1 = rep.ra_c1;
        c.ra_c2 = rep.ra_c2;
        c.ra_c = rep.ra_c;
        c.kind = static_cast<rmc_kind>(static_cast<int>(rep.kind));
        c.multiplicity = rep.multiplicity;
        c.n_modes = static_cast<int>(std::min<size_t>(rep.X.size(), 2));
        for (int i = 0; i < c.n_modes; ++i) {
            c.modes[i][0] = rep.X[i].j;
            c.modes[i][1] = rep.X[i].k;
            c.modes[i][2] = rep.X[i].l;
        }
        c.hopf_rho = rep.kind == rmc::TransitionKind::ComplexPair && rep.hopf_rho ? *rep.hopf_rho : 0.0;
        c.pes_ok = rep.pes_ok ? 1 : 0;
        c.non_generic = rep.non_generic ? 1 : 0;
        *out = c;
    });
}

rmc_status rmc_mode_eigenvalues(rmc_session* s, const rmc_params* p, int j, int k, int l, double re[3], double im[3],
                                int* count) {
    return guarded(s, [&] {
        if (!re || !im || !count) throw rmc::Error(rmc::ErrorCode::Validation, "output is null");
        const rmc::Params pp = to_params(p);
        if (!pp.Ra) throw rmc::Error(rmc::ErrorCode::Validation, "Ra is required");
        const rmc::ModeSpectrum ms = rmc::mode_spectrum(pp, rmc::ModeIndex{j, k, l});
        const int n = static_cast<int>(std::min<size_t>(ms.branches.size(), 3));
        for (int i = 0; i < n; ++i) {
            re[i] = ms.branches[i].beta.real();
            im[i] = ms.branches[i].beta.imag();
        }
        *count = n;
    });
}

}  // extern "C"
