#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "criticality.hpp"
#include "fields.hpp"
#include "galerkin.hpp"
#include "transition.hpp"

namespace rmc {

using Json = nlohmann::ordered_json;

// Nine-significant-digit number; non-finite values become null.
Json num(double v);

// Pretty-printed with two-space indent and a trailing newline. Re-parsing and re-dumping is byte-identical.
std::string dump_report(const Json& j);

Json params_json(const Params& p);
// Reads Ta, Q, Pr, L1, L2 and optional Ra; throws Validation naming the bad field.
Params params_from_json(const Json& j);

// Keys: params, ra_c1, ra_c2, ra_c, X, kind, multiplicity, hopf_rho (complex pairs only), pes_ok.
Json critical_json(const CriticalReport& rep, bool pes_ok);

// Ra used for reduced dynamics and field reconstructions when none is given: Ra_c + 1.
double default_eval_ra(const CriticalReport& rep);

// Transition numbers of the critical set, evaluated at Ra_c.
FieldNumbers transition_numbers(const CriticalReport& rep);

// Numbers, scenario, equilibria or limit cycle, and the full worksheet. Throws NonGeneric.
Json transition_report(const CriticalReport& rep, double ra_eval, int probe_rays = 64);

Json oracle_json(const OracleCheck& c);

struct Output {
    std::string name;  // file name suggested for the payload
    std::string data;
};

// Top-level config keys accepted by run_command.
const std::vector<std::string>& config_keys();

// Runs one command ("critical", "transition", "sweep", "fields", "oracle") on a JSON config.
// Throws Validation for malformed configs.
std::vector<Output> run_command(const std::string& command, const Json& config);

}  // namespace rmc
