// Command-line front end over the C interface.
#include <rmc/rmc.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitInternal = 4;

struct Flags {
    std::string config;
    std::string out;
    std::optional<int> threads;
    std::map<std::string, std::optional<double>> params{{"Ta", {}}, {"Q", {}}, {"Pr", {}}, {"L1", {}}, {"L2", {}}, {"Ra", {}}};
    std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config, "JSON config document")->check(CLI::ExistingFile);
    cmd->add_option("--out", f.out, "output file (directory for fields)");
    cmd->add_option("--threads", f.threads, "worker threads")->check(CLI::PositiveNumber);
    for (auto& [name, value] : f.params) cmd->add_option("--" + name, value, "override parameter " + name);
    cmd->add_option("--set", f.sets, "override a top-level scalar: KEY=VALUE");
}

int fail(int code, const std::string& msg) {
    std::cerr << "rmc: " << msg << "\n";
    return code;
}

bool write_file(const fs::path& path, const char* data, size_t n) {
    std::ofstream os(path, std::ios::binary);
    if (!os) return false;
    os.write(data, static_cast<std::streamsize>(n));
    return static_cast<bool>(os);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Linear stability and dynamic transitions of rotating magnetoconvection"};
    app.require_subcommand(1);
    app.set_version_flag("--version", rmc_version());
    Flags flags;
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"critical", "critical Rayleigh numbers and the critical index set"},
        {"transition", "transition numbers, scenario and reduced dynamics"},
        {"sweep", "criticality over a parameter grid (CSV)"},
        {"fields", "leading-order bifurcated fields on a grid"},
        {"oracle", "Galerkin validation of the transition predictions"}};
    for (const auto& [name, help] : commands) add_common(app.add_subcommand(name, help), flags);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    // Precedence: flag > config file > built-in defaults.
    Json cfg = Json::object();
    if (!flags.config.empty()) {
        std::ifstream is(flags.config);
        if (!is) return fail(kExitConfig, "cannot read config " + flags.config);
        try {
            cfg = Json::parse(is);
        } catch (const std::exception& e) {
            return fail(kExitConfig, "malformed config " + flags.config + ": " + e.what());
        }
        if (!cfg.is_object()) return fail(kExitConfig, "config must be a JSON object");
    }
    for (const auto& [name, value] : flags.params)
        if (value) cfg[name] = *value;
    if (flags.threads) cfg["threads"] = *flags.threads;
    for (const auto& s : flags.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0) return fail(kExitConfig, "--set expects KEY=VALUE, got " + s);
        const std::string key = s.substr(0, eq), text = s.substr(eq + 1);
        if (cfg.contains(key) && (cfg[key].is_object() || cfg[key].is_array()))
            return fail(kExitConfig, "--set only overrides scalar fields; " + key + " is structured");
        Json v = Json::parse(text, nullptr, false);
        cfg[key] = v.is_discarded() || v.is_structured() ? Json(text) : v;
    }
    if (!flags.out.empty()) cfg["out"] = flags.out;
    std::string out;
    if (cfg.contains("out")) {
        if (!cfg["out"].is_string()) return fail(kExitConfig, "out must be a string");
        out = cfg["out"].get<std::string>();
    }

    // Resolve output paths before any computation.
    const bool multi = command == "fields";
    if (multi) {
        if (out.empty()) out = ".";
        std::error_code ec;
        fs::create_directories(out, ec);
        if (!fs::is_directory(out)) return fail(kExitConfig, "cannot create output directory " + out);
    } else if (!out.empty()) {
        const fs::path parent = fs::path(out).parent_path();
        if (!parent.empty() && !fs::is_directory(parent)) return fail(kExitConfig, "output directory does not exist: " + parent.string());
    }

    rmc_session* session = nullptr;
    if (rmc_session_create(&session) != RMC_OK) return fail(kExitInternal, "cannot create session");
    rmc_result* result = nullptr;
    const std::string text = cfg.dump();
    const rmc_status st = rmc_run(session, command.c_str(), text.c_str(), &result);
    if (st != RMC_OK) {
        const int rc = rmc_status_exit_code(st);
        std::cerr << "rmc: " << command << " failed (" << rmc_status_name(st) << "): " << rmc_session_last_error(session) << "\n";
        rmc_session_destroy(session);
        return rc;
    }
    int rc = 0;
    for (size_t i = 0; i < rmc_result_count(result); ++i) {
        size_t n = 0;
        const char* data = rmc_result_data(result, i, &n);
        if (multi || !out.empty()) {
            const fs::path path = multi ? fs::path(out) / rmc_result_name(result, i) : fs::path(out);
            if (!write_file(path, data, n)) {
                rc = fail(kExitConfig, "cannot write " + path.string());
                break;
            }
            if (multi) std::cout << path.string() << "\n";
        } else {
            std::fwrite(data, 1, n, stdout);
        }
    }
    rmc_result_destroy(result);
    rmc_session_destroy(session);
    return rc;
}
