#include <doctest.h>

#include <cmath>
#include <string>

#include <json.hpp>
#include <rmc/rmc.h>

namespace {

struct Session {
    rmc_session* s = nullptr;
    Session() { REQUIRE(rmc_session_create(&s) == RMC_OK); }
    ~Session() { rmc_session_destroy(s); }
};

}  // namespace

TEST_CASE("run critical through the C interface") {
    Session ss;
    rmc_result* r = nullptr;
    const char* cfg = R"({"Ta":1100,"Q":100,"Pr":0.7,"L1":1,"L2":1.5})";
    REQUIRE(rmc_run(ss.s, "critical", cfg, &r) == RMC_OK);
    REQUIRE(rmc_result_count(r) == 1);
    CHECK(std::string(rmc_result_name(r, 0)) == "critical.json");
    size_t n = 0;
    const char* data = rmc_result_data(r, 0, &n);
    CHECK(n == std::string(data).size());
    const auto j = nlohmann::json::parse(data);
    CHECK(j["ra_c"].get<double>() == doctest::Approx(1760.59041).epsilon(1e-6));
    CHECK(j["kind"] == "SimpleReal");
    CHECK(rmc_result_data(r, 1, &n) == nullptr);
    CHECK(n == 0);
    rmc_result_destroy(r);
    CHECK(std::string(rmc_session_last_error(ss.s)).empty());
}

TEST_CASE("errors map to statuses and exit codes") {
    Session ss;
    rmc_result* r = nullptr;
    CHECK(rmc_run(ss.s, "critical", "{not json", &r) == RMC_ERR_VALIDATION);
    CHECK(r == nullptr);
    CHECK_FALSE(std::string(rmc_session_last_error(ss.s)).empty());
    CHECK(rmc_status_exit_code(RMC_ERR_VALIDATION) == 2);
    CHECK(rmc_run(ss.s, "critical", R"({"Ta":1100,"Q":100,"Pr":0.7,"L1":1})", &r) == RMC_ERR_VALIDATION);
    CHECK(rmc_run(ss.s, "critical", R"({"Ta":1100,"Q":100,"Pr":0.7,"L1":1,"L2":1.5,"bogus":1})", &r) == RMC_ERR_VALIDATION);
    CHECK(rmc_run(ss.s, "nonsense", R"({"Ta":1100,"Q":100,"Pr":0.7,"L1":1,"L2":1.5})", &r) == RMC_ERR_VALIDATION);

    const char* hopf = R"({"Ta":2700,"Q":500,"Pr":0.3,"L1":1,"L2":1.2,"fields":{"states":[1]}})";
    const rmc_status st = rmc_run(ss.s, "fields", hopf, &r);
    CHECK(st == RMC_ERR_NO_SUCH_STATE);
    CHECK(rmc_status_exit_code(st) == 3);
    CHECK(rmc_status_exit_code(RMC_ERR_INTERNAL) == 4);
    CHECK(rmc_status_exit_code(RMC_OK) == 0);
    CHECK(std::string(rmc_status_name(RMC_ERR_NO_SUCH_STATE)) == "no_such_state");
}

TEST_CASE("direct entry points") {
    Session ss;
    rmc_params p{2700, 500, 0.3, 1, 1.2, 0, 0};
    rmc_critical c{};
    REQUIRE(rmc_critical_search(ss.s, &p, &c) == RMC_OK);
    CHECK(c.kind == RMC_COMPLEX_PAIR);
    CHECK(c.ra_c == doctest::Approx(2350.94).epsilon(1e-5));
    CHECK(c.hopf_rho > 0);
    CHECK(c.n_modes == 1);

    double re[3], im[3];
    int count = 0;
    CHECK(rmc_mode_eigenvalues(ss.s, &p, 1, 0, 1, re, im, &count) == RMC_ERR_VALIDATION);
    p.Ra = c.ra_c;
    p.has_ra = 1;
    REQUIRE(rmc_mode_eigenvalues(ss.s, &p, c.modes[0][0], c.modes[0][1], c.modes[0][2], re, im, &count) == RMC_OK);
    CHECK(count == 3);
    CHECK(std::abs(re[0]) < 1e-6);
    CHECK(std::abs(im[0]) == doctest::Approx(c.hopf_rho).epsilon(1e-6));
    CHECK(rmc_mode_eigenvalues(ss.s, &p, 0, 0, 0, re, im, &count) == RMC_ERR_INVALID_INDEX);

    CHECK(rmc_run(nullptr, "critical", "{}", nullptr) == RMC_ERR_NULL_ARGUMENT);
    CHECK(rmc_critical_search(nullptr, &p, &c) == RMC_ERR_NULL_ARGUMENT);
    CHECK(rmc_session_create(nullptr) == RMC_ERR_NULL_ARGUMENT);
    CHECK(rmc_result_count(nullptr) == 0);
    rmc_result_destroy(nullptr);
    CHECK(std::string(rmc_version()).size() > 0);
}
