#include <doctest.h>

#include <cmath>
#include <string>

#include "model.hpp"

using namespace rmc;

TEST_CASE("make_params validates the parameter domain") {
    CHECK_NOTHROW(make_params(2700, 500, 0.3, 1, 1.2));
    CHECK_NOTHROW(make_params(0, 0, 0.7, 1, 1, 658.0));
    try {
        make_params(2700, 500, 0, 1, 1.2);
        FAIL("expected a validation error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Validation);
        CHECK(std::string(e.what()).find("Pr") != std::string::npos);
    }
    CHECK_THROWS_AS(make_params(-1, 0, 1, 1, 1), Error);
    CHECK_THROWS_AS(make_params(0, -1, 1, 1, 1), Error);
    CHECK_THROWS_AS(make_params(0, 0, 1, 0, 1), Error);
    CHECK_THROWS_AS(make_params(0, 0, 1, 1, -2), Error);
    CHECK_THROWS_AS(make_params(0, 0, 1, 1, 1, INFINITY), Error);
}

TEST_CASE("geometry follows the wavenumber definitions") {
    const Params p = make_params(0, 0, 1, 1, 1.2);
    const double pi2 = M_PI * M_PI;
    auto g = geometry(p, {3, 0, 1});
    CHECK(g.alpha_jk_sq == doctest::Approx(9.0).epsilon(1e-15));
    CHECK(g.r_sq == doctest::Approx(9.0 + pi2).epsilon(1e-15));
    g = geometry(p, {4, 1, 1});
    const double a = 16.0 + 1.0 / (1.2 * 1.2);
    CHECK(g.alpha_jk_sq == doctest::Approx(a).epsilon(1e-15));
    CHECK(g.r_sq == doctest::Approx(a + pi2).epsilon(1e-15));
    g = geometry(make_params(0, 0, 1, 1, 1), {0, 0, 2});
    CHECK(g.alpha_jk_sq == 0.0);
    CHECK(g.r_sq == doctest::Approx(4 * pi2).epsilon(1e-15));
}

TEST_CASE("geometry is k-reflection invariant and r_sq grows with l") {
    const Params p = make_params(10, 20, 0.5, 1.3, 0.7);
    for (int j = 0; j <= 4; ++j)
        for (int k = 1; k <= 4; ++k) {
            const auto a = geometry(p, {j, k, 1}), b = geometry(p, {j, -k, 1});
            CHECK(a.alpha_jk_sq == b.alpha_jk_sq);
            CHECK(a.r_sq == b.r_sq);
            double prev = 0.0;
            for (int l = 1; l <= 5; ++l) {
                const double r = geometry(p, {j, k, l}).r_sq;
                CHECK(r > prev);
                prev = r;
            }
        }
}

TEST_CASE("index_class partitions valid indices") {
    CHECK(index_class({4, 0, 1}) == IndexClass::I1);
    CHECK(index_class({2, 3, 0}) == IndexClass::I2);
    CHECK(index_class({0, 0, 1}) == IndexClass::I3);
    CHECK(index_class({0, 2, 1}) == IndexClass::I1);
    for (const ModeIndex bad : {ModeIndex{0, 0, 0}, ModeIndex{1, 0, -1}}) {
        try {
            index_class(bad);
            FAIL("expected invalid index");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::InvalidIndex);
        }
    }
    int counts[3] = {0, 0, 0};
    for (int j = 0; j <= 3; ++j)
        for (int k = -3; k <= 3; ++k)
            for (int l = 0; l <= 3; ++l) {
                if (j == 0 && k < 0) continue;
                if (j == 0 && k == 0 && l == 0) continue;
                counts[static_cast<int>(index_class({j, k, l}))]++;
            }
    CHECK(counts[0] + counts[1] + counts[2] == 4 * 7 * 4 - 3 * 4 - 1);
}

TEST_CASE("canonical maps to the half lattice") {
    CHECK(canonical(-2, 3, 1) == ModeIndex{2, -3, 1});
    CHECK(canonical(0, -3, 2) == ModeIndex{0, 3, 2});
    CHECK(canonical(1, -1, -2) == ModeIndex{1, -1, 2});
}
