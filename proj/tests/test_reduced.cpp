#include <doctest.h>

#include <cmath>
#include <random>

#include "reduced.hpp"

using namespace rmc;

namespace {

// Centered-difference Jacobian.
Eigen::MatrixXd fd_jacobian(const ReducedSystem& s, const std::vector<double>& x) {
    const int n = s.dim;
    Eigen::MatrixXd J(n, n);
    for (int c = 0; c < n; ++c) {
        auto xp = x, xm = x;
        const double h = 1e-5 * (1 + std::abs(x[c]));
        xp[c] += h;
        xm[c] -= h;
        const auto fp = s.rhs(xp), fm = s.rhs(xm);
        for (int r = 0; r < n; ++r) J(r, c) = (fp[r] - fm[r]) / (2 * h);
    }
    return J;
}

double norm(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

TEST_CASE("reduced right-hand sides follow the cubic truncations") {
    const auto s = build_simple(0.2, -0.033936);
    CHECK(s.rhs({1.5})[0] == doctest::Approx(0.2 * 1.5 - 0.033936 * 3.375).epsilon(1e-14));
    const auto d = build_double(0.1, {-0.004, -0.3, -4});
    const auto f = d.rhs({0.5, 0.7});
    CHECK(f[0] == doctest::Approx(0.1 * 0.5 + 0.5 * (-0.004 * 0.25 - 0.3 * 0.49)).epsilon(1e-14));
    CHECK(f[1] == doctest::Approx(0.1 * 0.7 + 0.7 * (-4 * 0.25 - 0.004 * 0.49)).epsilon(1e-14));
    // A Hopf system without cubic terms is a linear center: circles are preserved.
    const auto h = build_hopf(0.0, 3.0, {});
    const auto tr = integrate(h, {1.0, 0.0}, 10.0);
    for (const auto& x : tr.x) CHECK(std::hypot(x[0], x[1]) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("equilibria: closed forms, residuals, stability") {
    auto set = equilibria(build_double(0.004, {-0.004, -0.3, -4}));
    CHECK(set.gamma == doctest::Approx(1.0).epsilon(1e-14));
    const auto row1 = build_double(0.05, {-0.004, -0.3, -4});
    set = equilibria(row1);
    REQUIRE(set.points.size() == 9);
    for (const auto& p : set.points) {
        CHECK(norm(row1.rhs(p.x)) < 1e-12);
        if (p.name == "Y1" || p.name == "Y2" || p.name == "Y3" || p.name == "Y4") CHECK(p.stability == "stable");
        if (p.name == "Y5" || p.name == "Y6" || p.name == "Y7" || p.name == "Y8") CHECK(p.stability != "stable");
    }
    set = equilibria(build_double(-0.05, {-0.004, -0.3, -4}));
    REQUIRE(set.points.size() == 1);
    CHECK(set.points[0].stability == "stable");
    const auto simple = equilibria(build_simple(0.28, -0.033936));
    REQUIRE(simple.points.size() == 3);
    CHECK(simple.points[1].x[0] == doctest::Approx(-std::sqrt(0.28 / 0.033936)).epsilon(1e-14));
    CHECK(simple.points[1].stability == "stable");
    CHECK_THROWS_AS(equilibria(build_simple(0.1, 0.0)), Error);
    CHECK_THROWS_AS(equilibria(build_double(0.1, {0.0, 1, 2})), Error);
    CHECK_THROWS_AS(equilibria(build_double(0.1, {1.0, 1, 1})), Error);
}

TEST_CASE("Jacobians match finite differences") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-2, 2);
    const ReducedSystem systems[] = {build_simple(0.3, -0.5), build_double(0.1, {-0.03, 0.1, -2}),
                                     build_hopf(0.01, 20.0, {-0.05, 0.02, 0.1, -0.01, 0.03, 0.2})};
    for (const auto& s : systems)
        for (int n = 0; n < 50; ++n) {
            std::vector<double> x(s.dim);
            for (auto& v : x) v = u(rng);
            const Eigen::MatrixXd diff = s.jacobian(x) - fd_jacobian(s, x);
            CHECK(diff.cwiseAbs().maxCoeff() < 1e-6);
        }
}

TEST_CASE("integration converges to the stable states") {
    const auto s = build_simple(0.28, -0.033936);
    const auto eq = equilibria(s);
    const auto still = integrate(s, eq.points[2].x, 1000 * default_dt(s), 0.0, 100);
    CHECK(std::abs(still.x.back()[0] - eq.points[2].x[0]) < 1e-9);
    const auto tr = integrate(s, {1e-3}, 120.0, 0.0, 1000);
    CHECK(std::abs(tr.x.back()[0] - std::sqrt(0.28 / 0.033936)) < 1e-6);
    const auto blow = integrate(build_simple(1.0, 1.0), {1.0}, 10.0);
    CHECK(blow.blow_up);
    CHECK(blow.exit_time < 10.0);
    const std::string csv = trajectory_csv(integrate(build_double(0.1, {-1, -2, -3}), {0.1, 0.1}, 0.002, 0.001));
    CHECK(csv.rfind("t,y,z\n", 0) == 0);
}

TEST_CASE("attractor probe finds the predicted stable sets") {
    auto pr = attractor_probe(build_double(0.05, {-0.004, -0.3, -4}));
    CHECK(pr.matches);
    CHECK(pr.limits == std::vector<std::string>{"Y1", "Y2", "Y3", "Y4"});
    pr = attractor_probe(build_double(0.05, {-0.03, 0.1, -2}));
    CHECK(pr.matches);
    CHECK(pr.limits == std::vector<std::string>{"Y3", "Y4"});
    pr = attractor_probe(build_double(-0.05, {-0.004, -0.3, -4}), 16);
    CHECK(pr.limits == std::vector<std::string>{"0"});
}

TEST_CASE("Hopf radius: integration agrees with first-order averaging") {
    const HopfCoeffs c{-0.05, 0.0, -0.02, 0.0, -0.0047, 0.0};
    const double a = hopf_a_number(c), sigma = 0.01;
    const auto sys = build_hopf(sigma, 20.1, c);
    const double measured = hopf_radius_measured(sys);
    CHECK(measured == doctest::Approx(hopf_radius_averaged(sigma, a)).epsilon(1e-2));
    CHECK(hopf_radius_printed(sigma, a) == doctest::Approx(std::sqrt(4 * sigma / (-M_PI * a))).epsilon(1e-15));
}
