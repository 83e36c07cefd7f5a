#include <doctest.h>

#include <cmath>

#include "criticality.hpp"
#include "transition.hpp"

using namespace rmc;

namespace {

const Params kEx1 = make_params(1100, 100, 0.7, 1, 1.5);
const Params kEx2 = make_params(2700, 500, 0.3, 1, 1.2);
const Params kRow1 = make_params(2800, 500, 0.75, 1, 1.2);

}  // namespace

TEST_CASE("delta for the simple real example") {
    const auto rep = critical_search(kEx1);
    const auto w = delta_number(kEx1.with_ra(rep.ra_c), rep.X[0]);
    CHECK(std::abs(w.delta - (-0.033936)) < 1e-4);
    REQUIRE(w.delta_quadrature);
    CHECK(std::abs(w.delta - *w.delta_quadrature) <= 1e-6 * std::abs(w.delta));
    CHECK(std::abs(w.beta) < 1e-9);
    // k0 = 0: Phi2 = -pi j0 a1 u2 / (16 a^4).
    const auto g = geometry(kEx1, rep.X[0]);
    const double phi2 = -M_PI * g.kx * w.vec.u2.real() / (16 * g.alpha_jk_sq * g.alpha_jk_sq);
    CHECK(w.phi2 == doctest::Approx(phi2).epsilon(1e-12));
    CHECK_THROWS_AS(delta_number(kEx1.with_ra(rep.ra_c), {2, 3, 0}), Error);
}

TEST_CASE("Hopf worksheet for the complex pair example") {
    const auto rep = critical_search(kEx2);
    const auto w = hopf_number(kEx2.with_ra(rep.ra_c), rep.X[0]);
    CHECK(std::abs(w.sigma) < 1e-8);
    CHECK(w.rho == doctest::Approx(*rep.hopf_rho).epsilon(1e-8));
    for (int i = 0; i < 4; ++i) CHECK(w.A_corrected[i] == doctest::Approx(w.A_quadrature[i]).epsilon(1e-8));
    CHECK(w.a_number == doctest::Approx(hopf_a_number(w.coeffs)).epsilon(1e-14));
    CHECK(w.adopted_route == "center-manifold");
    bool found = false;
    for (const auto& r : w.routes)
        if (r.name == "exact-C-quadrature-A-transposed") {
            found = true;
            CHECK(r.a_number == doctest::Approx(w.a_number).epsilon(1e-8));
        }
    CHECK(found);
    CHECK(w.a_number < 0);
    CHECK_THROWS_AS(hopf_number(kEx2.with_ra(rep.ra_c), {3, 1, 1}), Error);
}

TEST_CASE("Gamma triple: formula routes agree with quadrature, reflection swaps Gamma2 and Gamma3") {
    const auto rep = critical_search(kRow1);
    const Params pc = kRow1.with_ra(rep.ra_c);
    const auto a = gamma_numbers(pc, rep.X[0]);
    REQUIRE(a.gammas_quadrature);
    for (int i = 0; i < 3; ++i) {
        CHECK(a.gammas_case_i[i] == doctest::Approx((*a.gammas_quadrature)[i]).epsilon(1e-8));
        REQUIRE(a.gammas_case_ii_consistent);
        CHECK((*a.gammas_case_ii_consistent)[i] == doctest::Approx((*a.gammas_quadrature)[i]).epsilon(1e-8));
    }
    const auto b = gamma_numbers(pc, rep.X[1]);
    CHECK(b.gammas[0] == doctest::Approx(a.gammas[0]).epsilon(1e-8));
    CHECK(b.gammas[1] == doctest::Approx(a.gammas[2]).epsilon(1e-8));
    CHECK(b.gammas[2] == doctest::Approx(a.gammas[1]).epsilon(1e-8));
    CHECK(a.K[0] == ModeIndex{0, 0, 2});
    CHECK_THROWS_AS(gamma_numbers(pc, {4, 0, 1}), Error);
}

TEST_CASE("classification inequalities") {
    CHECK(classify_simple(-0.033936).label == "Continuous-2states");
    CHECK(classify_simple(0.2).label == "Jump-2points");
    CHECK(classify_hopf(-0.05).label == "Continuous-limit-cycle");
    CHECK(classify_hopf(0.05).label == "Jump-limit-cycle");
    CHECK(classify_double({-0.004, -0.3, -4}).label == "DR-1");
    CHECK(classify_double({-0.03, 0.1, -2}).label == "DR-2");
    CHECK(classify_double({2.07, -9.6, -1.9}).label == "DR-3");
    CHECK(classify_double({0.8, 1.5, -10.3}).label == "DR-4");
    CHECK(classify_double({1.2, -0.3, -3.7}).label == "DR-5");
    CHECK(classify_double({-1, 0.5, 0.5}).label == "DR-R1");
    CHECK(classify_double({-0.1, -0.5, -0.5}).label == "DR-1");
    CHECK(classify_double({-0.5, -0.8, -0.1}).label == "DR-R3");
    CHECK(classify_double({-1, 2, 3}).label == "DR-R2");
    for (auto bad : {std::array<double, 3>{0.0, 1, 2}, std::array<double, 3>{-1, -1, -3}}) {
        try {
            classify_double(bad);
            FAIL("expected boundary ambiguity");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::BoundaryAmbiguous);
        }
    }
    CHECK_THROWS_AS(classify_simple(1e-12), Error);
}
