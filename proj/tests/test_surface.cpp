#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "walker/curve.hpp"
#include "walker/errors.hpp"
#include "walker/surface.hpp"

using namespace walker;

namespace {
constexpr double kPiHalf = 1.57079632679489661923;
constexpr double kInvSqrt2 = 0.70710678118654752440;

DarbouxRun make_run(const WalkerMetric& g, std::array<int, 3> signs, CaseTag tag,
                    const std::function<double(double)>& kap,
                    const std::function<double(double)>& tau,
                    const std::function<double(double)>& theta,
                    const std::function<double(double)>& dtheta, double s_max = 1.0,
                    double step = 1e-3) {
    const Point p0{0.05, 0.1, 0.2};
    const auto fr = orthonormal_frame_with_signs(g, p0, signs);
    FrameSamples fs =
        integrate_curve_from_frenet_data(g, kap, tau, signs, p0, fr[0], fr[1], fr[2], s_max, step);
    return darboux_from_frenet(g, fs, theta, dtheta, tag);
}
}  // namespace

TEST_CASE("case tags round trip through strings") {
    for (CaseTag t :
         {CaseTag::TimelikeCase1, CaseTag::SpacelikeCase2i, CaseTag::SpacelikeCase2ii})
        CHECK(case_tag_from_string(to_string(t)) == t);
    CHECK_THROWS_AS(case_tag_from_string("Case3"), ConfigError);
}

TEST_CASE("surface normals") {
    WalkerMetric g("0");
    SUBCASE("the y = 0 coordinate plane is timelike with normal along dy") {
        SurfacePatch S("u", "0", "v");
        const Tangent n = surface_normal(g, S, 0.3, 0.8);
        CHECK(g.value(n, n) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(std::abs(n.v.x) <= 1e-12);
        CHECK(std::abs(n.v.z) <= 1e-12);
        CHECK(std::abs(std::abs(n.v.y) - 1.0) <= 1e-12);
    }
    SUBCASE("the z = 0 coordinate plane is degenerate, hence not timelike") {
        SurfacePatch S("u", "v", "0");
        CHECK_THROWS_AS(surface_normal(g, S, 0.0, 0.0), NotTimelikeSurface);
    }
    SUBCASE("coincident partials make a degenerate patch") {
        SurfacePatch S("u + v", "u + v", "0");
        CHECK_THROWS_AS(surface_normal(g, S, 0.0, 0.0), DegeneratePatch);
    }
}

TEST_CASE("curve-on-surface composition and membership checks") {
    SurfacePatch S("u^2", "v", "u + v");
    CurveOnSurface cs = CurveOnSurface::make(S, "t", "2*t", 0.0, 1.0);
    CHECK(cs.u_at(0.5) == doctest::Approx(0.5));
    CHECK(cs.v_at(0.5) == doctest::Approx(1.0));
    // composed chart curve evaluates to r(u(t), v(t))
    CHECK(cs.composed.position(0.5).x == doctest::Approx(0.25));
    CHECK(cs.composed.position(0.5).z == doctest::Approx(1.5));
    check_curve_on_surface(cs.patch, cs.composed, cs.u_of_t, cs.v_of_t);  // must not throw

    // a chart curve that leaves the patch is rejected
    Curve off = Curve::analytic("t^2 + 1", "2*t", "3*t", 0.0, 1.0);
    CHECK_THROWS_AS(check_curve_on_surface(S, off, cs.u_of_t, cs.v_of_t), CurveOffSurface);
}

TEST_CASE("projection onto a patch inverts the parameterization") {
    SurfacePatch S("u^2", "v", "u + v");
    const Point p = S.position(0.7, -0.4);
    const auto uv = project_to_patch(S, p, 0.5, 0.0);
    CHECK(uv[0] == doctest::Approx(0.7).epsilon(1e-8));
    CHECK(uv[1] == doctest::Approx(-0.4).epsilon(1e-8));
}

TEST_CASE("hyperbola on the hyperbolic cylinder is a surface geodesic") {
    WalkerMetric g("0");
    const double rho = 1.5;
    // r(u, v) = rho cosh(u) e2 + rho sinh(u) e3 + v e1
    SurfacePatch S("1.5*exp(u)/(2^(1/2))", "v", "1.5*exp(-u)/(2^(1/2))");
    CurveOnSurface cs = CurveOnSurface::make(S, "t", "0", -1.0, 1.0);
    UnitSpeedCurve usc(g, cs.composed);
    CHECK(usc.causal_sign() == -1);

    for (double s : {0.3, 1.2}) {
        const DarbouxApparatus da = darboux_apparatus(usc, cs, s);
        CHECK(da.case_tag == CaseTag::TimelikeCase1);
        CHECK(std::abs(da.kappa_g) <= 1e-6);
        CHECK(std::abs(std::abs(da.kappa_n) - 1.0 / rho) <= 1e-5);
        CHECK(std::abs(da.tau_g) <= 1e-5);
        // frame signs: T timelike, Y and U spacelike, U = unit normal
        CHECK(g.value(da.T, da.T) == doctest::Approx(-1.0).epsilon(1e-8));
        CHECK(g.value(da.Y, da.Y) == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(g.value(da.U, da.U) == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("theta recovery by case") {
    SUBCASE("Case 1 inverts (cos, -sin)") {
        const double kappa = 1.3;
        for (double th : {0.3, 2.0, -1.2}) {
            auto r = recover_theta(CaseTag::TimelikeCase1, kappa * std::cos(th),
                                   -kappa * std::sin(th));
            REQUIRE(r.has_value());
            CHECK(std::remainder(*r - th, 2 * 3.14159265358979323846) ==
                  doctest::Approx(0.0).epsilon(1e-12));
        }
    }
    SUBCASE("Case 2i needs |kappa_g| < |kappa_n|") {
        auto r = recover_theta(CaseTag::SpacelikeCase2i, 1.3 * std::sinh(0.4),
                               1.3 * std::cosh(0.4));
        REQUIRE(r.has_value());
        CHECK(*r == doctest::Approx(0.4).epsilon(1e-12));
        CHECK_THROWS_AS(recover_theta(CaseTag::SpacelikeCase2i, 2.0, 1.0), HyperbolicDomain);
    }
    SUBCASE("Case 2ii needs |kappa_n| < |kappa_g|") {
        auto r = recover_theta(CaseTag::SpacelikeCase2ii, 1.3 * std::cosh(-0.6),
                               1.3 * std::sinh(-0.6));
        REQUIRE(r.has_value());
        CHECK(*r == doctest::Approx(-0.6).epsilon(1e-12));
        CHECK_THROWS_AS(recover_theta(CaseTag::SpacelikeCase2ii, 1.0, 2.0), HyperbolicDomain);
    }
    SUBCASE("both scalars vanishing leaves theta undefined") {
        CHECK_FALSE(recover_theta(CaseTag::TimelikeCase1, 0.0, 0.0).has_value());
    }
}

TEST_CASE("Case 1 scalar identities on a synthetic run") {
    WalkerMetric g("y^2 - z");
    auto kap = [](double s) { return 1.2 + 0.2 * std::sin(s); };
    auto tau = [](double) { return 0.5; };
    auto theta = [](double s) { return 0.3 + 0.2 * s; };
    auto dtheta = [](double) { return 0.2; };
    DarbouxRun run =
        make_run(g, {-1, 1, 1}, CaseTag::TimelikeCase1, kap, tau, theta, dtheta);

    for (std::size_t i : {100u, 500u, 900u}) {
        const auto& da = run.samples[i];
        const double s = da.s;
        CHECK(da.kappa_g == doctest::Approx(kap(s) * std::cos(theta(s))).epsilon(1e-9));
        CHECK(da.kappa_n == doctest::Approx(-kap(s) * std::sin(theta(s))).epsilon(1e-9));
        CHECK(da.tau_g == doctest::Approx(dtheta(s) - tau(s)).epsilon(1e-9));
        // kappa_g^2 + kappa_n^2 = kappa^2
        CHECK(da.kappa_g * da.kappa_g + da.kappa_n * da.kappa_n ==
              doctest::Approx(kap(s) * kap(s)).epsilon(1e-10));
        // independent measurement from the frames
        const MeasuredScalars ms = measure_darboux_scalars(g, run, i);
        CHECK(ms.kappa_g == doctest::Approx(da.kappa_g).epsilon(1e-5));
        CHECK(ms.kappa_n == doctest::Approx(da.kappa_n).epsilon(1e-5));
        CHECK(std::abs(ms.tau_g - da.tau_g) <= 1e-5);
    }
    CHECK(verify_structure_equations(g, run).max() <= 1e-5);
}

TEST_CASE("Case 2 scalar identities and frame signs") {
    WalkerMetric g("sin(y)*z");
    auto kap = [](double s) { return 1.0 + 0.1 * std::cos(s); };
    auto tau = [](double) { return 0.3; };
    auto theta = [](double s) { return 0.2 + 0.1 * s; };
    auto dtheta = [](double) { return 0.1; };

    SUBCASE("Case 2i: spacelike N, timelike B") {
        DarbouxRun run =
            make_run(g, {1, 1, -1}, CaseTag::SpacelikeCase2i, kap, tau, theta, dtheta);
        for (std::size_t i : {200u, 800u}) {
            const auto& da = run.samples[i];
            const double s = da.s;
            CHECK(da.kappa_g == doctest::Approx(kap(s) * std::sinh(theta(s))).epsilon(1e-9));
            CHECK(da.kappa_n == doctest::Approx(kap(s) * std::cosh(theta(s))).epsilon(1e-9));
            CHECK(da.tau_g == doctest::Approx(dtheta(s) + tau(s)).epsilon(1e-9));
            CHECK(da.kappa_n * da.kappa_n - da.kappa_g * da.kappa_g ==
                  doctest::Approx(kap(s) * kap(s)).epsilon(1e-10));
            // Y timelike, U spacelike in both spacelike cases
            CHECK(g.value(da.Y, da.Y) == doctest::Approx(-1.0).epsilon(1e-6));
            CHECK(g.value(da.U, da.U) == doctest::Approx(1.0).epsilon(1e-6));
        }
        CHECK(verify_structure_equations(g, run).max() <= 1e-5);
    }
    SUBCASE("Case 2ii: timelike N, spacelike B") {
        DarbouxRun run =
            make_run(g, {1, -1, 1}, CaseTag::SpacelikeCase2ii, kap, tau, theta, dtheta);
        for (std::size_t i : {200u, 800u}) {
            const auto& da = run.samples[i];
            const double s = da.s;
            CHECK(da.kappa_g == doctest::Approx(kap(s) * std::cosh(theta(s))).epsilon(1e-9));
            CHECK(da.kappa_n == doctest::Approx(kap(s) * std::sinh(theta(s))).epsilon(1e-9));
            CHECK(da.tau_g == doctest::Approx(dtheta(s) - tau(s)).epsilon(1e-9));
            CHECK(g.value(da.Y, da.Y) == doctest::Approx(-1.0).epsilon(1e-6));
            CHECK(g.value(da.U, da.U) == doctest::Approx(1.0).epsilon(1e-6));
        }
        CHECK(verify_structure_equations(g, run).max() <= 1e-5);
    }
    SUBCASE("case and sign pattern must be consistent") {
        CHECK_THROWS_AS(
            make_run(g, {-1, 1, 1}, CaseTag::SpacelikeCase2i, kap, tau, theta, dtheta, 0.01),
            UnsupportedCombination);
    }
}

TEST_CASE("flat geodesic run matches the pi/2 angle construction") {
    WalkerMetric g("0");
    auto kap = [](double) { return 1.0; };
    auto zero = [](double) { return 0.0; };
    auto half_pi = [](double) { return kPiHalf; };
    DarbouxRun run = make_run(g, {-1, 1, 1}, CaseTag::TimelikeCase1, kap, zero, half_pi, zero);
    for (std::size_t i : {100u, 900u}) {
        const auto& da = run.samples[i];
        CHECK(std::abs(da.kappa_g) <= 1e-9);            // geodesic on its surface
        CHECK(da.kappa_n == doctest::Approx(-1.0).epsilon(1e-9));
        CHECK(std::abs(da.tau_g) <= 1e-9);
    }
}
