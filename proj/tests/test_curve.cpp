#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "walker/curve.hpp"
#include "walker/errors.hpp"
#include "walker/metric.hpp"

using namespace walker;

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kInvSqrt2 = 0.70710678118654752440;
}  // namespace

TEST_CASE("arclength of a straight spacelike line") {
    WalkerMetric g("0");
    Curve c = Curve::analytic("0", "2*t", "0", 0.0, 1.0);
    UnitSpeedCurve usc(g, c);
    CHECK(usc.length() == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(usc.t_of_s(1.0) == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(usc.causal_sign() == 1);
    CHECK(usc.tangent(0.5).y == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("null segments are rejected") {
    WalkerMetric g("0");
    Curve c = Curve::analytic("t", "0", "0", 0.0, 1.0);  // dx direction is null
    CHECK_THROWS_AS(UnitSpeedCurve(g, c), NullSegment);
}

TEST_CASE("flat circle has kappa = 1/r, tau = 0") {
    WalkerMetric g("0");
    const double r = 2.0;
    // circle of radius r in the spacelike plane span{e1, e2} of the flat chart
    Curve c = Curve::analytic("2*sin(t)/(2^(1/2))", "2*cos(t)", "2*sin(t)/(2^(1/2))", 0.0, 7.0);
    UnitSpeedCurve usc(g, c);
    CHECK(usc.causal_sign() == 1);

    for (double s : {0.5, 2.0, 4.0}) {
        const FrenetApparatus fa = frenet_apparatus(usc, s);
        CHECK(fa.kappa == doctest::Approx(1.0 / r).epsilon(1e-6));
        CHECK(std::abs(fa.tau) <= 1e-6);
        CHECK(fa.eps1 * fa.eps2 * fa.eps3 == -1);
        CHECK(fa.eps1 == 1);
        // frame is g-orthonormal
        CHECK(g.value(fa.T, fa.T) == doctest::Approx(fa.eps1).epsilon(1e-8));
        CHECK(g.value(fa.N, fa.N) == doctest::Approx(fa.eps2).epsilon(1e-6));
        CHECK(g.value(fa.B, fa.B) == doctest::Approx(fa.eps3).epsilon(1e-6));
        CHECK(g.value(fa.T, fa.N) == doctest::Approx(0.0).epsilon(1e-6));
    }

    // closes after one period of arclength 2 pi r
    const Point p0 = usc.position(0.0), p1 = usc.position(2 * kPi * r);
    CHECK((p1 - p0).norm() <= 1e-6);
}

TEST_CASE("timelike hyperbola has kappa = 1/rho") {
    WalkerMetric g("0");
    const double rho = 1.5;
    // alpha(t) = rho cosh(t) e2 + rho sinh(t) e3 in the flat frame
    Curve c = Curve::analytic("1.5*exp(t)/(2^(1/2))", "0", "1.5*exp(-t)/(2^(1/2))", -1.0, 1.0);
    UnitSpeedCurve usc(g, c);
    CHECK(usc.causal_sign() == -1);
    const FrenetApparatus fa = frenet_apparatus(usc, 0.7);
    CHECK(fa.eps1 == -1);
    CHECK(fa.kappa == doctest::Approx(1.0 / rho).epsilon(1e-6));
    CHECK(std::abs(fa.tau) <= 1e-6);
}

TEST_CASE("degenerate curvature is reported") {
    WalkerMetric g("0");
    Curve c = Curve::analytic("0", "t", "0", 0.0, 1.0);  // straight line, kappa = 0
    UnitSpeedCurve usc(g, c);
    CHECK_THROWS_AS(frenet_apparatus(usc, 0.5), DegenerateCurvature);
}

TEST_CASE("manufactured frame runs satisfy the Frenet equations") {
    WalkerMetric g("sin(y)*z");
    const Point p0{0.1, 0.2, 0.3};
    const std::array<int, 3> signs{-1, 1, 1};
    const auto frame = orthonormal_frame_with_signs(g, p0, signs);
    auto kap = [](double s) { return 1.0 + 0.3 * std::sin(s); };
    auto tau = [](double) { return 0.4; };
    FrameSamples fs = integrate_curve_from_frenet_data(g, kap, tau, signs, p0, frame[0], frame[1],
                                                       frame[2], 1.0, 1e-3);
    CHECK(fs.max_reorthonormalization <= 1e-6);

    const FrenetResiduals res = frenet_residuals(g, fs);
    CHECK(res.max() <= 1e-6);

    // round-trip invariant recovery from the samples alone
    for (std::size_t i : {50u, 300u, 700u}) {
        const RecoveredInvariants ri = invariants_from_samples(g, fs, i);
        CHECK(ri.kappa == doctest::Approx(kap(fs.samples[i].s)).epsilon(1e-4));
        CHECK(ri.tau == doctest::Approx(0.4).epsilon(1e-4));
    }
}

TEST_CASE("frame integration rejects bad initial data") {
    WalkerMetric g("0");
    const Point p0{0, 0, 0};
    const std::array<int, 3> signs{-1, 1, 1};
    const auto fr = orthonormal_frame_with_signs(g, p0, signs);
    auto one = [](double) { return 1.0; };
    // scaled tangent violates g(T,T) = eps1
    CHECK_THROWS_AS(integrate_curve_from_frenet_data(g, one, one, signs, p0, fr[0] * 2.0, fr[1],
                                                     fr[2], 0.5, 1e-3),
                    ConfigError);
}

TEST_CASE("manufactured hyperbola reproduces the analytic curve") {
    WalkerMetric g("0");
    const double rho = 1.5;
    const Point p0{rho * kInvSqrt2, 0.0, rho * kInvSqrt2};  // t = 0 on the hyperbola
    const Vec3 T0{rho * kInvSqrt2 / rho, 0.0, -rho * kInvSqrt2 / rho};
    const Vec3 N0{kInvSqrt2, 0.0, kInvSqrt2};  // unit inward normal (spacelike)
    const Vec3 B0 = g.cross_at(p0, T0, N0);
    auto kap = [rho](double) { return 1.0 / rho; };
    auto zero = [](double) { return 0.0; };
    FrameSamples fs = integrate_curve_from_frenet_data(g, kap, zero, {-1, 1, 1}, p0, T0, N0, B0,
                                                       1.0, 1e-3);
    for (std::size_t i : {200u, 1000u}) {
        const double t = fs.samples[i].s / rho;  // orientation fixed by T0
        const Point expect{rho * kInvSqrt2 * std::exp(t), 0.0, rho * kInvSqrt2 * std::exp(-t)};
        CHECK((fs.samples[i].p - expect).norm() <= 1e-7);
    }
}

TEST_CASE("sampled curves interpolate well enough for frames") {
    WalkerMetric g("0");
    const double dt = 0.01;
    std::vector<Point> pts;
    for (int i = 0; i <= 700; ++i) {
        const double t = i * dt;
        pts.push_back({2 * std::sin(t) * kInvSqrt2, 2 * std::cos(t), 2 * std::sin(t) * kInvSqrt2});
    }
    UnitSpeedCurve usc(g, Curve::sampled(0.0, dt, pts));
    const FrenetApparatus fa = frenet_apparatus(usc, 1.0);
    CHECK(fa.kappa == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(std::abs(fa.tau) <= 1e-3);
}
