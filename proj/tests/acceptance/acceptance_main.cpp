// End-to-end acceptance gate: one pass/fail line per criterion, nonzero exit
// on any failure.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "walker/breadth.hpp"
#include "walker/curve.hpp"
#include "walker/errors.hpp"
#include "walker/metric.hpp"
#include "walker/surface.hpp"
#include "../oracles.hpp"

using namespace walker;
using namespace walker::testing;

namespace {

int g_failures = 0;

void report(int index, const char* label, bool ok, const std::string& detail) {
    std::printf("%s criterion %d (%s): %s\n", ok ? "PASS" : "FAIL", index, label, detail.c_str());
    if (!ok) ++g_failures;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// 1. cross product identity against the determinant, 1000 random triples.
void criterion1() {
    std::mt19937_64 rng(101);
    double worst = 0.0;
    for (const auto& text : field_pool()) {
        WalkerMetric g(text);
        for (int n = 0; n < 1000; ++n) {
            const Point p = random_vec(rng, -1.5, 1.5);
            const Vec3 u = random_vec(rng), v = random_vec(rng), w = random_vec(rng);
            const double lhs = g.value_at(p, g.cross_at(p, u, v), w);
            const double scale = 1e-12 * (1 + u.norm()) * (1 + v.norm()) * (1 + w.norm()) *
                                 (1 + std::abs(g.f_at(p)));
            worst = std::max(worst, std::abs(lhs - det3(u, v, w)) / scale);
        }
    }
    report(1, "cross-determinant identity", worst <= 1.0, "worst scaled error " + fmt(worst));
}

// 2. Christoffel symbols against the finite-difference coordinate formula.
void criterion2() {
    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> d(-1.5, 1.5);
    double worst = 0.0;
    for (const auto& text : field_pool()) {
        WalkerMetric g(text);
        for (int n = 0; n < 100; ++n) {
            const Point p{d(rng), d(rng), d(rng)};
            const auto lib = g.christoffel(p);
            const auto fd = fd_christoffel(g, p);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    for (int k = 0; k < 3; ++k)
                        worst = std::max(worst, std::abs(lib(i, j, k) - fd(i, j, k)));
        }
    }
    report(2, "Christoffel oracle", worst <= 1e-6, "worst deviation " + fmt(worst));
}

// 3. Frenet equation residuals on a manufactured run over s in [0, 1].
void criterion3() {
    WalkerMetric g("sin(y)*z");
    const Point p0{0.1, 0.2, 0.3};
    const std::array<int, 3> signs{-1, 1, 1};
    const auto fr = orthonormal_frame_with_signs(g, p0, signs);
    FrameSamples fs = integrate_curve_from_frenet_data(
        g, [](double s) { return 1.0 + 0.3 * std::sin(s); }, [](double) { return 0.4; }, signs,
        p0, fr[0], fr[1], fr[2], 1.0, 1e-4);
    const double worst = frenet_residuals(g, fs).max();
    report(3, "Frenet residuals", worst <= 1e-6, "max residual " + fmt(worst));
}

// 4. Darboux case identities from independent measurements.
void criterion4() {
    WalkerMetric g("y^2 - z");
    auto kap = [](double s) { return 1.2 + 0.2 * std::sin(s); };
    auto tau = [](double) { return 0.5; };
    auto theta = [](double s) { return 0.3 + 0.2 * s; };
    auto dtheta = [](double) { return 0.2; };
    const Point p0{0.05, 0.1, 0.2};

    double worst_tg = 0.0, worst_k = 0.0;
    auto run_case = [&](std::array<int, 3> signs, CaseTag tag, double tg_sign) {
        const auto fr = orthonormal_frame_with_signs(g, p0, signs);
        FrameSamples fs = integrate_curve_from_frenet_data(g, kap, tau, signs, p0, fr[0], fr[1],
                                                           fr[2], 1.0, 1e-3);
        DarbouxRun run = darboux_from_frenet(g, fs, theta, dtheta, tag);
        for (std::size_t i = 5; i + 5 < run.samples.size(); i += 25) {
            const double s = run.samples[i].s;
            const MeasuredScalars ms = measure_darboux_scalars(g, run, i);
            worst_tg = std::max(worst_tg, std::abs(ms.tau_g - (dtheta(s) + tg_sign * tau(s))));
            const double k2 = kap(s) * kap(s);
            const double q = tag == CaseTag::TimelikeCase1
                                 ? ms.kappa_g * ms.kappa_g + ms.kappa_n * ms.kappa_n
                                 : std::abs(ms.kappa_n * ms.kappa_n - ms.kappa_g * ms.kappa_g);
            worst_k = std::max(worst_k, std::abs(q - k2) / k2);
        }
    };
    run_case({-1, 1, 1}, CaseTag::TimelikeCase1, -1.0);
    run_case({1, 1, -1}, CaseTag::SpacelikeCase2i, +1.0);
    const bool ok = worst_tg <= 1e-5 && worst_k <= 1e-6;
    report(4, "case scalar identities", ok,
           "tau_g deviation " + fmt(worst_tg) + ", curvature identity " + fmt(worst_k));
}

// 5. conservation of the case breadth forms under admissible forcing.
void criterion5() {
    double worst = 0.0;
    for (CaseTag tag :
         {CaseTag::TimelikeCase1, CaseTag::SpacelikeCase2i, CaseTag::SpacelikeCase2ii}) {
        std::uint64_t rng = 505 + static_cast<std::uint64_t>(tag);
        for (int n = 0; n < 50; ++n) {
            auto draw = [&rng]() {
                SmoothProfile p;
                p.base = urand(rng, -1.0, 1.0);
                for (int k = 0; k < 2; ++k) {
                    p.amp[k] = urand(rng, -0.4, 0.4);
                    p.freq[k] = urand(rng, 1.0, 4.0);
                    p.phase[k] = urand(rng, 0.0, 6.28);
                }
                return p;
            };
            DarbouxProfiles dp{draw(), draw(), draw()};
            const HMode hm =
                tag == CaseTag::SpacelikeCase2i ? HMode::MinusTwoM1Prime : HMode::Zero;
            auto sys = coefficient_rhs_general(tag, dp, hm);
            auto co = integrate_coefficients(
                sys, {urand(rng, -1, 1), urand(rng, -1, 1), urand(rng, -1, 1)}, 0.0, 1.0, 1e-3);
            worst = std::max(worst, co.breadth_variation());
        }
    }
    report(5, "breadth conservation", worst <= 1e-8, "worst variation " + fmt(worst));
}

// 6. closed-form m1 against RK4 on the window [0, 2].
void criterion6() {
    double worst = 0.0;
    for (double c0 : {1.6, 0.5}) {
        const double k0 = 1.3, a1 = 0.4, a2 = -0.7, a3 = 0.2;
        auto at = [&](double z) {
            return closed_form_m1_derivs(CaseTag::TimelikeCase1, PairKind::Geodesic, c0, a1, a2,
                                         a3, z);
        };
        const auto d0 = at(0.0);
        auto sys = coefficient_rhs(CaseTag::TimelikeCase1, PairKind::Geodesic,
                                   {[k0](double) { return k0; }, [=](double) { return c0 * k0; }});
        auto co = integrate_coefficients(sys, {d0[0], (d0[2] - d0[0]) / c0, d0[1]}, 0.0, 2.0,
                                         1e-3);
        for (std::size_t i = 0; i < co.s.size(); ++i)
            worst = std::max(worst, std::abs(co.m1[i] - at(k0 * co.s[i])[0]));
    }
    report(6, "closed form vs RK4", worst <= 1e-6, "worst deviation " + fmt(worst));
}

// 7. randomized theorem sweep: every drawn configuration must verify.
void criterion7() {
    SweepOptions opt;
    opt.samples = 100;
    const auto results = theorem_suite(all_theorems(), 2024, opt);
    int fails = 0, unsat = 0, total = 0;
    for (const auto& r : results) {
        fails += r.fails;
        unsat += r.unsat;
        total += r.passes + r.fails + r.unsat;
    }
    const bool ok = fails == 0 && 2 * unsat < total;
    std::ostringstream os;
    os << total << " samples, " << fails << " failures, " << unsat << " unsatisfiable";
    report(7, "theorem sweep", ok, os.str());
}

// 8. end-to-end translation pair beta = alpha + b2 Y with s* = -s + c.
void criterion8() {
    WalkerMetric g("0");
    const double step = 1e-3, c = 2.0, b2 = 0.7;
    DarbouxRun frames = manufacture_case1_geodesic_run(
        g, [](double) { return 1.0; }, [](double) { return 0.0; }, {0, 0, 0}, 1.0, step);
    auto sys = coefficient_rhs(CaseTag::TimelikeCase1, PairKind::Geodesic,
                               {[](double) { return 1.0; }, [](double) { return 0.0; }});
    auto co = integrate_coefficients(sys, {0.0, b2, 0.0}, 0.0, 1.0, step);
    CurvePair pair = build_partner(frames, co, c);
    const PairReport rep = verify_pair(g, pair);
    const bool ok = rep.breadth_variation <= 1e-6 && rep.tangent_opposition <= 1e-5 &&
                    rep.sstar_linearity <= 1e-6 && rep.translation_case;
    report(8, "end-to-end pair", ok,
           "breadth " + fmt(rep.breadth_variation) + ", opposition " +
               fmt(rep.tangent_opposition) + ", s* linearity " + fmt(rep.sstar_linearity));
}

// 9. CLI sweep determinism: identical bytes for identical seeds.
void criterion9(const char* cli) {
    if (!cli || !*cli) {
        report(9, "CLI determinism", false, "CLI path not provided");
        return;
    }
    auto slurp = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream os;
        os << in.rdbuf();
        return os.str();
    };
    const std::string cfg = "/tmp/walker_acceptance_sweep.json";
    {
        std::ofstream out(cfg);
        out << "{\"samples\": 20}\n";
    }
    bool ok = true;
    std::string detail;
    for (const char* dir : {"/tmp/walker_acc_a", "/tmp/walker_acc_b"}) {
        const std::string cmd = std::string(cli) + " sweep --config " + cfg + " --seed 7 --out " +
                                dir + " > /dev/null";
        if (std::system(cmd.c_str()) != 0) {
            ok = false;
            detail = "sweep invocation failed";
        }
    }
    if (ok) {
        const std::string a = slurp("/tmp/walker_acc_a/sweep.csv");
        const std::string b = slurp("/tmp/walker_acc_b/sweep.csv");
        ok = !a.empty() && a == b;
        detail = ok ? "byte-identical sweep.csv across reruns" : "outputs differ";
    }
    report(9, "CLI determinism", ok, detail);
}

}  // namespace

int main(int argc, char** argv) {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9(argc > 1 ? argv[1] : nullptr);
    if (g_failures) {
        std::printf("acceptance: %d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("acceptance: all criteria passed\n");
    return 0;
}
