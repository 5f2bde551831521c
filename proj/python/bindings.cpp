#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "walker/breadth.hpp"
#include "walker/curve.hpp"
#include "walker/errors.hpp"
#include "walker/expr.hpp"
#include "walker/metric.hpp"
#include "walker/surface.hpp"

namespace py = pybind11;
using namespace walker;

namespace {

Vec3 to_vec(const std::array<double, 3>& a) { return {a[0], a[1], a[2]}; }
std::array<double, 3> from_vec(const Vec3& v) { return {v.x, v.y, v.z}; }

}  // namespace

PYBIND11_MODULE(_walker, m) {
    m.doc() = "Differential geometry of curve pairs on strict Walker 3-manifolds";

    py::register_exception<Error>(m, "WalkerError");

    m.def(
        "metric_value",
        [](const std::string& f, std::array<double, 3> p, std::array<double, 3> u,
           std::array<double, 3> v) {
            return WalkerMetric(f).value_at(to_vec(p), to_vec(u), to_vec(v));
        },
        py::arg("f"), py::arg("p"), py::arg("u"), py::arg("v"),
        "g(u, v) at the chart point p for the metric defined by the field f(y, z)");

    m.def(
        "christoffel",
        [](const std::string& f, std::array<double, 3> p) {
            const auto t = WalkerMetric(f).christoffel(to_vec(p));
            std::vector<std::vector<std::vector<double>>> out(
                3, std::vector<std::vector<double>>(3, std::vector<double>(3)));
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    for (int k = 0; k < 3; ++k) out[i][j][k] = t(i, j, k);
            return out;
        },
        py::arg("f"), py::arg("p"), "Christoffel symbols Gamma^i_{jk} as a nested list");

    m.def(
        "cross",
        [](const std::string& f, std::array<double, 3> p, std::array<double, 3> u,
           std::array<double, 3> v) {
            return from_vec(WalkerMetric(f).cross_at(to_vec(p), to_vec(u), to_vec(v)));
        },
        py::arg("f"), py::arg("p"), py::arg("u"), py::arg("v"),
        "metric cross product u x v, satisfying g(u x v, w) = det(u, v, w)");

    m.def(
        "frenet",
        [](const std::string& f, const std::string& x, const std::string& y,
           const std::string& z, double t0, double t1, double s) {
            WalkerMetric g(f);
            UnitSpeedCurve c(g, Curve::analytic(x, y, z, t0, t1));
            const FrenetApparatus fa = frenet_apparatus(c, s);
            py::dict d;
            d["s"] = fa.s;
            d["position"] = from_vec(fa.T.base);
            d["T"] = from_vec(fa.T.v);
            d["N"] = from_vec(fa.N.v);
            d["B"] = from_vec(fa.B.v);
            d["kappa"] = fa.kappa;
            d["tau"] = fa.tau;
            d["signs"] = std::array<int, 3>{fa.eps1, fa.eps2, fa.eps3};
            return d;
        },
        py::arg("f"), py::arg("x"), py::arg("y"), py::arg("z"), py::arg("t0"), py::arg("t1"),
        py::arg("s"), "Frenet apparatus of the analytic chart curve at arclength s");

    m.def(
        "closed_form_m1",
        [](const std::string& case_tag, const std::string& kind, double c0, double a1, double a2,
           double a3, double x) {
            return closed_form_m1(case_tag_from_string(case_tag), pair_kind_from_string(kind), c0,
                                  a1, a2, a3, x);
        },
        py::arg("case_tag"), py::arg("kind"), py::arg("c0"), py::arg("a1"), py::arg("a2"),
        py::arg("a3"), py::arg("x"));

    m.def(
        "integrate_coefficients",
        [](const std::string& case_tag, const std::string& kind, double kappa, double tau,
           std::array<double, 3> m0, double s_max, double step) {
            auto sys = coefficient_rhs(case_tag_from_string(case_tag),
                                       pair_kind_from_string(kind),
                                       {[kappa](double) { return kappa; },
                                        [tau](double) { return tau; }});
            const auto co = integrate_coefficients(sys, m0, 0.0, s_max, step);
            py::dict d;
            d["s"] = co.s;
            d["m1"] = co.m1;
            d["m2"] = co.m2;
            d["m3"] = co.m3;
            d["h"] = co.h;
            d["breadth_variation"] = co.breadth_variation();
            return d;
        },
        py::arg("case_tag"), py::arg("kind"), py::arg("kappa"), py::arg("tau"), py::arg("m0"),
        py::arg("s_max") = 1.0, py::arg("step") = 1e-3,
        "integrate the constant-invariant coefficient system with h = 0");

    m.def(
        "translation_pair",
        [](const std::string& f, double kappa, double b2, double s_max, double step, double c) {
            WalkerMetric g(f);
            DarbouxRun frames = manufacture_case1_geodesic_run(
                g, [kappa](double) { return kappa; }, [](double) { return 0.0; }, {0, 0, 0},
                s_max, step);
            auto sys = coefficient_rhs(CaseTag::TimelikeCase1, PairKind::Geodesic,
                                       {[kappa](double) { return kappa; },
                                        [](double) { return 0.0; }});
            auto co = integrate_coefficients(sys, {0.0, b2, 0.0}, 0.0, s_max, step);
            CurvePair pair = build_partner(frames, co, c);
            const PairReport rep = verify_pair(g, pair);
            py::dict d;
            d["breadth_variation"] = rep.breadth_variation;
            d["tangent_opposition"] = rep.tangent_opposition;
            d["sstar_linearity"] = rep.sstar_linearity;
            d["translation_case"] = rep.translation_case;
            return d;
        },
        py::arg("f"), py::arg("kappa"), py::arg("b2"), py::arg("s_max") = 1.0,
        py::arg("step") = 1e-3, py::arg("c") = 0.0,
        "build and verify a planar translation pair beta = alpha + b2 Y");

    m.def(
        "helix_check",
        [](const std::vector<double>& kappa, const std::vector<double>& tau) {
            const HelixResult r = helix_check(kappa, tau);
            return py::make_tuple(r.is_helix, r.deviation);
        },
        py::arg("kappa"), py::arg("tau"));

    m.def(
        "theorem_sweep",
        [](std::uint64_t seed, int samples) {
            SweepOptions opt;
            opt.samples = samples;
            py::list out;
            for (const auto& r : theorem_suite(all_theorems(), seed, opt)) {
                py::dict d;
                d["theorem"] = std::string(to_string(r.id));
                d["passes"] = r.passes;
                d["fails"] = r.fails;
                d["unsat"] = r.unsat;
                d["ok"] = r.ok();
                out.append(d);
            }
            return out;
        },
        py::arg("seed") = 0, py::arg("samples") = 20);

    m.def(
        "parse_check",
        [](const std::string& text, const std::vector<std::string>& variables) {
            parse_expr(text, variables);
            return true;
        },
        py::arg("text"), py::arg("variables"),
        "validate an expression; raises WalkerError with a byte offset on failure");
}
