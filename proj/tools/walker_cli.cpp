#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "walker/breadth.hpp"
#include "walker/curve.hpp"
#include "walker/errors.hpp"
#include "walker/expr.hpp"
#include "walker/io.hpp"
#include "walker/metric.hpp"
#include "walker/surface.hpp"

namespace {

using nlohmann::json;
using namespace walker;

std::function<double(double)> profile_of_s(const json& cfg, const std::string& key) {
    if (!cfg.contains(key)) throw ConfigError("config is missing required key '" + key + "'");
    if (cfg.at(key).is_number()) {
        const double v = cfg.at(key).get<double>();
        return [v](double) { return v; };
    }
    const std::string text = cfg.at(key).get<std::string>();
    static const std::string vars[] = {"s"};
    ExprPtr e = parse_expr(text, vars);
    return [e](double s) {
        const double env[] = {s};
        return eval_expr(*e, env);
    };
}

double get_or(const json& cfg, const std::string& key, double fallback) {
    return cfg.contains(key) ? cfg.at(key).get<double>() : fallback;
}

Point point_from(const json& cfg, const std::string& key) {
    if (!cfg.contains(key)) return {};
    const auto& a = cfg.at(key);
    if (!a.is_array() || a.size() != 3) throw ConfigError("'" + key + "' must be [x, y, z]");
    return {a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
}

std::filesystem::path ensure_out_dir(const std::string& out) {
    std::filesystem::path dir = out.empty() ? "." : out;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory: " + dir.string());
    return dir;
}

// ---------------------------------------------------------------------------

int cmd_parse_check(const std::string& config_path) {
    const json cfg = load_json(config_path);
    int checked = 0;
    auto check = [&](const std::string& label, const std::string& text,
                     std::span<const std::string> vars) {
        parse_expr(text, vars);
        std::cout << "ok " << label << "\n";
        ++checked;
    };
    static const std::string yz[] = {"y", "z"};
    static const std::string t[] = {"t"};
    static const std::string uv[] = {"u", "v"};
    static const std::string s[] = {"s"};
    if (cfg.contains("f")) check("f", cfg.at("f").get<std::string>(), yz);
    if (cfg.contains("curve"))
        for (const char* k : {"x", "y", "z"})
            if (cfg.at("curve").contains(k))
                check(std::string("curve.") + k, cfg.at("curve").at(k).get<std::string>(), t);
    if (cfg.contains("surface")) {
        const json& sj = cfg.at("surface");
        for (const char* k : {"x", "y", "z"})
            if (sj.contains(k)) check(std::string("surface.") + k, sj.at(k).get<std::string>(), uv);
        for (const char* k : {"u_of_t", "v_of_t"})
            if (sj.contains(k)) check(std::string("surface.") + k, sj.at(k).get<std::string>(), t);
    }
    for (const char* k : {"kappa", "tau", "h", "kappa_g", "kappa_n", "tau_g"})
        if (cfg.contains(k) && cfg.at(k).is_string())
            check(k, cfg.at(k).get<std::string>(), s);
    if (checked == 0) throw ConfigError("config contains no expressions to check");
    std::cout << "parse-check: " << checked << " expression(s) ok\n";
    return 0;
}

int cmd_frames(const std::string& config_path, const std::string& out, double step) {
    const json cfg = load_json(config_path);
    if (!cfg.contains("f") || !cfg.contains("curve"))
        throw ConfigError("frames config needs 'f' and 'curve'");
    WalkerMetric g(cfg.at("f").get<std::string>());
    const json& cj = cfg.at("curve");
    Curve c = Curve::analytic(cj.at("x").get<std::string>(), cj.at("y").get<std::string>(),
                              cj.at("z").get<std::string>(), cj.at("t0").get<double>(),
                              cj.at("t1").get<double>());
    UnitSpeedCurve usc(g, c);

    std::optional<CurveOnSurface> cs;
    if (cfg.contains("surface")) {
        const json& sj = cfg.at("surface");
        SurfacePatch patch(sj.at("x").get<std::string>(), sj.at("y").get<std::string>(),
                           sj.at("z").get<std::string>());
        cs = CurveOnSurface::make(std::move(patch), sj.at("u_of_t").get<std::string>(),
                                  sj.at("v_of_t").get<std::string>(), cj.at("t0").get<double>(),
                                  cj.at("t1").get<double>());
        check_curve_on_surface(cs->patch, usc.source(), cs->u_of_t, cs->v_of_t);
    }

    const double out_step = step > 0 ? step : 1e-2;
    const double s_max = std::min(usc.length(), get_or(cfg, "s_max", usc.length()));
    const int n = std::max(1, static_cast<int>(std::floor(s_max / out_step)));

    std::vector<std::string> header = {"s", "px", "py", "pz", "Tx", "Ty", "Tz",
                                       "Nx", "Ny", "Nz", "Bx", "By", "Bz", "kappa", "tau"};
    if (cs) {
        header.insert(header.end(), {"Yx", "Yy", "Yz", "Ux", "Uy", "Uz",
                                     "kappa_g", "kappa_n", "tau_g", "theta", "case_index"});
    }
    std::vector<std::vector<double>> rows;
    for (int i = 0; i <= n; ++i) {
        const double si = i * out_step;
        const FrenetApparatus fa = frenet_apparatus(usc, si);
        std::vector<double> row = {si,
                                   fa.T.base.x, fa.T.base.y, fa.T.base.z,
                                   fa.T.v.x, fa.T.v.y, fa.T.v.z,
                                   fa.N.v.x, fa.N.v.y, fa.N.v.z,
                                   fa.B.v.x, fa.B.v.y, fa.B.v.z,
                                   fa.kappa, fa.tau};
        if (cs) {
            const DarbouxApparatus da = darboux_apparatus(usc, *cs, si);
            row.insert(row.end(), {da.Y.v.x, da.Y.v.y, da.Y.v.z,
                                   da.U.v.x, da.U.v.y, da.U.v.z,
                                   da.kappa_g, da.kappa_n, da.tau_g,
                                   da.theta_defined ? da.theta : std::nan(""),
                                   static_cast<double>(static_cast<int>(da.case_tag))});
        }
        rows.push_back(std::move(row));
    }
    const auto dir = ensure_out_dir(out);
    write_csv((dir / "frames.csv").string(), header, rows);
    std::cout << "frames: wrote " << rows.size() << " samples to " << (dir / "frames.csv").string()
              << "\n";
    return 0;
}

struct PairRun {
    BreadthCoefficients coeffs;
    std::optional<CurvePair> pair;
    std::optional<PairReport> report;
    CaseTag tag;
    PairKind kind;
};

PairRun run_pair(const json& cfg, double step_override) {
    const CaseTag tag = case_tag_from_string(cfg.at("case").get<std::string>());
    const PairKind kind = pair_kind_from_string(cfg.at("kind").get<std::string>());
    const double s_max = get_or(cfg, "s_max", 1.0);
    const double step = step_override > 0 ? step_override : get_or(cfg, "step", 1e-3);
    const double theta0 = get_or(cfg, "theta0", 0.0);

    HMode h_mode = HMode::Zero;
    std::function<double(double)> h_fn;
    if (cfg.contains("h_mode")) {
        const std::string hm = cfg.at("h_mode").get<std::string>();
        if (hm == "zero") h_mode = HMode::Zero;
        else if (hm == "minus_two_m1_prime") h_mode = HMode::MinusTwoM1Prime;
        else if (hm == "explicit") { h_mode = HMode::Explicit; h_fn = profile_of_s(cfg, "h"); }
        else throw ConfigError("unknown h_mode: " + hm);
    }

    CoefficientSystem sys = [&] {
        if (kind == PairKind::General) {
            DarbouxProfiles dp{profile_of_s(cfg, "kappa_g"), profile_of_s(cfg, "kappa_n"),
                               profile_of_s(cfg, "tau_g")};
            return coefficient_rhs_general(tag, dp, h_mode, h_fn);
        }
        Profiles prof{profile_of_s(cfg, "kappa"), profile_of_s(cfg, "tau")};
        return coefficient_rhs(tag, kind, prof, h_mode, h_fn);
    }();

    const auto& m0j = cfg.at("m0");
    if (!m0j.is_array() || m0j.size() != 3) throw ConfigError("'m0' must be [m1, m2, m3]");
    const std::array<double, 3> m0{m0j[0].get<double>(), m0j[1].get<double>(),
                                   m0j[2].get<double>()};

    PairRun run;
    run.tag = tag;
    run.kind = kind;
    run.coeffs = integrate_coefficients(sys, m0, theta0, s_max, step);

    // Full geometric assembly for the case with a manufactured ambient curve.
    if (tag == CaseTag::TimelikeCase1 && kind == PairKind::Geodesic && cfg.contains("f")) {
        WalkerMetric g(cfg.at("f").get<std::string>());
        DarbouxRun frames = manufacture_case1_geodesic_run(
            g, profile_of_s(cfg, "kappa"), profile_of_s(cfg, "tau"), point_from(cfg, "p0"), s_max,
            step);
        run.pair = build_partner(frames, run.coeffs, get_or(cfg, "translation_c", 0.0));
        run.report = verify_pair(g, *run.pair);
    }
    return run;
}

json report_to_json(const PairRun& run) {
    json rep;
    rep["case"] = to_string(run.tag);
    rep["kind"] = to_string(run.kind);
    rep["breadth_variation"] = run.coeffs.breadth_variation();
    rep["richardson_error"] = run.coeffs.richardson_error;
    if (run.report) {
        rep["tangent_opposition"] = run.report->tangent_opposition;
        rep["sstar_linearity"] = run.report->sstar_linearity;
        rep["helix_deviation"] = run.report->helix_deviation;
        rep["translation_case"] = run.report->translation_case;
    }
    return rep;
}

void write_pair_outputs(const PairRun& run, const std::string& out) {
    const auto dir = ensure_out_dir(out);
    {
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < run.coeffs.s.size(); ++i)
            rows.push_back({run.coeffs.s[i], run.coeffs.m1[i], run.coeffs.m2[i], run.coeffs.m3[i],
                            run.coeffs.h[i], run.coeffs.theta[i], run.coeffs.breadth(i)});
        write_csv((dir / "coefficients.csv").string(),
                  {"s", "m1", "m2", "m3", "h", "theta", "breadth"}, rows);
    }
    if (run.pair) {
        std::vector<std::vector<double>> rows;
        const CurvePair& p = *run.pair;
        for (std::size_t i = 0; i < p.s.size(); ++i)
            rows.push_back({p.s[i], p.alpha[i].x, p.alpha[i].y, p.alpha[i].z, p.beta[i].x,
                            p.beta[i].y, p.beta[i].z, p.s_star[i]});
        write_csv((dir / "pair.csv").string(),
                  {"s", "ax", "ay", "az", "bx", "by", "bz", "s_star"}, rows);
    }
    std::ofstream rep(dir / "report.json");
    rep << report_to_json(run).dump(2) << "\n";
}

int cmd_pair(const std::string& config_path, const std::string& out, double step) {
    const json cfg = load_json(config_path);
    const PairRun run = run_pair(cfg, step);
    write_pair_outputs(run, out);
    std::cout << report_to_json(run).dump(2) << "\n";
    return 0;
}

int cmd_verify(const std::string& config_path, const std::string& out, double step) {
    const json cfg = load_json(config_path);
    const PairRun run = run_pair(cfg, step);
    if (!out.empty()) write_pair_outputs(run, out);
    const json rep = report_to_json(run);
    std::cout << rep.dump(2) << "\n";

    const json tol = cfg.contains("tolerances") ? cfg.at("tolerances") : json::object();
    bool ok = run.coeffs.breadth_variation() <= get_or(tol, "breadth", 1e-6);
    if (run.report) {
        ok = ok && run.report->tangent_opposition <= get_or(tol, "tangent", 1e-5);
        if (std::isfinite(run.report->sstar_linearity))
            ok = ok && run.report->sstar_linearity <= get_or(tol, "sstar", 1e-6);
    }
    if (!ok) {
        std::cerr << "verify: tolerances exceeded\n";
        return 3;
    }
    std::cout << "verify: ok\n";
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out, std::uint64_t seed,
              double step) {
    const json cfg = config_path.empty() ? json::object() : load_json(config_path);
    SweepOptions opt;
    opt.samples = static_cast<int>(get_or(cfg, "samples", 100));
    opt.s_max = get_or(cfg, "s_max", 1.0);
    opt.step = step > 0 ? step : get_or(cfg, "step", 1e-3);

    std::vector<TheoremId> ids;
    if (!cfg.contains("theorems") || cfg.at("theorems") == "all") {
        ids = all_theorems();
    } else {
        for (const auto& name : cfg.at("theorems")) {
            bool found = false;
            for (TheoremId id : all_theorems())
                if (name.get<std::string>() == to_string(id)) { ids.push_back(id); found = true; }
            if (!found) throw ConfigError("unknown theorem name: " + name.get<std::string>());
        }
    }

    const auto results = theorem_suite(ids, seed, opt);

    const auto dir = ensure_out_dir(out);
    std::ofstream csv(dir / "sweep.csv");
    if (!csv) throw ConfigError("cannot open output file: " + (dir / "sweep.csv").string());
    csv << "theorem,passes,fails,unsat,worst_metric\n";
    bool all_ok = true;
    for (const auto& r : results) {
        csv << to_string(r.id) << "," << r.passes << "," << r.fails << "," << r.unsat << ","
            << format_g17(r.worst_metric) << "\n";
        std::cout << to_string(r.id) << ": " << r.passes << " pass, " << r.fails << " fail, "
                  << r.unsat << " unsatisfiable\n";
        all_ok = all_ok && r.ok();
    }
    if (!all_ok) {
        std::cerr << "sweep: theorem checks failed\n";
        return 3;
    }
    std::cout << "sweep: ok (" << results.size() << " theorems, seed " << seed << ")\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Differential geometry of curve pairs on strict Walker 3-manifolds"};
    app.require_subcommand(1);

    std::string config, out;
    std::uint64_t seed = 0;
    double step = -1.0;
    app.add_option("--config", config, "JSON config file")->configurable(false);
    app.add_option("--out", out, "output directory");
    app.add_option("--seed", seed, "random seed for sweeps");
    app.add_option("--step", step, "integration / sampling step");

    auto* frames = app.add_subcommand("frames", "Frenet (and Darboux) frames along a curve");
    auto* pair = app.add_subcommand("pair", "integrate a constant-breadth partner");
    auto* verify = app.add_subcommand("verify", "pair pipeline with tolerance gates");
    auto* sweep = app.add_subcommand("sweep", "randomized theorem verification sweep");
    auto* parse = app.add_subcommand("parse-check", "validate the expressions in a config");
    for (auto* sc : {frames, pair, verify, sweep, parse}) {
        sc->add_option("--config", config, "JSON config file");
        sc->add_option("--out", out, "output directory");
        sc->add_option("--seed", seed, "random seed");
        sc->add_option("--step", step, "integration / sampling step");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (parse->parsed()) {
            if (config.empty()) throw walker::ConfigError("parse-check needs --config");
            return cmd_parse_check(config);
        }
        if (frames->parsed()) {
            if (config.empty()) throw walker::ConfigError("frames needs --config");
            return cmd_frames(config, out, step);
        }
        if (pair->parsed()) {
            if (config.empty()) throw walker::ConfigError("pair needs --config");
            return cmd_pair(config, out, step);
        }
        if (verify->parsed()) {
            if (config.empty()) throw walker::ConfigError("verify needs --config");
            return cmd_verify(config, out, step);
        }
        if (sweep->parsed()) return cmd_sweep(config, out, seed, step);
    } catch (const walker::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const walker::SyntaxError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const walker::UnknownIdentifier& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const walker::Error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
