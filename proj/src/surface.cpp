#include "walker/surface.hpp"

#include <cmath>
#include <limits>

#include "walker/errors.hpp"

namespace walker {

namespace {
const std::vector<std::string> kSurfaceVars = {"u", "v"};
const std::vector<std::string> kCurveVar = {"t"};

double eval2(const ExprPtr& e, double u, double v) {
    const double env[2] = {u, v};
    return eval_expr(*e, env);
}
}  // namespace

const char* to_string(CaseTag tag) {
    switch (tag) {
        case CaseTag::TimelikeCase1: return "Case1";
        case CaseTag::SpacelikeCase2i: return "Case2i";
        case CaseTag::SpacelikeCase2ii: return "Case2ii";
    }
    return "?";
}

CaseTag case_tag_from_string(std::string_view s) {
    if (s == "Case1") return CaseTag::TimelikeCase1;
    if (s == "Case2i") return CaseTag::SpacelikeCase2i;
    if (s == "Case2ii") return CaseTag::SpacelikeCase2ii;
    throw ConfigError("unknown case tag '" + std::string(s) + "'");
}

SurfacePatch::SurfacePatch(std::string_view x, std::string_view y, std::string_view z)
    : rx_(parse_expr(x, kSurfaceVars)),
      ry_(parse_expr(y, kSurfaceVars)),
      rz_(parse_expr(z, kSurfaceVars)),
      rxu_(diff_expr(rx_, 0)),
      ryu_(diff_expr(ry_, 0)),
      rzu_(diff_expr(rz_, 0)),
      rxv_(diff_expr(rx_, 1)),
      ryv_(diff_expr(ry_, 1)),
      rzv_(diff_expr(rz_, 1)) {}

Point SurfacePatch::position(double u, double v) const {
    return {eval2(rx_, u, v), eval2(ry_, u, v), eval2(rz_, u, v)};
}

Vec3 SurfacePatch::partial_u(double u, double v) const {
    return {eval2(rxu_, u, v), eval2(ryu_, u, v), eval2(rzu_, u, v)};
}

Vec3 SurfacePatch::partial_v(double u, double v) const {
    return {eval2(rxv_, u, v), eval2(ryv_, u, v), eval2(rzv_, u, v)};
}

Tangent surface_normal(const WalkerMetric& g, const SurfacePatch& S, double u, double v,
                       double tol) {
    const Point p = S.position(u, v);
    const Vec3 ru = S.partial_u(u, v);
    const Vec3 rv = S.partial_v(u, v);
    const Vec3 n = g.cross_at(p, ru, rv);
    const double scale = std::max(1.0, ru.norm() * rv.norm());
    if (n.norm() < 1e-12 * scale) throw DegeneratePatch("surface partials are dependent");
    const double q = g.value_at(p, n, n);
    if (q <= tol * scale * scale)
        throw NotTimelikeSurface("surface normal is not spacelike (surface not timelike here)");
    return {n / std::sqrt(q), p};
}

CurveOnSurface CurveOnSurface::make(SurfacePatch S, std::string_view u_expr,
                                    std::string_view v_expr, double t0, double t1) {
    ExprPtr ut = parse_expr(u_expr, kCurveVar);
    ExprPtr vt = parse_expr(v_expr, kCurveVar);
    const ExprPtr subs[2] = {ut, vt};
    ExprPtr cx = substitute_expr(S.expr_x(), subs);
    ExprPtr cy = substitute_expr(S.expr_y(), subs);
    ExprPtr cz = substitute_expr(S.expr_z(), subs);
    Curve composed = Curve::analytic(expr_to_string(*cx), expr_to_string(*cy),
                                     expr_to_string(*cz), t0, t1);
    return CurveOnSurface{std::move(S), std::move(ut), std::move(vt), std::move(composed)};
}

double CurveOnSurface::u_at(double t) const {
    const double env[1] = {t};
    return eval_expr(*u_of_t, env);
}

double CurveOnSurface::v_at(double t) const {
    const double env[1] = {t};
    return eval_expr(*v_of_t, env);
}

std::array<double, 2> project_to_patch(const SurfacePatch& S, const Point& p, double u0,
                                       double v0) {
    double u = u0, v = v0;
    for (int iter = 0; iter < 30; ++iter) {
        const Vec3 r = S.position(u, v) - p;
        const Vec3 ru = S.partial_u(u, v);
        const Vec3 rv = S.partial_v(u, v);
        // Normal equations of the Gauss-Newton step (Euclidean chart metric).
        const double a = ru.x * ru.x + ru.y * ru.y + ru.z * ru.z;
        const double b = ru.x * rv.x + ru.y * rv.y + ru.z * rv.z;
        const double c = rv.x * rv.x + rv.y * rv.y + rv.z * rv.z;
        const double g1 = ru.x * r.x + ru.y * r.y + ru.z * r.z;
        const double g2 = rv.x * r.x + rv.y * r.y + rv.z * r.z;
        const double det = a * c - b * b;
        if (std::abs(det) < 1e-300) throw DegeneratePatch("projection normal equations singular");
        const double du = (c * g1 - b * g2) / det;
        const double dv = (a * g2 - b * g1) / det;
        u -= du;
        v -= dv;
        if (std::abs(du) + std::abs(dv) < 1e-14) break;
    }
    return {u, v};
}

void check_curve_on_surface(const SurfacePatch& S, const Curve& c, const ExprPtr& u_of_t,
                            const ExprPtr& v_of_t, int n_checks, double tol) {
    for (int i = 0; i <= n_checks; ++i) {
        const double t = c.t0() + (c.t1() - c.t0()) * i / n_checks;
        const double env[1] = {t};
        const double u0 = eval_expr(*u_of_t, env);
        const double v0 = eval_expr(*v_of_t, env);
        const Point p = c.position(t);
        const auto [u, v] = project_to_patch(S, p, u0, v0);
        if ((S.position(u, v) - p).norm() > tol)
            throw CurveOffSurface("curve leaves the surface at t=" + std::to_string(t));
    }
}

namespace {

template <typename F>
Vec3 fd5(const F& f, double s, double h) {
    const Vec3 m2 = f(s - 2.0 * h), m1 = f(s - h), p1 = f(s + h), p2 = f(s + 2.0 * h);
    return (m2 - p2 + (p1 - m1) * 8.0) / (12.0 * h);
}

}  // namespace

DarbouxApparatus darboux_apparatus(const UnitSpeedCurve& c, const CurveOnSurface& cs, double s,
                                   const DarbouxOptions& opt) {
    const WalkerMetric& g = c.metric();

    auto T_of = [&](double sv) { return c.tangent(sv); };
    auto U_of = [&](double sv) {
        const double t = c.t_of_s(sv);
        const Tangent n = surface_normal(g, cs.patch, cs.u_at(t), cs.v_at(t));
        return n.v;
    };
    auto Y_of = [&](double sv) {
        const double t = c.t_of_s(sv);
        const Point p = c.position(sv);
        const Vec3 Y0 = g.cross_at(p, U_of(sv), T_of(sv));
        return Y0 / std::sqrt(std::abs(g.value_at(p, Y0, Y0)));
    };

    const Point p = c.position(s);
    const Vec3 T = T_of(s);
    const double qT = g.value_at(p, T, T);
    if (std::abs(qT) < 1e-8) throw NullTangent("curve tangent is null");

    const Vec3 U = U_of(s);
    const Vec3 Y = Y_of(s);

    const Vec3 dT = fd5(T_of, s, opt.fd_step_inner);
    const Vec3 A = g.covariant_derivative_along(p, T, T, dT);
    const Vec3 dY = fd5(Y_of, s, opt.fd_step_outer);
    const Vec3 covY = g.covariant_derivative_along(p, T, Y, dY);

    DarbouxApparatus out;
    out.s = s;
    out.T = {T, p};
    out.Y = {Y, p};
    out.U = {U, p};
    out.kappa_g = g.value_at(p, A, Y);
    out.kappa_n = g.value_at(p, A, U);
    out.tau_g = g.value_at(p, covY, U);

    const int eps1 = qT >= 0.0 ? 1 : -1;
    if (eps1 == -1) {
        out.case_tag = CaseTag::TimelikeCase1;
        out.kappa = std::sqrt(out.kappa_g * out.kappa_g + out.kappa_n * out.kappa_n);
    } else {
        const double qA = g.value_at(p, A, A);
        out.case_tag = qA >= 0.0 ? CaseTag::SpacelikeCase2i : CaseTag::SpacelikeCase2ii;
        out.kappa = std::sqrt(std::abs(qA));
    }
    out.tau = std::numeric_limits<double>::quiet_NaN();
    if (out.kappa > opt.kappa_min) {
        if (auto th = recover_theta(out.case_tag, out.kappa_g, out.kappa_n)) {
            out.theta = *th;
            out.theta_defined = true;
        }
    }
    return out;
}

std::optional<double> recover_theta(CaseTag tag, double kappa_g, double kappa_n,
                                    double degenerate_tol) {
    if (std::abs(kappa_g) <= degenerate_tol && std::abs(kappa_n) <= degenerate_tol)
        return std::nullopt;  // geodesic and asymptotic at once: theta undefined
    switch (tag) {
        case CaseTag::TimelikeCase1:
            // kappa_g = kappa cos(theta), kappa_n = -kappa sin(theta)
            return std::atan2(-kappa_n, kappa_g);
        case CaseTag::SpacelikeCase2i: {
            if (std::abs(kappa_g) >= std::abs(kappa_n))
                throw HyperbolicDomain("|kappa_g| must be < |kappa_n| in Case 2i");
            return std::atanh(kappa_g / kappa_n);
        }
        case CaseTag::SpacelikeCase2ii: {
            if (std::abs(kappa_n) >= std::abs(kappa_g))
                throw HyperbolicDomain("|kappa_n| must be < |kappa_g| in Case 2ii");
            return std::atanh(kappa_n / kappa_g);
        }
    }
    return std::nullopt;
}

DarbouxRun darboux_from_frenet(const WalkerMetric& g, const FrameSamples& fs,
                               const std::function<double(double)>& theta,
                               const std::function<double(double)>& dtheta, CaseTag tag) {
    (void)g;
    switch (tag) {
        case CaseTag::TimelikeCase1:
            if (fs.eps1 != -1 || fs.eps2 != 1 || fs.eps3 != 1)
                throw UnsupportedCombination("Case 1 needs signs (-1, 1, 1)");
            break;
        case CaseTag::SpacelikeCase2i:
            if (fs.eps1 != 1 || fs.eps2 != 1 || fs.eps3 != -1)
                throw UnsupportedCombination("Case 2i needs signs (1, 1, -1)");
            break;
        case CaseTag::SpacelikeCase2ii:
            if (fs.eps1 != 1 || fs.eps2 != -1 || fs.eps3 != 1)
                throw UnsupportedCombination("Case 2ii needs signs (1, -1, 1)");
            break;
    }
    DarbouxRun run;
    run.ds = fs.ds;
    run.tag = tag;
    run.samples.reserve(fs.samples.size());
    for (const FrameSample& f : fs.samples) {
        const double th = theta(f.s);
        const double dth = dtheta(f.s);
        DarbouxApparatus a;
        a.s = f.s;
        a.case_tag = tag;
        a.kappa = f.kappa;
        a.tau = f.tau;
        a.theta = th;
        a.theta_defined = true;
        switch (tag) {
            case CaseTag::TimelikeCase1: {
                const double ct = std::cos(th), st = std::sin(th);
                a.Y = {f.N * ct + f.B * st, f.p};
                a.U = {f.N * (-st) + f.B * ct, f.p};
                a.kappa_g = f.kappa * ct;
                a.kappa_n = -f.kappa * st;
                a.tau_g = dth - f.tau;
                break;
            }
            case CaseTag::SpacelikeCase2i: {
                const double ch = std::cosh(th), sh = std::sinh(th);
                a.Y = {f.N * sh + f.B * ch, f.p};  // timelike leg
                a.U = {f.N * ch + f.B * sh, f.p};  // spacelike unit normal
                a.kappa_g = f.kappa * sh;
                a.kappa_n = f.kappa * ch;
                a.tau_g = dth + f.tau;
                break;
            }
            case CaseTag::SpacelikeCase2ii: {
                const double ch = std::cosh(th), sh = std::sinh(th);
                a.Y = {f.N * ch + f.B * sh, f.p};
                a.U = {f.N * sh + f.B * ch, f.p};
                a.kappa_g = f.kappa * ch;
                a.kappa_n = f.kappa * sh;
                a.tau_g = dth - f.tau;
                break;
            }
        }
        a.T = {f.T, f.p};
        run.samples.push_back(std::move(a));
    }
    return run;
}

namespace {

template <typename Get>
Vec3 fd5_run(const DarbouxRun& run, std::size_t i, const Get& get) {
    const double h = run.ds;
    return (get(run.samples[i - 2]) - get(run.samples[i + 2]) +
            (get(run.samples[i + 1]) - get(run.samples[i - 1])) * 8.0) /
           (12.0 * h);
}

}  // namespace

MeasuredScalars measure_darboux_scalars(const WalkerMetric& g, const DarbouxRun& run,
                                        std::size_t i) {
    if (i < 2 || i + 2 >= run.samples.size())
        throw ConfigError("sample index too close to the ends");
    const DarbouxApparatus& c = run.samples[i];
    const Point& p = c.T.base;
    const Vec3 dT = fd5_run(run, i, [](const DarbouxApparatus& a) { return a.T.v; });
    const Vec3 dY = fd5_run(run, i, [](const DarbouxApparatus& a) { return a.Y.v; });
    const Vec3 A = g.covariant_derivative_along(p, c.T.v, c.T.v, dT);
    const Vec3 covY = g.covariant_derivative_along(p, c.T.v, c.Y.v, dY);
    MeasuredScalars out;
    out.kappa_g = g.value_at(p, A, c.Y.v);
    out.kappa_n = g.value_at(p, A, c.U.v);
    out.tau_g = g.value_at(p, covY, c.U.v);
    return out;
}

StructureResiduals verify_structure_equations(const WalkerMetric& g, const DarbouxRun& run) {
    StructureResiduals r;
    const auto n = run.samples.size();
    if (n < 5) return r;
    const bool case1 = run.tag == CaseTag::TimelikeCase1;
    for (std::size_t i = 2; i + 2 < n; ++i) {
        const DarbouxApparatus& c = run.samples[i];
        const Point& p = c.T.base;
        const Vec3 dT = fd5_run(run, i, [](const DarbouxApparatus& a) { return a.T.v; });
        const Vec3 dY = fd5_run(run, i, [](const DarbouxApparatus& a) { return a.Y.v; });
        const Vec3 dU = fd5_run(run, i, [](const DarbouxApparatus& a) { return a.U.v; });
        const Vec3 covT = g.covariant_derivative_along(p, c.T.v, c.T.v, dT);
        const Vec3 covY = g.covariant_derivative_along(p, c.T.v, c.Y.v, dY);
        const Vec3 covU = g.covariant_derivative_along(p, c.T.v, c.U.v, dU);
        Vec3 rT, rY, rU;
        if (case1) {
            rT = covT - (c.Y.v * c.kappa_g + c.U.v * c.kappa_n);
            rY = covY - (c.T.v * c.kappa_g + c.U.v * c.tau_g);
            rU = covU - (c.T.v * c.kappa_n - c.Y.v * c.tau_g);
        } else {
            rT = covT - (c.Y.v * (-c.kappa_g) + c.U.v * c.kappa_n);
            rY = covY - (c.T.v * (-c.kappa_g) + c.U.v * c.tau_g);
            rU = covU - (c.T.v * (-c.kappa_n) + c.Y.v * c.tau_g);
        }
        r.eq_T = std::max(r.eq_T, rT.norm());
        r.eq_Y = std::max(r.eq_Y, rY.norm());
        r.eq_U = std::max(r.eq_U, rU.norm());
    }
    return r;
}

}  // namespace walker
