#include "walker/curve.hpp"

#include <algorithm>
#include <cmath>

#include "walker/errors.hpp"

namespace walker {

namespace {
const std::vector<std::string> kCurveVar = {"t"};

double eval1(const ExprPtr& e, double t) {
    const double env[1] = {t};
    return eval_expr(*e, env);
}
}  // namespace

Curve Curve::analytic(std::string_view x, std::string_view y, std::string_view z, double t0,
                      double t1, DerivativeScheme scheme) {
    if (!(t1 > t0)) throw ConfigError("curve parameter range must be increasing");
    Curve c;
    c.analytic_ = true;
    c.scheme_ = scheme;
    c.t0_ = t0;
    c.t1_ = t1;
    c.cx_ = parse_expr(x, kCurveVar);
    c.cy_ = parse_expr(y, kCurveVar);
    c.cz_ = parse_expr(z, kCurveVar);
    if (scheme == DerivativeScheme::Exact) {
        c.dx_ = diff_expr(c.cx_, 0);
        c.dy_ = diff_expr(c.cy_, 0);
        c.dz_ = diff_expr(c.cz_, 0);
    }
    return c;
}

Curve Curve::sampled(double t0, double dt, std::vector<Point> points) {
    if (points.size() < 4) throw ConfigError("sampled curve needs at least 4 points");
    if (!(dt > 0.0)) throw ConfigError("sampled curve spacing must be positive");
    Curve c;
    c.analytic_ = false;
    c.scheme_ = DerivativeScheme::CentralFD;
    c.t0_ = t0;
    c.dt_ = dt;
    c.t1_ = t0 + dt * static_cast<double>(points.size() - 1);
    c.points_ = std::move(points);
    return c;
}

Point Curve::sampled_position(double t) const {
    // Local cubic Lagrange interpolation on the uniform grid.
    const auto n = static_cast<long>(points_.size());
    double u = (t - t0_) / dt_;
    long i = static_cast<long>(std::floor(u)) - 1;
    i = std::clamp(i, 0L, n - 4);
    const double x = u - static_cast<double>(i);  // in [~1, ~2] for interior t
    double w[4];
    w[0] = -(x - 1.0) * (x - 2.0) * (x - 3.0) / 6.0;
    w[1] = x * (x - 2.0) * (x - 3.0) / 2.0;
    w[2] = -x * (x - 1.0) * (x - 3.0) / 2.0;
    w[3] = x * (x - 1.0) * (x - 2.0) / 6.0;
    Point p{0.0, 0.0, 0.0};
    for (int k = 0; k < 4; ++k) p = p + points_[static_cast<std::size_t>(i + k)] * w[k];
    return p;
}

Point Curve::position(double t) const {
    if (!analytic_) return sampled_position(t);
    return {eval1(cx_, t), eval1(cy_, t), eval1(cz_, t)};
}

Vec3 Curve::velocity(double t) const {
    if (analytic_ && scheme_ == DerivativeScheme::Exact)
        return {eval1(dx_, t), eval1(dy_, t), eval1(dz_, t)};
    // 5-point central difference; sampled curves use a grid-scaled step.
    const double h = analytic_ ? 1e-5 : dt_ * 0.25;
    const Point pm2 = position(t - 2.0 * h), pm1 = position(t - h);
    const Point pp1 = position(t + h), pp2 = position(t + 2.0 * h);
    return (pm2 - pp2 + (pp1 - pm1) * 8.0) / (12.0 * h);
}

// ---------------------------------------------------------------------------
// Arc-length reparametrization

UnitSpeedCurve::UnitSpeedCurve(const WalkerMetric& g, Curve c, int table_samples)
    : g_(g), curve_(std::move(c)) {
    const int n = std::max(table_samples, 16);
    const double t0 = curve_.t0(), t1 = curve_.t1();
    const double dt = (t1 - t0) / n;

    // Causal sign from the midpoint; null checks along the whole table.
    {
        const double tm = 0.5 * (t0 + t1);
        const Vec3 v = curve_.velocity(tm);
        eps1_ = g_.value_at(curve_.position(tm), v, v) >= 0.0 ? 1 : -1;
    }

    ts_.resize(static_cast<std::size_t>(n) + 1);
    ss_.resize(static_cast<std::size_t>(n) + 1);
    ts_[0] = t0;
    ss_[0] = 0.0;
    double prev_speed = speed(t0);
    for (int i = 1; i <= n; ++i) {
        const double ta = t0 + dt * (i - 1);
        const double tb = t0 + dt * i;
        const double vm = speed(0.5 * (ta + tb));
        const double vb = speed(tb);
        ts_[static_cast<std::size_t>(i)] = tb;
        ss_[static_cast<std::size_t>(i)] =
            ss_[static_cast<std::size_t>(i - 1)] + dt / 6.0 * (prev_speed + 4.0 * vm + vb);
        prev_speed = vb;
    }
    total_length_ = ss_.back();
}

double UnitSpeedCurve::speed(double t) const {
    const Point p = curve_.position(t);
    const Vec3 v = curve_.velocity(t);
    const double q = g_.value_at(p, v, v);
    const double scale = std::max(1.0, v.norm() * v.norm());
    if (std::abs(q) < 1e-8 * scale)
        throw NullSegment("curve tangent is null (|g(c',c')| below tolerance) at t=" +
                          std::to_string(t));
    return std::sqrt(std::abs(q));
}

double UnitSpeedCurve::t_of_s(double s) const {
    // Bracket in the table, then Newton with a local Simpson quadrature.
    auto it = std::upper_bound(ss_.begin(), ss_.end(), s);
    std::size_t i = it == ss_.begin() ? 0 : static_cast<std::size_t>(it - ss_.begin()) - 1;
    if (i >= ss_.size() - 1) i = ss_.size() - 2;
    const double ta = ts_[i], sa = ss_[i];
    const double dt_cell = ts_[i + 1] - ta;
    double t = ta + dt_cell * (s - sa) / std::max(ss_[i + 1] - sa, 1e-300);
    for (int iter = 0; iter < 4; ++iter) {
        const double w = t - ta;
        const double local =
            w / 6.0 * (speed(ta) + 4.0 * speed(ta + 0.5 * w) + speed(t));
        t -= (sa + local - s) / speed(t);
    }
    return t;
}

Point UnitSpeedCurve::position(double s) const { return curve_.position(t_of_s(s)); }

Vec3 UnitSpeedCurve::tangent(double s) const {
    const double t = t_of_s(s);
    return curve_.velocity(t) / speed(t);
}

// ---------------------------------------------------------------------------
// Frenet apparatus

namespace {

template <typename F>
Vec3 fd5(const F& f, double s, double h) {
    const Vec3 m2 = f(s - 2.0 * h), m1 = f(s - h), p1 = f(s + h), p2 = f(s + 2.0 * h);
    return (m2 - p2 + (p1 - m1) * 8.0) / (12.0 * h);
}

}  // namespace

FrenetApparatus frenet_apparatus(const UnitSpeedCurve& c, double s, const FrenetOptions& opt) {
    const WalkerMetric& g = c.metric();
    auto T_of = [&](double sv) { return c.tangent(sv); };

    // nabla_T T at a given arc length
    auto accel = [&](double sv) {
        const Point p = c.position(sv);
        const Vec3 T = c.tangent(sv);
        const Vec3 dT = fd5(T_of, sv, opt.fd_step_inner);
        return g.covariant_derivative_along(p, T, T, dT);
    };
    auto frame_at = [&](double sv) {
        const Point p = c.position(sv);
        const Vec3 T = c.tangent(sv);
        const Vec3 A = accel(sv);
        const double qa = g.value_at(p, A, A);
        const int e2 = qa >= 0.0 ? 1 : -1;
        const double kappa = std::sqrt(std::abs(qa));
        const Vec3 N = A / (e2 * kappa);
        Vec3 B = g.cross_at(p, T, N);
        const double qb = g.value_at(p, B, B);
        B = B / std::sqrt(std::abs(qb));
        struct Local {
            Point p;
            Vec3 T, N, B;
            double kappa;
            int e2, e3;
        };
        return Local{p, T, N, B, kappa, e2, qb >= 0.0 ? 1 : -1};
    };

    const auto fr = frame_at(s);
    if (fr.kappa <= opt.kappa_min)
        throw DegenerateCurvature("curvature below kappa_min; N, B, tau undefined");

    FrenetApparatus out;
    out.s = s;
    out.eps1 = c.causal_sign();
    out.eps2 = fr.e2;
    out.eps3 = fr.e3;
    out.kappa = fr.kappa;
    out.T = {fr.T, fr.p};
    out.N = {fr.N, fr.p};
    out.B = {fr.B, fr.p};

    auto B_of = [&](double sv) { return frame_at(sv).B; };
    const Vec3 dB = fd5(B_of, s, opt.fd_step_outer);
    const Vec3 covB = g.covariant_derivative_along(fr.p, fr.T, fr.B, dB);
    // tau from nabla_T B = eps2 tau N
    out.tau = fr.e2 * g.value_at(fr.p, covB, fr.N) / g.value_at(fr.p, fr.N, fr.N);
    return out;
}

// ---------------------------------------------------------------------------
// Frame manufacturing

double gram_schmidt_with_signs(const WalkerMetric& g, const Point& p, Vec3& a, Vec3& b, Vec3& c,
                               std::array<int, 3> signs) {
    double correction = 0.0;
    auto normalize = [&](Vec3& v, int sign) {
        const double q = g.value_at(p, v, v);
        if (std::abs(q) < 1e-14 || (q >= 0.0 ? 1 : -1) != sign)
            throw FrameDriftExceeded("frame leg lost its causal character");
        const Vec3 nv = v / std::sqrt(std::abs(q));
        correction = std::max(correction, (nv - v).norm());
        v = nv;
    };
    auto project_out = [&](Vec3& v, const Vec3& u, int usign) {
        const Vec3 nv = v - u * (g.value_at(p, v, u) / usign);
        correction = std::max(correction, (nv - v).norm());
        v = nv;
    };
    normalize(a, signs[0]);
    project_out(b, a, signs[0]);
    normalize(b, signs[1]);
    project_out(c, a, signs[0]);
    project_out(c, b, signs[1]);
    normalize(c, signs[2]);
    return correction;
}

std::array<Vec3, 3> orthonormal_frame_with_signs(const WalkerMetric& g, const Point& p,
                                                 std::array<int, 3> signs) {
    if (signs[0] * signs[1] * signs[2] != -1)
        throw ConfigError("sign pattern must contain exactly one timelike leg");
    const auto e = g.frame_e123(p);
    const Vec3 space1 = e[0].v, space2 = e[1].v, timelike = e[2].v;
    Vec3 a, b;
    if (signs[0] == -1) {
        a = timelike;
        b = space1;
    } else if (signs[1] == -1) {
        a = space1;
        b = timelike;
    } else {
        a = space1;
        b = space2;
    }
    Vec3 c = g.cross_at(p, a, b);
    c = c / std::sqrt(std::abs(g.value_at(p, c, c)));
    std::array<Vec3, 3> frame{a, b, c};
    gram_schmidt_with_signs(g, p, frame[0], frame[1], frame[2], signs);
    return frame;
}

FrameSamples integrate_curve_from_frenet_data(
    const WalkerMetric& g, const std::function<double(double)>& kappa,
    const std::function<double(double)>& tau, std::array<int, 3> signs, const Point& p0,
    const Vec3& T0, const Vec3& N0, const Vec3& B0, double s_max, double step,
    const FrameIntegrationOptions& opt) {
    if (!(step > 0.0) || !(s_max > 0.0)) throw ConfigError("step and s_max must be positive");
    const auto [e1, e2, e3] = signs;
    // Initial frame must be g-orthonormal with the requested signs.
    {
        const double tol = opt.initial_frame_tol;
        const Vec3 legs[3] = {T0, N0, B0};
        const int sg[3] = {e1, e2, e3};
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j) {
                const double want = i == j ? sg[i] : 0.0;
                if (std::abs(g.value_at(p0, legs[i], legs[j]) - want) > tol)
                    throw ConfigError("initial frame is not g-orthonormal with the given signs");
            }
    }

    struct State {
        Point p;
        Vec3 T, N, B;
    };
    auto rhs = [&](double s, const State& y) {
        const double k = kappa(s), t = tau(s);
        State d;
        d.p = y.T;
        d.T = y.N * (e2 * k) - g.christoffel_correction(y.p, y.T, y.T);
        d.N = y.T * (-e1 * k) + y.B * (-e3 * t) - g.christoffel_correction(y.p, y.T, y.N);
        d.B = y.N * (e2 * t) - g.christoffel_correction(y.p, y.T, y.B);
        return d;
    };
    auto axpy = [](const State& y, const State& d, double h) {
        return State{y.p + d.p * h, y.T + d.T * h, y.N + d.N * h, y.B + d.B * h};
    };

    const auto n = static_cast<std::size_t>(std::llround(s_max / step));
    FrameSamples out;
    out.ds = step;
    out.eps1 = e1;
    out.eps2 = e2;
    out.eps3 = e3;
    out.samples.reserve(n + 1);

    State y{p0, T0, N0, B0};
    for (std::size_t i = 0; i <= n; ++i) {
        const double s = step * static_cast<double>(i);
        out.samples.push_back({s, y.p, y.T, y.N, y.B, kappa(s), tau(s)});
        if (i == n) break;
        const State k1 = rhs(s, y);
        const State k2 = rhs(s + 0.5 * step, axpy(y, k1, 0.5 * step));
        const State k3 = rhs(s + 0.5 * step, axpy(y, k2, 0.5 * step));
        const State k4 = rhs(s + step, axpy(y, k3, step));
        y.p = y.p + (k1.p + (k2.p + k3.p) * 2.0 + k4.p) * (step / 6.0);
        y.T = y.T + (k1.T + (k2.T + k3.T) * 2.0 + k4.T) * (step / 6.0);
        y.N = y.N + (k1.N + (k2.N + k3.N) * 2.0 + k4.N) * (step / 6.0);
        y.B = y.B + (k1.B + (k2.B + k3.B) * 2.0 + k4.B) * (step / 6.0);
        const double corr = gram_schmidt_with_signs(g, y.p, y.T, y.N, y.B, signs);
        out.max_reorthonormalization = std::max(out.max_reorthonormalization, corr);
        if (corr > opt.drift_threshold)
            throw FrameDriftExceeded("re-orthonormalization correction exceeded threshold");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Residuals and round-trip recovery

namespace {

// 5-point derivative of a frame component over stored samples. Index must be
// at least 2 away from either end.
template <typename Get>
Vec3 fd5_samples(const FrameSamples& fs, std::size_t i, const Get& get) {
    const double h = fs.ds;
    return (get(fs.samples[i - 2]) - get(fs.samples[i + 2]) +
            (get(fs.samples[i + 1]) - get(fs.samples[i - 1])) * 8.0) /
           (12.0 * h);
}

}  // namespace

FrenetResiduals frenet_residuals(const WalkerMetric& g, const FrameSamples& fs) {
    FrenetResiduals r;
    const auto n = fs.samples.size();
    if (n < 5) return r;
    for (std::size_t i = 2; i + 2 < n; ++i) {
        const FrameSample& c = fs.samples[i];
        const Vec3 dT = fd5_samples(fs, i, [](const FrameSample& x) { return x.T; });
        const Vec3 dN = fd5_samples(fs, i, [](const FrameSample& x) { return x.N; });
        const Vec3 dB = fd5_samples(fs, i, [](const FrameSample& x) { return x.B; });
        const Vec3 covT = g.covariant_derivative_along(c.p, c.T, c.T, dT);
        const Vec3 covN = g.covariant_derivative_along(c.p, c.T, c.N, dN);
        const Vec3 covB = g.covariant_derivative_along(c.p, c.T, c.B, dB);
        r.eq_T = std::max(r.eq_T, (covT - c.N * (fs.eps2 * c.kappa)).norm());
        r.eq_N = std::max(r.eq_N,
                          (covN + c.T * (fs.eps1 * c.kappa) + c.B * (fs.eps3 * c.tau)).norm());
        r.eq_B = std::max(r.eq_B, (covB - c.N * (fs.eps2 * c.tau)).norm());
    }
    return r;
}

RecoveredInvariants invariants_from_samples(const WalkerMetric& g, const FrameSamples& fs,
                                            std::size_t i) {
    if (i < 2 || i + 2 >= fs.samples.size()) throw ConfigError("sample index too close to the ends");
    const FrameSample& c = fs.samples[i];
    const Vec3 dT = fd5_samples(fs, i, [](const FrameSample& x) { return x.T; });
    const Vec3 dB = fd5_samples(fs, i, [](const FrameSample& x) { return x.B; });
    const Vec3 A = g.covariant_derivative_along(c.p, c.T, c.T, dT);
    const Vec3 covB = g.covariant_derivative_along(c.p, c.T, c.B, dB);
    RecoveredInvariants out;
    out.kappa = std::sqrt(std::abs(g.value_at(c.p, A, A)));
    out.tau = fs.eps2 * g.value_at(c.p, covB, c.N) / g.value_at(c.p, c.N, c.N);
    return out;
}

}  // namespace walker
