#ifndef WALKER_CURVE_HPP
#define WALKER_CURVE_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "walker/metric.hpp"

namespace walker {

enum class DerivativeScheme { Exact, CentralFD };

// A curve in the Walker chart: either analytic (three coordinate expressions
// of t) or sampled on a uniform parameter grid.
class Curve {
public:
    static Curve analytic(std::string_view x, std::string_view y, std::string_view z,
                          double t0, double t1,
                          DerivativeScheme scheme = DerivativeScheme::Exact);
    static Curve sampled(double t0, double dt, std::vector<Point> points);

    Point position(double t) const;
    Vec3 velocity(double t) const;

    double t0() const { return t0_; }
    double t1() const { return t1_; }
    bool is_analytic() const { return analytic_; }
    DerivativeScheme scheme() const { return scheme_; }

private:
    Curve() = default;

    bool analytic_ = true;
    DerivativeScheme scheme_ = DerivativeScheme::Exact;
    double t0_ = 0.0, t1_ = 1.0;
    // analytic representation
    ExprPtr cx_, cy_, cz_;
    ExprPtr dx_, dy_, dz_;  // exact first derivatives (Exact scheme)
    // sampled representation
    double dt_ = 0.0;
    std::vector<Point> points_;

    Point sampled_position(double t) const;
};

// Arc-length reparametrization of a non-null curve. Built once, then queried
// at arbitrary s in [0, length()].
class UnitSpeedCurve {
public:
    UnitSpeedCurve(const WalkerMetric& g, Curve c, int table_samples = 2048);

    double length() const { return total_length_; }
    int causal_sign() const { return eps1_; }  // g(T,T) = eps1

    double t_of_s(double s) const;
    Point position(double s) const;
    Vec3 tangent(double s) const;  // unit tangent T(s)

    const WalkerMetric& metric() const { return g_; }
    const Curve& source() const { return curve_; }

private:
    double speed(double t) const;

    WalkerMetric g_;
    Curve curve_;
    int eps1_ = 1;
    double total_length_ = 0.0;
    std::vector<double> ts_, ss_;
};

struct FrenetApparatus {
    double s = 0.0;
    Tangent T, N, B;
    double kappa = 0.0;
    double tau = 0.0;
    int eps1 = 1, eps2 = 1, eps3 = 1;
};

struct FrenetOptions {
    double kappa_min = 1e-7;
    double fd_step_inner = 1e-4;  // step for dT/ds
    double fd_step_outer = 1e-3;  // step for dB/ds (derived-frame derivative)
};

// Frenet apparatus of a unit-speed curve at s. Throws DegenerateCurvature
// when kappa <= kappa_min.
FrenetApparatus frenet_apparatus(const UnitSpeedCurve& c, double s,
                                 const FrenetOptions& opt = {});

struct FrameSample {
    double s = 0.0;
    Point p;
    Vec3 T, N, B;
    double kappa = 0.0;
    double tau = 0.0;
};

struct FrameSamples {
    double ds = 0.0;
    int eps1 = 1, eps2 = 1, eps3 = 1;
    std::vector<FrameSample> samples;
    double max_reorthonormalization = 0.0;
};

struct FrameIntegrationOptions {
    double drift_threshold = 1e-6;  // per-step re-orthonormalization budget
    double initial_frame_tol = 1e-8;
};

// Solves the Frenet system jointly with dp/ds = T for prescribed kappa(s),
// tau(s) and causal signs, with per-step Gram-Schmidt re-orthonormalization
// against g. Used to manufacture curves with known invariants.
FrameSamples integrate_curve_from_frenet_data(
    const WalkerMetric& g, const std::function<double(double)>& kappa,
    const std::function<double(double)>& tau, std::array<int, 3> signs, const Point& p0,
    const Vec3& T0, const Vec3& N0, const Vec3& B0, double s_max, double step,
    const FrameIntegrationOptions& opt = {});

struct FrenetResiduals {
    double eq_T = 0.0;  // || nabla_T T - eps2 kappa N ||
    double eq_N = 0.0;  // || nabla_T N + eps1 kappa T + eps3 tau B ||
    double eq_B = 0.0;  // || nabla_T B - eps2 tau N ||
    double max() const { return std::max({eq_T, eq_N, eq_B}); }
};

// Finite-difference residuals of the Frenet equations over a frame sample run.
FrenetResiduals frenet_residuals(const WalkerMetric& g, const FrameSamples& fs);

// Recovers kappa and tau at sample index i from the frame samples alone
// (finite differences plus Christoffel corrections); round-trip check against
// the prescribed profiles.
struct RecoveredInvariants {
    double kappa = 0.0;
    double tau = 0.0;
};
RecoveredInvariants invariants_from_samples(const WalkerMetric& g, const FrameSamples& fs,
                                            std::size_t i);

// Builds an g-orthonormal frame with signs (eps1, eps2, eps3) from a seed
// direction at p; helper for manufacturing initial data.
std::array<Vec3, 3> orthonormal_frame_with_signs(const WalkerMetric& g, const Point& p,
                                                 std::array<int, 3> signs);

// Gram-Schmidt against g with prescribed signs; returns the largest
// correction applied. Throws if a norm collapses.
double gram_schmidt_with_signs(const WalkerMetric& g, const Point& p, Vec3& a, Vec3& b, Vec3& c,
                               std::array<int, 3> signs);

}  // namespace walker

#endif
