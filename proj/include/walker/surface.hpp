#ifndef WALKER_SURFACE_HPP
#define WALKER_SURFACE_HPP

#include <functional>
#include <optional>
#include <vector>

#include "walker/curve.hpp"
#include "walker/metric.hpp"

namespace walker {

enum class CaseTag { TimelikeCase1, SpacelikeCase2i, SpacelikeCase2ii };

const char* to_string(CaseTag tag);
CaseTag case_tag_from_string(std::string_view s);

// Analytic surface patch r(u,v) in the Walker chart with exact partials.
class SurfacePatch {
public:
    SurfacePatch(std::string_view x, std::string_view y, std::string_view z);

    Point position(double u, double v) const;
    Vec3 partial_u(double u, double v) const;
    Vec3 partial_v(double u, double v) const;

    const ExprPtr& expr_x() const { return rx_; }
    const ExprPtr& expr_y() const { return ry_; }
    const ExprPtr& expr_z() const { return rz_; }

private:
    ExprPtr rx_, ry_, rz_;
    ExprPtr rxu_, ryu_, rzu_, rxv_, ryv_, rzv_;
};

// Unit spacelike normal of a timelike surface patch. Throws DegeneratePatch
// when the partials are dependent and NotTimelikeSurface when g(n,n) <= tol.
Tangent surface_normal(const WalkerMetric& g, const SurfacePatch& S, double u, double v,
                       double tol = 1e-10);

// Curve on a patch given by parameter functions u(t), v(t); `composed` is the
// chart curve r(u(t), v(t)) with exact derivatives.
struct CurveOnSurface {
    SurfacePatch patch;
    ExprPtr u_of_t, v_of_t;
    Curve composed;

    static CurveOnSurface make(SurfacePatch S, std::string_view u_expr, std::string_view v_expr,
                               double t0, double t1);
    double u_at(double t) const;
    double v_at(double t) const;
};

// Projects p onto the patch by Gauss-Newton from (u0, v0); returns (u, v).
std::array<double, 2> project_to_patch(const SurfacePatch& S, const Point& p, double u0, double v0);

// Verifies that a curve lies on the patch to `tol` in chart coordinates;
// throws CurveOffSurface otherwise.
void check_curve_on_surface(const SurfacePatch& S, const Curve& c, const ExprPtr& u_of_t,
                            const ExprPtr& v_of_t, int n_checks = 64, double tol = 1e-8);

struct DarbouxApparatus {
    double s = 0.0;
    Tangent T, Y, U;
    double kappa_g = 0.0, kappa_n = 0.0, tau_g = 0.0;
    double theta = 0.0;
    bool theta_defined = false;
    CaseTag case_tag = CaseTag::TimelikeCase1;
    // Ambient Frenet invariants when known (synthetic runs); NaN otherwise.
    double kappa = 0.0, tau = 0.0;
};

struct DarbouxOptions {
    double fd_step_inner = 1e-4;
    double fd_step_outer = 1e-3;
    double kappa_min = 1e-7;
};

// Darboux apparatus of a unit-speed curve lying on a timelike surface.
DarbouxApparatus darboux_apparatus(const UnitSpeedCurve& c, const CurveOnSurface& cs, double s,
                                   const DarbouxOptions& opt = {});

// theta from the scalar pair; std::nullopt when kappa_g and kappa_n both
// vanish. Throws HyperbolicDomain when the artanh argument is out of range.
std::optional<double> recover_theta(CaseTag tag, double kappa_g, double kappa_n,
                                    double degenerate_tol = 1e-12);

struct DarbouxRun {
    double ds = 0.0;
    CaseTag tag = CaseTag::TimelikeCase1;
    std::vector<DarbouxApparatus> samples;
};

// Builds Darboux frames from a manufactured Frenet run and an angle profile
// theta(s): the case transformation rotates (N, B) into (Y, U) and the
// scalars follow the case identities.
DarbouxRun darboux_from_frenet(const WalkerMetric& g, const FrameSamples& fs,
                               const std::function<double(double)>& theta,
                               const std::function<double(double)>& dtheta, CaseTag tag);

// Recomputes the Darboux scalars from the frame samples alone, by finite
// differences and metric contractions (independent of the stored values).
struct MeasuredScalars {
    double kappa_g = 0.0, kappa_n = 0.0, tau_g = 0.0;
};
MeasuredScalars measure_darboux_scalars(const WalkerMetric& g, const DarbouxRun& run,
                                        std::size_t i);

struct StructureResiduals {
    double eq_T = 0.0, eq_Y = 0.0, eq_U = 0.0;
    double max() const { return std::max({eq_T, eq_Y, eq_U}); }
};

// Residuals of the case structure equations over a uniformly sampled run.
StructureResiduals verify_structure_equations(const WalkerMetric& g, const DarbouxRun& run);

}  // namespace walker

#endif
