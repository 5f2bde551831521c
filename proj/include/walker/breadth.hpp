#ifndef WALKER_BREADTH_HPP
#define WALKER_BREADTH_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "walker/surface.hpp"

namespace walker {

enum class PairKind { Geodesic, Asymptotic, PrincipalLine, General };
enum class HMode { Zero, MinusTwoM1Prime, Explicit };
enum class Subcase { M1Nonzero, M1Zero };

const char* to_string(PairKind k);
PairKind pair_kind_from_string(std::string_view s);

// Sign pattern (sigma1, sigma2, sigma3) of the breadth form for a case.
std::array<int, 3> breadth_signs(CaseTag tag);

// kappa(s), tau(s) profiles for the specialized kinds.
struct Profiles {
    std::function<double(double)> kappa, tau;
};

// Darboux scalar profiles for the general systems.
struct DarbouxProfiles {
    std::function<double(double)> kappa_g, kappa_n, tau_g;
};

struct PairConfig {
    CaseTag case_tag = CaseTag::TimelikeCase1;
    PairKind kind = PairKind::Geodesic;
    Subcase subcase = Subcase::M1Nonzero;
    double a1 = 0.0, a2 = 0.0, a3 = 0.0;
    double b1 = 0.0, b2 = 0.0;
    double c0 = 1.0;             // tau/kappa (geodesic, asymptotic) or kappa/tau (principal)
    double c2 = 0.0, c3 = 0.0;   // principal-line constants
    double translation_c = 0.0;  // constant in s* = -s + c
    HMode h_mode = HMode::Zero;
    std::function<double(double)> h_explicit;
    double theta0 = 0.0;
};

// First-order coefficient system dm/ds = F(s, m) with the forcing h resolved
// per the configured mode. State is (m1, m2, m3, theta).
struct CoefficientSystem {
    CaseTag case_tag;
    PairKind kind;
    std::function<std::array<double, 4>(double, const std::array<double, 4>&)> rhs;
    std::function<double(double, const std::array<double, 4>&)> h_of;
};

// Builds the per-case, per-kind system. Throws UnsupportedCombination for
// pairs outside the supported matrix (Case1 x {Geodesic, Asymptotic,
// PrincipalLine}, Case2i x {Geodesic, PrincipalLine}, Case2ii x {Asymptotic,
// PrincipalLine}; General is available for every case) and when the kind
// requires a non-straight curve but kappa vanishes.
CoefficientSystem coefficient_rhs(CaseTag tag, PairKind kind, const Profiles& prof,
                                  HMode h_mode = HMode::Zero,
                                  std::function<double(double)> h_explicit = {});

CoefficientSystem coefficient_rhs_general(CaseTag tag, const DarbouxProfiles& prof,
                                          HMode h_mode = HMode::Zero,
                                          std::function<double(double)> h_explicit = {});

struct BreadthCoefficients {
    std::vector<double> s, m1, m2, m3, h, theta;
    std::array<int, 3> sigma{-1, 1, 1};
    double richardson_error = 0.0;

    double breadth(std::size_t i) const {
        return sigma[0] * m1[i] * m1[i] + sigma[1] * m2[i] * m2[i] + sigma[2] * m3[i] * m3[i];
    }
    double breadth_variation() const;
};

struct IntegrateOptions {
    double step_check_tol = 1e-4;  // Richardson halving gate
    bool richardson = true;
};

BreadthCoefficients integrate_coefficients(const CoefficientSystem& sys,
                                           const std::array<double, 3>& m0, double theta0,
                                           double s_max, double step,
                                           const IntegrateOptions& opt = {});

// Closed-form m1 branches of the breadth theorems; `x` is the transformed
// variable (z = int kappa ds for geodesic/asymptotic kinds, theta = int tau ds
// for principal kinds).
double closed_form_m1(CaseTag tag, PairKind kind, double c0, double a1, double a2, double a3,
                      double x);

// Value and first three derivatives with respect to x (exact differentiation
// of the same branch formula).
std::array<double, 4> closed_form_m1_derivs(CaseTag tag, PairKind kind, double c0, double a1,
                                            double a2, double a3, double x);

// Coefficient lambda of the reduced equation m1''' + lambda m1' = 0 of the
// given case/kind.
double reduced_ode_lambda(CaseTag tag, PairKind kind, double c0);

// m1 = 0 geodesic/asymptotic solution family: rotation in (m2, m3) driven by
// Theta = int tau ds, together with the forcing ratio h/kappa.
struct M23Solution {
    double m2 = 0.0, m3 = 0.0;
    double h_over_kappa = 0.0;
};
M23Solution geodesic_m23_closed_form(double b1, double b2, double Theta,
                                     PairKind kind = PairKind::Geodesic);

struct PairReport {
    double breadth_variation = 0.0;
    double tangent_opposition = 0.0;
    double sstar_linearity = 0.0;  // NaN when h is not identically zero
    double helix_deviation = 0.0;
    double richardson_error = 0.0;
    bool translation_case = false;
};

struct CurvePair {
    std::vector<double> s;
    std::vector<Point> alpha, beta;
    std::vector<Vec3> T_alpha;
    std::vector<double> s_star;
    std::vector<double> kappa, tau;
    BreadthCoefficients coeffs;
    CaseTag case_tag = CaseTag::TimelikeCase1;
};

// Assembles beta(s*) = alpha(s) + m1 T + m2 Y + m3 U on the frame grid and
// integrates ds*/ds = h - 1 from translation_c.
CurvePair build_partner(const DarbouxRun& frames, const BreadthCoefficients& coeffs,
                        double translation_c = 0.0);

PairReport verify_pair(const WalkerMetric& g, const CurvePair& pair);

struct HelixResult {
    bool is_helix = false;
    double deviation = 0.0;
};
HelixResult helix_check(const std::vector<double>& kappa, const std::vector<double>& tau,
                        double rel_tol = 1e-5, double kappa_min = 1e-7);

// ---------------------------------------------------------------------------
// Theorem sweep

// Deterministic smooth profile c(s) = base + sum_k amp_k sin(freq_k s + phase_k).
struct SmoothProfile {
    double base = 1.0;
    std::array<double, 2> amp{}, freq{}, phase{};
    double operator()(double s) const;
};

enum class TheoremId {
    Case1GeodesicConstantM1,   // Case1 geodesic, m1 nonzero constant -> helix, m3 = 0, m2 constant
    Case1GeodesicRotation,   // Case1 geodesic, m1 = 0 -> rotation solution in (m2, m3)
    Case1AsymptoticRotation,   // Case1 asymptotic, m1 = 0 -> rotation solution
    Case1PrincipalConstants,   // Case1 principal, m1 = 0 -> helix, m2, m3 constants
    Case2iGeodesicConstantM1,  // Case2i geodesic, m1 nonzero constant -> helix, m3 = 0
    Case2iGeodesicTranslation,  // Case2i geodesic, m1 = 0 -> beta = alpha + c Y
    Case2iiAsymptoticConstantM1,  // Case2ii asymptotic, m1 nonzero constant -> m2 = 0, m3 constant
    Case2iiPrincipalConstants,  // Case2ii principal, m1 = 0 -> helix or planar
};

const char* to_string(TheoremId id);
std::vector<TheoremId> all_theorems();

enum class SampleOutcome { Pass, Fail, Unsatisfiable };

struct TheoremResult {
    TheoremId id;
    int passes = 0, fails = 0, unsat = 0;
    double worst_metric = 0.0;
    bool ok() const { return fails == 0 && unsat * 2 < passes + fails + unsat + 1; }
};

struct SweepOptions {
    int samples = 100;
    double s_max = 1.0;
    double step = 1e-3;
    int threads = 0;  // 0: WALKER_THREADS env or hardware concurrency
};

SampleOutcome run_theorem_sample(TheoremId id, std::uint64_t seed, const SweepOptions& opt,
                                 double* worst_metric = nullptr);

std::vector<TheoremResult> theorem_suite(const std::vector<TheoremId>& theorems,
                                         std::uint64_t seed, const SweepOptions& opt = {});

// Deterministic uniform draw in [a, b) from a 64-bit generator.
double urand(std::uint64_t& state, double a, double b);
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

// Cumulative integral of f on [0, s_max] with the given grid step (Simpson),
// returned as a callable with linear interpolation between nodes.
std::function<double(double)> cumulative_integral(const std::function<double(double)>& f,
                                                  double s_max, double step);

// Manufactures a Case 1 geodesic Darboux run (theta = pi/2) with the given
// invariant profiles, starting from a canonical orthonormal frame at p0.
DarbouxRun manufacture_case1_geodesic_run(const WalkerMetric& g,
                                          const std::function<double(double)>& kappa,
                                          const std::function<double(double)>& tau,
                                          const Point& p0, double s_max, double step);

}  // namespace walker

#endif
