#ifndef WALKER_METRIC_HPP
#define WALKER_METRIC_HPP

#include <array>
#include <cmath>

#include "walker/expr.hpp"

namespace walker {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double c) const { return {x * c, y * c, z * c}; }
    Vec3 operator/(double c) const { return {x / c, y / c, z / c}; }
    Vec3 operator-() const { return {-x, -y, -z}; }

    // Euclidean chart norm, used for residual reporting only.
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

inline Vec3 operator*(double c, const Vec3& v) { return v * c; }

using Point = Vec3;

// Tangent vector in the coordinate basis (dx, dy, dz) at a base point.
struct Tangent {
    Vec3 v;
    Point base;
};

enum class CausalCharacter { Spacelike, Timelike, Null };

// Christoffel symbols gamma[i][j][k] = Gamma^i_{jk} at a point.
struct ChristoffelTable {
    std::array<std::array<std::array<double, 3>, 3>, 3> gamma{};
    double operator()(int i, int j, int k) const { return gamma[i][j][k]; }
};

// The strict Walker metric dx dz + dy^2 + f(y,z) dz^2 (epsilon fixed to +1).
class WalkerMetric {
public:
    explicit WalkerMetric(ScalarField2 f);
    explicit WalkerMetric(std::string_view f_text) : WalkerMetric(ScalarField2(f_text)) {}

    const ScalarField2& f() const { return f_; }
    double f_at(const Point& p) const { return f_(p.y, p.z); }
    double fy_at(const Point& p) const { return fy_(p.y, p.z); }
    double fz_at(const Point& p) const { return fz_(p.y, p.z); }

    // g(u,v) for two tangents at the same base point.
    double value(const Tangent& u, const Tangent& v) const;
    // g(u,v) for coordinate vectors at point p.
    double value_at(const Point& p, const Vec3& u, const Vec3& v) const;

    std::array<std::array<double, 3>, 3> matrix(const Point& p) const;
    std::array<std::array<double, 3>, 3> inverse_matrix(const Point& p) const;

    ChristoffelTable christoffel(const Point& p) const;

    // Metric cross product: g(u x v, w) = det(u, v, w).
    Tangent cross(const Tangent& u, const Tangent& v) const;
    Vec3 cross_at(const Point& p, const Vec3& u, const Vec3& v) const;

    // Pseudo-orthonormal frame e1 (spacelike), e2 (spacelike), e3 (timelike).
    std::array<Tangent, 3> frame_e123(const Point& p) const;

    CausalCharacter causal_character(const Tangent& u, double tol = -1.0) const;

    // (nabla_T V)^i = dV^i/ds + Gamma^i_{jk} T^j V^k, all tangents at curve_point.
    // `field_derivative` is the component-wise s-derivative of V along the curve.
    Vec3 covariant_derivative_along(const Point& curve_point, const Vec3& curve_velocity,
                                    const Vec3& field_value, const Vec3& field_derivative) const;

    // Gamma^i_{jk} T^j V^k correction term alone.
    Vec3 christoffel_correction(const Point& p, const Vec3& T, const Vec3& V) const;

private:
    ScalarField2 f_, fy_, fz_;
};

// Determinant of the 3x3 matrix with columns u, v, w (canonical basis).
double det3(const Vec3& u, const Vec3& v, const Vec3& w);

void require_same_base(const Tangent& u, const Tangent& v);

}  // namespace walker

#endif
