#include "walker/metric.hpp"

#include <cmath>

#include "walker/errors.hpp"

namespace walker {

double det3(const Vec3& u, const Vec3& v, const Vec3& w) {
    return u.x * (v.y * w.z - v.z * w.y) - v.x * (u.y * w.z - u.z * w.y) +
           w.x * (u.y * v.z - u.z * v.y);
}

void require_same_base(const Tangent& u, const Tangent& v) {
    const Vec3 d = u.base - v.base;
    if (d.norm() > 1e-12)
        throw BasePointMismatch("tangents are based at different points");
}

WalkerMetric::WalkerMetric(ScalarField2 f)
    : f_(std::move(f)), fy_(f_.dy()), fz_(f_.dz()) {}

double WalkerMetric::value_at(const Point& p, const Vec3& u, const Vec3& v) const {
    return u.x * v.z + u.z * v.x + u.y * v.y + f_at(p) * u.z * v.z;
}

double WalkerMetric::value(const Tangent& u, const Tangent& v) const {
    require_same_base(u, v);
    return value_at(u.base, u.v, v.v);
}

std::array<std::array<double, 3>, 3> WalkerMetric::matrix(const Point& p) const {
    const double f = f_at(p);
    return {{{0.0, 0.0, 1.0}, {0.0, 1.0, 0.0}, {1.0, 0.0, f}}};
}

std::array<std::array<double, 3>, 3> WalkerMetric::inverse_matrix(const Point& p) const {
    const double f = f_at(p);
    return {{{-f, 0.0, 1.0}, {0.0, 1.0, 0.0}, {1.0, 0.0, 0.0}}};
}

ChristoffelTable WalkerMetric::christoffel(const Point& p) const {
    // Strict Walker metric: Gamma^1_{23} = Gamma^1_{32} = f_y/2,
    // Gamma^1_{33} = f_z/2, Gamma^2_{33} = -f_y/2, everything else zero.
    const double fy = fy_at(p);
    const double fz = fz_at(p);
    ChristoffelTable t;
    t.gamma[0][1][2] = 0.5 * fy;
    t.gamma[0][2][1] = 0.5 * fy;
    t.gamma[0][2][2] = 0.5 * fz;
    t.gamma[1][2][2] = -0.5 * fy;
    return t;
}

Vec3 WalkerMetric::cross_at(const Point& p, const Vec3& u, const Vec3& v) const {
    const double f = f_at(p);
    const double d12 = u.x * v.y - u.y * v.x;
    const double d13 = u.x * v.z - u.z * v.x;
    const double d23 = u.y * v.z - u.z * v.y;
    return {d12 - f * d23, -d13, d23};
}

Tangent WalkerMetric::cross(const Tangent& u, const Tangent& v) const {
    require_same_base(u, v);
    return {cross_at(u.base, u.v, v.v), u.base};
}

std::array<Tangent, 3> WalkerMetric::frame_e123(const Point& p) const {
    const double f = f_at(p);
    const double r = 1.0 / std::sqrt(2.0);
    Tangent e1{{0.0, 1.0, 0.0}, p};
    Tangent e2{{(2.0 - f) * 0.5 * r, 0.0, r}, p};
    Tangent e3{{(2.0 + f) * 0.5 * r, 0.0, -r}, p};
    return {e1, e2, e3};
}

CausalCharacter WalkerMetric::causal_character(const Tangent& u, double tol) const {
    if (tol < 0.0) {
        double scale = std::max({1.0, std::abs(u.v.x), std::abs(u.v.y), std::abs(u.v.z)});
        tol = 1e-9 * scale;
    }
    const double q = value(u, u);
    if (q < -tol) return CausalCharacter::Timelike;
    if (q > tol) return CausalCharacter::Spacelike;
    return CausalCharacter::Null;
}

Vec3 WalkerMetric::christoffel_correction(const Point& p, const Vec3& T, const Vec3& V) const {
    const double fy = fy_at(p);
    const double fz = fz_at(p);
    Vec3 c;
    c.x = 0.5 * fy * (T.y * V.z + T.z * V.y) + 0.5 * fz * T.z * V.z;
    c.y = -0.5 * fy * T.z * V.z;
    c.z = 0.0;
    return c;
}

Vec3 WalkerMetric::covariant_derivative_along(const Point& curve_point, const Vec3& curve_velocity,
                                              const Vec3& field_value,
                                              const Vec3& field_derivative) const {
    return field_derivative + christoffel_correction(curve_point, curve_velocity, field_value);
}

}  // namespace walker
