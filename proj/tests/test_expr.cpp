#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "walker/errors.hpp"
#include "walker/expr.hpp"

using namespace walker;

namespace {
const std::string kYZ[] = {"y", "z"};

double ev(const ExprPtr& e, double y, double z) {
    const double env[] = {y, z};
    return eval_expr(*e, env);
}
}  // namespace

TEST_CASE("parse and evaluate") {
    auto e = parse_expr("y^2 + sin(z)*3 - 1/2", kYZ);
    CHECK(ev(e, 2.0, 0.0) == doctest::Approx(3.5));
    CHECK(ev(e, -1.5, 1.0) == doctest::Approx(2.25 + 3 * std::sin(1.0) - 0.5));
}

TEST_CASE("power is right-associative and pi is known") {
    auto e = parse_expr("2^3^2", kYZ);
    CHECK(ev(e, 0, 0) == doctest::Approx(512.0));
    auto p = parse_expr("-pi", kYZ);
    CHECK(ev(p, 0, 0) == doctest::Approx(-std::acos(-1.0)));
}

TEST_CASE("syntax errors carry an offset") {
    CHECK_THROWS_AS(parse_expr("y + * z", kYZ), SyntaxError);
    CHECK_THROWS_AS(parse_expr("sin y", kYZ), SyntaxError);   // functions need parens
    CHECK_THROWS_AS(parse_expr("2 y", kYZ), SyntaxError);     // no implicit multiplication
    CHECK_THROWS_AS(parse_expr("(y + z", kYZ), SyntaxError);
    try {
        parse_expr("y + * z", kYZ);
    } catch (const SyntaxError& e) {
        CHECK(e.offset() == 4);
    }
}

TEST_CASE("unknown identifiers are rejected") {
    CHECK_THROWS_AS(parse_expr("q + 1", kYZ), UnknownIdentifier);
    CHECK_THROWS_AS(ScalarField2("x + y"), UnknownIdentifier);  // fields depend on y, z only
}

TEST_CASE("singular evaluation points throw instead of returning non-finite") {
    auto inv = parse_expr("1/(y - 1)", kYZ);
    CHECK_THROWS_AS(ev(inv, 1.0, 0.0), FieldSingular);
    auto lg = parse_expr("log(y)", kYZ);
    CHECK_THROWS_AS(ev(lg, -1.0, 0.0), FieldSingular);
    CHECK_THROWS_AS(ev(lg, 0.0, 0.0), FieldSingular);
    auto pw = parse_expr("y^(1/2)", kYZ);
    CHECK_THROWS_AS(ev(pw, -4.0, 0.0), FieldSingular);
}

TEST_CASE("symbolic derivatives match finite differences") {
    const char* exprs[] = {"y^2*z + cos(y)", "exp(y/3)*sinh(z)", "y^z", "log(2 + cosh(y*z))"};
    for (const char* text : exprs) {
        auto e = parse_expr(text, kYZ);
        auto dy = diff_expr(e, 0);
        auto dz = diff_expr(e, 1);
        for (double y : {0.5, 1.2}) {
            for (double z : {0.3, 1.7}) {
                const double h = 1e-6;
                const double fy = (ev(e, y + h, z) - ev(e, y - h, z)) / (2 * h);
                const double fz = (ev(e, y, z + h) - ev(e, y, z - h)) / (2 * h);
                CHECK(ev(dy, y, z) == doctest::Approx(fy).epsilon(1e-6));
                CHECK(ev(dz, y, z) == doctest::Approx(fz).epsilon(1e-6));
            }
        }
    }
}

TEST_CASE("substitution composes expressions") {
    auto e = parse_expr("y^2 + z", kYZ);
    const std::string kT[] = {"t"};
    ExprPtr reps[] = {parse_expr("sin(t)", kT), parse_expr("2*t", kT)};
    auto c = substitute_expr(e, reps);
    const double env[] = {0.7};
    CHECK(eval_expr(*c, env) ==
          doctest::Approx(std::sin(0.7) * std::sin(0.7) + 1.4));
}

TEST_CASE("round trip through expr_to_string reparses") {
    auto e = parse_expr("(y + 2)^3 / cosh(z) - sin(y*z)", kYZ);
    auto r = parse_expr(expr_to_string(*e), kYZ);
    CHECK(ev(r, 0.4, 1.1) == doctest::Approx(ev(e, 0.4, 1.1)).epsilon(1e-15));
}

TEST_CASE("scalar field exposes exact partials") {
    ScalarField2 f("y^3 + y*z^2");
    CHECK(f(2.0, 1.0) == doctest::Approx(10.0));
    CHECK(f.dy()(2.0, 1.0) == doctest::Approx(13.0));
    CHECK(f.dz()(2.0, 1.0) == doctest::Approx(4.0));
}
