#ifndef WALKER_EXPR_HPP
#define WALKER_EXPR_HPP

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace walker {

// Immutable expression tree over a fixed set of named variables.
// Supported: constants, + - * / ^ (right-associative), unary minus, and the
// functions sin, cos, sinh, cosh, exp, log. Implicit multiplication is a
// syntax error.
enum class ExprOp {
    Const,
    Var,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Neg,
    Sin,
    Cos,
    Sinh,
    Cosh,
    Exp,
    Log,
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    ExprOp op = ExprOp::Const;
    double value = 0.0;      // Const
    int var_index = -1;      // Var: index into the variable list given at parse time
    std::string var_name;    // Var
    ExprPtr lhs, rhs;        // binary ops; unary ops use lhs only
};

ExprPtr make_const(double v);
ExprPtr make_var(int index, std::string name);
ExprPtr make_node(ExprOp op, ExprPtr a, ExprPtr b = nullptr);

// Parses `text` with the given variable names (positional: var i reads env[i]).
// Throws SyntaxError / UnknownIdentifier.
ExprPtr parse_expr(std::string_view text, std::span<const std::string> variables);

// Evaluates with env[i] bound to variable i. Throws FieldSingular at singular
// points rather than returning a non-finite value.
double eval_expr(const Expr& e, std::span<const double> env);

// Exact symbolic partial derivative with respect to variable `var_index`.
ExprPtr diff_expr(const ExprPtr& e, int var_index);

// Replaces each variable by the expression in `replacements` (indexed by
// var_index); used to compose curves with surface patches.
ExprPtr substitute_expr(const ExprPtr& e, std::span<const ExprPtr> replacements);

std::string expr_to_string(const Expr& e);

// Scalar field f(y,z) defining a strict Walker metric. The variable x is
// rejected at parse time.
class ScalarField2 {
public:
    ScalarField2() : ScalarField2("0") {}
    explicit ScalarField2(std::string_view text);
    ScalarField2(ExprPtr ast, std::string source);

    double operator()(double y, double z) const;
    ScalarField2 dy() const;
    ScalarField2 dz() const;

    const std::string& source() const { return source_; }
    const ExprPtr& ast() const { return ast_; }

private:
    ExprPtr ast_;
    std::string source_;
};

}  // namespace walker

#endif
