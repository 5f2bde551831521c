#include "walker/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <sstream>

#include "walker/errors.hpp"

namespace walker {

namespace {

constexpr double kDivEps = 0.0;  // division is singular only at exactly zero denominator

bool is_const(const ExprPtr& e, double v) {
    return e && e->op == ExprOp::Const && e->value == v;
}

}  // namespace

ExprPtr make_const(double v) {
    auto e = std::make_shared<Expr>();
    e->op = ExprOp::Const;
    e->value = v;
    return e;
}

ExprPtr make_var(int index, std::string name) {
    auto e = std::make_shared<Expr>();
    e->op = ExprOp::Var;
    e->var_index = index;
    e->var_name = std::move(name);
    return e;
}

ExprPtr make_node(ExprOp op, ExprPtr a, ExprPtr b) {
    // Light constant folding keeps derivative trees small.
    const bool ac = a && a->op == ExprOp::Const;
    const bool bc = b && b->op == ExprOp::Const;
    switch (op) {
        case ExprOp::Add:
            if (is_const(a, 0.0)) return b;
            if (is_const(b, 0.0)) return a;
            if (ac && bc) return make_const(a->value + b->value);
            break;
        case ExprOp::Sub:
            if (is_const(b, 0.0)) return a;
            if (ac && bc) return make_const(a->value - b->value);
            if (is_const(a, 0.0)) return make_node(ExprOp::Neg, b);
            break;
        case ExprOp::Mul:
            if (is_const(a, 0.0) || is_const(b, 0.0)) return make_const(0.0);
            if (is_const(a, 1.0)) return b;
            if (is_const(b, 1.0)) return a;
            if (ac && bc) return make_const(a->value * b->value);
            break;
        case ExprOp::Div:
            if (is_const(a, 0.0) && !is_const(b, 0.0)) return make_const(0.0);
            if (is_const(b, 1.0)) return a;
            break;
        case ExprOp::Pow:
            if (is_const(b, 1.0)) return a;
            if (is_const(b, 0.0)) return make_const(1.0);
            break;
        case ExprOp::Neg:
            if (ac) return make_const(-a->value);
            break;
        default:
            break;
    }
    auto e = std::make_shared<Expr>();
    e->op = op;
    e->lhs = std::move(a);
    e->rhs = std::move(b);
    return e;
}

// ---------------------------------------------------------------------------
// Parser: recursive descent, standard precedence, '^' right-associative.

namespace {

struct Token {
    enum Type { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End } type;
    double number = 0.0;
    std::string text;
    std::size_t offset = 0;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) { advance(); }

    const Token& peek() const { return tok_; }

    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        tok_.offset = pos_;
        if (pos_ >= src_.size()) {
            tok_.type = Token::End;
            return;
        }
        char c = src_[pos_];
        switch (c) {
            case '+': tok_.type = Token::Plus; ++pos_; return;
            case '-': tok_.type = Token::Minus; ++pos_; return;
            case '*': tok_.type = Token::Star; ++pos_; return;
            case '/': tok_.type = Token::Slash; ++pos_; return;
            case '^': tok_.type = Token::Caret; ++pos_; return;
            case '(': tok_.type = Token::LParen; ++pos_; return;
            case ')': tok_.type = Token::RParen; ++pos_; return;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = src_.data() + pos_;
            char* end = nullptr;
            double v = std::strtod(begin, &end);
            if (end == begin) throw SyntaxError("malformed number", pos_);
            tok_.type = Token::Number;
            tok_.number = v;
            pos_ += static_cast<std::size_t>(end - begin);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            tok_.type = Token::Ident;
            tok_.text = std::string(src_.substr(start, pos_ - start));
            return;
        }
        throw SyntaxError(std::string("unexpected character '") + c + "'", pos_);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    Token tok_;
};

class Parser {
public:
    Parser(std::string_view src, std::span<const std::string> vars) : lex_(src), vars_(vars) {}

    ExprPtr parse() {
        ExprPtr e = sum();
        const Token& t = lex_.peek();
        if (t.type != Token::End) throw SyntaxError("unexpected trailing input", t.offset);
        return e;
    }

private:
    ExprPtr sum() {
        ExprPtr e = term();
        for (;;) {
            Token::Type t = lex_.peek().type;
            if (t == Token::Plus) {
                lex_.take();
                e = make_node(ExprOp::Add, e, term());
            } else if (t == Token::Minus) {
                lex_.take();
                e = make_node(ExprOp::Sub, e, term());
            } else {
                return e;
            }
        }
    }

    ExprPtr term() {
        ExprPtr e = unary();
        for (;;) {
            Token::Type t = lex_.peek().type;
            if (t == Token::Star) {
                lex_.take();
                e = make_node(ExprOp::Mul, e, unary());
            } else if (t == Token::Slash) {
                lex_.take();
                e = make_node(ExprOp::Div, e, unary());
            } else {
                return e;
            }
        }
    }

    ExprPtr unary() {
        if (lex_.peek().type == Token::Minus) {
            lex_.take();
            return make_node(ExprOp::Neg, unary());
        }
        return power();
    }

    ExprPtr power() {
        ExprPtr base = primary();
        if (lex_.peek().type == Token::Caret) {
            lex_.take();
            return make_node(ExprOp::Pow, base, unary());  // right-associative
        }
        return base;
    }

    ExprPtr primary() {
        Token t = lex_.take();
        switch (t.type) {
            case Token::Number:
                return make_const(t.number);
            case Token::LParen: {
                ExprPtr e = sum();
                Token close = lex_.take();
                if (close.type != Token::RParen) throw SyntaxError("expected ')'", close.offset);
                return e;
            }
            case Token::Ident: {
                static const std::map<std::string, ExprOp> funcs = {
                    {"sin", ExprOp::Sin},   {"cos", ExprOp::Cos}, {"sinh", ExprOp::Sinh},
                    {"cosh", ExprOp::Cosh}, {"exp", ExprOp::Exp}, {"log", ExprOp::Log},
                };
                auto it = funcs.find(t.text);
                if (it != funcs.end()) {
                    Token open = lex_.take();
                    if (open.type != Token::LParen)
                        throw SyntaxError("expected '(' after function name", open.offset);
                    ExprPtr arg = sum();
                    Token close = lex_.take();
                    if (close.type != Token::RParen) throw SyntaxError("expected ')'", close.offset);
                    return make_node(it->second, arg);
                }
                if (t.text == "pi") return make_const(std::acos(-1.0));
                for (std::size_t i = 0; i < vars_.size(); ++i)
                    if (vars_[i] == t.text) return make_var(static_cast<int>(i), t.text);
                throw UnknownIdentifier(t.text, t.offset);
            }
            case Token::End:
                throw SyntaxError("unexpected end of input", t.offset);
            default:
                throw SyntaxError("unexpected token", t.offset);
        }
    }

    Lexer lex_;
    std::span<const std::string> vars_;
};

}  // namespace

ExprPtr parse_expr(std::string_view text, std::span<const std::string> variables) {
    return Parser(text, variables).parse();
}

double eval_expr(const Expr& e, std::span<const double> env) {
    switch (e.op) {
        case ExprOp::Const:
            return e.value;
        case ExprOp::Var:
            return env[static_cast<std::size_t>(e.var_index)];
        case ExprOp::Add:
            return eval_expr(*e.lhs, env) + eval_expr(*e.rhs, env);
        case ExprOp::Sub:
            return eval_expr(*e.lhs, env) - eval_expr(*e.rhs, env);
        case ExprOp::Mul:
            return eval_expr(*e.lhs, env) * eval_expr(*e.rhs, env);
        case ExprOp::Div: {
            double num = eval_expr(*e.lhs, env);
            double den = eval_expr(*e.rhs, env);
            if (std::abs(den) <= kDivEps) throw FieldSingular("division by zero");
            return num / den;
        }
        case ExprOp::Pow: {
            double base = eval_expr(*e.lhs, env);
            double expo = eval_expr(*e.rhs, env);
            if (base == 0.0 && expo < 0.0) throw FieldSingular("zero raised to a negative power");
            if (base < 0.0 && expo != std::floor(expo))
                throw FieldSingular("fractional power of a negative base");
            double r = std::pow(base, expo);
            if (!std::isfinite(r)) throw FieldSingular("power overflow");
            return r;
        }
        case ExprOp::Neg:
            return -eval_expr(*e.lhs, env);
        case ExprOp::Sin:
            return std::sin(eval_expr(*e.lhs, env));
        case ExprOp::Cos:
            return std::cos(eval_expr(*e.lhs, env));
        case ExprOp::Sinh: {
            double r = std::sinh(eval_expr(*e.lhs, env));
            if (!std::isfinite(r)) throw FieldSingular("sinh overflow");
            return r;
        }
        case ExprOp::Cosh: {
            double r = std::cosh(eval_expr(*e.lhs, env));
            if (!std::isfinite(r)) throw FieldSingular("cosh overflow");
            return r;
        }
        case ExprOp::Exp: {
            double r = std::exp(eval_expr(*e.lhs, env));
            if (!std::isfinite(r)) throw FieldSingular("exp overflow");
            return r;
        }
        case ExprOp::Log: {
            double arg = eval_expr(*e.lhs, env);
            if (arg <= 0.0) throw FieldSingular("log of a non-positive argument");
            return std::log(arg);
        }
    }
    throw Error("corrupt expression node");
}

ExprPtr diff_expr(const ExprPtr& e, int var_index) {
    using Op = ExprOp;
    switch (e->op) {
        case Op::Const:
            return make_const(0.0);
        case Op::Var:
            return make_const(e->var_index == var_index ? 1.0 : 0.0);
        case Op::Add:
            return make_node(Op::Add, diff_expr(e->lhs, var_index), diff_expr(e->rhs, var_index));
        case Op::Sub:
            return make_node(Op::Sub, diff_expr(e->lhs, var_index), diff_expr(e->rhs, var_index));
        case Op::Mul:
            return make_node(Op::Add,
                             make_node(Op::Mul, diff_expr(e->lhs, var_index), e->rhs),
                             make_node(Op::Mul, e->lhs, diff_expr(e->rhs, var_index)));
        case Op::Div:
            // (a/b)' = a'/b - a b'/b^2
            return make_node(
                Op::Sub, make_node(Op::Div, diff_expr(e->lhs, var_index), e->rhs),
                make_node(Op::Div, make_node(Op::Mul, e->lhs, diff_expr(e->rhs, var_index)),
                          make_node(Op::Mul, e->rhs, e->rhs)));
        case Op::Pow: {
            if (e->rhs->op == Op::Const) {
                // n a^(n-1) a'
                double n = e->rhs->value;
                return make_node(
                    Op::Mul, make_const(n),
                    make_node(Op::Mul, make_node(Op::Pow, e->lhs, make_const(n - 1.0)),
                              diff_expr(e->lhs, var_index)));
            }
            // a^b (b' log a + b a'/a)
            ExprPtr term1 = make_node(Op::Mul, diff_expr(e->rhs, var_index),
                                      make_node(Op::Log, e->lhs));
            ExprPtr term2 = make_node(Op::Div, make_node(Op::Mul, e->rhs, diff_expr(e->lhs, var_index)),
                                      e->lhs);
            return make_node(Op::Mul, make_node(Op::Pow, e->lhs, e->rhs),
                             make_node(Op::Add, term1, term2));
        }
        case Op::Neg:
            return make_node(Op::Neg, diff_expr(e->lhs, var_index));
        case Op::Sin:
            return make_node(Op::Mul, make_node(Op::Cos, e->lhs), diff_expr(e->lhs, var_index));
        case Op::Cos:
            return make_node(Op::Neg,
                             make_node(Op::Mul, make_node(Op::Sin, e->lhs), diff_expr(e->lhs, var_index)));
        case Op::Sinh:
            return make_node(Op::Mul, make_node(Op::Cosh, e->lhs), diff_expr(e->lhs, var_index));
        case Op::Cosh:
            return make_node(Op::Mul, make_node(Op::Sinh, e->lhs), diff_expr(e->lhs, var_index));
        case Op::Exp:
            return make_node(Op::Mul, e, diff_expr(e->lhs, var_index));
        case Op::Log:
            return make_node(Op::Div, diff_expr(e->lhs, var_index), e->lhs);
    }
    throw Error("corrupt expression node");
}

ExprPtr substitute_expr(const ExprPtr& e, std::span<const ExprPtr> replacements) {
    switch (e->op) {
        case ExprOp::Const:
            return e;
        case ExprOp::Var: {
            auto idx = static_cast<std::size_t>(e->var_index);
            if (idx >= replacements.size() || !replacements[idx])
                throw Error("no replacement for variable '" + e->var_name + "'");
            return replacements[idx];
        }
        default: {
            ExprPtr a = e->lhs ? substitute_expr(e->lhs, replacements) : nullptr;
            ExprPtr b = e->rhs ? substitute_expr(e->rhs, replacements) : nullptr;
            return make_node(e->op, std::move(a), std::move(b));
        }
    }
}

std::string expr_to_string(const Expr& e) {
    auto wrap = [](const Expr& sub) {
        std::string s = expr_to_string(sub);
        if (sub.op == ExprOp::Const || sub.op == ExprOp::Var) return s;
        return "(" + s + ")";
    };
    std::ostringstream out;
    out.precision(17);
    switch (e.op) {
        case ExprOp::Const: out << e.value; break;
        case ExprOp::Var: out << e.var_name; break;
        case ExprOp::Add: out << wrap(*e.lhs) << "+" << wrap(*e.rhs); break;
        case ExprOp::Sub: out << wrap(*e.lhs) << "-" << wrap(*e.rhs); break;
        case ExprOp::Mul: out << wrap(*e.lhs) << "*" << wrap(*e.rhs); break;
        case ExprOp::Div: out << wrap(*e.lhs) << "/" << wrap(*e.rhs); break;
        case ExprOp::Pow: out << wrap(*e.lhs) << "^" << wrap(*e.rhs); break;
        case ExprOp::Neg: out << "-" << wrap(*e.lhs); break;
        case ExprOp::Sin: out << "sin(" << expr_to_string(*e.lhs) << ")"; break;
        case ExprOp::Cos: out << "cos(" << expr_to_string(*e.lhs) << ")"; break;
        case ExprOp::Sinh: out << "sinh(" << expr_to_string(*e.lhs) << ")"; break;
        case ExprOp::Cosh: out << "cosh(" << expr_to_string(*e.lhs) << ")"; break;
        case ExprOp::Exp: out << "exp(" << expr_to_string(*e.lhs) << ")"; break;
        case ExprOp::Log: out << "log(" << expr_to_string(*e.lhs) << ")"; break;
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// ScalarField2

namespace {
const std::vector<std::string> kFieldVars = {"y", "z"};
}

ScalarField2::ScalarField2(std::string_view text)
    : ast_(parse_expr(text, kFieldVars)), source_(text) {}

ScalarField2::ScalarField2(ExprPtr ast, std::string source)
    : ast_(std::move(ast)), source_(std::move(source)) {}

double ScalarField2::operator()(double y, double z) const {
    const double env[2] = {y, z};
    return eval_expr(*ast_, env);
}

ScalarField2 ScalarField2::dy() const {
    ExprPtr d = diff_expr(ast_, 0);
    return ScalarField2(d, expr_to_string(*d));
}

ScalarField2 ScalarField2::dz() const {
    ExprPtr d = diff_expr(ast_, 1);
    return ScalarField2(d, expr_to_string(*d));
}

}  // namespace walker
