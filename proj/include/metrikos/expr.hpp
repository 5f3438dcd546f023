#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "metrikos/common.hpp"

namespace metrikos::expr {

enum class UnaryOp { Neg, Ln, Exp, Abs, Sqrt };
enum class BinaryOp { Add, Sub, Mul, Div, Pow, Min, Max };

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable AST node of the closed arithmetic DSL. Constants hold
/// nonnegative literals; negative values arise through Neg, which keeps
/// parse/pretty_print round-trips structural.
class Expr {
public:
    struct Constant {
        double value;
    };
    struct Variable {
        std::string name;
    };
    struct Unary {
        UnaryOp op;
        ExprPtr child;
    };
    struct Binary {
        BinaryOp op;
        ExprPtr lhs;
        ExprPtr rhs;
    };
    using Node = std::variant<Constant, Variable, Unary, Binary>;

    explicit Expr(Node node) : node_(std::move(node)) {}

    const Node& node() const { return node_; }

    static ExprPtr constant(double v);
    static ExprPtr variable(std::string name);
    static ExprPtr unary(UnaryOp op, ExprPtr child);
    static ExprPtr binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs);

private:
    Node node_;
};

using Bindings = std::map<std::string, double>;

/// Parse `text` under the DSL grammar. Precedence, lowest to highest:
/// add/sub, mul/div, unary minus, pow (right-associative). Functions are
/// ln/exp/abs/sqrt (one argument) and min/max (two arguments). Variables
/// must belong to `allowed_vars`; violations raise ParseError with the
/// byte offset of the offending token.
ExprPtr parse(std::string_view text, const std::set<std::string>& allowed_vars);

/// Evaluate with every variable bound. Domain violations (ln/sqrt outside
/// their domain, division by zero, 0^negative, negative base with a
/// fractional exponent) and non-finite results raise EvalError naming the
/// violating sub-expression and bindings.
double evaluate(const ExprPtr& e, const Bindings& bindings);

/// Fully parenthesized canonical rendering; parse(pretty_print(e)) is
/// structurally equal to e.
std::string pretty_print(const ExprPtr& e);

/// Structural node-for-node equality (constants compared exactly).
bool structurally_equal(const ExprPtr& a, const ExprPtr& b);

/// Names of the variables referenced by e.
std::set<std::string> variables(const ExprPtr& e);

/// One-variable function, e.g. the control function f of an F-metric.
class ScalarFn {
public:
    ScalarFn() = default;
    ScalarFn(ExprPtr e, std::string var, std::string source = "");

    static ScalarFn parse(std::string_view text, std::string var = "t");

    double operator()(double t) const;
    const std::string& variable() const { return var_; }
    const ExprPtr& body() const { return expr_; }
    /// Original source text when parsed from a string, else the canonical
    /// rendering; this is what configs and reports serialize.
    const std::string& source() const { return source_; }

private:
    ExprPtr expr_;
    std::string var_;
    std::string source_;
};

/// Two-variable function: a B-action theta over (s,t) or an analytic
/// distance generator over (x,y).
class BinaryFn {
public:
    BinaryFn() = default;
    BinaryFn(ExprPtr e, std::string var1, std::string var2, std::string source = "");

    static BinaryFn parse(std::string_view text, std::string var1 = "s", std::string var2 = "t");

    double operator()(double a, double b) const;
    const std::string& variable1() const { return var1_; }
    const std::string& variable2() const { return var2_; }
    const ExprPtr& body() const { return expr_; }
    const std::string& source() const { return source_; }

private:
    ExprPtr expr_;
    std::string var1_;
    std::string var2_;
    std::string source_;
};

/// Standard exemplars used throughout tests and docs. Their validity is
/// established by the validators, never assumed.
const std::vector<std::string>& f_presets();      // "ln(t)", "ln(t)+t", "-1/t"
const std::vector<std::string>& theta_presets();  // "s+t", "s+t+s*t", "max(s,t)"

}  // namespace metrikos::expr
