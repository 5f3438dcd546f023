#include "metrikos/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace metrikos::expr {

ExprPtr Expr::constant(double v) { return std::make_shared<Expr>(Node{Constant{v}}); }
ExprPtr Expr::variable(std::string name) {
    return std::make_shared<Expr>(Node{Variable{std::move(name)}});
}
ExprPtr Expr::unary(UnaryOp op, ExprPtr child) {
    return std::make_shared<Expr>(Node{Unary{op, std::move(child)}});
}
ExprPtr Expr::binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs) {
    return std::make_shared<Expr>(Node{Binary{op, std::move(lhs), std::move(rhs)}});
}

namespace {

struct Parser {
    std::string_view text;
    std::size_t pos = 0;
    const std::set<std::string>* allowed;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool at_end() {
        skip_ws();
        return pos >= text.size();
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    bool consume(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& msg, std::size_t at) { throw ParseError(msg, at); }

    ExprPtr parse_expr() { return parse_additive(); }

    ExprPtr parse_additive() {
        ExprPtr lhs = parse_multiplicative();
        for (;;) {
            if (consume('+')) {
                lhs = Expr::binary(BinaryOp::Add, lhs, parse_multiplicative());
            } else if (consume('-')) {
                lhs = Expr::binary(BinaryOp::Sub, lhs, parse_multiplicative());
            } else {
                return lhs;
            }
        }
    }

    ExprPtr parse_multiplicative() {
        ExprPtr lhs = parse_unary();
        for (;;) {
            if (consume('*')) {
                lhs = Expr::binary(BinaryOp::Mul, lhs, parse_unary());
            } else if (consume('/')) {
                lhs = Expr::binary(BinaryOp::Div, lhs, parse_unary());
            } else {
                return lhs;
            }
        }
    }

    // Unary minus binds looser than '^': -2^2 parses as -(2^2).
    ExprPtr parse_unary() {
        if (consume('-')) return Expr::unary(UnaryOp::Neg, parse_unary());
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr base = parse_primary();
        if (consume('^')) {
            // Right-associative; the exponent may carry its own sign.
            return Expr::binary(BinaryOp::Pow, base, parse_unary());
        }
        return base;
    }

    ExprPtr parse_primary() {
        skip_ws();
        if (pos >= text.size()) fail("syntax error: unexpected end of input", pos);
        char c = text[pos];
        if (c == '(') {
            ++pos;
            ExprPtr inner = parse_expr();
            if (!consume(')')) fail("syntax error: expected ')'", pos);
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_name();
        fail(std::string("syntax error: unexpected character '") + c + "'", pos);
    }

    ExprPtr parse_number() {
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos < text.size() && text[pos] == '.') {
            ++pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        }
        if (pos == start || (pos == start + 1 && text[start] == '.'))
            fail("syntax error: malformed number", start);
        if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
            std::size_t mark = pos;
            ++pos;
            if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) ++pos;
            if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) {
                pos = mark;  // 'e' belongs to something else, e.g. "2e" never valid but "2exp(..)" is not either; reject
                fail("syntax error: malformed exponent", mark);
            }
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        }
        double value = 0;
        auto res = std::from_chars(text.data() + start, text.data() + pos, value);
        if (res.ec != std::errc()) fail("syntax error: malformed number", start);
        return Expr::constant(value);
    }

    ExprPtr parse_name() {
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        std::string name(text.substr(start, pos - start));
        skip_ws();
        if (pos < text.size() && text[pos] == '(') {
            ++pos;
            return parse_call(name, start);
        }
        if (!allowed->count(name))
            fail("unknown variable " + name + " at offset " + std::to_string(start), start);
        return Expr::variable(name);
    }

    ExprPtr parse_call(const std::string& name, std::size_t name_at) {
        static const std::map<std::string, UnaryOp> unary_fns = {
            {"ln", UnaryOp::Ln}, {"exp", UnaryOp::Exp}, {"abs", UnaryOp::Abs}, {"sqrt", UnaryOp::Sqrt}};
        static const std::map<std::string, BinaryOp> binary_fns = {{"min", BinaryOp::Min},
                                                                   {"max", BinaryOp::Max}};
        if (auto it = unary_fns.find(name); it != unary_fns.end()) {
            ExprPtr arg = parse_expr();
            if (!consume(')')) fail("syntax error: expected ')'", pos);
            return Expr::unary(it->second, arg);
        }
        if (auto it = binary_fns.find(name); it != binary_fns.end()) {
            ExprPtr a = parse_expr();
            if (!consume(',')) fail("syntax error: expected ',' in call to " + name, pos);
            ExprPtr b = parse_expr();
            if (!consume(')')) fail("syntax error: expected ')'", pos);
            return Expr::binary(it->second, a, b);
        }
        fail("unknown function " + name + " at offset " + std::to_string(name_at), name_at);
    }
};

std::string bindings_to_string(const Bindings& b) {
    std::string out = "{";
    bool first = true;
    for (const auto& [k, v] : b) {
        if (!first) out += ", ";
        first = false;
        out += k + "=" + format_number(v);
    }
    return out + "}";
}

[[noreturn]] void domain_error(const std::string& what, const ExprPtr& at, const Bindings& b) {
    throw EvalError("domain error: " + what + " in '" + pretty_print(at) + "' at " +
                    bindings_to_string(b));
}

double eval_node(const ExprPtr& e, const Bindings& b);

double eval_unary(const Expr::Unary& u, const ExprPtr& self, const Bindings& b) {
    double x = eval_node(u.child, b);
    switch (u.op) {
        case UnaryOp::Neg:
            return -x;
        case UnaryOp::Ln:
            if (x <= 0.0) domain_error("ln of non-positive value " + format_number(x), self, b);
            return std::log(x);
        case UnaryOp::Exp:
            return std::exp(x);
        case UnaryOp::Abs:
            return std::fabs(x);
        case UnaryOp::Sqrt:
            if (x < 0.0) domain_error("sqrt of negative value " + format_number(x), self, b);
            return std::sqrt(x);
    }
    throw EvalError("unreachable unary op");
}

double eval_binary(const Expr::Binary& n, const ExprPtr& self, const Bindings& b) {
    double x = eval_node(n.lhs, b);
    double y = eval_node(n.rhs, b);
    switch (n.op) {
        case BinaryOp::Add:
            return x + y;
        case BinaryOp::Sub:
            return x - y;
        case BinaryOp::Mul:
            return x * y;
        case BinaryOp::Div:
            if (y == 0.0) domain_error("division by zero", self, b);
            return x / y;
        case BinaryOp::Pow: {
            if (x == 0.0 && y < 0.0) domain_error("0 raised to a negative power", self, b);
            if (x < 0.0 && y != std::nearbyint(y))
                domain_error("negative base " + format_number(x) + " with non-integer exponent " +
                                 format_number(y),
                             self, b);
            return std::pow(x, y);
        }
        case BinaryOp::Min:
            return std::min(x, y);
        case BinaryOp::Max:
            return std::max(x, y);
    }
    throw EvalError("unreachable binary op");
}

double eval_node(const ExprPtr& e, const Bindings& b) {
    double result = 0;
    if (const auto* c = std::get_if<Expr::Constant>(&e->node())) {
        result = c->value;
    } else if (const auto* v = std::get_if<Expr::Variable>(&e->node())) {
        auto it = b.find(v->name);
        if (it == b.end()) throw EvalError("unbound variable " + v->name);
        result = it->second;
    } else if (const auto* u = std::get_if<Expr::Unary>(&e->node())) {
        result = eval_unary(*u, e, b);
    } else {
        result = eval_binary(std::get<Expr::Binary>(e->node()), e, b);
    }
    if (!std::isfinite(result))
        throw EvalError("non-finite result in '" + pretty_print(e) + "' at " +
                        bindings_to_string(b));
    return result;
}

}  // namespace

ExprPtr parse(std::string_view text, const std::set<std::string>& allowed_vars) {
    if (text.empty()) throw ParseError("syntax error: empty input", 0);
    Parser p{text, 0, &allowed_vars};
    ExprPtr e = p.parse_expr();
    if (!p.at_end())
        p.fail(std::string("syntax error: trailing input starting with '") + p.peek() + "'", p.pos);
    return e;
}

double evaluate(const ExprPtr& e, const Bindings& bindings) { return eval_node(e, bindings); }

std::string pretty_print(const ExprPtr& e) {
    if (const auto* c = std::get_if<Expr::Constant>(&e->node())) return format_number(c->value);
    if (const auto* v = std::get_if<Expr::Variable>(&e->node())) return v->name;
    if (const auto* u = std::get_if<Expr::Unary>(&e->node())) {
        switch (u->op) {
            case UnaryOp::Neg:
                return "(-" + pretty_print(u->child) + ")";
            case UnaryOp::Ln:
                return "ln(" + pretty_print(u->child) + ")";
            case UnaryOp::Exp:
                return "exp(" + pretty_print(u->child) + ")";
            case UnaryOp::Abs:
                return "abs(" + pretty_print(u->child) + ")";
            case UnaryOp::Sqrt:
                return "sqrt(" + pretty_print(u->child) + ")";
        }
    }
    const auto& n = std::get<Expr::Binary>(e->node());
    std::string l = pretty_print(n.lhs);
    std::string r = pretty_print(n.rhs);
    switch (n.op) {
        case BinaryOp::Add:
            return "(" + l + "+" + r + ")";
        case BinaryOp::Sub:
            return "(" + l + "-" + r + ")";
        case BinaryOp::Mul:
            return "(" + l + "*" + r + ")";
        case BinaryOp::Div:
            return "(" + l + "/" + r + ")";
        case BinaryOp::Pow:
            return "(" + l + "^" + r + ")";
        case BinaryOp::Min:
            return "min(" + l + "," + r + ")";
        case BinaryOp::Max:
            return "max(" + l + "," + r + ")";
    }
    throw EvalError("unreachable binary op");
}

bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
    if (a->node().index() != b->node().index()) return false;
    if (const auto* ca = std::get_if<Expr::Constant>(&a->node()))
        return ca->value == std::get<Expr::Constant>(b->node()).value;
    if (const auto* va = std::get_if<Expr::Variable>(&a->node()))
        return va->name == std::get<Expr::Variable>(b->node()).name;
    if (const auto* ua = std::get_if<Expr::Unary>(&a->node())) {
        const auto& ub = std::get<Expr::Unary>(b->node());
        return ua->op == ub.op && structurally_equal(ua->child, ub.child);
    }
    const auto& na = std::get<Expr::Binary>(a->node());
    const auto& nb = std::get<Expr::Binary>(b->node());
    return na.op == nb.op && structurally_equal(na.lhs, nb.lhs) &&
           structurally_equal(na.rhs, nb.rhs);
}

namespace {
void collect_vars(const ExprPtr& e, std::set<std::string>& out) {
    if (const auto* v = std::get_if<Expr::Variable>(&e->node())) {
        out.insert(v->name);
    } else if (const auto* u = std::get_if<Expr::Unary>(&e->node())) {
        collect_vars(u->child, out);
    } else if (const auto* n = std::get_if<Expr::Binary>(&e->node())) {
        collect_vars(n->lhs, out);
        collect_vars(n->rhs, out);
    }
}
}  // namespace

std::set<std::string> variables(const ExprPtr& e) {
    std::set<std::string> out;
    collect_vars(e, out);
    return out;
}

ScalarFn::ScalarFn(ExprPtr e, std::string var, std::string source)
    : expr_(std::move(e)), var_(std::move(var)), source_(std::move(source)) {
    if (source_.empty() && expr_) source_ = pretty_print(expr_);
    if (expr_) {
        for (const auto& v : variables(expr_))
            if (v != var_) throw InputError("scalar function references undeclared variable " + v);
    }
}

ScalarFn ScalarFn::parse(std::string_view text, std::string var) {
    ExprPtr e = expr::parse(text, {var});
    return ScalarFn(std::move(e), std::move(var), std::string(text));
}

double ScalarFn::operator()(double t) const { return evaluate(expr_, {{var_, t}}); }

BinaryFn::BinaryFn(ExprPtr e, std::string var1, std::string var2, std::string source)
    : expr_(std::move(e)), var1_(std::move(var1)), var2_(std::move(var2)), source_(std::move(source)) {
    if (source_.empty() && expr_) source_ = pretty_print(expr_);
    if (expr_) {
        for (const auto& v : variables(expr_))
            if (v != var1_ && v != var2_)
                throw InputError("binary function references undeclared variable " + v);
    }
}

BinaryFn BinaryFn::parse(std::string_view text, std::string var1, std::string var2) {
    ExprPtr e = expr::parse(text, {var1, var2});
    return BinaryFn(std::move(e), std::move(var1), std::move(var2), std::string(text));
}

double BinaryFn::operator()(double a, double b) const {
    return evaluate(expr_, {{var1_, a}, {var2_, b}});
}

const std::vector<std::string>& f_presets() {
    static const std::vector<std::string> presets = {"ln(t)", "ln(t)+t", "-1/t"};
    return presets;
}

const std::vector<std::string>& theta_presets() {
    static const std::vector<std::string> presets = {"s+t", "s+t+s*t", "max(s,t)"};
    return presets;
}

}  // namespace metrikos::expr
