#include "fractopt/expr.hpp"

#include <cmath>
#include <cstdlib>
#include <map>

#include "fractopt/errors.hpp"

namespace fractopt {

namespace {

[[noreturn]] void fail(const std::string& message) {
    throw Error("func_expr", message);
}

[[noreturn]] void fail_at(std::size_t offset, const std::string& message) {
    fail(message + " at offset " + std::to_string(offset));
}

Expr make_node(ExprNode node) {
    return std::make_shared<const ExprNode>(std::move(node));
}

Expr make_binary(ExprKind kind, Expr lhs, Expr rhs) {
    ExprNode node;
    node.kind = kind;
    node.args = {std::move(lhs), std::move(rhs)};
    return make_node(std::move(node));
}

// arity, -1 meaning "two or more"
const std::map<std::string, int>& function_table() {
    static const std::map<std::string, int> table = {
        {"sqrt", 1}, {"abs", 1}, {"sin", 1}, {"cos", 1},
        {"exp", 1},  {"min", -1}, {"max", -1},
    };
    return table;
}

// expr   := term (("+"|"-") term)*
// term   := unary (("*"|"/") unary)*
// unary  := "-" unary | power
// power  := atom ("^" unary)?
// atom   := NUMBER | IDENT | IDENT "(" expr ("," expr)* ")" | "(" expr ")"
class Parser {
  public:
    explicit Parser(const std::string& text) : text_(text) {}

    Expr parse_single() {
        Expr e = parse_expr();
        skip_spaces();
        if (pos_ != text_.size()) fail_at(pos_, "unexpected trailing input");
        return e;
    }

    std::vector<Expr> parse_list() {
        std::vector<Expr> items;
        items.push_back(parse_expr());
        skip_spaces();
        while (pos_ < text_.size() && text_[pos_] == ',') {
            ++pos_;
            items.push_back(parse_expr());
            skip_spaces();
        }
        if (pos_ != text_.size()) fail_at(pos_, "unexpected trailing input");
        return items;
    }

  private:
    void skip_spaces() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
    }

    char peek() {
        skip_spaces();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    Expr parse_expr() {
        Expr lhs = parse_term();
        while (true) {
            const char c = peek();
            if (c != '+' && c != '-') return lhs;
            ++pos_;
            lhs = make_binary(c == '+' ? ExprKind::add : ExprKind::subtract,
                              std::move(lhs), parse_term());
        }
    }

    Expr parse_term() {
        Expr lhs = parse_unary();
        while (true) {
            const char c = peek();
            if (c != '*' && c != '/') return lhs;
            ++pos_;
            lhs = make_binary(c == '*' ? ExprKind::multiply : ExprKind::divide,
                              std::move(lhs), parse_unary());
        }
    }

    Expr parse_unary() {
        if (peek() == '-') {
            ++pos_;
            ExprNode node;
            node.kind = ExprKind::negate;
            node.args = {parse_unary()};
            return make_node(std::move(node));
        }
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_atom();
        if (peek() == '^') {
            ++pos_;
            return make_binary(ExprKind::power, std::move(base), parse_unary());
        }
        return base;
    }

    Expr parse_atom() {
        const char c = peek();
        if (c == '(') {
            ++pos_;
            Expr inner = parse_expr();
            if (peek() != ')') fail_at(pos_, "expected ')'");
            ++pos_;
            return inner;
        }
        if (c == '.' || (c >= '0' && c <= '9')) return parse_number();
        if (c >= 'a' && c <= 'z') return parse_ident();
        fail_at(pos_, "expected a number, identifier, or '('");
    }

    Expr parse_number() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') ++pos_;
        if (pos_ == start) fail_at(start, "malformed number");
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            const std::size_t frac = pos_;
            while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') ++pos_;
            if (pos_ == frac) fail_at(start, "malformed number");
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t exp_pos = pos_ + 1;
            if (exp_pos < text_.size() && (text_[exp_pos] == '+' || text_[exp_pos] == '-'))
                ++exp_pos;
            std::size_t digits = exp_pos;
            while (digits < text_.size() && text_[digits] >= '0' && text_[digits] <= '9')
                ++digits;
            if (digits > exp_pos) pos_ = digits;
        }
        const std::string token = text_.substr(start, pos_ - start);
        char* end = nullptr;
        const double value = std::strtod(token.c_str(), &end);
        if (end != token.c_str() + token.size()) fail_at(start, "malformed number");
        ExprNode node;
        node.kind = ExprKind::number;
        node.value = value;
        return make_node(std::move(node));
    }

    Expr parse_ident() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] >= 'a' && text_[pos_] <= 'z') ++pos_;
        const std::string name = text_.substr(start, pos_ - start);
        if (peek() == '(') {
            auto it = function_table().find(name);
            if (it == function_table().end())
                fail_at(start, "unknown function '" + name + "'");
            ++pos_;
            std::vector<Expr> args;
            args.push_back(parse_expr());
            while (peek() == ',') {
                ++pos_;
                args.push_back(parse_expr());
            }
            if (peek() != ')') fail_at(pos_, "expected ')' or ','");
            ++pos_;
            const int arity = it->second;
            if (arity >= 0 && static_cast<int>(args.size()) != arity)
                fail_at(start, "'" + name + "' takes " + std::to_string(arity) +
                                   " argument" + (arity == 1 ? "" : "s"));
            if (arity < 0 && args.size() < 2)
                fail_at(start, "'" + name + "' takes at least 2 arguments");
            ExprNode node;
            node.kind = ExprKind::call;
            node.func = name;
            node.args = std::move(args);
            return make_node(std::move(node));
        }
        if (name == "x" || name == "y" || name == "z") {
            ExprNode node;
            node.kind = ExprKind::variable;
            node.var_index = name[0] - 'x';
            return make_node(std::move(node));
        }
        fail_at(start, "unknown identifier '" + name + "'");
    }

    const std::string& text_;
    std::size_t pos_ = 0;
};

double checked(double value, const Expr& e) {
    if (!std::isfinite(value))
        fail("non-finite result in subexpression " + to_string(e));
    return value;
}

}  // namespace

Expr parse_expression(const std::string& text) {
    if (text.empty()) fail("empty expression");
    return Parser(text).parse_single();
}

std::vector<Expr> parse_expression_list(const std::string& text) {
    if (text.empty()) fail("empty expression list");
    return Parser(text).parse_list();
}

double evaluate(const Expr& e, const Vec& p, int dimension) {
    if (!e) fail("null expression");
    switch (e->kind) {
        case ExprKind::number:
            return e->value;
        case ExprKind::variable:
            if (e->var_index >= dimension)
                fail("variable '" + std::string(1, char('x' + e->var_index)) +
                     "' is not available in " + std::to_string(dimension) + " dimension(s)");
            return p[e->var_index];
        case ExprKind::negate:
            return -evaluate(e->args[0], p, dimension);
        case ExprKind::add:
            return checked(evaluate(e->args[0], p, dimension) +
                               evaluate(e->args[1], p, dimension), e);
        case ExprKind::subtract:
            return checked(evaluate(e->args[0], p, dimension) -
                               evaluate(e->args[1], p, dimension), e);
        case ExprKind::multiply:
            return checked(evaluate(e->args[0], p, dimension) *
                               evaluate(e->args[1], p, dimension), e);
        case ExprKind::divide: {
            const double denom = evaluate(e->args[1], p, dimension);
            if (denom == 0.0) fail("division by zero in " + to_string(e));
            return checked(evaluate(e->args[0], p, dimension) / denom, e);
        }
        case ExprKind::power: {
            const double base = evaluate(e->args[0], p, dimension);
            const double exponent = evaluate(e->args[1], p, dimension);
            if (base < 0.0 && exponent != std::floor(exponent))
                fail("negative base with non-integer exponent in " + to_string(e));
            if (base == 0.0 && exponent < 0.0)
                fail("zero base with negative exponent in " + to_string(e));
            return checked(std::pow(base, exponent), e);
        }
        case ExprKind::call: {
            std::vector<double> args;
            args.reserve(e->args.size());
            for (const Expr& a : e->args) args.push_back(evaluate(a, p, dimension));
            if (e->func == "sqrt") {
                if (args[0] < 0.0) fail("square root of a negative value in " + to_string(e));
                return std::sqrt(args[0]);
            }
            if (e->func == "abs") return std::abs(args[0]);
            if (e->func == "sin") return std::sin(args[0]);
            if (e->func == "cos") return std::cos(args[0]);
            if (e->func == "exp") return checked(std::exp(args[0]), e);
            if (e->func == "min") {
                double m = args[0];
                for (double a : args) m = std::min(m, a);
                return m;
            }
            if (e->func == "max") {
                double m = args[0];
                for (double a : args) m = std::max(m, a);
                return m;
            }
            fail("unknown function '" + e->func + "'");
        }
    }
    fail("corrupt expression node");
}

int max_variable(const Expr& e) {
    if (!e) return -1;
    if (e->kind == ExprKind::variable) return e->var_index;
    int highest = -1;
    for (const Expr& a : e->args) highest = std::max(highest, max_variable(a));
    return highest;
}

std::string to_string(const Expr& e) {
    if (!e) return "<null>";
    switch (e->kind) {
        case ExprKind::number:
            return format_double(e->value);
        case ExprKind::variable:
            return std::string(1, char('x' + e->var_index));
        case ExprKind::negate:
            return "(-" + to_string(e->args[0]) + ")";
        case ExprKind::add:
            return "(" + to_string(e->args[0]) + " + " + to_string(e->args[1]) + ")";
        case ExprKind::subtract:
            return "(" + to_string(e->args[0]) + " - " + to_string(e->args[1]) + ")";
        case ExprKind::multiply:
            return "(" + to_string(e->args[0]) + " * " + to_string(e->args[1]) + ")";
        case ExprKind::divide:
            return "(" + to_string(e->args[0]) + " / " + to_string(e->args[1]) + ")";
        case ExprKind::power:
            return "(" + to_string(e->args[0]) + " ^ " + to_string(e->args[1]) + ")";
        case ExprKind::call: {
            std::string out = e->func + "(";
            for (std::size_t i = 0; i < e->args.size(); ++i) {
                if (i) out += ", ";
                out += to_string(e->args[i]);
            }
            return out + ")";
        }
    }
    return "<corrupt>";
}

ScalarField field_from_expr(const Expr& e, const FractalGraph& g) {
    const int needed = max_variable(e) + 1;
    if (needed > g.system.dimension)
        fail("expression uses variable '" + std::string(1, char('x' + needed - 1)) +
             "' but the system is " + std::to_string(g.system.dimension) + "-dimensional");
    ScalarField u = make_field(g);
    for (VertexId x = 0; x < g.vertex_count(); ++x) {
        try {
            u.values[x] = evaluate(e, g.vertices[x].pos, g.system.dimension);
        } catch (const Error& err) {
            fail(std::string(err.message()) + " (at vertex " + std::to_string(x) + ")");
        }
    }
    return u;
}

}  // namespace fractopt
