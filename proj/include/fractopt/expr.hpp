#pragma once

#include <memory>
#include <string>
#include <vector>

#include "fractopt/calculus.hpp"
#include "fractopt/geometry.hpp"

namespace fractopt {

enum class ExprKind { number, variable, negate, add, subtract, multiply, divide, power, call };

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    ExprKind kind = ExprKind::number;
    double value = 0.0;      // number
    int var_index = 0;       // variable: 0 = x, 1 = y, 2 = z
    std::string func;        // call
    std::vector<Expr> args;  // operands, in source order
};

Expr parse_expression(const std::string& text);

// Comma-separated expressions, e.g. start points like "5/8, sqrt(3)/8".
std::vector<Expr> parse_expression_list(const std::string& text);

double evaluate(const Expr& e, const Vec& p, int dimension);

// Highest variable index used, or -1 for a constant expression.
int max_variable(const Expr& e);

std::string to_string(const Expr& e);

ScalarField field_from_expr(const Expr& e, const FractalGraph& g);

}  // namespace fractopt
