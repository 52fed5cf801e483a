#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>

#include "fractopt/errors.hpp"
#include "fractopt/expr.hpp"
#include "fractopt/graph.hpp"

using namespace fractopt;

namespace {

bool same_ast(const Expr& a, const Expr& b) {
    if (!a || !b) return a == b;
    if (a->kind != b->kind) return false;
    if (a->kind == ExprKind::number) return a->value == b->value;
    if (a->kind == ExprKind::variable) return a->var_index == b->var_index;
    if (a->func != b->func) return false;
    if (a->args.size() != b->args.size()) return false;
    for (std::size_t i = 0; i < a->args.size(); ++i)
        if (!same_ast(a->args[i], b->args[i])) return false;
    return true;
}

std::string error_of(const std::string& text) {
    try {
        (void)parse_expression(text);
    } catch (const Error& err) {
        return err.message();
    }
    return "";
}

double eval2(const std::string& text, double x, double y) {
    return evaluate(parse_expression(text), Vec{x, y, 0.0}, 2);
}

}  // namespace

TEST_CASE("grammar shapes") {
    const Expr e = parse_expression("x^2+y^2");
    REQUIRE(e->kind == ExprKind::add);
    CHECK(e->args[0]->kind == ExprKind::power);
    CHECK(e->args[0]->args[0]->kind == ExprKind::variable);
    CHECK(e->args[0]->args[0]->var_index == 0);
    CHECK(e->args[1]->args[0]->var_index == 1);

    const Expr g = parse_expression("-(x-1/2)^2-(y-sqrt(3)/4)^2");
    REQUIRE(g->kind == ExprKind::subtract);
    CHECK(g->args[0]->kind == ExprKind::negate);
    CHECK(g->args[0]->args[0]->kind == ExprKind::power);
    CHECK(g->args[1]->kind == ExprKind::power);
    CHECK(evaluate(g, Vec{0.5, std::sqrt(3.0) / 4.0, 0.0}, 2) == 0.0);
}

TEST_CASE("syntax errors carry byte offsets") {
    CHECK(error_of("x++2").find("at offset 2") != std::string::npos);
    CHECK(error_of("(x+1").find("expected ')'") != std::string::npos);
    CHECK(error_of("x+").find("at offset 2") != std::string::npos);
    CHECK(error_of("2 3").find("trailing input") != std::string::npos);
    CHECK(error_of("w").find("unknown identifier 'w'") != std::string::npos);
    CHECK(error_of("foo(1)").find("unknown function 'foo'") != std::string::npos);
    CHECK(error_of("sqrt(1,2)").find("takes 1 argument") != std::string::npos);
    CHECK(error_of("min(1)").find("at least 2") != std::string::npos);
    CHECK(error_of("").find("empty") != std::string::npos);
    CHECK(error_of("1.").find("malformed number") != std::string::npos);
}

TEST_CASE("precedence and associativity") {
    CHECK(eval2("2+3*4", 0, 0) == 14.0);
    CHECK(eval2("2^3^2", 0, 0) == 512.0);
    CHECK(eval2("-2^2", 0, 0) == -4.0);
    CHECK(eval2("2^-1", 0, 0) == 0.5);
    CHECK(eval2("2-3-4", 0, 0) == -5.0);
    CHECK(eval2("8/4/2", 0, 0) == 1.0);
    CHECK(eval2("1e2+1E-2", 0, 0) == 100.01);
    CHECK(eval2("min(3, 1, 2)", 0, 0) == 1.0);
    CHECK(eval2("max(3, 1, 2)", 0, 0) == 3.0);
}

TEST_CASE("evaluation matches hand arithmetic") {
    CHECK(eval2("x^2+y^2", 1.0, 0.0) == 1.0);
    CHECK(eval2("x^2+y^2", 5.0 / 8.0, std::sqrt(3.0) / 8.0) == doctest::Approx(7.0 / 16.0));
    CHECK(eval2("x^2+y^2", 1.0 / 32.0, 1.0 / 64.0) == 5.0 / 4096.0);
    CHECK(eval2("sqrt(3)/8", 0, 0) == std::sqrt(3.0) / 8.0);
    CHECK(eval2("abs(0-x)", 2.5, 0.0) == 2.5);
    CHECK(eval2("sin(0)+cos(0)+exp(0)", 0, 0) == 2.0);
}

TEST_CASE("domain errors instead of NaN") {
    CHECK_THROWS_WITH_AS((void)eval2("1/(x-1)", 1.0, 0.0),
                         doctest::Contains("division by zero"), Error);
    CHECK_THROWS_WITH_AS((void)eval2("(-2)^(1/2)", 0, 0),
                         doctest::Contains("non-integer exponent"), Error);
    CHECK_THROWS_WITH_AS((void)eval2("0^-1", 0, 0),
                         doctest::Contains("negative exponent"), Error);
    CHECK_THROWS_WITH_AS((void)eval2("sqrt(0-1)", 0, 0),
                         doctest::Contains("square root of a negative"), Error);
    CHECK_THROWS_WITH_AS((void)eval2("exp(1000)^2", 0, 0),
                         doctest::Contains("non-finite"), Error);
    CHECK(eval2("(-2)^3", 0, 0) == -8.0);
}

TEST_CASE("dimension guard") {
    const Expr e = parse_expression("z+1");
    CHECK(max_variable(e) == 2);
    CHECK_THROWS_WITH_AS((void)evaluate(e, Vec{0, 0, 0}, 2),
                         doctest::Contains("'z'"), Error);
    CHECK(evaluate(e, Vec{0, 0, 4}, 3) == 5.0);
    CHECK(max_variable(parse_expression("1+2")) == -1);
}

TEST_CASE("round trip through to_string") {
    for (const char* text : {"x^2+y^2", "-(x-1/2)^2-(y-sqrt(3)/4)^2", "2^3^2",
                             "min(x, y, 1/3)", "-x*-y", "1e-3+x/2.5",
                             "max(abs(x), sqrt(y+1))"}) {
        const Expr first = parse_expression(text);
        const Expr second = parse_expression(to_string(first));
        CHECK(same_ast(first, second));
    }
}

TEST_CASE("expression lists") {
    const std::vector<Expr> items = parse_expression_list("5/8, sqrt(3)/8");
    REQUIRE(items.size() == 2);
    CHECK(evaluate(items[0], Vec{}, 0) == 0.625);
    CHECK(evaluate(items[1], Vec{}, 0) == std::sqrt(3.0) / 8.0);
    CHECK_THROWS_AS((void)parse_expression_list("1,,2"), Error);
}

TEST_CASE("fields from expressions") {
    const IfsSystem ifs = load_preset("gasket");
    const FractalGraph g = build_graph(ifs, 0);

    const ScalarField ones = field_from_expr(parse_expression("1"), g);
    for (double v : ones.values) CHECK(v == 1.0);

    const ScalarField sq = field_from_expr(parse_expression("x^2+y^2"), g);
    const double at_p0 = sq.values[snap_to_vertex(g, ifs.boundary_point(0))];
    const double at_p1 = sq.values[snap_to_vertex(g, ifs.boundary_point(1))];
    const double at_p2 = sq.values[snap_to_vertex(g, ifs.boundary_point(2))];
    CHECK(at_p0 == 0.0);
    CHECK(at_p1 == 1.0);
    CHECK(at_p2 == doctest::Approx(1.0));

    CHECK_THROWS_WITH_AS((void)field_from_expr(parse_expression("z"), g),
                         doctest::Contains("2-dimensional"), Error);
    CHECK_THROWS_WITH_AS((void)field_from_expr(parse_expression("1/x"), g),
                         doctest::Contains("at vertex"), Error);
}
