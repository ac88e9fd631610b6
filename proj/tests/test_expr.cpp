#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "finsler/expr.hpp"
#include "finsler/metric.hpp"

using namespace finsler;

namespace {

// Random parser-reachable expression trees for round-trip checks.
Expr randomExpr(std::mt19937_64& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 6);
    std::uniform_int_distribution<int> vi(1, 3);
    std::uniform_real_distribution<double> cv(0.0, 9.0);
    switch (pick(rng)) {
        case 0: return Expr::number(cv(rng));
        case 1:
            return Expr::variable(rng() % 2 ? VarGroup::Base : VarGroup::Fiber, vi(rng));
        case 2: return Expr::neg(randomExpr(rng, depth - 1));
        case 3: {
            BinOp ops[] = {BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div};
            return Expr::binary(ops[rng() % 4], randomExpr(rng, depth - 1),
                                randomExpr(rng, depth - 1));
        }
        case 4:
            return Expr::binary(BinOp::Pow, randomExpr(rng, depth - 1),
                                Expr::number(static_cast<double>(vi(rng))));
        case 5: {
            FuncId fs[] = {FuncId::Exp, FuncId::Log, FuncId::Sqrt,
                           FuncId::Atan, FuncId::Sin, FuncId::Cos};
            return Expr::call(fs[rng() % 6], randomExpr(rng, depth - 1));
        }
        default: {
            BinOp ops[] = {BinOp::Add, BinOp::Mul};
            return Expr::binary(ops[rng() % 2], randomExpr(rng, depth - 1),
                                randomExpr(rng, depth - 1));
        }
    }
}

}  // namespace

TEST_CASE("parses the 1-D Euclidean energy") {
    MetricSpec spec = parseMetric("dim = 1\nE = y1^2\n");
    CHECK(spec.n == 1);
    CHECK_FALSE(spec.givenAsNorm);
    CHECK(spec.constraints.empty());
    PointState p{{0.0}, {3.0}};
    CHECK(evalScalar(spec, p) == doctest::Approx(9.0));
}

TEST_CASE("parses the quartic 4-D metric file") {
    MetricSpec spec = parseMetric(
        "dim = 4\n"
        "F = (x2^2*y1^4 + y2^4 + y3^4 + y4^4)^(1/4)\n"
        "domain: x2 > 0\n"
        "domain: y1 != 0\n"
        "domain: y2 != 0\n");
    CHECK(spec.n == 4);
    CHECK(spec.givenAsNorm);
    CHECK(spec.constraints.size() == 3);
    CHECK(spec.constraints[1].op == RelOp::NE);
    // E = F^2 = sqrt(1+1+1+1) ... at x=(0,1,0,0), y=(1,1,1,1): F^4 = 4, E = 2
    PointState p{{0, 1, 0, 0}, {1, 1, 1, 1}};
    CHECK(evalScalar(spec, p) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("syntax error reports position") {
    try {
        parseMetric("dim = 2\nF = x1 +\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
        CHECK(e.column > 4);
    }
}

TEST_CASE("unknown identifier and bad indices are rejected") {
    CHECK_THROWS_AS(parseMetric("dim = 2\nE = z1^2\n"), ParseError);
    CHECK_THROWS_AS(parseMetric("dim = 2\nE = y3^2\n"), ParseError);
    CHECK_THROWS_AS(parseMetric("dim = 2\nE = y0^2\n"), ParseError);
    CHECK_THROWS_AS(parseMetric("dim = 2\nE = foo(y1)\n"), ParseError);
}

TEST_CASE("missing declarations are rejected") {
    CHECK_THROWS_AS(parseMetric("E = y1^2\n"), ParseError);
    CHECK_THROWS_AS(parseMetric("dim = 2\n"), ParseError);
    CHECK_THROWS_AS(parseMetric("dim = 2\nE = y1^2\nF = y1\n"), ParseError);
}

TEST_CASE("comments, whitespace and metadata") {
    MetricSpec spec = parseMetric(
        "# a comment line\n"
        "name: demo\n"
        "description: two dimensional\n"
        "dim=2\n"
        "E = y1 ^ 2 + y2^2  # trailing comment\n"
        "\n");
    CHECK(spec.name == "demo");
    CHECK(spec.description == "two dimensional");
    CHECK(spec.n == 2);
}

TEST_CASE("pow semantics: integer vs real exponents") {
    MetricSpec spec = parseMetric("dim = 1\nE = y1^2\n");
    // integer exponent works on negative bases
    Expr e = parseExpression("(0 - 2)^3");
    std::vector<double> xs{0.0}, ys{1.0};
    CHECK(evalExpr<double>(e, xs, ys) == doctest::Approx(-8.0));
    // non-integer exponent requires a positive base
    Expr bad = parseExpression("(0 - 2)^(1/2)");
    CHECK_THROWS_AS(evalExpr<double>(bad, xs, ys), EvalError);
    // variable exponent goes through exp/log
    Expr ve = parseExpression("2^y1");
    CHECK(evalExpr<double>(ve, xs, ys) == doctest::Approx(2.0));
    (void)spec;
}

TEST_CASE("round-trip: builtin metric files") {
    for (const BuiltinMetric& b : builtinMetrics()) {
        MetricSpec spec = parseMetric(b.text);
        MetricSpec back = parseMetric(printMetric(spec));
        CHECK(back.n == spec.n);
        CHECK(back.givenAsNorm == spec.givenAsNorm);
        REQUIRE(structurallyEqual(back.defining, spec.defining));
        REQUIRE(back.constraints.size() == spec.constraints.size());
        for (std::size_t i = 0; i < spec.constraints.size(); ++i) {
            CHECK(structurallyEqual(back.constraints[i].lhs, spec.constraints[i].lhs));
            CHECK(back.constraints[i].op == spec.constraints[i].op);
            CHECK(structurallyEqual(back.constraints[i].rhs, spec.constraints[i].rhs));
        }
    }
}

TEST_CASE("round-trip: random expressions") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        Expr e = randomExpr(rng, 4);
        std::string printed = printExpression(e);
        CAPTURE(printed);
        Expr back = parseExpression(printed);
        REQUIRE(structurallyEqual(e, back));
        // and printing is a fixed point
        CHECK(printExpression(back) == printed);
    }
}

TEST_CASE("round-trip: parsed text survives print-parse") {
    const char* samples[] = {
        "x1 - x2 - x3",
        "x1 - (x2 - x3)",
        "x1/x2/x3",
        "x1/(x2*x3)",
        "2^3^2",
        "(2^3)^2",
        "-x1^2",
        "x1^-2",
        "exp(-x1*x2)*y1^2",
    };
    for (const char* s : samples) {
        Expr e = parseExpression(s);
        Expr back = parseExpression(printExpression(e));
        CAPTURE(s);
        CAPTURE(printExpression(e));
        REQUIRE(structurallyEqual(e, back));
    }
}
