#include <cmath>

#include <gtest/gtest.h>

#include "orbitfol/errors.hpp"
#include "orbitfol/expr.hpp"
#include "test_support.hpp"

using namespace orbitfol;
using orbitfol::testing::vec;

TEST(Expr, EvaluatesBasicArithmetic)
{
    EXPECT_DOUBLE_EQ(parse_expr("-y", 3).evaluate(vec({1, 2, 3})), -2.0);
    EXPECT_DOUBLE_EQ(parse_expr("x^2 + y*z", 3).evaluate(vec({1, 2, 3})), 7.0);
    EXPECT_DOUBLE_EQ(parse_expr("z", 3).evaluate(vec({0, 0, 5})), 5.0);
    EXPECT_DOUBLE_EQ(parse_expr("sin(x)", 1).evaluate(vec({0})), 0.0);
    EXPECT_DOUBLE_EQ(parse_expr("x*w - y*z", 4).evaluate(vec({1, 0, 0, 1})), 1.0);
}

TEST(Expr, SeparatorOnFirstSingularCircle)
{
    // Oracle: on x = w, y = -z the invariant reduces to -(x^2 + y^2) = -1/2.
    const double r = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(parse_expr("y*z - x*w", 4).evaluate(vec({r, 0, 0, r})), -0.5, 1e-15);
    const double c = std::cos(0.4) * r;
    const double s = std::sin(0.4) * r;
    EXPECT_NEAR(parse_expr("y*z - x*w", 4).evaluate(vec({c, s, -s, c})), -0.5, 1e-15);
}

TEST(Expr, PrecedenceAndAssociativity)
{
    const Vector p = vec({2, 3, 5});
    EXPECT_DOUBLE_EQ(parse_expr("x - y - z", 3).evaluate(p), -6.0);
    EXPECT_DOUBLE_EQ(parse_expr("x / y / z", 3).evaluate(p), 2.0 / 3.0 / 5.0);
    EXPECT_DOUBLE_EQ(parse_expr("-x^2", 3).evaluate(p), -4.0);
    EXPECT_DOUBLE_EQ(parse_expr("(-x)^2", 3).evaluate(p), 4.0);
    EXPECT_DOUBLE_EQ(parse_expr("x + y * z", 3).evaluate(p), 17.0);
    EXPECT_DOUBLE_EQ(parse_expr("x^-1", 3).evaluate(p), 0.5);
    EXPECT_DOUBLE_EQ(parse_expr("  x1 *\tx3 ", 3).evaluate(p), 10.0);
}

TEST(Expr, PositionalVariablesBeyondFour)
{
    const Expression e = parse_expr("x5 - x1", 5);
    EXPECT_DOUBLE_EQ(e.evaluate(vec({1, 0, 0, 0, 4})), 3.0);
    EXPECT_THROW(parse_expr("y", 5), ParseError);
}

TEST(Expr, ParseErrorsCarryOffsets)
{
    try {
        parse_expr("x + * y", 2);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.offset(), 4u);
    }
    EXPECT_THROW(parse_expr("", 2), ParseError);
    EXPECT_THROW(parse_expr("(x + y", 2), ParseError);
    EXPECT_THROW(parse_expr("x^1.5", 2), ParseError);
    EXPECT_THROW(parse_expr("tan(x)", 2), ParseError);
    EXPECT_THROW(parse_expr("z", 2), VariableOutOfRange);
    EXPECT_THROW(parse_expr("x4", 3), VariableOutOfRange);
}

TEST(Expr, EvaluationErrorsAreExplicit)
{
    EXPECT_THROW(parse_expr("1 / x", 1).evaluate(vec({0})), EvaluationError);
    EXPECT_THROW(parse_expr("x^-2", 1).evaluate(vec({0})), EvaluationError);
    EXPECT_THROW(parse_expr("x", 2).evaluate(vec({1})), DimensionError);
}

TEST(Expr, Derivatives)
{
    const Vector p = vec({1.5, -2, 0.25});
    const Expression e = parse_expr("x^2 + y*z", 3);
    const Expression dx = e.differentiate(0);
    EXPECT_DOUBLE_EQ(dx.evaluate(p), 3.0);
    EXPECT_EQ(dx.to_string(), "2*x");
    EXPECT_DOUBLE_EQ(parse_expr("-y", 3).differentiate(1).evaluate(p), -1.0);

    // Killing condition of X4 = (0, z, -y): d xi2/dz + d xi3/dy = 1 + (-1).
    const Expression xi2 = parse_expr("z", 3);
    const Expression xi3 = parse_expr("-y", 3);
    EXPECT_DOUBLE_EQ(xi2.differentiate(2).evaluate(p) + xi3.differentiate(1).evaluate(p), 0.0);
}

namespace {

Expression random_ast(Rng& rng, int dim, int depth)
{
    if (depth == 0 || rng.uniform() < 0.25) {
        if (rng.uniform() < 0.6)
            return Expression::variable(static_cast<int>(rng.index(static_cast<std::size_t>(dim))), dim);
        return Expression::constant(std::round(rng.uniform(-3.0, 3.0) * 4.0) / 4.0, dim);
    }
    const Expression a = random_ast(rng, dim, depth - 1);
    const Expression b = random_ast(rng, dim, depth - 1);
    switch (rng.index(9)) {
    case 0: return a + b;
    case 1: return a - b;
    case 2: return a * b;
    case 3: return a / (Expression::constant(2.0, dim) + pow(b, 2));
    case 4: return pow(a, static_cast<int>(rng.index(3)) + 2);
    case 5: return sin(a);
    case 6: return cos(a);
    case 7: return exp(sin(a));
    default: return -a;
    }
}

} // namespace

TEST(Expr, DerivativesMatchCentralDifferences)
{
    Rng rng(11);
    constexpr int dim = 3;
    constexpr double h = 1e-5;
    for (int trial = 0; trial < 200; ++trial) {
        const Expression e = random_ast(rng, dim, 4);
        Vector p(dim);
        for (int i = 0; i < dim; ++i)
            p(i) = rng.uniform(-1.0, 1.0);
        for (int var = 0; var < dim; ++var) {
            Vector plus = p;
            Vector minus = p;
            plus(var) += h;
            minus(var) -= h;
            const double fd = (e.evaluate(plus) - e.evaluate(minus)) / (2.0 * h);
            const double exact = e.differentiate(var).evaluate(p);
            const double scale = 1.0 + std::max(std::abs(e.evaluate(p)), std::abs(exact));
            EXPECT_NEAR(exact, fd, 1e-6 * scale) << e.to_string() << " d/d" << variable_name(var, dim);
        }
    }
}

TEST(Expr, PrintParseRoundTrip)
{
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const int dim = trial % 2 ? 3 : 6;
        const Expression e = random_ast(rng, dim, 4);
        const Expression back = parse_expr(e.to_string(), dim);
        for (int k = 0; k < 5; ++k) {
            Vector p(dim);
            for (int i = 0; i < dim; ++i)
                p(i) = rng.uniform(-1.5, 1.5);
            const double a = e.evaluate(p);
            EXPECT_NEAR(back.evaluate(p), a, 1e-12 * (1.0 + std::abs(a))) << e.to_string();
        }
    }
}

TEST(Expr, ConstantFoldingOfLiterals)
{
    // Parsing keeps the literal structure; derivatives fold it.
    EXPECT_EQ(parse_expr("2*3 + 1", 1).to_string(), "2*3 + 1");
    EXPECT_EQ(parse_expr("2*3*x + 1", 1).differentiate(0).to_string(), "6");
    EXPECT_EQ(parse_expr("0*x^2 + x*1", 1).differentiate(0).to_string(), "1");
    EXPECT_EQ(parse_expr("(1 + 1)*x*y", 2).differentiate(1).to_string(), "2*x");
    EXPECT_TRUE(parse_expr("x^3", 1).differentiate(0).differentiate(0).differentiate(0).differentiate(0).is_constant());
}
