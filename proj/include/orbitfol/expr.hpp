#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "orbitfol/types.hpp"

namespace orbitfol {

/// Immutable scalar expression over the ambient coordinates x1..xn.
///
/// Surface syntax (see parse_expr):
///   - real literals (`2`, `0.5`, `1e-3`), variables `x1`..`xn`; for n <= 4 the
///     aliases `x`, `y`, `z`, `w` name x1..x4;
///   - binary `+ - * /`, unary `-`, integer powers `e^k` (k may carry a sign);
///   - `sin(e)`, `cos(e)`, `exp(e)`.
/// Precedence from tightest: `^`, unary `-`, `* /`, `+ -`; binary operators are
/// left-associative.
///
/// Nodes are shared and never mutated, so copies are cheap and evaluation is
/// safe from concurrent callers. Variable indices in the C++ API are 0-based.
class Expression {
public:
    enum class Op { Constant, Variable, Negate, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp };

    struct Node {
        Op op;
        double value = 0.0;  // Constant
        int index = 0;       // Variable index, or exponent for Pow
        std::shared_ptr<const Node> lhs;
        std::shared_ptr<const Node> rhs;
    };

    static Expression constant(double value, int dim);
    static Expression variable(int index, int dim);

    int dim() const noexcept { return dim_; }
    Op op() const noexcept { return node_->op; }
    bool is_constant() const noexcept { return node_->op == Op::Constant; }
    /// Literal value; only meaningful when is_constant().
    double constant_value() const noexcept { return node_->value; }

    /// Throws DimensionError on a point of the wrong size and EvaluationError on
    /// division by zero.
    double evaluate(std::span<const double> point) const;
    double evaluate(const Vector& point) const;

    /// Exact symbolic partial derivative; literal subtrees are folded.
    Expression differentiate(int var) const;

    /// Text that parse_expr maps back to an expression with identical values.
    std::string to_string() const;

    friend Expression operator+(const Expression& a, const Expression& b);
    friend Expression operator-(const Expression& a, const Expression& b);
    friend Expression operator*(const Expression& a, const Expression& b);
    friend Expression operator/(const Expression& a, const Expression& b);
    friend Expression operator-(const Expression& a);
    friend Expression pow(const Expression& base, int exponent);
    friend Expression sin(const Expression& a);
    friend Expression cos(const Expression& a);
    friend Expression exp(const Expression& a);
    friend Expression parse_expr(std::string_view text, int dim);

private:
    Expression(std::shared_ptr<const Node> node, int dim) : node_(std::move(node)), dim_(dim) {}

    std::shared_ptr<const Node> node_;
    int dim_;
};

Expression operator*(double c, const Expression& e);

/// Parses `text` as an expression in `dim` variables.
/// Throws ParseError (with byte offset) on bad syntax, VariableOutOfRange when a
/// variable index exceeds `dim`.
Expression parse_expr(std::string_view text, int dim);

inline Expression differentiate(const Expression& e, int var) { return e.differentiate(var); }
inline double evaluate(const Expression& e, const Vector& p) { return e.evaluate(p); }

/// Name of coordinate `index` (0-based): aliases for dim <= 4, x<k> otherwise.
std::string variable_name(int index, int dim);

} // namespace orbitfol
