#include "orbitfol/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

#include "orbitfol/errors.hpp"
#include "orbitfol/numeric.hpp"

namespace orbitfol {

namespace {

using Node = Expression::Node;
using Op = Expression::Op;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make_node(Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr, double value = 0.0, int index = 0)
{
    return std::make_shared<const Node>(Node{op, value, index, std::move(lhs), std::move(rhs)});
}

NodePtr make_constant(double v) { return make_node(Op::Constant, nullptr, nullptr, v); }

bool is_literal(const NodePtr& n, double v) { return n->op == Op::Constant && n->value == v; }

double int_power(double base, int exponent)
{
    if (exponent < 0) {
        if (base == 0.0)
            throw EvaluationError("zero raised to a negative power");
        return 1.0 / int_power(base, -exponent);
    }
    double result = 1.0;
    double factor = base;
    for (unsigned k = static_cast<unsigned>(exponent); k != 0; k >>= 1) {
        if (k & 1u)
            result *= factor;
        factor *= factor;
    }
    return result;
}

// Folding constructors. Only literal subtrees and the trivial identities
// 0+e, e*1, e*0, e^1, e^0 are simplified.

NodePtr fold_neg(const NodePtr& a)
{
    if (a->op == Op::Constant)
        return make_constant(-a->value);
    if (a->op == Op::Negate)
        return a->lhs;
    return make_node(Op::Negate, a);
}

NodePtr fold_add(const NodePtr& a, const NodePtr& b)
{
    if (a->op == Op::Constant && b->op == Op::Constant)
        return make_constant(a->value + b->value);
    if (is_literal(a, 0.0))
        return b;
    if (is_literal(b, 0.0))
        return a;
    return make_node(Op::Add, a, b);
}

NodePtr fold_sub(const NodePtr& a, const NodePtr& b)
{
    if (a->op == Op::Constant && b->op == Op::Constant)
        return make_constant(a->value - b->value);
    if (is_literal(b, 0.0))
        return a;
    if (is_literal(a, 0.0))
        return fold_neg(b);
    return make_node(Op::Sub, a, b);
}

NodePtr fold_mul(const NodePtr& a, const NodePtr& b)
{
    if (a->op == Op::Constant && b->op == Op::Constant)
        return make_constant(a->value * b->value);
    if (is_literal(a, 0.0) || is_literal(b, 0.0))
        return make_constant(0.0);
    if (is_literal(a, 1.0))
        return b;
    if (is_literal(b, 1.0))
        return a;
    if (is_literal(a, -1.0))
        return fold_neg(b);
    if (is_literal(b, -1.0))
        return fold_neg(a);
    return make_node(Op::Mul, a, b);
}

NodePtr fold_div(const NodePtr& a, const NodePtr& b)
{
    if (a->op == Op::Constant && b->op == Op::Constant && b->value != 0.0)
        return make_constant(a->value / b->value);
    if (is_literal(b, 1.0))
        return a;
    return make_node(Op::Div, a, b);
}

NodePtr fold_pow(const NodePtr& base, int exponent)
{
    if (exponent == 1)
        return base;
    if (exponent == 0)
        return make_constant(1.0);
    if (base->op == Op::Constant && !(base->value == 0.0 && exponent < 0))
        return make_constant(int_power(base->value, exponent));
    return make_node(Op::Pow, base, nullptr, 0.0, exponent);
}

NodePtr fold_unary(Op op, const NodePtr& a)
{
    if (a->op == Op::Constant) {
        switch (op) {
        case Op::Sin: return make_constant(std::sin(a->value));
        case Op::Cos: return make_constant(std::cos(a->value));
        case Op::Exp: return make_constant(std::exp(a->value));
        default: break;
        }
    }
    return make_node(op, a);
}

double eval_node(const Node& n, std::span<const double> p)
{
    switch (n.op) {
    case Op::Constant: return n.value;
    case Op::Variable: return p[static_cast<std::size_t>(n.index)];
    case Op::Negate: return -eval_node(*n.lhs, p);
    case Op::Add: return eval_node(*n.lhs, p) + eval_node(*n.rhs, p);
    case Op::Sub: return eval_node(*n.lhs, p) - eval_node(*n.rhs, p);
    case Op::Mul: return eval_node(*n.lhs, p) * eval_node(*n.rhs, p);
    case Op::Div: {
        const double num = eval_node(*n.lhs, p);
        const double den = eval_node(*n.rhs, p);
        if (den == 0.0)
            throw EvaluationError("division by zero");
        return num / den;
    }
    case Op::Pow: return int_power(eval_node(*n.lhs, p), n.index);
    case Op::Sin: return std::sin(eval_node(*n.lhs, p));
    case Op::Cos: return std::cos(eval_node(*n.lhs, p));
    case Op::Exp: return std::exp(eval_node(*n.lhs, p));
    }
    return 0.0;
}

NodePtr fold_tree(const NodePtr& n)
{
    switch (n->op) {
    case Op::Constant:
    case Op::Variable: return n;
    case Op::Negate: return fold_neg(fold_tree(n->lhs));
    case Op::Add: return fold_add(fold_tree(n->lhs), fold_tree(n->rhs));
    case Op::Sub: return fold_sub(fold_tree(n->lhs), fold_tree(n->rhs));
    case Op::Mul: return fold_mul(fold_tree(n->lhs), fold_tree(n->rhs));
    case Op::Div: return fold_div(fold_tree(n->lhs), fold_tree(n->rhs));
    case Op::Pow: return fold_pow(fold_tree(n->lhs), n->index);
    case Op::Sin:
    case Op::Cos:
    case Op::Exp: return fold_unary(n->op, fold_tree(n->lhs));
    }
    return n;
}

NodePtr diff_node(const NodePtr& n, int var)
{
    switch (n->op) {
    case Op::Constant: return make_constant(0.0);
    case Op::Variable: return make_constant(n->index == var ? 1.0 : 0.0);
    case Op::Negate: return fold_neg(diff_node(n->lhs, var));
    case Op::Add: return fold_add(diff_node(n->lhs, var), diff_node(n->rhs, var));
    case Op::Sub: return fold_sub(diff_node(n->lhs, var), diff_node(n->rhs, var));
    case Op::Mul:
        return fold_add(fold_mul(diff_node(n->lhs, var), n->rhs), fold_mul(n->lhs, diff_node(n->rhs, var)));
    case Op::Div: {
        auto num = fold_sub(fold_mul(diff_node(n->lhs, var), n->rhs), fold_mul(n->lhs, diff_node(n->rhs, var)));
        return fold_div(num, fold_pow(n->rhs, 2));
    }
    case Op::Pow: {
        auto outer = fold_mul(make_constant(static_cast<double>(n->index)), fold_pow(n->lhs, n->index - 1));
        return fold_mul(outer, diff_node(n->lhs, var));
    }
    case Op::Sin: return fold_mul(fold_unary(Op::Cos, n->lhs), diff_node(n->lhs, var));
    case Op::Cos: return fold_mul(fold_neg(fold_unary(Op::Sin, n->lhs)), diff_node(n->lhs, var));
    case Op::Exp: return fold_mul(n, diff_node(n->lhs, var));
    }
    return make_constant(0.0);
}

// Printing precedence: + - (1), * / (2), unary minus (3), ^ (4), atoms (5).
int precedence(const Node& n)
{
    switch (n.op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Negate: return 3;
    case Op::Pow: return 4;
    case Op::Constant: return n.value < 0.0 || std::signbit(n.value) ? 3 : 5;
    default: return 5;
    }
}

void print_node(const Node& n, int dim, std::string& out);

void print_operand(const Node& n, int dim, int min_prec, std::string& out)
{
    if (precedence(n) < min_prec) {
        out += '(';
        print_node(n, dim, out);
        out += ')';
    } else {
        print_node(n, dim, out);
    }
}

void print_node(const Node& n, int dim, std::string& out)
{
    switch (n.op) {
    case Op::Constant: out += format_double(n.value); return;
    case Op::Variable: out += variable_name(n.index, dim); return;
    case Op::Negate:
        out += '-';
        print_operand(*n.lhs, dim, 3, out);
        return;
    case Op::Add:
    case Op::Sub:
        print_operand(*n.lhs, dim, 1, out);
        out += n.op == Op::Add ? " + " : " - ";
        print_operand(*n.rhs, dim, 2, out);
        return;
    case Op::Mul:
    case Op::Div:
        print_operand(*n.lhs, dim, 2, out);
        out += n.op == Op::Mul ? "*" : "/";
        print_operand(*n.rhs, dim, 3, out);
        return;
    case Op::Pow:
        print_operand(*n.lhs, dim, 5, out);
        out += '^';
        out += std::to_string(n.index);
        return;
    case Op::Sin:
    case Op::Cos:
    case Op::Exp:
        out += n.op == Op::Sin ? "sin(" : n.op == Op::Cos ? "cos(" : "exp(";
        print_node(*n.lhs, dim, out);
        out += ')';
        return;
    }
}

// Recursive-descent parser over the grammar
//   sum     := product (('+' | '-') product)*
//   product := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' ['-' | '+'] integer)*
//   primary := number | variable | func '(' sum ')' | '(' sum ')'
class Parser {
public:
    Parser(std::string_view text, int dim) : text_(text), dim_(dim) {}

    NodePtr parse()
    {
        skip_space();
        if (at_end())
            throw ParseError("empty expression", pos_);
        NodePtr result = parse_sum();
        skip_space();
        if (!at_end())
            throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
        return result;
    }

private:
    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return at_end() ? '\0' : text_[pos_]; }

    void skip_space()
    {
        while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool accept(char c)
    {
        skip_space();
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr parse_sum()
    {
        NodePtr lhs = parse_product();
        for (;;) {
            if (accept('+'))
                lhs = make_node(Op::Add, lhs, parse_product());
            else if (accept('-'))
                lhs = make_node(Op::Sub, lhs, parse_product());
            else
                return lhs;
        }
    }

    NodePtr parse_product()
    {
        NodePtr lhs = parse_unary();
        for (;;) {
            if (accept('*'))
                lhs = make_node(Op::Mul, lhs, parse_unary());
            else if (accept('/'))
                lhs = make_node(Op::Div, lhs, parse_unary());
            else
                return lhs;
        }
    }

    NodePtr parse_unary()
    {
        if (accept('-'))
            return fold_neg(parse_unary());
        return parse_power();
    }

    NodePtr parse_power()
    {
        NodePtr base = parse_primary();
        while (accept('^')) {
            skip_space();
            const std::size_t start = pos_;
            bool negative = false;
            if (peek() == '-' || peek() == '+') {
                negative = peek() == '-';
                ++pos_;
                skip_space();
            }
            const std::size_t digits = pos_;
            while (std::isdigit(static_cast<unsigned char>(peek())))
                ++pos_;
            if (digits == pos_)
                throw ParseError("exponent must be an integer literal", start);
            int exponent = 0;
            auto [ptr, ec] = std::from_chars(text_.data() + digits, text_.data() + pos_, exponent);
            if (ec != std::errc() || ptr != text_.data() + pos_)
                throw ParseError("exponent out of range", digits);
            base = make_node(Op::Pow, base, nullptr, 0.0, negative ? -exponent : exponent);
        }
        return base;
    }

    NodePtr parse_primary()
    {
        skip_space();
        const std::size_t start = pos_;
        const char c = peek();
        if (at_end())
            throw ParseError("unexpected end of expression", pos_);
        if (c == '(') {
            ++pos_;
            NodePtr inner = parse_sum();
            if (!accept(')'))
                throw ParseError("expected ')'", pos_);
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
            return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (!at_end() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            return resolve_identifier(text_.substr(start, pos_ - start), start);
        }
        throw ParseError(std::string("unexpected '") + c + "'", pos_);
    }

    NodePtr parse_number()
    {
        const std::size_t start = pos_;
        while (std::isdigit(static_cast<unsigned char>(peek())))
            ++pos_;
        if (peek() == '.') {
            ++pos_;
            while (std::isdigit(static_cast<unsigned char>(peek())))
                ++pos_;
        }
        if (peek() == 'e' || peek() == 'E') {
            std::size_t look = pos_ + 1;
            if (look < text_.size() && (text_[look] == '+' || text_[look] == '-'))
                ++look;
            if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
                pos_ = look;
                while (std::isdigit(static_cast<unsigned char>(peek())))
                    ++pos_;
            }
        }
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
        if (ec != std::errc() || ptr != text_.data() + pos_)
            throw ParseError("malformed number", start);
        return make_constant(value);
    }

    NodePtr resolve_identifier(std::string_view name, std::size_t start)
    {
        if (name == "sin" || name == "cos" || name == "exp") {
            if (!accept('('))
                throw ParseError("expected '(' after " + std::string(name), pos_);
            NodePtr arg = parse_sum();
            if (!accept(')'))
                throw ParseError("expected ')'", pos_);
            const Op op = name == "sin" ? Op::Sin : name == "cos" ? Op::Cos : Op::Exp;
            return make_node(op, arg);
        }

        int index = -1;
        if (name.size() == 1) {
            constexpr std::string_view aliases = "xyzw";
            const auto found = aliases.find(name[0]);
            if (found != std::string_view::npos) {
                if (dim_ > 4)
                    throw ParseError("coordinate aliases x,y,z,w require dimension <= 4; use x1..xn", start);
                index = static_cast<int>(found);
            }
        } else if (name[0] == 'x') {
            int k = 0;
            auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), k);
            if (ec == std::errc() && ptr == name.data() + name.size() && k >= 1 && name[1] != '0')
                index = k - 1;
        }
        if (index < 0)
            throw ParseError("unknown identifier '" + std::string(name) + "'", start);
        if (index >= dim_)
            throw VariableOutOfRange("variable '" + std::string(name) + "' exceeds dimension " + std::to_string(dim_),
                                     start);
        return make_node(Op::Variable, nullptr, nullptr, 0.0, index);
    }

    std::string_view text_;
    int dim_;
    std::size_t pos_ = 0;
};

} // namespace

Expression Expression::constant(double value, int dim) { return Expression(make_constant(value), dim); }

Expression Expression::variable(int index, int dim)
{
    if (index < 0 || index >= dim)
        throw DimensionError("variable index " + std::to_string(index) + " outside dimension " + std::to_string(dim));
    return Expression(make_node(Op::Variable, nullptr, nullptr, 0.0, index), dim);
}

double Expression::evaluate(std::span<const double> point) const
{
    if (static_cast<int>(point.size()) != dim_)
        throw DimensionError("point of size " + std::to_string(point.size()) + " for expression in dimension " +
                             std::to_string(dim_));
    return eval_node(*node_, point);
}

double Expression::evaluate(const Vector& point) const
{
    return evaluate(std::span<const double>(point.data(), static_cast<std::size_t>(point.size())));
}

Expression Expression::differentiate(int var) const
{
    if (var < 0 || var >= dim_)
        throw DimensionError("cannot differentiate with respect to variable " + std::to_string(var));
    return Expression(diff_node(fold_tree(node_), var), dim_);
}

std::string Expression::to_string() const
{
    std::string out;
    print_node(*node_, dim_, out);
    return out;
}

namespace {

int common_dim(const Expression& a, const Expression& b)
{
    if (a.dim() != b.dim())
        throw DimensionError("expressions of different dimension combined");
    return a.dim();
}

} // namespace

Expression operator+(const Expression& a, const Expression& b)
{
    return Expression(fold_add(a.node_, b.node_), common_dim(a, b));
}

Expression operator-(const Expression& a, const Expression& b)
{
    return Expression(fold_sub(a.node_, b.node_), common_dim(a, b));
}

Expression operator*(const Expression& a, const Expression& b)
{
    return Expression(fold_mul(a.node_, b.node_), common_dim(a, b));
}

Expression operator/(const Expression& a, const Expression& b)
{
    return Expression(fold_div(a.node_, b.node_), common_dim(a, b));
}

Expression operator-(const Expression& a) { return Expression(fold_neg(a.node_), a.dim_); }
Expression pow(const Expression& base, int exponent) { return Expression(fold_pow(base.node_, exponent), base.dim_); }
Expression sin(const Expression& a) { return Expression(fold_unary(Op::Sin, a.node_), a.dim_); }
Expression cos(const Expression& a) { return Expression(fold_unary(Op::Cos, a.node_), a.dim_); }
Expression exp(const Expression& a) { return Expression(fold_unary(Op::Exp, a.node_), a.dim_); }

Expression operator*(double c, const Expression& e) { return Expression::constant(c, e.dim()) * e; }

Expression parse_expr(std::string_view text, int dim)
{
    if (dim < 1)
        throw DimensionError("expression dimension must be positive");
    Parser parser(text, dim);
    return Expression(parser.parse(), dim);
}

std::string variable_name(int index, int dim)
{
    if (dim <= 4)
        return std::string(1, "xyzw"[index]);
    return "x" + std::to_string(index + 1);
}

} // namespace orbitfol
