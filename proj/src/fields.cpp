#include "orbitfol/fields.hpp"

#include <algorithm>
#include <cmath>

#include "orbitfol/errors.hpp"

namespace orbitfol {

AffineField::AffineField(Matrix linear, Vector offset) : linear_(std::move(linear)), offset_(std::move(offset))
{
    if (linear_.rows() != linear_.cols())
        throw DimensionError("linear part must be square");
    if (linear_.rows() != offset_.size())
        throw DimensionError("linear part is " + std::to_string(linear_.rows()) + "x" +
                             std::to_string(linear_.cols()) + " but offset has size " +
                             std::to_string(offset_.size()));
    if (offset_.size() == 0)
        throw DimensionError("field dimension must be positive");
}

AffineField AffineField::zero(int dim) { return AffineField(Matrix::Zero(dim, dim), Vector::Zero(dim)); }

Vector AffineField::operator()(const Vector& p) const
{
    if (p.size() != offset_.size())
        throw DimensionError("point dimension does not match field");
    return linear_ * p + offset_;
}

bool AffineField::is_zero() const { return max_coefficient() == 0.0; }

double AffineField::max_coefficient() const
{
    return std::max(linear_.cwiseAbs().maxCoeff(), offset_.cwiseAbs().maxCoeff());
}

AffineField operator+(const AffineField& f, const AffineField& g)
{
    if (f.dim() != g.dim())
        throw DimensionError("fields of different dimension");
    return AffineField(f.linear_ + g.linear_, f.offset_ + g.offset_);
}

AffineField operator-(const AffineField& f, const AffineField& g)
{
    if (f.dim() != g.dim())
        throw DimensionError("fields of different dimension");
    return AffineField(f.linear_ - g.linear_, f.offset_ - g.offset_);
}

AffineField operator*(double c, const AffineField& f) { return AffineField(c * f.linear_, c * f.offset_); }

bool operator==(const AffineField& f, const AffineField& g)
{
    return f.dim() == g.dim() && f.linear_ == g.linear_ && f.offset_ == g.offset_;
}

ExprField::ExprField(std::vector<Expression> components) : components_(std::move(components))
{
    if (components_.empty())
        throw DimensionError("a field needs at least one component");
    for (const auto& c : components_)
        if (c.dim() != dim())
            throw DimensionError("component count " + std::to_string(dim()) +
                                 " does not match expression dimension " + std::to_string(c.dim()));
}

ExprField ExprField::parse(const std::vector<std::string>& components)
{
    const int dim = static_cast<int>(components.size());
    std::vector<Expression> parsed;
    parsed.reserve(components.size());
    for (const auto& text : components)
        parsed.push_back(parse_expr(text, dim));
    return ExprField(std::move(parsed));
}

Vector ExprField::operator()(const Vector& p) const
{
    Vector v(dim());
    for (int i = 0; i < dim(); ++i)
        v(i) = components_[static_cast<std::size_t>(i)].evaluate(p);
    return v;
}

ExprField to_expr_field(const AffineField& f)
{
    const int n = f.dim();
    std::vector<Expression> components;
    for (int i = 0; i < n; ++i) {
        Expression c = Expression::constant(f.offset()(i), n);
        for (int j = 0; j < n; ++j) {
            const double a = f.linear()(i, j);
            if (a != 0.0)
                c = c + a * Expression::variable(j, n);
        }
        components.push_back(c);
    }
    return ExprField(std::move(components));
}

int field_dim(const AnyField& f)
{
    return std::visit([](const auto& g) { return g.dim(); }, f);
}

Vector eval_field(const AffineField& f, const Vector& p) { return f(p); }
Vector eval_field(const ExprField& f, const Vector& p) { return f(p); }

Vector eval_field(const AnyField& f, const Vector& p)
{
    return std::visit([&](const auto& g) { return g(p); }, f);
}

std::vector<Vector> SamplingGrid::nodes(int dim) const
{
    if (points_per_axis < 1)
        throw DimensionError("grid needs at least one point per axis");
    std::vector<double> axis(static_cast<std::size_t>(points_per_axis));
    for (int k = 0; k < points_per_axis; ++k)
        axis[static_cast<std::size_t>(k)] =
            points_per_axis == 1 ? lo : lo + (hi - lo) * k / static_cast<double>(points_per_axis - 1);

    std::size_t total = 1;
    for (int d = 0; d < dim; ++d)
        total *= static_cast<std::size_t>(points_per_axis);

    std::vector<Vector> out;
    out.reserve(total);
    std::vector<int> counter(static_cast<std::size_t>(dim), 0);
    for (std::size_t k = 0; k < total; ++k) {
        Vector p(dim);
        for (int d = 0; d < dim; ++d)
            p(d) = axis[static_cast<std::size_t>(counter[static_cast<std::size_t>(d)])];
        out.push_back(std::move(p));
        for (int d = dim - 1; d >= 0; --d) {
            auto& c = counter[static_cast<std::size_t>(d)];
            if (++c < points_per_axis)
                break;
            c = 0;
        }
    }
    return out;
}

KillingReport killing_check(const AffineField& f)
{
    KillingReport report;
    report.mode = KillingMode::ExactAffine;
    const Matrix& a = f.linear();
    for (int i = 0; i < f.dim(); ++i) {
        for (int j = i; j < f.dim(); ++j) {
            const double residual = i == j ? std::abs(a(i, i)) : std::abs(a(i, j) + a(j, i));
            report.max_residual = std::max(report.max_residual, residual);
            if (residual != 0.0)
                report.witnesses.push_back({i, j, Vector(), residual});
        }
    }
    report.pass = report.witnesses.empty();
    return report;
}

namespace {

SamplingGrid default_grid_for(int dim)
{
    if (dim > 4)
        throw DimensionError("the default sampling grid is limited to dimension <= 4; pass an explicit grid");
    return SamplingGrid{};
}

} // namespace

KillingReport killing_check(const ExprField& f, const std::optional<SamplingGrid>& grid, double tol)
{
    const int n = f.dim();
    const auto nodes = (grid ? *grid : default_grid_for(n)).nodes(n);
    if (nodes.empty())
        throw DimensionError("sampling grid is empty");

    // partials[i][j] = d xi_i / d x_j
    std::vector<std::vector<Expression>> partials(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            partials[static_cast<std::size_t>(i)].push_back(f.component(i).differentiate(j));

    KillingReport report;
    report.mode = KillingMode::SymbolicGrid;
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const Expression condition =
                i == j ? partials[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)]
                       : partials[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +
                             partials[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
            KillingWitness worst{i, j, nodes.front(), 0.0};
            for (const auto& p : nodes) {
                const double r = std::abs(condition.evaluate(p));
                if (r > worst.residual) {
                    worst.residual = r;
                    worst.point = p;
                }
            }
            report.max_residual = std::max(report.max_residual, worst.residual);
            if (worst.residual > tol)
                report.witnesses.push_back(std::move(worst));
        }
    }
    report.pass = report.witnesses.empty();
    return report;
}

KillingReport killing_check(const AnyField& f, double tol)
{
    if (const auto* affine = std::get_if<AffineField>(&f))
        return killing_check(*affine);
    return killing_check(std::get<ExprField>(f), std::nullopt, tol);
}

std::optional<AffineField> detect_affine(const ExprField& f, const std::optional<SamplingGrid>& grid)
{
    constexpr double second_derivative_tol = 1e-12;
    const int n = f.dim();
    const auto nodes = (grid ? *grid : default_grid_for(n)).nodes(n);
    const Vector origin = Vector::Zero(n);

    Matrix a(n, n);
    Vector b(n);
    try {
        for (int i = 0; i < n; ++i) {
            const Expression& c = f.component(i);
            b(i) = c.evaluate(origin);
            for (int j = 0; j < n; ++j) {
                const Expression first = c.differentiate(j);
                a(i, j) = first.evaluate(origin);
                for (int k = j; k < n; ++k) {
                    const Expression second = first.differentiate(k);
                    if (second.is_constant()) {
                        if (second.constant_value() != 0.0)
                            return std::nullopt;
                        continue;
                    }
                    for (const auto& p : nodes)
                        if (std::abs(second.evaluate(p)) > second_derivative_tol)
                            return std::nullopt;
                }
            }
        }
    } catch (const EvaluationError&) {
        return std::nullopt;
    }
    return AffineField(std::move(a), std::move(b));
}

AffineField conjugate_field(const AffineField& f, const Matrix& rotation, const Vector& translation)
{
    const int n = f.dim();
    if (rotation.rows() != n || rotation.cols() != n || translation.size() != n)
        throw DimensionError("rigid motion does not match field dimension");
    const double defect = (rotation.transpose() * rotation - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
    if (defect > 1e-12)
        throw DimensionError("matrix is not orthogonal (|R^T R - I| = " + std::to_string(defect) + ")");

    const Matrix skew = 0.5 * (f.linear() - f.linear().transpose());
    const Matrix sym = 0.5 * (f.linear() + f.linear().transpose());
    Matrix skew_moved = rotation * skew * rotation.transpose();
    skew_moved = (0.5 * (skew_moved - skew_moved.transpose())).eval();
    Matrix sym_moved = rotation * sym * rotation.transpose();
    sym_moved = (0.5 * (sym_moved + sym_moved.transpose())).eval();

    Matrix linear = skew_moved + sym_moved;
    Vector offset = rotation * f.offset() - linear * translation;
    return AffineField(std::move(linear), std::move(offset));
}

namespace catalog {

AffineField translation_r3(int axis)
{
    if (axis < 0 || axis > 2)
        throw DimensionError("axis must be 0, 1 or 2");
    Vector b = Vector::Zero(3);
    b(axis) = 1.0;
    return AffineField(Matrix::Zero(3, 3), b);
}

AffineField rotation_r3(int axis)
{
    Matrix a = Matrix::Zero(3, 3);
    switch (axis) {
    case 0:  // X4 = -y d/dz + z d/dy
        a(1, 2) = 1.0;
        a(2, 1) = -1.0;
        break;
    case 1:  // X5 = -z d/dx + x d/dz
        a(0, 2) = -1.0;
        a(2, 0) = 1.0;
        break;
    case 2:  // X6 = -x d/dy + y d/dx
        a(0, 1) = 1.0;
        a(1, 0) = -1.0;
        break;
    default: throw DimensionError("axis must be 0, 1 or 2");
    }
    return AffineField(a, Vector::Zero(3));
}

std::array<AffineField, 6> euclidean_basis_r3()
{
    return {translation_r3(0), translation_r3(1), translation_r3(2),
            rotation_r3(0),    rotation_r3(1),    rotation_r3(2)};
}

AffineField torus_x()
{
    Matrix a = Matrix::Zero(4, 4);
    a(0, 1) = -1.0;  // x' = -y
    a(1, 0) = 1.0;   // y' = x
    a(2, 3) = -1.0;  // z' = -w
    a(3, 2) = 1.0;   // w' = z
    return AffineField(a, Vector::Zero(4));
}

AffineField torus_y()
{
    Matrix a = Matrix::Zero(4, 4);
    a(0, 2) = 1.0;   // x' = z
    a(1, 3) = 1.0;   // y' = w
    a(2, 0) = -1.0;  // z' = -x
    a(3, 1) = -1.0;  // w' = -y
    return AffineField(a, Vector::Zero(4));
}

AffineField hopf() { return torus_x(); }

AffineField s2xr_rotation()
{
    Matrix a = Matrix::Zero(4, 4);
    a(0, 1) = 1.0;   // x' = y
    a(1, 0) = -1.0;  // y' = -x
    return AffineField(a, Vector::Zero(4));
}

} // namespace catalog

} // namespace orbitfol
