#include "orbitfol/lie.hpp"

#include <mutex>

#include "orbitfol/errors.hpp"
#include "orbitfol/numeric.hpp"

namespace orbitfol {

struct FieldFamily::Cache {
    std::once_flag once;
    std::unique_ptr<LieAlgebraBasis> closure;
};

FieldFamily::FieldFamily(std::vector<AffineField> members)
    : dim_(0), members_(std::move(members)), cache_(std::make_shared<Cache>())
{
    if (members_.empty())
        throw DimensionError("a field family needs at least one member");
    dim_ = members_.front().dim();
    for (std::size_t k = 0; k < members_.size(); ++k) {
        if (members_[k].dim() != dim_)
            throw DimensionError("family members have different dimensions");
        if (!killing_check(members_[k]).pass)
            throw NotKillingError("family member " + std::to_string(k + 1) + " is not a Killing field");
    }
}

const LieAlgebraBasis& FieldFamily::closure() const
{
    std::call_once(cache_->once, [this] {
        cache_->closure = std::make_unique<LieAlgebraBasis>(orbitfol::closure(*this));
    });
    return *cache_->closure;
}

AffineField bracket(const AffineField& f, const AffineField& g)
{
    if (f.dim() != g.dim())
        throw DimensionError("bracket of fields with different dimensions");
    const int n = f.dim();
    const Matrix& a = f.linear();
    const Matrix& b = g.linear();
    const Vector& u = f.offset();
    const Vector& v = g.offset();

    Matrix linear(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double ba = 0.0;
            double ab = 0.0;
            for (int k = 0; k < n; ++k) {
                ba += b(i, k) * a(k, j);
                ab += a(i, k) * b(k, j);
            }
            linear(i, j) = ba - ab;
        }
    }
    Vector offset(n);
    for (int i = 0; i < n; ++i) {
        double bu = 0.0;
        double av = 0.0;
        for (int k = 0; k < n; ++k) {
            bu += b(i, k) * u(k);
            av += a(i, k) * v(k);
        }
        offset(i) = bu - av;
    }
    return AffineField(std::move(linear), std::move(offset));
}

ExprField bracket(const ExprField& f, const ExprField& g)
{
    if (f.dim() != g.dim())
        throw DimensionError("bracket of fields with different dimensions");
    const int n = f.dim();
    std::vector<Expression> components;
    for (int i = 0; i < n; ++i) {
        Expression c = Expression::constant(0.0, n);
        for (int j = 0; j < n; ++j)
            c = c + f.component(j) * g.component(i).differentiate(j) - g.component(j) * f.component(i).differentiate(j);
        components.push_back(c);
    }
    return ExprField(std::move(components));
}

Vector killing_coordinates(const AffineField& f)
{
    const int n = f.dim();
    Vector coords(n * (n + 1) / 2);
    int k = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            coords(k++) = f.linear()(i, j);
    coords.tail(n) = f.offset();
    return coords;
}

AffineField from_killing_coordinates(const Vector& coords, int dim)
{
    if (coords.size() != dim * (dim + 1) / 2)
        throw DimensionError("coordinate vector has the wrong length");
    Matrix a = Matrix::Zero(dim, dim);
    int k = 0;
    for (int i = 0; i < dim; ++i) {
        for (int j = i + 1; j < dim; ++j) {
            a(i, j) = coords(k);
            a(j, i) = -coords(k);
            ++k;
        }
    }
    return AffineField(std::move(a), coords.tail(dim));
}

Matrix coordinate_matrix(const LieAlgebraBasis& algebra)
{
    const int width = algebra.dim * (algebra.dim + 1) / 2;
    Matrix m(static_cast<Eigen::Index>(algebra.size()), width);
    for (std::size_t k = 0; k < algebra.size(); ++k)
        m.row(static_cast<Eigen::Index>(k)) = killing_coordinates(algebra.basis[k]).transpose();
    return m;
}

namespace {

/// Appends f to `basis` (and its coordinates to `rows`) if it enlarges the span.
bool adjoin_if_independent(std::vector<AffineField>& basis, Matrix& rows, const AffineField& f, double tol)
{
    const Vector c = killing_coordinates(f);
    Matrix candidate(rows.rows() + 1, c.size());
    candidate.topRows(rows.rows()) = rows;
    candidate.bottomRows(1) = c.transpose();
    if (numerical_rank(candidate, tol) <= static_cast<int>(rows.rows()))
        return false;
    rows = std::move(candidate);
    basis.push_back(f);
    return true;
}

} // namespace

LieAlgebraBasis closure(const FieldFamily& family, double tol)
{
    const int n = family.dim();
    const std::size_t cap = static_cast<std::size_t>(n * (n + 1) / 2);

    LieAlgebraBasis result;
    result.dim = n;
    Matrix rows(0, static_cast<Eigen::Index>(cap));
    for (const auto& f : family.members()) {
        if (result.basis.size() == cap)
            break;
        adjoin_if_independent(result.basis, rows, f, tol);
    }

    while (result.basis.size() < cap) {
        const std::vector<AffineField> snapshot = result.basis;
        bool added = false;
        for (std::size_t i = 0; i < snapshot.size() && result.basis.size() < cap; ++i)
            for (std::size_t j = i + 1; j < snapshot.size() && result.basis.size() < cap; ++j)
                added |= adjoin_if_independent(result.basis, rows, bracket(snapshot[i], snapshot[j]), tol);
        if (!added)
            break;
        ++result.generation_depth;
    }
    return result;
}

int evaluation_rank(const LieAlgebraBasis& algebra, const Vector& p, double tol)
{
    if (p.size() != algebra.dim)
        throw DimensionError("point dimension does not match the algebra");
    Matrix values(algebra.dim, static_cast<Eigen::Index>(algebra.size()));
    for (std::size_t k = 0; k < algebra.size(); ++k)
        values.col(static_cast<Eigen::Index>(k)) = algebra.basis[k](p);
    return numerical_rank(values, tol);
}

double span_residual(const LieAlgebraBasis& algebra, const AffineField& f)
{
    const Vector c = killing_coordinates(f);
    if (algebra.size() == 0)
        return c.norm() / std::max(1.0, c.norm());
    const Matrix basis_t = coordinate_matrix(algebra).transpose();
    const Vector coeffs = basis_t.completeOrthogonalDecomposition().solve(c);
    return (basis_t * coeffs - c).norm() / std::max(1.0, c.norm());
}

} // namespace orbitfol
