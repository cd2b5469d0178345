#include "orbitfol/classify.hpp"

#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "orbitfol/errors.hpp"
#include "orbitfol/numeric.hpp"

namespace orbitfol {

namespace {

struct SvdSolve {
    int rank = 0;
    Vector solution;
    Matrix null_space;
};

/// Minimum-norm least-squares solution of m x = rhs with singular values below
/// tol * sigma_max discarded, plus an orthonormal basis of the numerical kernel.
SvdSolve svd_solve(const Matrix& m, const Vector& rhs, double tol)
{
    const Eigen::Index n = m.cols();
    SvdSolve out;
    out.solution = Vector::Zero(n);
    if (m.size() == 0 || m.cwiseAbs().maxCoeff() == 0.0) {
        out.null_space = Matrix::Identity(n, n);
        return out;
    }
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeFullV);
    const Vector& sigma = svd.singularValues();
    for (Eigen::Index i = 0; i < sigma.size(); ++i)
        if (sigma(i) > tol * sigma(0))
            ++out.rank;
    for (int i = 0; i < out.rank; ++i)
        out.solution += svd.matrixV().col(i) * (svd.matrixU().col(i).dot(rhs) / sigma(i));
    out.null_space = svd.matrixV().rightCols(n - out.rank);
    return out;
}

double largest_coefficient(const LieAlgebraBasis& algebra)
{
    double m = 0.0;
    for (const auto& f : algebra.basis)
        m = std::max(m, f.max_coefficient());
    return m;
}

Matrix stacked_linear(const LieAlgebraBasis& algebra)
{
    const int n = algebra.dim;
    Matrix s(n * static_cast<Eigen::Index>(algebra.size()), n);
    for (std::size_t k = 0; k < algebra.size(); ++k)
        s.middleRows(n * static_cast<Eigen::Index>(k), n) = algebra.basis[k].linear();
    return s;
}

bool has_rotation(const LieAlgebraBasis& algebra)
{
    for (const auto& f : algebra.basis)
        if (f.linear().cwiseAbs().maxCoeff() > 0.0)
            return true;
    return false;
}

} // namespace

double AffineSubspace::distance(const Vector& p) const
{
    if (kind == SubspaceKind::Empty)
        return std::numeric_limits<double>::infinity();
    const Vector d = p - anchor;
    return (d - directions * (directions.transpose() * d)).norm();
}

std::string_view to_string(SubspaceKind kind)
{
    switch (kind) {
    case SubspaceKind::Empty: return "empty";
    case SubspaceKind::Point: return "point";
    case SubspaceKind::Line: return "line";
    case SubspaceKind::Plane: return "plane";
    case SubspaceKind::WholeSpace: return "whole-space";
    }
    return "unknown";
}

std::string_view to_string(FoliationType type)
{
    switch (type) {
    case FoliationType::ParallelLines: return "ParallelLines";
    case FoliationType::ConcentricCircles: return "ConcentricCircles";
    case FoliationType::Helices: return "Helices";
    case FoliationType::ParallelPlanes: return "ParallelPlanes";
    case FoliationType::ConcentricSpheres: return "ConcentricSpheres";
    case FoliationType::ConcentricCylinders: return "ConcentricCylinders";
    case FoliationType::WholeSpace: return "WholeSpace";
    }
    return "unknown";
}

AffineSubspace fixed_set(const LieAlgebraBasis& algebra, double tol)
{
    const int n = algebra.dim;
    const Matrix s = stacked_linear(algebra);
    Vector rhs(s.rows());
    for (std::size_t k = 0; k < algebra.size(); ++k)
        rhs.segment(n * static_cast<Eigen::Index>(k), n) = -algebra.basis[k].offset();

    const SvdSolve solved = svd_solve(s, rhs, tol);
    AffineSubspace out;
    out.anchor = solved.solution;
    const double residual = rhs.size() ? (s * solved.solution - rhs).cwiseAbs().maxCoeff() : 0.0;
    if (residual > tol * (1.0 + largest_coefficient(algebra))) {
        out.kind = SubspaceKind::Empty;
        out.directions = Matrix(n, 0);
        return out;
    }
    out.directions = solved.null_space;
    switch (n - solved.rank) {
    case 0: out.kind = SubspaceKind::Point; break;
    case 1: out.kind = SubspaceKind::Line; break;
    case 2: out.kind = SubspaceKind::Plane; break;
    default: out.kind = SubspaceKind::WholeSpace; break;
    }
    return out;
}

Vector canonical_direction(const Vector& v)
{
    Vector u = v.normalized();
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        if (std::abs(u(i)) > 1e-12) {
            if (u(i) < 0.0)
                u = -u;
            break;
        }
    }
    for (Eigen::Index i = 0; i < u.size(); ++i)
        if (u(i) == 0.0)
            u(i) = 0.0;  // drop negative zeros
    return u;
}

FoliationClass classify_r3(const FieldFamily& family, const ClassifyOptions& options)
{
    if (family.dim() != 3)
        throw DimensionError("classification is defined on R^3 only");
    bool all_zero = true;
    for (const auto& f : family.members())
        all_zero = all_zero && f.is_zero();
    if (all_zero)
        throw DegenerateFamily("every member of the family is the zero field");

    const LieAlgebraBasis g = closure(family, options.tol);
    const AffineSubspace fix = fixed_set(g, options.tol);

    // Generic rank, remembering the first sample that attains it.
    Rng rng(options.seed);
    int r = 0;
    Vector generic_point = Vector::Zero(3);
    for (int k = 0; k < options.samples; ++k) {
        const Vector p = options.radius * rng.normal_vector(3);
        const int rank = evaluation_rank(g, p, options.tol);
        if (rank > r) {
            r = rank;
            generic_point = p;
        }
    }

    auto unclassifiable = [&] {
        return UnclassifiableConfiguration("generic rank " + std::to_string(r) + " with " +
                                           std::string(to_string(fix.kind)) + " fixed set fits no foliation type");
    };

    FoliationClass out;
    if (r == 3) {
        out.type = FoliationType::WholeSpace;
        return out;
    }

    if (r == 2) {
        if (fix.kind == SubspaceKind::Point) {
            out.type = FoliationType::ConcentricSpheres;
            out.center = fix.anchor;
            return out;
        }
        if (fix.kind != SubspaceKind::Empty)
            throw unclassifiable();

        if (has_rotation(g)) {
            const Matrix s = stacked_linear(g);
            const SvdSolve kernel = svd_solve(s, Vector::Zero(s.rows()), options.tol);
            if (kernel.null_space.cols() != 1)
                throw unclassifiable();
            const Vector u = canonical_direction(kernel.null_space.col(0));
            const Matrix projector = Matrix::Identity(3, 3) - u * u.transpose();

            // Rank-one locus: P(A_k p + b_k) = 0 for every k.
            Matrix m(s.rows(), 3);
            Vector rhs(s.rows());
            for (std::size_t k = 0; k < g.size(); ++k) {
                const auto row = 3 * static_cast<Eigen::Index>(k);
                m.middleRows(row, 3) = projector * g.basis[k].linear();
                rhs.segment(row, 3) = -(projector * g.basis[k].offset());
            }
            const SvdSolve locus = svd_solve(m, rhs, options.tol);
            const double residual = (m * locus.solution - rhs).cwiseAbs().maxCoeff();
            if (residual <= options.tol * (1.0 + largest_coefficient(g))) {
                if (locus.rank != 2)
                    throw unclassifiable();
                out.type = FoliationType::ConcentricCylinders;
                out.axis_point = locus.solution;
                out.axis_dir = u;
                return out;
            }
        }

        Matrix values(3, static_cast<Eigen::Index>(g.size()));
        for (std::size_t k = 0; k < g.size(); ++k)
            values.col(static_cast<Eigen::Index>(k)) = g.basis[k](generic_point);
        Eigen::JacobiSVD<Matrix> svd(values, Eigen::ComputeFullU);
        out.type = FoliationType::ParallelPlanes;
        out.normal = canonical_direction(svd.matrixU().col(2));
        return out;
    }

    if (r == 1) {
        if (fix.kind == SubspaceKind::Line) {
            out.type = FoliationType::ConcentricCircles;
            out.axis_point = fix.anchor;
            out.axis_dir = canonical_direction(fix.directions.col(0));
            return out;
        }
        if (fix.kind != SubspaceKind::Empty)
            throw unclassifiable();

        // Rank one everywhere and no fixed points: a single field up to scale.
        const AffineField* f = nullptr;
        for (const auto& member : g.basis)
            if (!f || member.max_coefficient() > f->max_coefficient())
                f = &member;
        if (!has_rotation(g)) {
            out.type = FoliationType::ParallelLines;
            out.direction = canonical_direction(f->offset());
            return out;
        }
        if (g.size() != 1)
            throw unclassifiable();

        const Matrix& a = f->linear();
        const SvdSolve kernel = svd_solve(a, Vector::Zero(3), options.tol);
        if (kernel.null_space.cols() != 1)
            throw unclassifiable();
        const Vector u = canonical_direction(kernel.null_space.col(0));
        const Vector b = f->offset();
        const Vector transverse = b - u * u.dot(b);
        const SvdSolve axis = svd_solve(a, -transverse, options.tol);
        const double omega = a.norm() / std::sqrt(2.0);

        out.type = FoliationType::Helices;
        out.axis_point = axis.solution;
        out.axis_dir = u;
        out.pitch = u.dot(b) / omega;
        return out;
    }

    throw unclassifiable();
}

namespace {

nlohmann::ordered_json number(double v)
{
    if (v == 0.0)
        return 0;
    if (std::abs(v) < 1e15 && std::floor(v) == v)
        return static_cast<long long>(v);
    return v;
}

nlohmann::ordered_json vector_json(const Vector& v)
{
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        a.push_back(number(v(i)));
    return a;
}

} // namespace

std::string to_json(const FoliationClass& c)
{
    nlohmann::ordered_json j;
    j["type"] = std::string(to_string(c.type));
    if (c.center)
        j["center"] = vector_json(*c.center);
    if (c.axis_point)
        j["axis_point"] = vector_json(*c.axis_point);
    if (c.axis_dir)
        j["axis_dir"] = vector_json(*c.axis_dir);
    if (c.normal)
        j["normal"] = vector_json(*c.normal);
    if (c.direction)
        j["direction"] = vector_json(*c.direction);
    if (c.pitch)
        j["pitch"] = number(*c.pitch);
    return j.dump();
}

} // namespace orbitfol
