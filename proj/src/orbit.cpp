#include "orbitfol/orbit.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "orbitfol/errors.hpp"
#include "orbitfol/numeric.hpp"

namespace orbitfol {

int orbit_dimension(const FieldFamily& family, const Vector& p, double tol)
{
    return evaluation_rank(family.closure(), p, tol);
}

int generic_rank(const LieAlgebraBasis& algebra, std::uint64_t seed, int samples, double radius, double tol)
{
    Rng rng(seed);
    int best = 0;
    for (int k = 0; k < samples; ++k) {
        const Vector p = radius * rng.normal_vector(algebra.dim);
        best = std::max(best, evaluation_rank(algebra, p, tol));
    }
    return best;
}

Box Box::cube(int dim, double lo, double hi) { return Box{Vector::Constant(dim, lo), Vector::Constant(dim, hi)}; }

std::size_t StratificationSummary::total() const
{
    std::size_t sum = 0;
    for (auto c : counts)
        sum += c;
    return sum;
}

StratificationSummary dimension_stratification(const FieldFamily& family, const Box& box, int resolution, double tol)
{
    if (resolution < 2)
        throw std::invalid_argument("stratification resolution must be at least 2");
    const int n = family.dim();
    if (box.dim() != n || box.hi.size() != n)
        throw DimensionError("box dimension does not match family");

    const LieAlgebraBasis& algebra = family.closure();
    StratificationSummary summary;
    summary.box = box;
    summary.resolution = resolution;
    summary.counts.assign(static_cast<std::size_t>(n + 1), 0);
    summary.representatives.assign(static_cast<std::size_t>(n + 1), std::nullopt);

    // The unit lattice is mapped onto the box axis by axis.
    const auto unit = SamplingGrid{0.0, 1.0, resolution}.nodes(n);
    for (const Vector& u : unit) {
        Vector p(n);
        for (int i = 0; i < n; ++i)
            p(i) = u(i) == 1.0 ? box.hi(i) : box.lo(i) + (box.hi(i) - box.lo(i)) * u(i);
        const auto d = static_cast<std::size_t>(evaluation_rank(algebra, p, tol));
        ++summary.counts[d];
        if (!summary.representatives[d])
            summary.representatives[d] = p;
    }
    return summary;
}

PointCloud sample_orbit(const FieldFamily& family, const Vector& p0, int steps, double t_scale, std::uint64_t seed)
{
    if (steps < 1)
        throw std::invalid_argument("orbit sampling needs at least one step");
    if (p0.size() != family.dim())
        throw DimensionError("start point dimension does not match family");

    PointCloud cloud;
    cloud.dim = family.dim();
    cloud.generators = family.members();
    cloud.start = p0;
    cloud.points.reserve(static_cast<std::size_t>(steps) + 1);
    cloud.points.push_back(p0);

    Rng rng(seed);
    for (int k = 0; k < steps; ++k) {
        const AffineField& f = family.members()[rng.index(family.size())];
        const double t = rng.uniform(-t_scale, t_scale);
        cloud.points.push_back(flow_affine(f, cloud.points.back(), t));
    }
    return cloud;
}

void attach_invariant(PointCloud& cloud, const Expression& invariant, const std::string& text)
{
    if (invariant.dim() != cloud.dim)
        throw DimensionError("invariant dimension does not match point cloud");
    InvariantColumn column{text, {}};
    column.values.reserve(cloud.points.size());
    for (const auto& p : cloud.points)
        column.values.push_back(invariant.evaluate(p));
    cloud.invariants.push_back(std::move(column));
}

Expression lie_derivative(const AffineField& f, const Expression& invariant)
{
    if (invariant.dim() != f.dim())
        throw DimensionError("invariant dimension does not match field");
    const ExprField xi = to_expr_field(f);
    Expression result = Expression::constant(0.0, f.dim());
    for (int i = 0; i < f.dim(); ++i)
        result = result + xi.component(i) * invariant.differentiate(i);
    return result;
}

ConservationReport conserved_check(const AffineField& f, const Expression& invariant, const Trajectory& trajectory,
                                   double tol, const std::optional<SamplingGrid>& grid)
{
    if (invariant.dim() != f.dim() || trajectory.dim() != f.dim())
        throw DimensionError("field, invariant and trajectory dimensions differ");

    ConservationReport report;
    const double reference = invariant.evaluate(trajectory.start);
    report.worst_point = trajectory.start;
    for (const auto& p : trajectory.points) {
        const double drift = std::abs(invariant.evaluate(p) - reference);
        if (drift > report.max_drift) {
            report.max_drift = drift;
            report.worst_point = p;
        }
    }
    report.pass = report.max_drift <= tol;

    report.derivative = lie_derivative(f, invariant);
    const auto nodes = (grid ? *grid : SamplingGrid{}).nodes(f.dim());
    for (const auto& p : nodes) {
        const double value = std::abs(report.derivative.evaluate(p));
        if (value > report.derivative_max) {
            report.derivative_max = value;
            report.derivative_witness = p;
        }
    }
    report.derivative_vanishes = report.derivative_max <= tol;
    return report;
}

namespace {

std::string coordinate_label(int index, int dim)
{
    return dim <= 4 ? std::string(1, "xyzw"[index]) : "x" + std::to_string(index + 1);
}

} // namespace

void write_cloud_csv(std::ostream& out, const PointCloud& cloud)
{
    for (int i = 0; i < cloud.dim; ++i)
        out << (i ? "," : "") << 'x' << (i + 1);
    for (const auto& column : cloud.invariants)
        out << ',' << column.expression;
    out << '\n';
    for (std::size_t k = 0; k < cloud.points.size(); ++k) {
        for (int i = 0; i < cloud.dim; ++i)
            out << (i ? "," : "") << format_double(cloud.points[k](i));
        for (const auto& column : cloud.invariants)
            out << ',' << format_double(column.values[k]);
        out << '\n';
    }
}

void write_cloud_ply(std::ostream& out, const PointCloud& cloud)
{
    out << "ply\nformat ascii 1.0\n";
    for (std::size_t k = 0; k < cloud.invariants.size(); ++k)
        out << "comment inv" << (k + 1) << " = " << cloud.invariants[k].expression << '\n';
    out << "element vertex " << cloud.points.size() << '\n';
    for (int i = 0; i < cloud.dim; ++i)
        out << "property float " << coordinate_label(i, cloud.dim) << '\n';
    for (std::size_t k = 0; k < cloud.invariants.size(); ++k)
        out << "property float inv" << (k + 1) << '\n';
    out << "end_header\n";
    for (std::size_t k = 0; k < cloud.points.size(); ++k) {
        for (int i = 0; i < cloud.dim; ++i)
            out << (i ? " " : "") << format_float(static_cast<float>(cloud.points[k](i)));
        for (const auto& column : cloud.invariants)
            out << ' ' << format_float(static_cast<float>(column.values[k]));
        out << '\n';
    }
}

} // namespace orbitfol
