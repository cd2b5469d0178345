#include "orbitfol/flow.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "orbitfol/errors.hpp"
#include "orbitfol/numeric.hpp"

namespace orbitfol {

Matrix expm(const Matrix& m)
{
    constexpr int kTaylorTerms = 18;
    const Eigen::Index n = m.rows();

    const double norm = m.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm > 0.5)
        squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    const Matrix scaled = std::ldexp(1.0, -squarings) * m;

    // Horner form of sum_{k<=18} scaled^k / k!.
    Matrix result = Matrix::Identity(n, n);
    for (int k = kTaylorTerms; k >= 1; --k)
        result = (Matrix::Identity(n, n) + scaled * result / static_cast<double>(k)).eval();

    for (int s = 0; s < squarings; ++s)
        result = (result * result).eval();
    return result;
}

Vector flow_affine(const AffineField& f, const Vector& p0, double t)
{
    const int n = f.dim();
    if (p0.size() != n)
        throw DimensionError("start point dimension does not match field");
    Matrix generator = Matrix::Zero(n + 1, n + 1);
    generator.topLeftCorner(n, n) = t * f.linear();
    generator.topRightCorner(n, 1) = t * f.offset();
    const Matrix e = expm(generator);
    return e.topLeftCorner(n, n) * p0 + e.topRightCorner(n, 1);
}

namespace {

template <typename Field>
Vector rk4(const Field& f, const Vector& p0, double t, double step)
{
    if (!(step > 0.0))
        throw std::invalid_argument("integration step must be positive");
    if (p0.size() != f.dim())
        throw DimensionError("start point dimension does not match field");
    const auto steps = static_cast<long>(std::ceil(std::abs(t) / step));
    if (steps == 0)
        return p0;
    const double h = t / static_cast<double>(steps);
    Vector p = p0;
    for (long k = 0; k < steps; ++k) {
        const Vector k1 = f(p);
        const Vector k2 = f(p + 0.5 * h * k1);
        const Vector k3 = f(p + 0.5 * h * k2);
        const Vector k4 = f(p + h * k3);
        p += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return p;
}

} // namespace

Vector flow_numeric(const ExprField& f, const Vector& p0, double t, double step) { return rk4(f, p0, t, step); }
Vector flow_numeric(const AffineField& f, const Vector& p0, double t, double step) { return rk4(f, p0, t, step); }

Trajectory trajectory(const AnyField& f, const Vector& p0, double t_min, double t_max, int samples, double step)
{
    if (samples < 2)
        throw std::invalid_argument("a trajectory needs at least two samples");
    if (!(t_min <= t_max))
        throw std::invalid_argument("t_min must not exceed t_max");
    if (p0.size() != field_dim(f))
        throw DimensionError("start point dimension does not match field");

    Trajectory traj{f, p0, {}, {}, Integrator::Exact, 0.0};
    traj.times.reserve(static_cast<std::size_t>(samples));
    traj.points.reserve(static_cast<std::size_t>(samples));
    for (int k = 0; k < samples; ++k)
        traj.times.push_back(t_min + (t_max - t_min) * k / static_cast<double>(samples - 1));
    traj.times.back() = t_max;

    std::optional<AffineField> affine;
    if (const auto* a = std::get_if<AffineField>(&f))
        affine = *a;
    else if (std::get<ExprField>(f).dim() <= 4)
        affine = detect_affine(std::get<ExprField>(f));

    if (affine) {
        traj.integrator = Integrator::Exact;
        for (double t : traj.times)
            traj.points.push_back(flow_affine(*affine, p0, t - t_min));
        traj.points.front() = p0;
    } else {
        traj.integrator = Integrator::Rk4;
        traj.step = step;
        const auto& field = std::get<ExprField>(f);
        traj.points.push_back(p0);
        for (std::size_t k = 1; k < traj.times.size(); ++k)
            traj.points.push_back(flow_numeric(field, traj.points.back(), traj.times[k] - traj.times[k - 1], step));
    }
    return traj;
}

IsometryReport isometry_spotcheck(const AffineField& f, std::span<const std::pair<Vector, Vector>> pairs,
                                  std::span<const double> times, double tol)
{
    IsometryReport report;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto& [p, q] = pairs[k];
        const double before = (p - q).norm();
        for (double t : times) {
            const double after = (flow_affine(f, p, t) - flow_affine(f, q, t)).norm();
            const double deviation = std::abs(after - before);
            if (deviation > report.max_deviation) {
                report.max_deviation = deviation;
                report.worst_pair = k;
                report.worst_time = t;
            }
        }
    }
    report.pass = report.max_deviation <= tol;
    return report;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory)
{
    out << 't';
    for (int i = 0; i < trajectory.dim(); ++i)
        out << ",x" << (i + 1);
    out << '\n';
    for (std::size_t k = 0; k < trajectory.times.size(); ++k) {
        out << format_double(trajectory.times[k]);
        for (int i = 0; i < trajectory.dim(); ++i)
            out << ',' << format_double(trajectory.points[k](i));
        out << '\n';
    }
}

} // namespace orbitfol
