#pragma once

#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "orbitfol/fields.hpp"

namespace orbitfol {

inline constexpr double kDefaultStep = 1e-3;

/// exp(M) by scaling and squaring: M is scaled by 2^-k until its 1-norm is at
/// most 0.5, the Taylor series is summed through the 18th power, and the result
/// is squared k times.
Matrix expm(const Matrix& m);

/// Exact time-t flow of x' = A x + b: the top block of exp(t [[A, b], [0, 0]]) (p0, 1).
Vector flow_affine(const AffineField& f, const Vector& p0, double t);

/// Classical fourth-order Runge-Kutta with ceil(|t| / step) equal steps.
/// Throws std::invalid_argument when step <= 0.
Vector flow_numeric(const ExprField& f, const Vector& p0, double t, double step = kDefaultStep);
Vector flow_numeric(const AffineField& f, const Vector& p0, double t, double step = kDefaultStep);

enum class Integrator { Exact, Rk4 };

/// Uniformly sampled integral curve. The curve passes through `start` at
/// times.front(); points[k] is the state at times[k].
struct Trajectory {
    AnyField field;
    Vector start;
    std::vector<double> times;
    std::vector<Vector> points;
    Integrator integrator = Integrator::Exact;
    double step = 0.0;  // Rk4 only

    int dim() const noexcept { return static_cast<int>(start.size()); }
};

/// Samples `samples` >= 2 uniformly spaced times in [t_min, t_max] (endpoints
/// included), starting from p0 at t_min. Affine fields, and expression fields
/// detected as affine, are flowed exactly; anything else uses RK4 with `step`.
Trajectory trajectory(const AnyField& f, const Vector& p0, double t_min, double t_max, int samples,
                      double step = kDefaultStep);

struct IsometryReport {
    bool pass = true;
    double max_deviation = 0.0;
    std::size_t worst_pair = 0;
    double worst_time = 0.0;
};

/// Compares | |F_t(p) - F_t(q)| - |p - q| | against tol for every pair and time.
IsometryReport isometry_spotcheck(const AffineField& f, std::span<const std::pair<Vector, Vector>> pairs,
                                  std::span<const double> times, double tol = 1e-10);

/// CSV with header `t,x1,...,xn`, one row per sample, shortest round-trip numbers.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

} // namespace orbitfol
