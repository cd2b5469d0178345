#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "orbitfol/flow.hpp"
#include "orbitfol/lie.hpp"

namespace orbitfol {

/// Orbit dimension at p: evaluation rank of the family's (cached) closure.
int orbit_dimension(const FieldFamily& family, const Vector& p, double tol = kDefaultRankTol);

/// Largest evaluation rank over `samples` seeded points drawn from a standard
/// normal distribution and multiplied by `radius`.
int generic_rank(const LieAlgebraBasis& algebra, std::uint64_t seed = 0, int samples = 64, double radius = 3.0,
                 double tol = kDefaultRankTol);

/// Axis-aligned box [lo_i, hi_i].
struct Box {
    Vector lo;
    Vector hi;

    static Box cube(int dim, double lo, double hi);
    int dim() const noexcept { return static_cast<int>(lo.size()); }
};

struct StratificationSummary {
    Box box;
    int resolution = 0;
    /// counts[d] = number of grid nodes with orbit dimension d, d = 0..n.
    std::vector<std::size_t> counts;
    /// First grid node (in lexicographic order) of each dimension, if any.
    std::vector<std::optional<Vector>> representatives;

    std::size_t total() const;
};

/// Orbit dimension at every node of a resolution^n lattice over the box.
/// Throws std::invalid_argument when resolution < 2.
StratificationSummary dimension_stratification(const FieldFamily& family, const Box& box, int resolution,
                                               double tol = kDefaultRankTol);

struct InvariantColumn {
    std::string expression;
    std::vector<double> values;
};

/// Finite sample of one orbit.
struct PointCloud {
    int dim = 0;
    std::vector<Vector> points;
    std::vector<AffineField> generators;
    Vector start;
    std::vector<InvariantColumn> invariants;
};

/// Random walk along the orbit of p0: each step flows the current point by a
/// uniformly chosen family member for a time uniform in [-t_scale, t_scale].
/// Returns steps + 1 points, starting with p0.
PointCloud sample_orbit(const FieldFamily& family, const Vector& p0, int steps, double t_scale = 0.5,
                        std::uint64_t seed = 0);

/// Evaluates `invariant` on every point and appends it as a column named by `text`.
void attach_invariant(PointCloud& cloud, const Expression& invariant, const std::string& text);

/// Directional derivative sum_i xi_i d(inv)/d x_i, built symbolically.
Expression lie_derivative(const AffineField& f, const Expression& invariant);

struct ConservationReport {
    bool pass = true;
    double max_drift = 0.0;
    Vector worst_point;
    /// Lie derivative of the invariant and whether it vanishes on the test grid.
    Expression derivative = Expression::constant(0.0, 1);
    bool derivative_vanishes = true;
    double derivative_max = 0.0;
    Vector derivative_witness;
};

/// Drift of `invariant` along the trajectory (pass iff max drift <= tol) plus
/// the analytic certificate: the Lie derivative evaluated on `grid` (default
/// 5^n lattice on [-2, 2]^n), vanishing iff every value is <= tol.
ConservationReport conserved_check(const AffineField& f, const Expression& invariant, const Trajectory& trajectory,
                                   double tol = 1e-9, const std::optional<SamplingGrid>& grid = std::nullopt);

/// Header `x1,...,xn` followed by one column per attached invariant.
void write_cloud_csv(std::ostream& out, const PointCloud& cloud);

/// ASCII PLY: `element vertex N`, float properties x,y,z[,w] (x1..xn for n > 4)
/// and inv1..invk for the invariants, whose expressions are listed in comments.
void write_cloud_ply(std::ostream& out, const PointCloud& cloud);

} // namespace orbitfol
