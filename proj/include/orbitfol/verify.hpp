#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "orbitfol/lie.hpp"

namespace orbitfol {

/// Straight line anchor + t * direction (direction normalized on use).
struct Line {
    Vector anchor;
    Vector direction;

    Vector at(double t) const { return anchor + t * direction.normalized(); }
};

struct TransversalityReport {
    bool pass = true;
    double max_cosine = 0.0;
    double worst_t = 0.0;
    std::size_t worst_field = 0;
};

/// Largest |cos| between the line direction and each nonzero closure field
/// value at line(t), t in `ts`. Throws NotOrthogonalAtAnchor if some family
/// member is not orthogonal to the line at its anchor (within tol), and
/// OpenOrbitError when the family has open orbits (generic rank = n).
TransversalityReport riemannian_transversality_check(const FieldFamily& family, const Line& line,
                                                     std::span<const double> ts, double tol = 1e-9);

struct EquidistanceReport {
    bool pass = true;
    double segment_length = 0.0;
    /// Largest change of |g p - g q| over the sampled isometries g.
    double max_transport_defect = 0.0;
    /// Smallest distance from q to the sampled orbit of p.
    double min_leaf_distance = 0.0;
};

/// Transports the segment p = line(t1), q = line(t2) by `steps` random flow
/// compositions of the family and checks that its length is preserved and that
/// q stays at distance >= |p - q| from the sampled leaf of p (both within tol).
EquidistanceReport equidistance_check(const FieldFamily& family, const Line& line, double t1, double t2,
                                      int steps = 200, std::uint64_t seed = 0, double tol = 1e-12);

/// Coefficients of f = lambda1 * (y d/dx - x d/dy) + lambda2 * d/dz on the cylinder x^2 + y^2 = 1.
struct CylinderDecomposition {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    /// Largest disagreement with the fitted combination over the samples.
    double max_residual = 0.0;
};

/// Throws DimensionError unless dim = 3, NotKillingError if f is not Killing,
/// and NotTangent (worst sample point) if f is not tangent to the cylinder at
/// one of 16 sample points or is not a constant combination there.
CylinderDecomposition cylinder_killing_decompose(const AffineField& f, double tol = 1e-9);

struct ScenarioCheck {
    std::string name;
    bool pass = true;
    double max_residual = 0.0;
    double tolerance = 0.0;
};

struct ScenarioReport {
    std::string scenario;
    std::vector<ScenarioCheck> checks;

    bool pass() const;
};

/// example1_basis, hopf_circle, s3_torus, cylinder_helix, s2xr_nongeodesic, r3_classification.
const std::vector<std::string>& scenario_names();

/// Runs a registered scenario. Throws UnknownScenario for other names.
ScenarioReport scenario_run(std::string_view name);

void print_table(std::ostream& out, std::span<const ScenarioReport> reports);
std::string to_json(std::span<const ScenarioReport> reports);

} // namespace orbitfol
