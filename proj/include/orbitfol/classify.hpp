#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "orbitfol/lie.hpp"

namespace orbitfol {

enum class SubspaceKind { Empty, Point, Line, Plane, WholeSpace };

/// Affine subspace anchor + span(directions); directions are orthonormal columns.
struct AffineSubspace {
    SubspaceKind kind = SubspaceKind::Empty;
    Vector anchor;
    Matrix directions;

    /// Distance from p to the subspace (infinite when empty).
    double distance(const Vector& p) const;
};

std::string_view to_string(SubspaceKind kind);

/// Common zero set of the basis fields: least-squares solution of the stacked
/// system A_k p = -b_k. Empty when the residual exceeds tol * (1 + largest
/// coefficient); otherwise the kind follows from the rank of the stacked matrix
/// and the anchor is the minimum-norm solution.
AffineSubspace fixed_set(const LieAlgebraBasis& algebra, double tol = kDefaultRankTol);

enum class FoliationType {
    ParallelLines,
    ConcentricCircles,
    Helices,
    ParallelPlanes,
    ConcentricSpheres,
    ConcentricCylinders,
    WholeSpace,
};

std::string_view to_string(FoliationType type);

/// Foliation type of a Killing family on R^3 with the parameters of its type.
/// Unit vectors follow the sign convention of canonical_direction.
struct FoliationClass {
    FoliationType type = FoliationType::WholeSpace;
    std::optional<Vector> direction;   // ParallelLines
    std::optional<Vector> axis_point;  // ConcentricCircles, Helices, ConcentricCylinders
    std::optional<Vector> axis_dir;    // ConcentricCircles, Helices, ConcentricCylinders
    std::optional<double> pitch;       // Helices: axial advance per radian
    std::optional<Vector> normal;      // ParallelPlanes
    std::optional<Vector> center;      // ConcentricSpheres
};

struct ClassifyOptions {
    double tol = kDefaultRankTol;
    std::uint64_t seed = 0;
    int samples = 64;
    double radius = 3.0;
};

/// Normalizes v and flips it so its first non-negligible coordinate is positive.
Vector canonical_direction(const Vector& v);

/// Throws DimensionError unless dim = 3, DegenerateFamily if every member is
/// zero, and UnclassifiableConfiguration when the computed invariants fit none
/// of the seven types.
FoliationClass classify_r3(const FieldFamily& family, const ClassifyOptions& options = {});

/// {"type": ..., <parameter keys of the type>}; integral values print without a fraction.
std::string to_json(const FoliationClass& c);

} // namespace orbitfol
