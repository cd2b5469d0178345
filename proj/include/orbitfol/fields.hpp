#pragma once

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "orbitfol/expr.hpp"
#include "orbitfol/types.hpp"

namespace orbitfol {

/// Vector field x -> A x + b on R^n, stored exactly as given.
///
/// For the Euclidean metric such a field is Killing iff A is skew-symmetric.
class AffineField {
public:
    /// Throws DimensionError unless A is square and matches b.
    AffineField(Matrix linear, Vector offset);

    static AffineField zero(int dim);

    int dim() const noexcept { return static_cast<int>(offset_.size()); }
    const Matrix& linear() const noexcept { return linear_; }
    const Vector& offset() const noexcept { return offset_; }

    Vector operator()(const Vector& p) const;

    bool is_zero() const;
    /// Largest absolute entry of A and b.
    double max_coefficient() const;

    friend AffineField operator+(const AffineField& f, const AffineField& g);
    friend AffineField operator-(const AffineField& f, const AffineField& g);
    friend AffineField operator*(double c, const AffineField& f);
    friend bool operator==(const AffineField& f, const AffineField& g);

private:
    Matrix linear_;
    Vector offset_;
};

inline AffineField make_affine(Matrix linear, Vector offset) { return AffineField(std::move(linear), std::move(offset)); }

/// Vector field whose components are expressions in the ambient coordinates.
class ExprField {
public:
    /// Throws DimensionError unless there is one component per dimension.
    explicit ExprField(std::vector<Expression> components);

    /// Parses one expression per component; dim = number of components.
    static ExprField parse(const std::vector<std::string>& components);

    int dim() const noexcept { return static_cast<int>(components_.size()); }
    const std::vector<Expression>& components() const noexcept { return components_; }
    const Expression& component(int i) const { return components_.at(static_cast<std::size_t>(i)); }

    Vector operator()(const Vector& p) const;

private:
    std::vector<Expression> components_;
};

/// Affine field rewritten as component expressions (only nonzero terms kept).
ExprField to_expr_field(const AffineField& f);

using AnyField = std::variant<AffineField, ExprField>;

int field_dim(const AnyField& f);
Vector eval_field(const AffineField& f, const Vector& p);
Vector eval_field(const ExprField& f, const Vector& p);
Vector eval_field(const AnyField& f, const Vector& p);

/// Cartesian lattice with `points_per_axis` nodes per coordinate on [lo, hi].
struct SamplingGrid {
    double lo = -2.0;
    double hi = 2.0;
    int points_per_axis = 5;

    std::vector<Vector> nodes(int dim) const;
};

enum class KillingMode { ExactAffine, SymbolicGrid };

struct KillingWitness {
    int i = 0;  // 0-based coordinate indices, i <= j
    int j = 0;
    Vector point;  // empty in exact-affine mode
    double residual = 0.0;
};

struct KillingReport {
    bool pass = true;
    KillingMode mode = KillingMode::ExactAffine;
    double max_residual = 0.0;
    /// One entry per violated condition (i, j), at its worst sample point.
    std::vector<KillingWitness> witnesses;
};

/// Exact test A + A^T = 0 on the stored entries. A diagonal entry is reported
/// with residual |A_ii| (the condition d xi_i / d x_i = 0).
KillingReport killing_check(const AffineField& f);

/// Builds the conditions d xi_i/d x_j + d xi_j/d x_i (i < j) and d xi_i/d x_i
/// symbolically and evaluates them on the grid; passes iff every residual <= tol.
/// Without a grid the default 5^n lattice on [-2, 2]^n is used, which requires
/// n <= 4 (DimensionError otherwise).
KillingReport killing_check(const ExprField& f, const std::optional<SamplingGrid>& grid = std::nullopt,
                            double tol = 1e-9);

KillingReport killing_check(const AnyField& f, double tol = 1e-9);

/// Returns the exact affine form of `f` when every second derivative of every
/// component vanishes on the grid (|value| <= 1e-12); A is read from the first
/// derivatives and b from the value at the origin.
std::optional<AffineField> detect_affine(const ExprField& f, const std::optional<SamplingGrid>& grid = std::nullopt);

/// Pushforward of `f` under p -> R p + t: A' = R A R^T, b' = R b - R A R^T t.
/// The symmetric and skew parts of A are transported separately so that an
/// exactly skew A stays exactly skew. Throws DimensionError if R^T R differs
/// from I by more than 1e-12.
AffineField conjugate_field(const AffineField& f, const Matrix& rotation, const Vector& translation);

/// Built-in Killing fields of R^3 with the sign conventions
///   X1 = d/dx, X2 = d/dy, X3 = d/dz,
///   X4 = -y d/dz + z d/dy, X5 = -z d/dx + x d/dz, X6 = -x d/dy + y d/dx,
/// so X4..X6 generate rotations about the x, y and z axes. Note X6 turns
/// clockwise when viewed from +z.
namespace catalog {

AffineField translation_r3(int axis);
AffineField rotation_r3(int axis);
/// {X1, ..., X6}.
std::array<AffineField, 6> euclidean_basis_r3();

/// x d/dy - y d/dx + z d/dw - w d/dz on R^4 (the Hopf field).
AffineField torus_x();
/// z d/dx - x d/dz + w d/dy - y d/dw on R^4.
AffineField torus_y();
/// Same flow as torus_x: -x2 d/dx1 + x1 d/dx2 - x4 d/dx3 + x3 d/dx4.
AffineField hopf();
/// y d/dx - x d/dy on R^4, tangent to S^2 x R.
AffineField s2xr_rotation();

} // namespace catalog

} // namespace orbitfol
