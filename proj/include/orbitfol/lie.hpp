#pragma once

#include <memory>
#include <span>
#include <vector>

#include "orbitfol/fields.hpp"

namespace orbitfol {

inline constexpr double kDefaultRankTol = 1e-9;

/// Finite-dimensional Lie algebra of affine Killing fields.
struct LieAlgebraBasis {
    int dim = 0;
    /// Linearly independent fields; members of the generating family come first
    /// (in their given order), then brackets in the order they were adjoined.
    std::vector<AffineField> basis;
    /// Number of bracket rounds that enlarged the span.
    int generation_depth = 0;

    std::size_t size() const noexcept { return basis.size(); }
};

/// Nonempty list of Killing fields of one dimension.
///
/// The bracket closure (at the default rank tolerance) is computed on first
/// use and shared between copies; it is immutable afterwards, so a family may
/// be queried from several threads.
class FieldFamily {
public:
    /// Throws DimensionError on an empty list or mixed dimensions and
    /// NotKillingError if a member fails killing_check.
    explicit FieldFamily(std::vector<AffineField> members);

    int dim() const noexcept { return dim_; }
    const std::vector<AffineField>& members() const noexcept { return members_; }
    std::size_t size() const noexcept { return members_.size(); }

    const LieAlgebraBasis& closure() const;

private:
    struct Cache;

    int dim_;
    std::vector<AffineField> members_;
    std::shared_ptr<Cache> cache_;
};

/// [f, g]^i = f^j d_j g^i - g^j d_j f^i; for f = (A, a), g = (B, b) this is
/// (BA - AB, Ba - Ab). Entries are accumulated in a fixed order, so the
/// bracket of two exactly skew fields is exactly skew.
AffineField bracket(const AffineField& f, const AffineField& g);

/// The same bracket computed by symbolic differentiation of the components.
ExprField bracket(const ExprField& f, const ExprField& g);

/// Coordinates of a Killing field: the n(n-1)/2 strict upper-triangle entries
/// of A (row-major) followed by b.
Vector killing_coordinates(const AffineField& f);

/// Inverse of killing_coordinates (A is rebuilt exactly skew).
AffineField from_killing_coordinates(const Vector& coords, int dim);

/// Bracket closure: adjoins brackets of all pairs in breadth-first rounds until
/// a round adds nothing or the size reaches n(n+1)/2. Independence is decided by
/// numerical rank with threshold `tol` relative to the largest singular value.
LieAlgebraBasis closure(const FieldFamily& family, double tol = kDefaultRankTol);

/// Rank of the n x size matrix of basis fields evaluated at p.
int evaluation_rank(const LieAlgebraBasis& algebra, const Vector& p, double tol = kDefaultRankTol);

/// Matrix whose rows are the Killing coordinates of the basis.
Matrix coordinate_matrix(const LieAlgebraBasis& algebra);

/// Distance of f from span(basis) in Killing coordinates, relative to
/// max(1, |coords(f)|).
double span_residual(const LieAlgebraBasis& algebra, const AffineField& f);

} // namespace orbitfol
