#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "orbitfol/types.hpp"

namespace orbitfol {

/// Shortest decimal string that parses back to the same double (at most 17
/// significant digits). Negative zero prints as "0".
std::string format_double(double value);

/// Shortest round-trip string of a single-precision value.
std::string format_float(float value);

/// Count of singular values above `tol` times the largest one. A zero matrix has rank 0.
int numerical_rank(const Matrix& m, double tol);

/// Seeded generator with bit-reproducible uniform and normal draws.
///
/// Only the raw engine output of std::mt19937_64 is used (its sequence is fixed
/// by the standard); the distributions are computed here so results do not
/// depend on the standard library implementation.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::size_t index(std::size_t count);
    double normal();
    Vector normal_vector(int dim);

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Random proper rotation of R^n (orthonormalized Gaussian matrix, det = +1).
Matrix random_rotation(int dim, Rng& rng);

} // namespace orbitfol
