#include "orbitfol/numeric.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <numbers>

namespace orbitfol {

std::string format_double(double value)
{
    if (value == 0.0)
        return "0";
    std::array<char, 32> buffer{};
    auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
    return std::string(buffer.data(), ptr);
}

std::string format_float(float value)
{
    if (value == 0.0f)
        return "0";
    std::array<char, 32> buffer{};
    auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
    return std::string(buffer.data(), ptr);
}

int numerical_rank(const Matrix& m, double tol)
{
    if (m.size() == 0)
        return 0;
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& sigma = svd.singularValues();
    if (sigma.size() == 0 || sigma(0) == 0.0)
        return 0;
    const double threshold = tol * sigma(0);
    int rank = 0;
    for (Eigen::Index k = 0; k < sigma.size(); ++k)
        if (sigma(k) > threshold)
            ++rank;
    return rank;
}

double Rng::uniform()
{
    // 53 random mantissa bits.
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::size_t Rng::index(std::size_t count) { return static_cast<std::size_t>(engine_() % count); }

double Rng::normal()
{
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // Box-Muller; 1 - u keeps the logarithm finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

Vector Rng::normal_vector(int dim)
{
    Vector v(dim);
    for (int i = 0; i < dim; ++i)
        v(i) = normal();
    return v;
}

Matrix random_rotation(int dim, Rng& rng)
{
    Matrix g(dim, dim);
    for (int j = 0; j < dim; ++j)
        g.col(j) = rng.normal_vector(dim);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix column signs so the distribution is uniform, then force det = +1.
    for (int j = 0; j < dim; ++j)
        if (r(j, j) < 0.0)
            q.col(j) = -q.col(j);
    if (q.determinant() < 0.0)
        q.col(0) = -q.col(0);
    return q;
}

} // namespace orbitfol
