#pragma once

#include <Eigen/Dense>

namespace orbitfol {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

} // namespace orbitfol
