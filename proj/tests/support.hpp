#pragma once

#include "calibra/algebra.hpp"
#include "calibra/linalg.hpp"

#include <cmath>

namespace testing {

inline calibra::Element random_element(calibra::AlgebraLevel level, calibra::Rng& rng) {
    return calibra::Element(level, calibra::random_gaussian(level.dim(), 1, rng).col(0));
}

inline calibra::Element random_unit_imaginary(calibra::AlgebraLevel level, calibra::Rng& rng) {
    Eigen::VectorXd v = calibra::random_gaussian(level.dim(), 1, rng).col(0);
    v[0] = 0;
    return calibra::Element(level, v / v.norm());
}

inline double max_abs(const Eigen::MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

} // namespace testing
