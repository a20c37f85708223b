#pragma once

#include <cstddef>
#include <functional>

#include "gbmlab/linalg.hpp"

namespace gbmlab {

using ScalarField = std::function<double(const Vecd&)>;

// Smooth bump supported on the unit ball: exp(-1/(1-|y|^2)) for |y|^2 < 1,
// exactly 0 outside. Argument is |y|^2.
double bump_unnormalized(double radius2);

// g_w(x) = integral of J_w(x-y) g(y) over B(x, w), computed by tensor
// Gauss-Legendre quadrature with the kernel mass renormalized to 1 on the
// same nodes. Nodes are paired (y, -y) with a shared weight, so odd kernel
// moments vanish and linear fields pass through unchanged up to rounding.
// n in [1,3]; w > 0; quad_points per axis.
ScalarField mollify(ScalarField g, std::size_t n, double w, std::size_t quad_points = 16);

// L1 norm of the derivative of the normalized 1-d kernel, 2 J(0) / (integral
// of J over [-1,1]).
double kernel_derivative_l1();

// Every w-mollified field is uniformly Lipschitz with constant at most
// sup|g| * kernel_derivative_l1() / w.
double mollified_lipschitz_bound(double sup_abs_g, double w);

}  // namespace gbmlab
