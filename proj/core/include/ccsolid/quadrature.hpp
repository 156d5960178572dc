#pragma once

#include <vector>

namespace ccsolid {

/// Gauss-Legendre rule mapped to [0, 1]; weights sum to 1.
struct QuadratureRule {
  std::vector<double> points;
  std::vector<double> weights;
};

/// n-point rule, exact for polynomials of degree 2n - 1. Throws Error for n < 1.
QuadratureRule gauss_legendre(int n);

}  // namespace ccsolid
