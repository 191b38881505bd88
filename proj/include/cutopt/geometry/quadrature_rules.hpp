#pragma once

#include <vector>

namespace cutopt {

/// Gauss-Legendre rule mapped to [0, 1]; exact for degree 2n-1.
struct GaussRule {
  std::vector<double> points;
  std::vector<double> weights;
};

const GaussRule& gauss_legendre(int n);

/// Points per direction so that a slab trapezoid (or a collapsed triangle)
/// integrates total degree `order` exactly.
int gauss_points_for_order(int order);

}  // namespace cutopt
