#pragma once

#include <vector>

namespace cutopt {

/// The p+1 B-splines of degree p on integer knots that are nonzero on a
/// unit knot span, evaluated at local coordinate u (u in [0,1] inside the
/// span; other values give the polynomial extension). Entry [k][a] is the
/// k-th derivative of the a-th function, k = 0..nders. Function a is the
/// one whose support starts a - p spans before this span.
std::vector<std::vector<double>> uniform_bspline_ders(int p, double u, int nders);

/// Cox-de Boor recursion for a single B-spline on arbitrary knots; slow,
/// meant as an independent reference.
double cox_de_boor(const std::vector<double>& knots, int i, int p, double x);

}  // namespace cutopt
