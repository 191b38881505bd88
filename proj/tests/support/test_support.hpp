#pragma once

#include "cutopt/assembly/assemble.hpp"
#include "cutopt/geometry/subdomain.hpp"

#include <functional>

namespace cutopt::testing {

using Field = std::function<Vec2(const Vec2&)>;

/// Regular n-gon inscribed in a circle, every edge tagged `tag`.
PolygonSet disk_polygon(const Vec2& center, double radius, int n, const BoundaryTag& tag);

/// Right-hand side terms that turn the homogeneous Dirichlet conditions of
/// the assembled system into u = g: for every Dirichlet trace point,
/// w [beta (P_mu g.v + P_lambda (g.n)(v.n)) - chi sigma_hat(v) n . g].
void add_dirichlet_data(const Discretization& disc, const Eigen::VectorXd& chi, double beta, const Field& g,
                        Eigen::VectorXd& b);

/// L2 norm of u_h - exact over the design domain, integrated with the cut
/// cell rule of the given order.
double l2_error(const Discretization& disc, const Eigen::VectorXd& u, const Field& exact, int order);

/// Largest pointwise error over the cut-cell quadrature points and the
/// trace points of the design domain.
double max_error(const Discretization& disc, const Eigen::VectorXd& u, const Field& exact);

}  // namespace cutopt::testing
