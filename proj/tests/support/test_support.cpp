#include "test_support.hpp"

#include "cutopt/solve/solve.hpp"

#include <cmath>
#include <numbers>

namespace cutopt::testing {

PolygonSet disk_polygon(const Vec2& center, double radius, int n, const BoundaryTag& tag) {
  PolygonLoop loop;
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * std::numbers::pi * k / n;
    loop.vertices.push_back(center + radius * Vec2(std::cos(t), std::sin(t)));
    loop.edge_tags.push_back(tag);
  }
  return PolygonSet({loop});
}

void add_dirichlet_data(const Discretization& disc, const Eigen::VectorXd& chi, double beta, const Field& g,
                        Eigen::VectorXd& b) {
  for (const TracePoint& tp : disc.traces()) {
    if (tp.kind != TagKind::Dirichlet) continue;
    const TraceSideData& sd = tp.side[0];
    const double c = chi[sd.cell];
    const double mu = c * sd.mu_hat, lambda = c * sd.lambda_hat;
    const double pen_mu = 2.0 * mu / sd.h, pen_lambda = lambda / sd.h;
    const Vec2 gx = g(tp.x);
    const Vec2& n = tp.normal;
    for (std::size_t a = 0; a < sd.N.size(); ++a) {
      const Vec2& dN = sd.grad[a];
      for (int comp = 0; comp < 2; ++comp) {
        Vec2 e = Vec2::Zero();
        e[comp] = 1.0;
        // sigma(N e) n with sigma = 2 mu eps + lambda tr(eps) I
        const Vec2 traction = mu * (e * dN.dot(n) + dN * e.dot(n)) + lambda * dN[comp] * n;
        const double v_dot_g = sd.N[a] * gx[comp];
        const double vn_gn = sd.N[a] * n[comp] * gx.dot(n);
        b[sd.eqs[2 * a + comp]] += tp.weight * (beta * (pen_mu * v_dot_g + pen_lambda * vn_gn) - traction.dot(gx));
      }
    }
  }
}

double l2_error(const Discretization& disc, const Eigen::VectorXd& u, const Field& exact, int order) {
  const BackgroundMesh& fe = disc.fe_mesh();
  double sum = 0.0;
  for (int i = 0; i < disc.num_design_cells(); ++i) {
    const DensityCell& c = disc.cells()[i];
    const CellRule r = cell_rule(disc.decomposition(), c.cell, order);
    for (std::size_t q = 0; q < r.points.size(); ++q) {
      const Vec2 uh = displacement_at(disc, u, 0, c.element, fe.to_grid(r.points[q]));
      sum += r.weights[q] * (uh - exact(r.points[q])).squaredNorm();
    }
  }
  return std::sqrt(sum);
}

double max_error(const Discretization& disc, const Eigen::VectorXd& u, const Field& exact) {
  const BackgroundMesh& fe = disc.fe_mesh();
  double worst = 0.0;
  for (int i = 0; i < disc.num_design_cells(); ++i) {
    const DensityCell& c = disc.cells()[i];
    const CellRule r = cell_rule(disc.decomposition(), c.cell, 4);
    for (const Vec2& x : r.points) {
      const Vec2 uh = displacement_at(disc, u, 0, c.element, fe.to_grid(x));
      worst = std::max(worst, (uh - exact(x)).lpNorm<Eigen::Infinity>());
    }
  }
  for (const TracePoint& tp : disc.traces()) {
    if (tp.side[0].subdomain != 0) continue;
    const Vec2 uh = displacement_at(disc, u, 0, tp.side[0].element, tp.side[0].grid);
    worst = std::max(worst, (uh - exact(tp.x)).lpNorm<Eigen::Infinity>());
  }
  return worst;
}

}  // namespace cutopt::testing
