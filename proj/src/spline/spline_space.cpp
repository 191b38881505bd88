#include "cutopt/spline/spline_space.hpp"

#include "cutopt/geometry/curve_quadrature.hpp"
#include "cutopt/spline/bspline.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cutopt {

GridMap GridMap::affine(const BackgroundMesh& mesh) {
  GridMap g;
  g.affine_ = true;
  g.mesh_ = mesh;
  g.nx_ = mesh.nx;
  g.ny_ = mesh.ny;
  return g;
}

GridMap GridMap::parametric(const Patch& patch) {
  GridMap g;
  g.affine_ = false;
  g.map_ = patch.map;
  g.patch_ = &patch;
  g.nx_ = patch.nx;
  g.ny_ = patch.ny;
  return g;
}

Vec2 GridMap::to_physical(const Vec2& grid) const {
  if (affine_) return mesh_.to_physical(grid);
  return map_(Vec2(grid.x() / nx_, grid.y() / ny_));
}

Mat2 GridMap::jacobian(const Vec2& grid) const {
  if (affine_) return mesh_.jacobian();
  Mat2 J = map_.jacobian(Vec2(grid.x() / nx_, grid.y() / ny_));
  J.col(0) /= nx_;
  J.col(1) /= ny_;
  return J;
}

bool GridMap::to_grid(const Vec2& x, Vec2& grid) const {
  if (affine_) {
    grid = mesh_.to_grid(x);
    return true;
  }
  Vec2 ref(0.5, 0.5);
  if (!patch_inverse(*patch_, x, ref, 1e-10)) return false;
  grid = Vec2(ref.x() * nx_, ref.y() * ny_);
  return true;
}

SplineSpace::SplineSpace(int nx, int ny, int degree, const std::vector<int>& active_elements)
    : nx_(nx), ny_(ny), p_(degree) {
  if (degree < 1) throw ConfigError("spline degree must be >= 1");
  active_.assign(static_cast<std::size_t>(nx) * ny, 0);
  for (int e : active_elements) active_.at(e) = 1;
  for (int e = 0; e < nx * ny; ++e)
    if (active_[e]) active_list_.push_back(e);
  const int lw = nx + p_, lh = ny + p_;
  std::vector<char> used(static_cast<std::size_t>(lw) * lh, 0);
  for (int e : active_list_) {
    const int i = e % nx, j = e / nx;
    for (int b = 0; b <= p_; ++b)
      for (int a = 0; a <= p_; ++a) used[(i + a) + lw * (j + b)] = 1;
  }
  dof_of_lattice_.assign(used.size(), -1);
  for (std::size_t l = 0; l < used.size(); ++l)
    if (used[l]) {
      dof_of_lattice_[l] = static_cast<int>(lattice_of_dof_.size());
      lattice_of_dof_.push_back(static_cast<int>(l));
    }
}

int SplineSpace::dof_of_lattice(int i, int j) const {
  const int lw = nx_ + p_;
  if (i < 0 || j < 0 || i >= lw || j >= ny_ + p_) return -1;
  return dof_of_lattice_[i + lw * j];
}

std::pair<int, int> SplineSpace::lattice_of_dof(int d) const {
  const int lw = nx_ + p_;
  return {lattice_of_dof_[d] % lw, lattice_of_dof_[d] / lw};
}

std::vector<int> SplineSpace::element_dofs(int e) const {
  if (!element_active(e)) {
    std::ostringstream os;
    os << "element " << e << " is not active";
    throw std::out_of_range(os.str());
  }
  const int i = e % nx_, j = e / nx_;
  std::vector<int> d;
  d.reserve(local_size());
  for (int b = 0; b <= p_; ++b)
    for (int a = 0; a <= p_; ++a) d.push_back(dof_of_lattice(i + a, j + b));
  return d;
}

int SplineSpace::locate(const Vec2& grid) const {
  int i = static_cast<int>(std::floor(grid.x()));
  int j = static_cast<int>(std::floor(grid.y()));
  if (i == nx_ && grid.x() <= nx_ + 1e-12) i = nx_ - 1;
  if (j == ny_ && grid.y() <= ny_ + 1e-12) j = ny_ - 1;
  if (i < 0 || j < 0 || i >= nx_ || j >= ny_) return -1;
  return i + nx_ * j;
}

namespace {

void check_element(const SplineSpace& s, int e) {
  if (!s.element_active(e)) {
    std::ostringstream os;
    os << "element " << e << " is not active";
    throw std::out_of_range(os.str());
  }
}

}  // namespace

BasisEval eval_basis(const SplineSpace& space, const GridMap& map, int element, const Vec2& grid) {
  check_element(space, element);
  const int p = space.degree();
  const int i = element % space.nx(), j = element / space.nx();
  const auto bs = uniform_bspline_ders(p, grid.x() - i, 1);
  const auto bt = uniform_bspline_ders(p, grid.y() - j, 1);
  const Mat2 JinvT = map.jacobian(grid).inverse().transpose();
  BasisEval out;
  out.N.resize(space.local_size());
  out.grad.resize(space.local_size());
  for (int b = 0; b <= p; ++b)
    for (int a = 0; a <= p; ++a) {
      const int k = a + (p + 1) * b;
      out.N[k] = bs[0][a] * bt[0][b];
      out.grad[k] = JinvT * Vec2(bs[1][a] * bt[0][b], bs[0][a] * bt[1][b]);
    }
  return out;
}

std::vector<double> eval_grid_derivative(const SplineSpace& space, int element, const Vec2& grid, int dir, int k) {
  check_element(space, element);
  const int p = space.degree();
  const int i = element % space.nx(), j = element / space.nx();
  const auto bs = uniform_bspline_ders(p, grid.x() - i, dir == 0 ? k : 0);
  const auto bt = uniform_bspline_ders(p, grid.y() - j, dir == 1 ? k : 0);
  std::vector<double> out(space.local_size());
  for (int b = 0; b <= p; ++b)
    for (int a = 0; a <= p; ++a)
      out[a + (p + 1) * b] = dir == 0 ? bs[k][a] * bt[0][b] : bs[0][a] * bt[k][b];
  return out;
}

Vec2 interpolate_field(const SplineSpace& space, const GridMap& map, const Eigen::VectorXd& coeffs,
                       const Vec2& x) {
  Vec2 g;
  if (!map.to_grid(x, g)) throw std::out_of_range("point outside the mapped patch");
  const int e = space.locate(g);
  if (e < 0 || !space.element_active(e)) {
    std::ostringstream os;
    os << "point (" << x.x() << ", " << x.y() << ") is outside the active mesh";
    throw std::out_of_range(os.str());
  }
  const auto dofs = space.element_dofs(e);
  const BasisEval be = eval_basis(space, map, e, g);
  Vec2 v = Vec2::Zero();
  for (std::size_t a = 0; a < dofs.size(); ++a) v += be.N[a] * Vec2(coeffs[2 * dofs[a]], coeffs[2 * dofs[a] + 1]);
  return v;
}

std::vector<Mat2> strain_operator(const SplineSpace& space, const GridMap& map, int element, const Vec2& grid) {
  const BasisEval be = eval_basis(space, map, element, grid);
  std::vector<Mat2> eps(2 * be.N.size());
  for (std::size_t a = 0; a < be.N.size(); ++a) {
    const Vec2& g = be.grad[a];
    Mat2 ex;
    ex << g.x(), 0.5 * g.y(), 0.5 * g.y(), 0.0;
    Mat2 ey;
    ey << 0.0, 0.5 * g.x(), 0.5 * g.x(), g.y();
    eps[2 * a] = ex;
    eps[2 * a + 1] = ey;
  }
  return eps;
}

DensitySpace::DensitySpace(const BackgroundMesh& m, std::vector<int> cells) : mesh(m), active_cells(std::move(cells)) {
  index_of_cell.assign(m.num_elements(), -1);
  for (std::size_t k = 0; k < active_cells.size(); ++k) index_of_cell[active_cells[k]] = static_cast<int>(k);
}

}  // namespace cutopt
