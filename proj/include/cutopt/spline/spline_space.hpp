#pragma once

#include "cutopt/geometry/background_mesh.hpp"
#include "cutopt/geometry/subdomain.hpp"

#include <vector>

namespace cutopt {

/// Maps FE grid coordinates (element (i,j) = [i,i+1] x [j,j+1]) to
/// physical space: affine for the design grid, parametric for patches.
class GridMap {
 public:
  static GridMap affine(const BackgroundMesh& mesh);
  static GridMap parametric(const Patch& patch);

  bool is_affine() const { return affine_; }
  Vec2 to_physical(const Vec2& grid) const;
  /// d x / d grid
  Mat2 jacobian(const Vec2& grid) const;
  /// Grid coordinates of a physical point; false if not found.
  bool to_grid(const Vec2& x, Vec2& grid) const;
  int nx() const { return nx_; }
  int ny() const { return ny_; }

 private:
  bool affine_ = true;
  BackgroundMesh mesh_;
  ParametricMap map_;
  const Patch* patch_ = nullptr;
  int nx_ = 0, ny_ = 0;
};

/// Maximal-smoothness tensor B-splines of degree p on uniform unclamped
/// knots over an nx x ny element grid. The dof lattice is
/// (nx+p) x (ny+p); element (i,j) uses lattice dofs (i+a, j+b),
/// a, b = 0..p. Only dofs touching an active element are numbered.
class SplineSpace {
 public:
  SplineSpace() = default;
  SplineSpace(int nx, int ny, int degree, const std::vector<int>& active_elements);

  int degree() const { return p_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int num_dofs() const { return static_cast<int>(lattice_of_dof_.size()); }
  int local_size() const { return (p_ + 1) * (p_ + 1); }
  bool element_active(int e) const { return e >= 0 && e < nx_ * ny_ && active_[e]; }
  const std::vector<int>& active_elements() const { return active_list_; }
  /// Active dof index of a lattice node, -1 if inactive.
  int dof_of_lattice(int i, int j) const;
  std::pair<int, int> lattice_of_dof(int d) const;
  /// Dofs of element e, local index a + (p+1) b.
  std::vector<int> element_dofs(int e) const;
  /// Element containing the grid point (clamped at the grid boundary).
  int locate(const Vec2& grid) const;

 private:
  int nx_ = 0, ny_ = 0, p_ = 2;
  std::vector<char> active_;
  std::vector<int> active_list_;
  std::vector<int> dof_of_lattice_;
  std::vector<int> lattice_of_dof_;
};

struct BasisEval {
  std::vector<double> N;
  std::vector<Vec2> grad;  ///< physical gradients
};

/// Values and physical gradients of the element's basis functions at a
/// grid point (grid coordinates, not element-local).
BasisEval eval_basis(const SplineSpace& space, const GridMap& map, int element, const Vec2& grid);

/// k-th derivative along grid direction dir (0: s, 1: t), in grid units.
std::vector<double> eval_grid_derivative(const SplineSpace& space, int element, const Vec2& grid, int dir, int k);

/// Field value at a physical point; coefficients are interleaved
/// (2 d, 2 d + 1) per active dof.
Vec2 interpolate_field(const SplineSpace& space, const GridMap& map, const Eigen::VectorXd& coeffs,
                       const Vec2& x);

/// Symmetric gradient of each vector basis function (scalar function a,
/// component c) at index 2a + c.
std::vector<Mat2> strain_operator(const SplineSpace& space, const GridMap& map, int element, const Vec2& grid);

/// Piecewise-constant density space on the active cells of a level-k grid.
struct DensitySpace {
  BackgroundMesh mesh;
  std::vector<int> active_cells;
  std::vector<int> index_of_cell;  ///< -1 for inactive cells

  DensitySpace() = default;
  DensitySpace(const BackgroundMesh& m, std::vector<int> cells);
  int size() const { return static_cast<int>(active_cells.size()); }
};

}  // namespace cutopt
