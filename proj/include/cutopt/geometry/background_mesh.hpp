#pragma once

#include "cutopt/common.hpp"

#include <utility>

namespace cutopt {

struct BoundingBox {
  Vec2 lo{0.0, 0.0};
  Vec2 hi{0.0, 0.0};

  void expand(const Vec2& p) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  static BoundingBox empty();
};

/// Rotated structured grid. Element (i, j) is the square with grid
/// coordinates [i, i+1] x [j, j+1]; x = origin + s * axis1 + t * axis2.
struct BackgroundMesh {
  Vec2 origin{0.0, 0.0};
  Vec2 axis1{1.0, 0.0};
  Vec2 axis2{0.0, 1.0};
  int nx = 0;
  int ny = 0;
  int level = 0;  ///< refinement level relative to the finite element mesh

  double spacing() const { return axis1.norm(); }
  double cell_area() const { return spacing() * spacing(); }
  int num_elements() const { return nx * ny; }
  int index(int i, int j) const { return i + nx * j; }
  std::pair<int, int> ij(int id) const { return {id % nx, id / nx}; }

  Mat2 jacobian() const;
  Vec2 to_physical(const Vec2& grid) const { return origin + grid.x() * axis1 + grid.y() * axis2; }
  Vec2 to_grid(const Vec2& x) const;
  Vec2 center(int id) const;
  /// Element containing grid point, clamped to the mesh; -1 if outside.
  int locate(const Vec2& grid) const;

  /// Same grid split 2^levels times per direction.
  BackgroundMesh refined(int levels) const;
  /// Level-0 ancestor element of a cell on this mesh, given the FE mesh.
  int parent_element(int cell_id, int levels_above) const;
};

/// Grid of spacing h / 2^level, rotated by `angle`, covering `bbox`.
/// Element counts are those of the level-0 grid times 2^level, so the
/// level-k cells nest 4^k-to-1 inside the level-0 elements.
BackgroundMesh build_background_mesh(const BoundingBox& bbox, double h, double angle, int level);

}  // namespace cutopt
