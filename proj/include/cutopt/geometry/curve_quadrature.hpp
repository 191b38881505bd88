#pragma once

#include "cutopt/geometry/cut_quadrature.hpp"
#include "cutopt/geometry/subdomain.hpp"

#include <vector>

namespace cutopt {

/// Where a curve point sits in one subdomain's discretization.
struct TraceSide {
  int subdomain = -1;  ///< -1: no second side (boundary point)
  int element = -1;    ///< element of the subdomain's FE grid
  int cell = -1;       ///< density cell on the level-k refinement of that grid
  Vec2 grid{0.0, 0.0};  ///< FE grid coordinates of the point
};

struct CurvePoint {
  Vec2 x{0.0, 0.0};
  double weight = 0.0;
  /// Interfaces: unit normal from side[0] into side[1] (side[0] has the
  /// lower subdomain id). Boundaries: outward normal of side[0].
  Vec2 normal{0.0, 0.0};
  BoundaryTag tag;
  TraceSide side[2];
};

/// Design-domain discretization needed to locate trace points.
struct DesignGrids {
  const ActiveMesh* fe = nullptr;
  const CellDecomposition* cells = nullptr;
  double tol = 1e-12;
};

/// Quadrature for every Dirichlet, Neumann and interface curve. Straight
/// design edges use `points` Gauss points per piece, patch edges use
/// points + 2. Pieces are split wherever either side crosses a level-k
/// grid line so that the density is constant on each piece. Throws
/// GeometryError when a trace point cannot be located in an active
/// element or when interface curves do not match.
std::vector<CurvePoint> boundary_interface_quadrature(const Geometry2D& geo, const DesignGrids& design,
                                                      int density_level, int points, double tol = 1e-10);

/// Newton inverse of a patch map with restarts; the result is clamped to
/// [0,1]^2 when within tol of it. Returns false if x is not on the patch.
bool patch_inverse(const Patch& patch, const Vec2& x, Vec2& ref, double tol = 1e-10);

}  // namespace cutopt
