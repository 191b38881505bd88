#pragma once

#include "cutopt/geometry/cut_quadrature.hpp"

#include <vector>

namespace cutopt {

struct GhostFace {
  int left = -1;   ///< element on the negative side of the normal
  int right = -1;  ///< element on the positive side
  int direction = 0;  ///< 0: normal along axis1, 1: normal along axis2
  Vec2 midpoint{0.0, 0.0};
  Vec2 normal{1.0, 0.0};
  double length = 0.0;
};

/// Interior faces of the active mesh with at least one Cut neighbor,
/// ordered by (left element, direction).
std::vector<GhostFace> ghost_faces(const ActiveMesh& active);

}  // namespace cutopt
