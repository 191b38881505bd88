#include "cutopt/geometry/ghost_faces.hpp"

namespace cutopt {

std::vector<GhostFace> ghost_faces(const ActiveMesh& active) {
  const auto& m = active.mesh;
  std::vector<GhostFace> faces;
  const double h = m.spacing();
  for (int e : active.active_ids) {
    auto [i, j] = m.ij(e);
    for (int dir = 0; dir < 2; ++dir) {
      const int ni = i + (dir == 0), nj = j + (dir == 1);
      if (ni >= m.nx || nj >= m.ny) continue;
      const int f = m.index(ni, nj);
      if (!active.active(f)) continue;
      if (active.element_class[e] != ElementClass::Cut && active.element_class[f] != ElementClass::Cut) continue;
      GhostFace g;
      g.left = e;
      g.right = f;
      g.direction = dir;
      const Vec2 mid = dir == 0 ? Vec2(i + 1.0, j + 0.5) : Vec2(i + 0.5, j + 1.0);
      g.midpoint = m.to_physical(mid);
      g.normal = (dir == 0 ? m.axis1 : m.axis2).normalized();
      g.length = h;
      faces.push_back(g);
    }
  }
  return faces;
}

}  // namespace cutopt
