#include "cutopt/geometry/background_mesh.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace cutopt {

BoundingBox BoundingBox::empty() {
  const double inf = std::numeric_limits<double>::infinity();
  return {Vec2(inf, inf), Vec2(-inf, -inf)};
}

Mat2 BackgroundMesh::jacobian() const {
  Mat2 J;
  J.col(0) = axis1;
  J.col(1) = axis2;
  return J;
}

Vec2 BackgroundMesh::to_grid(const Vec2& x) const {
  const Vec2 d = x - origin;
  return {d.dot(axis1) / axis1.squaredNorm(), d.dot(axis2) / axis2.squaredNorm()};
}

Vec2 BackgroundMesh::center(int id) const {
  auto [i, j] = ij(id);
  return to_physical(Vec2(i + 0.5, j + 0.5));
}

int BackgroundMesh::locate(const Vec2& g) const {
  int i = static_cast<int>(std::floor(g.x()));
  int j = static_cast<int>(std::floor(g.y()));
  if (i == nx && g.x() <= nx + 1e-12) i = nx - 1;
  if (j == ny && g.y() <= ny + 1e-12) j = ny - 1;
  if (i < 0 || j < 0 || i >= nx || j >= ny) return -1;
  return index(i, j);
}

BackgroundMesh BackgroundMesh::refined(int levels) const {
  BackgroundMesh m = *this;
  const int f = 1 << levels;
  m.axis1 /= f;
  m.axis2 /= f;
  m.nx *= f;
  m.ny *= f;
  m.level += levels;
  return m;
}

int BackgroundMesh::parent_element(int cell_id, int levels_above) const {
  auto [i, j] = ij(cell_id);
  const int pnx = nx >> levels_above;
  return (i >> levels_above) + pnx * (j >> levels_above);
}

BackgroundMesh build_background_mesh(const BoundingBox& bbox, double h, double angle, int level) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    std::ostringstream os;
    os << "background mesh spacing must be positive, got " << h;
    throw ConfigError(os.str());
  }
  if (level < 0) throw ConfigError("background mesh level must be >= 0");
  const Vec2 ext = bbox.hi - bbox.lo;
  if (!(ext.x() > 0.0 && ext.y() > 0.0)) throw ConfigError("background mesh bounding box is degenerate");

  const Vec2 e1(std::cos(angle), std::sin(angle));
  const Vec2 e2(-std::sin(angle), std::cos(angle));
  double umin = std::numeric_limits<double>::infinity(), vmin = umin;
  double umax = -umin, vmax = -umin;
  for (int c = 0; c < 4; ++c) {
    Vec2 p((c & 1) ? bbox.hi.x() : bbox.lo.x(), (c & 2) ? bbox.hi.y() : bbox.lo.y());
    double u = p.dot(e1), v = p.dot(e2);
    umin = std::min(umin, u);
    umax = std::max(umax, u);
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
  }
  const double eps = 1e-10;
  BackgroundMesh m;
  m.origin = umin * e1 + vmin * e2;
  m.axis1 = h * e1;
  m.axis2 = h * e2;
  m.nx = std::max(1, static_cast<int>(std::ceil((umax - umin) / h - eps)));
  m.ny = std::max(1, static_cast<int>(std::ceil((vmax - vmin) / h - eps)));
  m.level = 0;
  return level > 0 ? m.refined(level) : m;
}

}  // namespace cutopt
