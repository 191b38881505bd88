#include "cutopt/geometry/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cutopt {

BoundaryTag BoundaryTag::parse(const std::string& text) {
  if (text == "free") return free();
  if (text == "dirichlet") return dirichlet();
  const auto colon = text.find(':');
  if (colon != std::string::npos) {
    const std::string kind = text.substr(0, colon);
    const std::string rest = text.substr(colon + 1);
    if (kind == "neumann" && !rest.empty()) return neumann(rest);
    if (kind == "interface" && !rest.empty()) {
      std::size_t pos = 0;
      int id = -1;
      try {
        id = std::stoi(rest, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos == rest.size() && id >= 0) return interface(id);
    }
  }
  throw ConfigError("unknown boundary tag '" + text +
                    "' (expected free, dirichlet, neumann:<load>, interface:<id>)");
}

std::string BoundaryTag::str() const {
  switch (kind) {
    case TagKind::Free: return "free";
    case TagKind::Dirichlet: return "dirichlet";
    case TagKind::Neumann: return "neumann:" + load;
    case TagKind::Interface: return "interface:" + std::to_string(partner);
  }
  return "free";
}

double PolygonLoop::signed_area() const {
  double a = 0.0;
  const std::size_t n = vertices.size();
  for (std::size_t k = 0; k < n; ++k) a += cross2(vertices[k], vertices[(k + 1) % n]);
  return 0.5 * a;
}

void PolygonLoop::reverse() {
  // Edge k (v_k -> v_k+1) becomes the edge v_k+1 -> v_k; keep tags attached.
  const std::size_t n = vertices.size();
  std::vector<Vec2> v(n);
  std::vector<BoundaryTag> t(n);
  for (std::size_t k = 0; k < n; ++k) {
    v[k] = vertices[n - 1 - k];
    // new edge k runs v[k] -> v[k+1] = old vertex n-1-k -> n-2-k = old edge n-2-k
    t[k] = edge_tags[(2 * n - 2 - k) % n];
  }
  vertices = std::move(v);
  edge_tags = std::move(t);
}

namespace {

double orient(const Vec2& a, const Vec2& b, const Vec2& c) { return cross2(b - a, c - a); }

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
  return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) &&
         std::min(a.y(), b.y()) <= p.y() && p.y() <= std::max(a.y(), b.y());
}

bool point_in_loop(const PolygonLoop& loop, const Vec2& p) {
  bool inside = false;
  const auto& v = loop.vertices;
  const std::size_t n = v.size();
  for (std::size_t k = 0, l = n - 1; k < n; l = k++) {
    if ((v[k].y() > p.y()) != (v[l].y() > p.y())) {
      const double xc = v[l].x() + (p.y() - v[l].y()) * (v[k].x() - v[l].x()) / (v[k].y() - v[l].y());
      if (p.x() < xc) inside = !inside;
    }
  }
  return inside;
}

}  // namespace

bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
  const double d1 = orient(q1, q2, p1), d2 = orient(q1, q2, p2);
  const double d3 = orient(p1, p2, q1), d4 = orient(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  if (d1 == 0 && on_segment(q1, q2, p1)) return true;
  if (d2 == 0 && on_segment(q1, q2, p2)) return true;
  if (d3 == 0 && on_segment(p1, p2, q1)) return true;
  if (d4 == 0 && on_segment(p1, p2, q2)) return true;
  return false;
}

PolygonSet::PolygonSet(std::vector<PolygonLoop> loops) : loops_(std::move(loops)) {
  if (loops_.empty()) throw GeometryError("design polygon has no loops");
  for (std::size_t l = 0; l < loops_.size(); ++l) {
    auto& loop = loops_[l];
    if (loop.vertices.size() < 3) {
      std::ostringstream os;
      os << "polygon loop " << l << " has fewer than 3 vertices";
      throw GeometryError(os.str());
    }
    if (loop.edge_tags.size() != loop.vertices.size()) {
      std::ostringstream os;
      os << "polygon loop " << l << " has " << loop.vertices.size() << " vertices but "
         << loop.edge_tags.size() << " edge tags";
      throw GeometryError(os.str());
    }
    for (std::size_t k = 0; k < loop.vertices.size(); ++k) {
      if (!loop.vertices[k].allFinite()) throw GeometryError("polygon vertex is not finite");
      const Vec2& a = loop.vertices[k];
      const Vec2& b = loop.vertices[(k + 1) % loop.vertices.size()];
      if ((a - b).norm() == 0.0) {
        std::ostringstream os;
        os << "polygon loop " << l << " has a zero-length edge at vertex " << k;
        throw GeometryError(os.str());
      }
    }
    if (loop.signed_area() == 0.0) {
      std::ostringstream os;
      os << "polygon loop " << l << " has zero area";
      throw GeometryError(os.str());
    }
  }

  // Simplicity: non-adjacent edges must not touch, adjacent edges only at
  // their shared vertex.
  struct E {
    Vec2 a, b;
    int loop, k, n;
    Vec2 lo, hi;
  };
  std::vector<E> all;
  for (std::size_t l = 0; l < loops_.size(); ++l) {
    const auto& v = loops_[l].vertices;
    const int n = static_cast<int>(v.size());
    for (int k = 0; k < n; ++k) {
      const Vec2& a = v[k];
      const Vec2& b = v[(k + 1) % n];
      all.push_back({a, b, static_cast<int>(l), k, n, a.cwiseMin(b), a.cwiseMax(b)});
    }
  }
  std::vector<int> order(all.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int x, int y) { return all[x].lo.x() < all[y].lo.x(); });
  for (std::size_t oi = 0; oi < order.size(); ++oi) {
    const E& e = all[order[oi]];
    for (std::size_t oj = oi + 1; oj < order.size(); ++oj) {
      const E& f = all[order[oj]];
      if (f.lo.x() > e.hi.x()) break;
      if (f.lo.y() > e.hi.y() || f.hi.y() < e.lo.y()) continue;
      const bool same_loop = e.loop == f.loop;
      const bool adjacent = same_loop && ((e.k + 1) % e.n == f.k || (f.k + 1) % f.n == e.k);
      if (adjacent) {
        // Shared vertex is fine; collinear overlap is not.
        const Vec2 shared = ((e.k + 1) % e.n == f.k) ? e.b : e.a;
        const Vec2 eo = (shared == e.a) ? e.b : e.a;
        const Vec2 fo = (shared == f.a) ? f.b : f.a;
        const double c = cross2(eo - shared, fo - shared);
        const double d = (eo - shared).dot(fo - shared);
        if (c == 0.0 && d > 0.0) {
          std::ostringstream os;
          os << "polygon loop " << e.loop << " folds back on itself near vertex (" << shared.x() << ", "
             << shared.y() << ")";
          throw GeometryError(os.str());
        }
        continue;
      }
      if (segments_intersect(e.a, e.b, f.a, f.b)) {
        std::ostringstream os;
        os << "self-intersecting polygon: edge " << e.k << " of loop " << e.loop << " meets edge " << f.k
           << " of loop " << f.loop;
        throw GeometryError(os.str());
      }
    }
  }

  // Orientation by nesting depth.
  for (std::size_t l = 0; l < loops_.size(); ++l) {
    int depth = 0;
    for (std::size_t m = 0; m < loops_.size(); ++m)
      if (m != l && point_in_loop(loops_[m], loops_[l].vertices[0])) ++depth;
    const bool hole = depth % 2 == 1;
    const double a = loops_[l].signed_area();
    if ((hole && a > 0) || (!hole && a < 0)) loops_[l].reverse();
  }

  for (std::size_t l = 0; l < loops_.size(); ++l) {
    const auto& v = loops_[l].vertices;
    const std::size_t n = v.size();
    for (std::size_t k = 0; k < n; ++k)
      edges_.push_back({v[k], v[(k + 1) % n], loops_[l].edge_tags[k], static_cast<int>(l)});
  }
}

double PolygonSet::area() const {
  double a = 0.0;
  for (const auto& l : loops_) a += l.signed_area();
  return a;
}

BoundingBox PolygonSet::bbox() const {
  BoundingBox b = BoundingBox::empty();
  for (const auto& l : loops_)
    for (const auto& v : l.vertices) b.expand(v);
  return b;
}

bool PolygonSet::contains(const Vec2& p) const {
  bool inside = false;
  for (const auto& l : loops_)
    if (point_in_loop(l, p)) inside = !inside;
  return inside;
}

double PolygonSet::boundary_length(TagKind kind) const {
  double s = 0.0;
  for (const auto& e : edges_)
    if (e.tag.kind == kind) s += (e.b - e.a).norm();
  return s;
}

}  // namespace cutopt
