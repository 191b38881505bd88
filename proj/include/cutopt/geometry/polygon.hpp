#pragma once

#include "cutopt/common.hpp"
#include "cutopt/geometry/background_mesh.hpp"

#include <string>
#include <vector>

namespace cutopt {

enum class TagKind { Free, Dirichlet, Neumann, Interface };

/// Boundary condition carried by a boundary segment.
struct BoundaryTag {
  TagKind kind = TagKind::Free;
  std::string load;  ///< traction name for Neumann segments
  int partner = -1;  ///< other subdomain id for Interface segments

  static BoundaryTag free() { return {}; }
  static BoundaryTag dirichlet() { return {TagKind::Dirichlet, {}, -1}; }
  static BoundaryTag neumann(std::string name) { return {TagKind::Neumann, std::move(name), -1}; }
  static BoundaryTag interface(int other) { return {TagKind::Interface, {}, other}; }

  /// "free", "dirichlet", "neumann:<load>", "interface:<id>"
  static BoundaryTag parse(const std::string& text);
  std::string str() const;

  bool operator==(const BoundaryTag&) const = default;
};

/// Closed loop; edge k runs from vertices[k] to vertices[k+1 mod n] and
/// carries edge_tags[k].
struct PolygonLoop {
  std::vector<Vec2> vertices;
  std::vector<BoundaryTag> edge_tags;

  double signed_area() const;
  void reverse();
};

struct PolygonEdge {
  Vec2 a;
  Vec2 b;
  BoundaryTag tag;
  int loop = 0;
};

/// Polygon with holes (or several disjoint components), even-odd filled.
/// Construction validates simplicity and normalizes orientation: loops at
/// even nesting depth are counterclockwise, holes clockwise, so the domain
/// always lies to the left of every edge.
class PolygonSet {
 public:
  PolygonSet() = default;
  explicit PolygonSet(std::vector<PolygonLoop> loops);

  const std::vector<PolygonLoop>& loops() const { return loops_; }
  const std::vector<PolygonEdge>& edges() const { return edges_; }
  double area() const;
  BoundingBox bbox() const;
  bool contains(const Vec2& p) const;
  /// Boundary length of edges with the given tag kind.
  double boundary_length(TagKind kind) const;

 private:
  std::vector<PolygonLoop> loops_;
  std::vector<PolygonEdge> edges_;
};

/// Segment intersection including touching configurations; used by the
/// simplicity check and exposed for tests.
bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2);

}  // namespace cutopt
