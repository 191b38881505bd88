#pragma once

#include "cutopt/geometry/parametric_map.hpp"
#include "cutopt/geometry/polygon.hpp"

#include <array>
#include <optional>
#include <vector>

namespace cutopt {

/// Patch edges in counterclockwise order for a positively oriented map.
/// Edge parameter t runs along increasing xi (Eta0, Eta1) or eta (Xi0, Xi1).
enum class PatchEdge { Eta0 = 0, Xi1 = 1, Eta1 = 2, Xi0 = 3 };

const char* patch_edge_name(PatchEdge e);
PatchEdge parse_patch_edge(const std::string& name);

struct EdgePiece {
  double t0 = 0.0;
  double t1 = 1.0;
  BoundaryTag tag;
};

/// Fitted nondesign region: a parametric map with an nx x ny element grid
/// in the reference square and tagged boundary pieces.
struct Patch {
  ParametricMap map;
  int nx = 1;
  int ny = 1;
  /// Pieces per edge, sorted and covering [0, 1]; untagged parts are free.
  std::array<std::vector<EdgePiece>, 4> edges;

  Vec2 edge_ref(PatchEdge e, double t) const;
  /// Unit outward normal at edge parameter t.
  Vec2 edge_normal(PatchEdge e, double t) const;
  /// Piecewise-linear sampling of F along an edge with chords no longer
  /// than max_chord; endpoints included.
  std::vector<Vec2> sample_edge(PatchEdge e, double t0, double t1, double max_chord) const;
  double area() const;
  /// Tag covering edge parameter t.
  BoundaryTag tag_at(PatchEdge e, double t) const;
};

struct Subdomain {
  int id = 0;  ///< 0 is the design domain
  std::optional<PolygonSet> polygon;
  std::optional<Patch> patch;
};

struct Geometry2D {
  PolygonSet design;
  std::vector<Patch> patches;  ///< subdomain i + 1 is patches[i]

  int num_subdomains() const { return 1 + static_cast<int>(patches.size()); }
  Subdomain subdomain(int id) const;
  BoundingBox design_bbox() const { return design.bbox(); }
  /// Checks tag consistency: interface partners exist and mirror back,
  /// patch maps have positive Jacobians, design interface vertices lie on
  /// the partner patch boundary. Throws GeometryError.
  void validate(double tol = 1e-10) const;
};

struct MapEval {
  Vec2 x;
  Mat2 J;
};

/// F and DF for a nondesign subdomain at a reference point in [0,1]^2.
MapEval map_eval(const Subdomain& sub, const Vec2& ref);

}  // namespace cutopt
