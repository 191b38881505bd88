#pragma once

#include "cutopt/geometry/background_mesh.hpp"
#include "cutopt/geometry/polygon.hpp"

#include <vector>

namespace cutopt {

enum class ElementClass { Outside, Cut, Inside };

/// Region a(x) <= y <= b(x), x in [x0, x1], with a and b linear; stored in
/// cell-local coordinates where the cell is [0,1]^2.
struct Trapezoid {
  double x0 = 0.0, x1 = 1.0;
  double lo0 = 0.0, lo1 = 0.0;
  double hi0 = 1.0, hi1 = 1.0;

  double area() const { return 0.5 * (x1 - x0) * ((hi0 - lo0) + (hi1 - lo1)); }
};

/// Exact decomposition of every cell of a grid intersected with a polygon
/// into vertical-slab trapezoids.
class CellDecomposition {
 public:
  CellDecomposition(const BackgroundMesh& mesh, const PolygonSet& poly);

  const BackgroundMesh& mesh() const { return mesh_; }
  /// |T ∩ Ω| / |T|
  double area_fraction(int cell) const { return fraction_[cell]; }
  double area(int cell) const { return fraction_[cell] * mesh_.cell_area(); }
  /// Trapezoids covering the clipped part of the cell (local coordinates).
  std::vector<Trapezoid> trapezoids(int cell) const;

 private:
  BackgroundMesh mesh_;
  std::vector<double> fraction_;
  std::vector<int> first_;  ///< offset into trap_ (cells with partial cover), -1 otherwise
  std::vector<int> count_;
  std::vector<Trapezoid> trap_;
};

struct ActiveMesh {
  BackgroundMesh mesh;
  std::vector<ElementClass> element_class;
  std::vector<int> active_ids;
  std::vector<double> area;  ///< clipped area per element

  bool active(int e) const { return element_class[e] != ElementClass::Outside; }
  int num_cut() const;
};

ActiveMesh classify_elements(const BackgroundMesh& mesh, const PolygonSet& poly, double tol = 1e-12);

/// FE-level classification from a decomposition of the level-k cells: an
/// element is active iff one of its cells is.
ActiveMesh classify_from_cells(const BackgroundMesh& fe_mesh, const CellDecomposition& cells, double tol = 1e-12);

struct CellRule {
  int cell = -1;
  std::vector<Vec2> points;  ///< physical coordinates
  std::vector<double> weights;
  double volume = 0.0;
  Vec2 centroid{0.0, 0.0};
};

/// Quadrature exact for total degree `order` on each clipped cell whose
/// area fraction is at least tol; cells are listed in index order.
std::vector<CellRule> cut_volume_quadrature(const CellDecomposition& cells, int order, double tol = 1e-12);

/// Same rule for a single cell.
CellRule cell_rule(const CellDecomposition& cells, int cell, int order);

}  // namespace cutopt
