#pragma once

#include "cutopt/geometry/curve_quadrature.hpp"
#include "cutopt/geometry/cut_quadrature.hpp"
#include "cutopt/geometry/ghost_faces.hpp"
#include "cutopt/geometry/subdomain.hpp"
#include "cutopt/model.hpp"
#include "cutopt/spline/spline_space.hpp"

#include <Eigen/Sparse>

#include <vector>

namespace cutopt {

struct NitscheParams {
  double beta = 40.0;         ///< penalty factor, 10 p^2 for p = 2
  double ghost_scale = 1e-4;  ///< gamma_k = mu_hat_0 * ghost_scale / k!
  bool ghost_penalty = true;
};

/// Everything needed to build the discrete problem.
struct ProblemDefinition {
  Geometry2D geometry;
  double h = 0.05;
  double angle = 0.0;
  int density_level = 1;
  int degree = 2;
  std::vector<MaterialParams> materials;  ///< per subdomain; one entry is reused for all
  PlaneMode plane = PlaneMode::Strain;
  LoadSpec loads;
  NitscheParams nitsche;
  DensityModel density;
  double active_tol = 1e-12;

  const MaterialParams& material(int subdomain) const;
};

struct SubdomainSpace {
  int id = 0;
  SplineSpace space;
  GridMap map;
  int eq_offset = 0;  ///< first global equation of this subdomain
  double h = 0.0;     ///< mesh parameter used in the Nitsche penalty
  double mu_hat = 0.0;
  double lambda_hat = 0.0;  ///< plane-mode effective value
};

/// A level-k integration cell; chi is constant on it.
struct DensityCell {
  int subdomain = 0;
  int cell = -1;     ///< index on the subdomain's level-k grid
  int element = -1;  ///< FE element containing the cell
  double volume = 0.0;
  Vec2 centroid{0.0, 0.0};
  std::vector<int> eqs;  ///< global equations, 2 per element dof
  Eigen::MatrixXd K;     ///< stiffness for chi = 1
  Eigen::VectorXd f;     ///< body load for chi = 1
  std::vector<int> scatter;
};

struct TraceSideData {
  int subdomain = -1;
  int cell = -1;  ///< density cell index
  int element = -1;
  Vec2 grid{0.0, 0.0};
  std::vector<int> eqs;
  std::vector<double> N;
  std::vector<Vec2> grad;
  double h = 0.0;
  double mu_hat = 0.0;
  double lambda_hat = 0.0;
};

struct TracePoint {
  Vec2 x{0.0, 0.0};
  double weight = 0.0;
  Vec2 normal{0.0, 0.0};
  TagKind kind = TagKind::Free;
  Vec2 traction{0.0, 0.0};  ///< unscaled, Neumann points only
  TraceSideData side[2];
  std::vector<int> eqs;  ///< side 0 then side 1
  std::vector<int> scatter;

  bool two_sided() const { return side[1].subdomain >= 0; }
};

/// Precomputed discretization: spaces, integration cells with unit-density
/// element matrices, trace points, ghost penalty and the sparsity pattern.
/// Density cells of the design domain come first, in level-k cell order.
class Discretization {
 public:
  explicit Discretization(ProblemDefinition def);
  Discretization(const Discretization&) = delete;
  Discretization& operator=(const Discretization&) = delete;

  const ProblemDefinition& definition() const { return def_; }
  const BackgroundMesh& fe_mesh() const { return active_.mesh; }
  const BackgroundMesh& cell_mesh() const { return decomposition_.mesh(); }
  const CellDecomposition& decomposition() const { return decomposition_; }
  const ActiveMesh& active_mesh() const { return active_; }
  const std::vector<GhostFace>& ghost_face_set() const { return faces_; }
  const std::vector<SubdomainSpace>& spaces() const { return spaces_; }
  const std::vector<DensityCell>& cells() const { return cells_; }
  const std::vector<TracePoint>& traces() const { return traces_; }
  const DensitySpace& density_space() const { return density_space_; }
  int num_design_cells() const { return n_design_; }
  int num_equations() const { return neq_; }
  /// Density cell index for a level-k cell of a subdomain, -1 if none.
  int cell_index(int subdomain, int cell) const { return cell_lookup_[subdomain][cell]; }

  const Eigen::SparseMatrix<double>& pattern() const { return pattern_; }
  /// Ghost penalty values aligned with pattern().valuePtr().
  const std::vector<double>& ghost_values() const { return ghost_values_; }

  /// chi per density cell from design densities (nondesign cells get 1).
  Eigen::VectorXd chi_from_design(const Eigen::VectorXd& rho) const;
  /// Volume-weighted design density fraction sum(chi V) / sum(V).
  double volume_fraction(const Eigen::VectorXd& rho) const;
  double design_volume() const { return design_volume_; }

  long revision() const { return revision_; }
  long bump_revision() const { return ++revision_; }

  /// Scatter indices of a dense block with equations eqs into pattern().
  std::vector<int> scatter_for(const std::vector<int>& eqs) const;

 private:
  ProblemDefinition def_;
  CellDecomposition decomposition_;
  ActiveMesh active_;
  std::vector<GhostFace> faces_;
  std::vector<SubdomainSpace> spaces_;
  std::vector<DensityCell> cells_;
  std::vector<TracePoint> traces_;
  DensitySpace density_space_;
  std::vector<std::vector<int>> cell_lookup_;
  int n_design_ = 0;
  int neq_ = 0;
  double design_volume_ = 0.0;
  Eigen::SparseMatrix<double> pattern_;
  std::vector<double> ghost_values_;
  mutable long revision_ = 0;
};

/// Order of the volume rule: exact for products of gradients of degree-p
/// tensor splines.
inline int volume_order(int p) { return 4 * p - 2; }

}  // namespace cutopt
