#include "cutopt/assembly/discretization.hpp"

#include "cutopt/geometry/quadrature_rules.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cutopt {

const MaterialParams& ProblemDefinition::material(int subdomain) const {
  if (materials.empty()) throw ConfigError("no material given");
  if (subdomain < static_cast<int>(materials.size())) return materials[subdomain];
  return materials.front();
}

namespace {

BackgroundMesh make_cell_mesh(const ProblemDefinition& def) {
  if (def.degree < 1) throw ConfigError("spline degree must be >= 1");
  if (def.density_level < 0) throw ConfigError("density level must be >= 0");
  return build_background_mesh(def.geometry.design_bbox(), def.h, def.angle, def.density_level);
}

// 3 x 2n strain-displacement matrix (exx, eyy, gxy) from physical gradients.
Eigen::MatrixXd b_matrix(const std::vector<Vec2>& grad) {
  const int n = static_cast<int>(grad.size());
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(3, 2 * n);
  for (int a = 0; a < n; ++a) {
    B(0, 2 * a) = grad[a].x();
    B(1, 2 * a + 1) = grad[a].y();
    B(2, 2 * a) = grad[a].y();
    B(2, 2 * a + 1) = grad[a].x();
  }
  return B;
}

Eigen::Matrix3d elasticity_matrix(double mu, double lambda) {
  Eigen::Matrix3d D;
  D << 2 * mu + lambda, lambda, 0, lambda, 2 * mu + lambda, 0, 0, 0, mu;
  return D;
}

std::vector<int> element_eqs(const SubdomainSpace& s, int element) {
  const auto dofs = s.space.element_dofs(element);
  std::vector<int> eqs;
  eqs.reserve(2 * dofs.size());
  for (int d : dofs) {
    eqs.push_back(s.eq_offset + 2 * d);
    eqs.push_back(s.eq_offset + 2 * d + 1);
  }
  return eqs;
}

void integrate_cell(DensityCell& dc, const SubdomainSpace& s, const std::vector<Vec2>& grid_pts,
                    const std::vector<Vec2>& phys_pts, const std::vector<double>& weights, const VectorField& body) {
  const int n = s.space.local_size();
  dc.K = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  dc.f = Eigen::VectorXd::Zero(2 * n);
  const Eigen::Matrix3d D = elasticity_matrix(s.mu_hat, s.lambda_hat);
  Vec2 moment = Vec2::Zero();
  dc.volume = 0.0;
  for (std::size_t q = 0; q < weights.size(); ++q) {
    const BasisEval be = eval_basis(s.space, s.map, dc.element, grid_pts[q]);
    const Eigen::MatrixXd B = b_matrix(be.grad);
    dc.K.noalias() += weights[q] * B.transpose() * D * B;
    if (body) {
      const Vec2 fq = body(phys_pts[q]);
      for (int a = 0; a < n; ++a) {
        dc.f[2 * a] += weights[q] * be.N[a] * fq.x();
        dc.f[2 * a + 1] += weights[q] * be.N[a] * fq.y();
      }
    }
    dc.volume += weights[q];
    moment += weights[q] * phys_pts[q];
  }
  dc.centroid = dc.volume > 0 ? Vec2(moment / dc.volume) : phys_pts.empty() ? Vec2::Zero() : phys_pts[0];
  // Exact symmetry for the factorization.
  dc.K = 0.5 * (dc.K + dc.K.transpose()).eval();
}

}  // namespace

Discretization::Discretization(ProblemDefinition def)
    : def_(std::move(def)), decomposition_(make_cell_mesh(def_), def_.geometry.design) {
  def_.geometry.validate();
  def_.density.validate();
  if (!(def_.nitsche.beta >= 0.0)) throw ConfigError("Nitsche penalty must be nonnegative");
  const int k = def_.density_level;
  const int p = def_.degree;
  const BackgroundMesh fe = build_background_mesh(def_.geometry.design_bbox(), def_.h, def_.angle, 0);
  active_ = classify_from_cells(fe, decomposition_, def_.active_tol);
  if (active_.active_ids.empty()) throw GeometryError("design domain does not intersect the background mesh");
  faces_ = ghost_faces(active_);

  // Spaces and equation offsets.
  const int nsub = def_.geometry.num_subdomains();
  int offset = 0;
  for (int id = 0; id < nsub; ++id) {
    SubdomainSpace s;
    s.id = id;
    const MaterialParams& m = def_.material(id);
    s.mu_hat = m.mu_hat;
    s.lambda_hat = effective_lambda(m, def_.plane);
    if (id == 0) {
      s.space = SplineSpace(fe.nx, fe.ny, p, active_.active_ids);
      s.map = GridMap::affine(fe);
      s.h = fe.spacing();
    } else {
      const Patch& P = def_.geometry.patches[id - 1];
      std::vector<int> all(P.nx * P.ny);
      for (int e = 0; e < P.nx * P.ny; ++e) all[e] = e;
      s.space = SplineSpace(P.nx, P.ny, p, all);
      s.map = GridMap::parametric(P);
      s.h = std::sqrt(P.area() / (P.nx * P.ny));
    }
    s.eq_offset = offset;
    offset += 2 * s.space.num_dofs();
    spaces_.push_back(std::move(s));
  }
  neq_ = offset;

  auto body_of = [&](int id) -> VectorField {
    if (id < static_cast<int>(def_.loads.body_force.size())) return def_.loads.body_force[id];
    return {};
  };

  // Design cells.
  const BackgroundMesh& cm = decomposition_.mesh();
  cell_lookup_.assign(nsub, {});
  cell_lookup_[0].assign(cm.num_elements(), -1);
  std::vector<int> design_cells;
  for (const CellRule& r : cut_volume_quadrature(decomposition_, volume_order(p), def_.active_tol)) {
    DensityCell dc;
    dc.subdomain = 0;
    dc.cell = r.cell;
    dc.element = cm.parent_element(r.cell, k);
    std::vector<Vec2> grid(r.points.size());
    for (std::size_t q = 0; q < r.points.size(); ++q) grid[q] = fe.to_grid(r.points[q]);
    integrate_cell(dc, spaces_[0], grid, r.points, r.weights, body_of(0));
    if (r.points.empty()) dc.centroid = r.centroid;
    dc.eqs = element_eqs(spaces_[0], dc.element);
    cell_lookup_[0][r.cell] = static_cast<int>(cells_.size());
    design_cells.push_back(r.cell);
    design_volume_ += dc.volume;
    cells_.push_back(std::move(dc));
  }
  n_design_ = static_cast<int>(cells_.size());
  density_space_ = DensitySpace(cm, design_cells);

  // Patch cells on the level-k reference grid.
  const auto& g = gauss_legendre(p + 3);
  for (int id = 1; id < nsub; ++id) {
    const Patch& P = def_.geometry.patches[id - 1];
    const int f = 1 << k;
    const int nxk = P.nx * f, nyk = P.ny * f;
    cell_lookup_[id].assign(nxk * nyk, -1);
    for (int cj = 0; cj < nyk; ++cj)
      for (int ci = 0; ci < nxk; ++ci) {
        DensityCell dc;
        dc.subdomain = id;
        dc.cell = ci + nxk * cj;
        dc.element = (ci >> k) + P.nx * (cj >> k);
        std::vector<Vec2> grid, phys;
        std::vector<double> w;
        for (std::size_t a = 0; a < g.points.size(); ++a)
          for (std::size_t b = 0; b < g.points.size(); ++b) {
            const Vec2 ref((ci + g.points[a]) / nxk, (cj + g.points[b]) / nyk);
            const Mat2 J = P.map.jacobian(ref);
            grid.emplace_back(ref.x() * P.nx, ref.y() * P.ny);
            phys.push_back(P.map(ref));
            w.push_back(g.weights[a] * g.weights[b] * J.determinant() / (nxk * nyk));
          }
        integrate_cell(dc, spaces_[id], grid, phys, w, body_of(id));
        dc.eqs = element_eqs(spaces_[id], dc.element);
        cell_lookup_[id][dc.cell] = static_cast<int>(cells_.size());
        cells_.push_back(std::move(dc));
      }
  }

  // Trace points.
  DesignGrids dg{&active_, &decomposition_, def_.active_tol};
  for (const CurvePoint& cp : boundary_interface_quadrature(def_.geometry, dg, k, p + 2)) {
    TracePoint tp;
    tp.x = cp.x;
    tp.weight = cp.weight;
    tp.normal = cp.normal;
    tp.kind = cp.tag.kind;
    if (tp.kind == TagKind::Neumann) {
      const TractionLoad* load = def_.loads.find_traction(cp.tag.load);
      if (!load) throw ConfigError("boundary tag refers to unknown traction load '" + cp.tag.load + "'");
      tp.traction = load->traction(cp.x);
    }
    for (int s = 0; s < 2; ++s) {
      const TraceSide& ts = cp.side[s];
      if (ts.subdomain < 0) continue;
      const SubdomainSpace& sp = spaces_[ts.subdomain];
      TraceSideData& sd = tp.side[s];
      sd.subdomain = ts.subdomain;
      sd.element = ts.element;
      sd.grid = ts.grid;
      sd.cell = cell_lookup_[ts.subdomain][ts.cell];
      if (sd.cell < 0 || !sp.space.element_active(ts.element)) {
        std::ostringstream os;
        os << "trace point (" << cp.x.x() << ", " << cp.x.y() << ") of subdomain " << ts.subdomain
           << " lies in an inactive cell";
        throw GeometryError(os.str());
      }
      const BasisEval be = eval_basis(sp.space, sp.map, ts.element, ts.grid);
      sd.N = be.N;
      sd.grad = be.grad;
      sd.eqs = element_eqs(sp, ts.element);
      sd.h = sp.h;
      sd.mu_hat = sp.mu_hat;
      sd.lambda_hat = sp.lambda_hat;
      tp.eqs.insert(tp.eqs.end(), sd.eqs.begin(), sd.eqs.end());
    }
    traces_.push_back(std::move(tp));
  }

  // Sparsity pattern from element blocks, traces and ghost faces.
  std::vector<std::vector<int>> blocks;
  for (const auto& s : spaces_)
    for (int e : s.space.active_elements()) blocks.push_back(element_eqs(s, e));
  for (const auto& tp : traces_)
    if (tp.kind != TagKind::Neumann) blocks.push_back(tp.eqs);
  std::vector<std::vector<int>> face_eqs;
  if (def_.nitsche.ghost_penalty) {
    for (const auto& fc : faces_) {
      auto eqs = element_eqs(spaces_[0], fc.left);
      auto right = element_eqs(spaces_[0], fc.right);
      eqs.insert(eqs.end(), right.begin(), right.end());
      blocks.push_back(eqs);
      face_eqs.push_back(std::move(eqs));
    }
  }
  std::vector<Eigen::Triplet<double>> trip;
  for (const auto& b : blocks)
    for (int r : b)
      for (int c : b) trip.emplace_back(r, c, 0.0);
  pattern_.resize(neq_, neq_);
  pattern_.setFromTriplets(trip.begin(), trip.end());
  pattern_.makeCompressed();
  std::fill(pattern_.valuePtr(), pattern_.valuePtr() + pattern_.nonZeros(), 0.0);
  trip.clear();
  trip.shrink_to_fit();

  for (auto& dc : cells_) dc.scatter = scatter_for(dc.eqs);
  for (auto& tp : traces_)
    if (tp.kind != TagKind::Neumann) tp.scatter = scatter_for(tp.eqs);

  // Ghost penalty: sum_k gamma_k h^(2k-1) int_F [d_n^k v][d_n^k w]; in grid
  // units the powers of h cancel.
  ghost_values_.assign(pattern_.nonZeros(), 0.0);
  if (def_.nitsche.ghost_penalty) {
    const auto& gf = gauss_legendre(p + 1);
    const double mu0 = spaces_[0].mu_hat;
    const int n = spaces_[0].space.local_size();
    for (std::size_t fi = 0; fi < faces_.size(); ++fi) {
      const GhostFace& fc = faces_[fi];
      auto [i, j] = fe.ij(fc.left);
      Eigen::MatrixXd G = Eigen::MatrixXd::Zero(2 * n, 2 * n);
      double fact = 1.0;
      for (int order = 1; order <= p; ++order) {
        fact *= order;
        const double gamma = mu0 * def_.nitsche.ghost_scale / fact;
        for (std::size_t q = 0; q < gf.points.size(); ++q) {
          const Vec2 pt = fc.direction == 0 ? Vec2(i + 1.0, j + gf.points[q]) : Vec2(i + gf.points[q], j + 1.0);
          const auto dl = eval_grid_derivative(spaces_[0].space, fc.left, pt, fc.direction, order);
          const auto dr = eval_grid_derivative(spaces_[0].space, fc.right, pt, fc.direction, order);
          Eigen::VectorXd jmp(2 * n);
          for (int a = 0; a < n; ++a) {
            jmp[a] = dl[a];
            jmp[n + a] = -dr[a];
          }
          G.noalias() += gamma * gf.weights[q] * jmp * jmp.transpose();
        }
      }
      const auto& eqs = face_eqs[fi];
      const auto sc = scatter_for(eqs);
      const int m = static_cast<int>(eqs.size());
      // eqs interleave components: scalar function a has equations 2a, 2a+1.
      for (int a = 0; a < 2 * n; ++a)
        for (int b = 0; b < 2 * n; ++b)
          for (int c = 0; c < 2; ++c) ghost_values_[sc[(2 * a + c) * m + (2 * b + c)]] += G(a, b);
    }
  }
}

std::vector<int> Discretization::scatter_for(const std::vector<int>& eqs) const {
  const int m = static_cast<int>(eqs.size());
  std::vector<int> sc(static_cast<std::size_t>(m) * m);
  const int* outer = pattern_.outerIndexPtr();
  const int* inner = pattern_.innerIndexPtr();
  for (int c = 0; c < m; ++c) {
    const int col = eqs[c];
    for (int r = 0; r < m; ++r) {
      const int* lo = inner + outer[col];
      const int* hi = inner + outer[col + 1];
      const int* it = std::lower_bound(lo, hi, eqs[r]);
      if (it == hi || *it != eqs[r]) throw std::logic_error("entry missing from sparsity pattern");
      sc[static_cast<std::size_t>(r) * m + c] = static_cast<int>(it - inner);
    }
  }
  return sc;
}

Eigen::VectorXd Discretization::chi_from_design(const Eigen::VectorXd& rho) const {
  if (rho.size() != n_design_) {
    std::ostringstream os;
    os << "density vector has " << rho.size() << " entries, expected " << n_design_;
    throw std::invalid_argument(os.str());
  }
  Eigen::VectorXd chi = Eigen::VectorXd::Ones(static_cast<int>(cells_.size()));
  for (int c = 0; c < n_design_; ++c) chi[c] = chi_from_rho(rho[c], def_.density);
  return chi;
}

double Discretization::volume_fraction(const Eigen::VectorXd& rho) const {
  double num = 0.0;
  for (int c = 0; c < n_design_; ++c) num += chi_from_rho(rho[c], def_.density) * cells_[c].volume;
  return num / design_volume_;
}

}  // namespace cutopt
