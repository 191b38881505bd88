#include "cutopt/solve/solve.hpp"

#include <cmath>
#include <sstream>

namespace cutopt {

namespace {

double relative_residual(const LinearSystem& sys, const Eigen::VectorXd& u, double bnorm) {
  return (sys.b - sys.A * u).norm() / bnorm;
}

}  // namespace

DisplacementField DisplacementSolver::solve(const LinearSystem& sys) {
  const long n = sys.A.rows();
  const bool use_cg = settings_.method == SolverSettings::Method::CG ||
                      (settings_.method == SolverSettings::Method::Auto && n > settings_.cg_threshold);
  if (use_cg) {
    DisplacementField f = solve_cg(sys, settings_.tol, settings_.max_iter);
    f.revision = sys.revision;
    return f;
  }
  DisplacementField f;
  f.revision = sys.revision;
  f.direct = true;
  const double bnorm = sys.b.norm();
  if (bnorm == 0.0) {
    f.u = Eigen::VectorXd::Zero(n);
    return f;
  }
  if (analyzed_nnz_ != sys.A.nonZeros() || analyzed_rows_ != n) {
    ldlt_.analyzePattern(sys.A);
    analyzed_nnz_ = sys.A.nonZeros();
    analyzed_rows_ = n;
  }
  ldlt_.factorize(sys.A);
  if (ldlt_.info() != Eigen::Success) throw SolverError("sparse factorization failed");
  const double dmin = ldlt_.vectorD().minCoeff();
  if (!(dmin > 0.0)) {
    std::ostringstream os;
    os << "system matrix is not positive definite (pivot " << dmin
       << "); the Nitsche penalty beta is likely too small";
    throw SolverError(os.str());
  }
  f.u = ldlt_.solve(sys.b);
  f.residual = relative_residual(sys, f.u, bnorm);
  // A few steps of iterative refinement for ill-conditioned systems.
  for (int it = 0; it < 5 && f.residual > settings_.tol; ++it) {
    const Eigen::VectorXd r = sys.b - sys.A * f.u;
    f.u += ldlt_.solve(r);
    const double res = relative_residual(sys, f.u, bnorm);
    ++f.iterations;
    if (!(res < f.residual)) {
      f.residual = res;
      break;
    }
    f.residual = res;
  }
  if (!(f.residual <= settings_.tol)) {
    std::ostringstream os;
    os << "direct solve reached relative residual " << f.residual << " above tolerance " << settings_.tol;
    throw SolverError(os.str());
  }
  return f;
}

DisplacementField solve_displacement(const LinearSystem& sys, double tol, int max_iter) {
  SolverSettings s;
  s.tol = tol;
  s.max_iter = max_iter;
  DisplacementSolver solver(s);
  return solver.solve(sys);
}

DisplacementField solve_cg(const LinearSystem& sys, double tol, int max_iter) {
  const long n = sys.A.rows();
  DisplacementField f;
  f.revision = sys.revision;
  f.direct = false;
  f.u = Eigen::VectorXd::Zero(n);
  const double bnorm = sys.b.norm();
  if (bnorm == 0.0) return f;
  Eigen::VectorXd dinv = sys.A.diagonal();
  for (long i = 0; i < n; ++i) {
    if (!(dinv[i] > 0.0)) throw SolverError("nonpositive diagonal entry; the Nitsche penalty beta is likely too small");
    dinv[i] = 1.0 / dinv[i];
  }
  Eigen::VectorXd r = sys.b;
  Eigen::VectorXd z = dinv.cwiseProduct(r);
  Eigen::VectorXd p = z;
  double rz = r.dot(z);
  for (int it = 1; it <= max_iter; ++it) {
    const Eigen::VectorXd Ap = sys.A * p;
    const double pAp = p.dot(Ap);
    if (!(pAp > 0.0)) throw SolverError("negative curvature in CG; the Nitsche penalty beta is likely too small");
    const double alpha = rz / pAp;
    f.u += alpha * p;
    r -= alpha * Ap;
    f.iterations = it;
    f.residual = r.norm() / bnorm;
    if (f.residual <= tol) {
      f.residual = relative_residual(sys, f.u, bnorm);
      if (f.residual <= tol) return f;
      r = sys.b - sys.A * f.u;
    }
    z = dinv.cwiseProduct(r);
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  std::ostringstream os;
  os << "CG did not converge in " << max_iter << " iterations (relative residual " << f.residual << ")";
  throw SolverError(os.str());
}

double compliance(const DisplacementField& u, const LinearSystem& sys) { return sys.b.dot(u.u); }

double von_mises(const Mat2& s, double szz) {
  const double sxx = s(0, 0), syy = s(1, 1), sxy = 0.5 * (s(0, 1) + s(1, 0));
  const double v = 0.5 * ((sxx - syy) * (sxx - syy) + (syy - szz) * (syy - szz) + (szz - sxx) * (szz - sxx)) +
                   3.0 * sxy * sxy;
  return std::sqrt(std::max(0.0, v));
}

Vec2 displacement_at(const Discretization& disc, const Eigen::VectorXd& u, int subdomain, int element,
                     const Vec2& grid) {
  const SubdomainSpace& sp = disc.spaces()[subdomain];
  const BasisEval be = eval_basis(sp.space, sp.map, element, grid);
  const auto dofs = sp.space.element_dofs(element);
  Vec2 v = Vec2::Zero();
  for (std::size_t a = 0; a < dofs.size(); ++a)
    v += be.N[a] * Vec2(u[sp.eq_offset + 2 * dofs[a]], u[sp.eq_offset + 2 * dofs[a] + 1]);
  return v;
}

StressSample stress_at(const Discretization& disc, const Eigen::VectorXd& u, double chi, int subdomain, int element,
                       const Vec2& grid) {
  const SubdomainSpace& sp = disc.spaces()[subdomain];
  const BasisEval be = eval_basis(sp.space, sp.map, element, grid);
  const auto dofs = sp.space.element_dofs(element);
  Mat2 grad_u = Mat2::Zero();
  for (std::size_t a = 0; a < dofs.size(); ++a) {
    const Vec2 ua(u[sp.eq_offset + 2 * dofs[a]], u[sp.eq_offset + 2 * dofs[a] + 1]);
    grad_u += ua * be.grad[a].transpose();
  }
  const Mat2 eps = 0.5 * (grad_u + grad_u.transpose());
  const double mu = chi * sp.mu_hat, lambda = chi * sp.lambda_hat;
  StressSample s;
  s.valid = true;
  s.subdomain = subdomain;
  s.x = sp.map.to_physical(grid);
  s.sigma = 2.0 * mu * eps + lambda * eps.trace() * Mat2::Identity();
  s.sigma_zz = disc.definition().plane == PlaneMode::Strain ? lambda * eps.trace() : 0.0;
  s.von_mises = von_mises(s.sigma, s.sigma_zz);
  return s;
}

std::vector<StressSample> stress_field(const Discretization& disc, const Eigen::VectorXd& u, const Eigen::VectorXd& chi,
                                       const std::vector<Vec2>& samples) {
  std::vector<StressSample> out;
  out.reserve(samples.size());
  const auto& geo = disc.definition().geometry;
  const int k = disc.definition().density_level;
  for (const Vec2& x : samples) {
    StressSample s;
    s.x = x;
    bool done = false;
    for (int id = 1; id < geo.num_subdomains() && !done; ++id) {
      const SubdomainSpace& sp = disc.spaces()[id];
      Vec2 g;
      if (!sp.map.to_grid(x, g)) continue;
      const int e = sp.space.locate(g);
      if (e < 0) continue;
      const Patch& P = geo.patches[id - 1];
      const int f = 1 << k;
      const int ci = std::min(static_cast<int>(g.x() * f), P.nx * f - 1);
      const int cj = std::min(static_cast<int>(g.y() * f), P.ny * f - 1);
      const int cell = disc.cell_index(id, ci + P.nx * f * cj);
      s = stress_at(disc, u, chi[cell], id, e, g);
      s.x = x;
      done = true;
    }
    if (!done && geo.design.contains(x)) {
      const Vec2 gk = disc.cell_mesh().to_grid(x);
      const int c = disc.cell_mesh().locate(gk);
      const int idx = c >= 0 ? disc.cell_index(0, c) : -1;
      if (idx >= 0) {
        s = stress_at(disc, u, chi[idx], 0, disc.cells()[idx].element, disc.fe_mesh().to_grid(x));
        s.x = x;
      }
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace cutopt
