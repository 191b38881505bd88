#include "cutopt/assembly/assemble.hpp"

#include <iomanip>
#include <ostream>

namespace cutopt {

namespace {

LinearSystem empty_system(const Discretization& disc) {
  LinearSystem s;
  s.A = disc.pattern();
  s.b = Eigen::VectorXd::Zero(disc.num_equations());
  s.revision = disc.revision();
  return s;
}

void add_bulk(const Discretization& disc, const Eigen::VectorXd& chi, LinearSystem& s) {
  double* val = s.A.valuePtr();
  const auto& cells = disc.cells();
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const DensityCell& dc = cells[c];
    const double x = chi[c];
    const int m = static_cast<int>(dc.eqs.size());
    for (int col = 0; col < m; ++col)
      for (int r = 0; r < m; ++r) val[dc.scatter[r * m + col]] += x * dc.K(r, col);
    for (int r = 0; r < m; ++r) s.b[dc.eqs[r]] += x * dc.f[r];
  }
  for (const TracePoint& tp : disc.traces()) {
    if (tp.kind != TagKind::Neumann) continue;
    const TraceSideData& sd = tp.side[0];
    const double x = chi[sd.cell];
    for (std::size_t a = 0; a < sd.N.size(); ++a) {
      s.b[sd.eqs[2 * a]] += x * tp.weight * sd.N[a] * tp.traction.x();
      s.b[sd.eqs[2 * a + 1]] += x * tp.weight * sd.N[a] * tp.traction.y();
    }
  }
}

void add_nitsche(const Discretization& disc, const Eigen::VectorXd& chi, double beta, LinearSystem& s) {
  double* val = s.A.valuePtr();
  for (const TracePoint& tp : disc.traces()) {
    if (tp.kind != TagKind::Dirichlet && tp.kind != TagKind::Interface) continue;
    const double chi_i = chi[tp.side[0].cell];
    const double chi_j = tp.two_sided() ? chi[tp.side[1].cell] : 0.0;
    const Eigen::MatrixXd M = nitsche_local_matrix(tp, chi_i, chi_j, beta);
    const int m = static_cast<int>(tp.eqs.size());
    for (int col = 0; col < m; ++col)
      for (int r = 0; r < m; ++r) val[tp.scatter[r * m + col]] += M(r, col);
  }
}

void add_ghost(const Discretization& disc, LinearSystem& s) {
  const auto& g = disc.ghost_values();
  double* val = s.A.valuePtr();
  for (std::size_t k = 0; k < g.size(); ++k) val[k] += g[k];
}

// Unit-density traction sigma_hat(psi) n of vector basis function
// (a, comp) on one side.
Vec2 unit_traction(const TraceSideData& sd, int a, int comp, const Vec2& n) {
  const Vec2& g = sd.grad[a];
  Mat2 grad_u = Mat2::Zero();  // grad_u(r, c) = d u_r / d x_c
  grad_u.row(comp) = g.transpose();
  const Mat2 eps = 0.5 * (grad_u + grad_u.transpose());
  const Mat2 sig = 2.0 * sd.mu_hat * eps + sd.lambda_hat * eps.trace() * Mat2::Identity();
  return sig * n;
}

}  // namespace

Eigen::MatrixXd nitsche_local_matrix(const TracePoint& tp, double chi_i, double chi_j, double beta) {
  const auto c = nitsche_coeffs<double>(tp, chi_i, chi_j);
  const int m = static_cast<int>(tp.eqs.size());
  std::vector<Vec2> J(m), T(m);
  int k = 0;
  for (int s = 0; s < (tp.two_sided() ? 2 : 1); ++s) {
    const TraceSideData& sd = tp.side[s];
    const double sign = s == 0 ? 1.0 : -1.0;
    const double scale = s == 0 ? c.scale_i : c.scale_j;
    for (std::size_t a = 0; a < sd.N.size(); ++a)
      for (int comp = 0; comp < 2; ++comp, ++k) {
        J[k] = Vec2::Zero();
        J[k][comp] = sign * sd.N[a];
        T[k] = scale * unit_traction(sd, static_cast<int>(a), comp, tp.normal);
      }
  }
  Eigen::MatrixXd M(m, m);
  const Vec2& n = tp.normal;
  for (int r = 0; r < m; ++r)
    for (int col = 0; col < m; ++col) {
      M(r, col) = tp.weight * (beta * (c.pen_mu * J[r].dot(J[col]) + c.pen_lambda * J[r].dot(n) * J[col].dot(n)) -
                               T[col].dot(J[r]) - J[col].dot(T[r]));
    }
  return M;
}

TraceState trace_state(const TracePoint& tp, const Eigen::VectorXd& u) {
  TraceState st;
  for (int s = 0; s < (tp.two_sided() ? 2 : 1); ++s) {
    const TraceSideData& sd = tp.side[s];
    Vec2 val = Vec2::Zero();
    Mat2 grad_u = Mat2::Zero();
    for (std::size_t a = 0; a < sd.N.size(); ++a) {
      const Vec2 ua(u[sd.eqs[2 * a]], u[sd.eqs[2 * a + 1]]);
      val += sd.N[a] * ua;
      grad_u += ua * sd.grad[a].transpose();
    }
    const Mat2 eps = 0.5 * (grad_u + grad_u.transpose());
    const Vec2 t = (2.0 * sd.mu_hat * eps + sd.lambda_hat * eps.trace() * Mat2::Identity()) * tp.normal;
    if (s == 0) {
      st.jump += val;
      st.traction_i = t;
    } else {
      st.jump -= val;
      st.traction_j = t;
    }
  }
  return st;
}

LinearSystem assemble_bulk(const Discretization& disc, const Eigen::VectorXd& chi) {
  LinearSystem s = empty_system(disc);
  add_bulk(disc, chi, s);
  return s;
}

LinearSystem assemble_nitsche(const Discretization& disc, const Eigen::VectorXd& chi, double beta) {
  LinearSystem s = empty_system(disc);
  add_nitsche(disc, chi, beta, s);
  return s;
}

LinearSystem assemble_ghost_penalty(const Discretization& disc) {
  LinearSystem s = empty_system(disc);
  add_ghost(disc, s);
  return s;
}

LinearSystem assemble_system(const Discretization& disc, const Eigen::VectorXd& chi) {
  if (chi.size() != static_cast<int>(disc.cells().size()))
    throw std::invalid_argument("chi must have one entry per density cell");
  LinearSystem s = empty_system(disc);
  add_bulk(disc, chi, s);
  add_nitsche(disc, chi, disc.definition().nitsche.beta, s);
  add_ghost(disc, s);
  s.revision = disc.bump_revision();
  return s;
}

void write_matrix_market_like(std::ostream& os, const Eigen::SparseMatrix<double>& A) {
  os << "# cutopt matrix v1\n";
  os << "# rows cols nonzeros\n";
  os << A.rows() << ' ' << A.cols() << ' ' << A.nonZeros() << '\n';
  os << std::setprecision(17);
  for (int col = 0; col < A.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, col); it; ++it)
      os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
}

}  // namespace cutopt
