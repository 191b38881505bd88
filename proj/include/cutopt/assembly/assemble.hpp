#pragma once

#include "cutopt/assembly/discretization.hpp"
#include "cutopt/assembly/traces.hpp"

#include <Eigen/Sparse>

#include <iosfwd>

namespace cutopt {

struct LinearSystem {
  Eigen::SparseMatrix<double> A;
  Eigen::VectorXd b;
  long revision = 0;  ///< discretization revision at assembly time
};

/// Bulk stiffness a_h with mu = chi mu_hat, lambda = chi lambda_hat, plus
/// body force and Neumann loads scaled by chi. chi has one entry per
/// density cell.
LinearSystem assemble_bulk(const Discretization& disc, const Eigen::VectorXd& chi);

/// beta b_h + c_h on interfaces and Dirichlet boundaries.
LinearSystem assemble_nitsche(const Discretization& disc, const Eigen::VectorXd& chi, double beta);

/// Ghost penalty s_h (independent of chi).
LinearSystem assemble_ghost_penalty(const Discretization& disc);

/// Full system A_h = a_h + s_h + beta b_h + c_h with the load l_h. Each
/// call advances the discretization revision.
LinearSystem assemble_system(const Discretization& disc, const Eigen::VectorXd& chi);

/// Coefficients of the Nitsche terms at one trace point:
/// {sigma(v) n} = scale_i sigma_hat_i(v_i) n + scale_j sigma_hat_j(v_j) n.
template <class T>
struct NitscheCoeffs {
  T scale_i, scale_j;
  T pen_mu, pen_lambda;
};

template <class T>
NitscheCoeffs<T> nitsche_coeffs(const TracePoint& tp, T chi_i, T chi_j) {
  const TraceSideData& a = tp.side[0];
  if (!tp.two_sided()) {
    const auto w = boundary_weights<T>(chi_i * T(a.mu_hat), chi_i * T(a.lambda_hat), a.h);
    return {chi_i, T(0.0), w.pen_mu, w.pen_lambda};
  }
  const TraceSideData& b = tp.side[1];
  const auto w = interface_weights<T>(chi_i * T(a.mu_hat), chi_j * T(b.mu_hat), chi_i * T(a.lambda_hat),
                                      chi_j * T(b.lambda_hat), a.h, b.h);
  return {w.omega_i * chi_i, w.omega_j * chi_j, w.pen_mu, w.pen_lambda};
}

/// Per-point quantities of a displacement vector u: jump [u] and the
/// unit-density tractions sigma_hat(u_i) n, sigma_hat(u_j) n.
struct TraceState {
  Vec2 jump{0.0, 0.0};
  Vec2 traction_i{0.0, 0.0};
  Vec2 traction_j{0.0, 0.0};
};

TraceState trace_state(const TracePoint& tp, const Eigen::VectorXd& u);

/// u^T (beta b_h + c_h)|_point u for given chi on both sides.
template <class T>
T nitsche_energy(const TracePoint& tp, const TraceState& st, T chi_i, T chi_j, double beta) {
  const auto c = nitsche_coeffs<T>(tp, chi_i, chi_j);
  const double jj = st.jump.squaredNorm();
  const double jn = st.jump.dot(tp.normal);
  const double ti = st.traction_i.dot(st.jump), tj = st.traction_j.dot(st.jump);
  return T(tp.weight) * (T(beta) * (c.pen_mu * T(jj) + c.pen_lambda * T(jn * jn)) -
                         T(2.0) * (c.scale_i * T(ti) + c.scale_j * T(tj)));
}

/// Dense local Nitsche matrix of a trace point (equations tp.eqs).
Eigen::MatrixXd nitsche_local_matrix(const TracePoint& tp, double chi_i, double chi_j, double beta);

/// Coordinate-format dump: header, then "row col value" per nonzero
/// (0-based).
void write_matrix_market_like(std::ostream& os, const Eigen::SparseMatrix<double>& A);

}  // namespace cutopt
