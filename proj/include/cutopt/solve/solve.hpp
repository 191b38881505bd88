#pragma once

#include "cutopt/assembly/assemble.hpp"

#include <Eigen/SparseCholesky>

#include <vector>

namespace cutopt {

struct SolverSettings {
  enum class Method { Auto, Direct, CG };
  Method method = Method::Auto;
  double tol = 1e-10;  ///< relative residual
  int max_iter = 20000;  ///< CG iterations
  int cg_threshold = 100000;  ///< Auto switches to CG above this many equations
};

struct DisplacementField {
  Eigen::VectorXd u;
  long revision = -1;
  int iterations = 0;
  double residual = 0.0;  ///< relative residual |Au - b| / |b|
  bool direct = true;
};

/// Keeps the symbolic factorization between solves with the same pattern.
class DisplacementSolver {
 public:
  explicit DisplacementSolver(SolverSettings settings = {}) : settings_(settings) {}
  DisplacementField solve(const LinearSystem& sys);
  const SolverSettings& settings() const { return settings_; }

 private:
  SolverSettings settings_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;
  long analyzed_nnz_ = -1;
  long analyzed_rows_ = -1;
};

DisplacementField solve_displacement(const LinearSystem& sys, double tol = 1e-10, int max_iter = 20000);

/// Jacobi-preconditioned CG; throws SolverError on negative curvature or
/// when max_iter is exhausted.
DisplacementField solve_cg(const LinearSystem& sys, double tol, int max_iter);

/// l_h(u) = b^T u
double compliance(const DisplacementField& u, const LinearSystem& sys);

struct StressSample {
  Vec2 x{0.0, 0.0};
  bool valid = false;
  int subdomain = -1;
  Mat2 sigma = Mat2::Zero();
  double sigma_zz = 0.0;
  double von_mises = 0.0;
};

/// Von Mises stress of an in-plane stress tensor with out-of-plane
/// normal stress szz.
double von_mises(const Mat2& s, double szz);

/// Stress sampled at physical points; points outside every active region
/// are returned with valid = false.
std::vector<StressSample> stress_field(const Discretization& disc, const Eigen::VectorXd& u, const Eigen::VectorXd& chi,
                                       const std::vector<Vec2>& samples);

/// Displacement at a point of a subdomain given its FE grid coordinates.
Vec2 displacement_at(const Discretization& disc, const Eigen::VectorXd& u, int subdomain, int element,
                     const Vec2& grid);

/// Stress at a point of a subdomain given its FE grid coordinates.
StressSample stress_at(const Discretization& disc, const Eigen::VectorXd& u, double chi, int subdomain, int element,
                       const Vec2& grid);

}  // namespace cutopt
