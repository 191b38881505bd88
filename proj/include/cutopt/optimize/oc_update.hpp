#pragma once

#include "cutopt/model.hpp"

#include <Eigen/Dense>

namespace cutopt {

struct OcSettings {
  double move = 0.2;
  double damping = 1.0;  ///< exponent on B; 0.5 gives the classical damped update
  double eta_min = 1e-9;
  double eta_max = 1e9;
  int max_bisections = 100;
  double volume_tol = 1e-7;
  double guard = 1e-6;  ///< lower bound on dLambda relative to the cell volume
};

struct OcResult {
  Eigen::VectorXd rho;
  double eta = 0.0;
  double volume = 0.0;  ///< sum(chi V) / sum(V) after the update
  int bisections = 0;
};

/// rho_k B_k clamped to [max(0, rho_k - m), min(1, rho_k + m)] with
/// B_k = (-dpi_k / (eta dlambda_k))^damping; eta is bisected
/// geometrically until the chi-weighted volume fraction hits target.
/// Throws SolverError when the target lies outside the bracket.
OcResult oc_update(const Eigen::VectorXd& rho, const Eigen::VectorXd& dpi, const Eigen::VectorXd& dlambda,
                   const Eigen::VectorXd& volumes, double target, const DensityModel& model,
                   const OcSettings& settings = {});

/// Update for a fixed eta (the inner step of the bisection).
Eigen::VectorXd oc_step(const Eigen::VectorXd& rho, const Eigen::VectorXd& dpi, const Eigen::VectorXd& dlambda,
                        const Eigen::VectorXd& volumes, double eta, const OcSettings& settings);

double chi_volume_fraction(const Eigen::VectorXd& rho, const Eigen::VectorXd& volumes, const DensityModel& model);

}  // namespace cutopt
