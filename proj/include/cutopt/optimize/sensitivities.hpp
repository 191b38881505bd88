#pragma once

#include "cutopt/assembly/assemble.hpp"
#include "cutopt/solve/solve.hpp"

namespace cutopt {

/// Step of the volume constraint ramp for iteration i.
double volume_target(int i, const DensityModel& model);

struct Sensitivities {
  Eigen::VectorXd dpi;      ///< dPi/drho for every density cell (nondesign cells at rho = 1)
  Eigen::VectorXd dlambda;  ///< dLambda/drho for design cells
};

/// Derivatives of the discrete Ritz functional Pi = 2 l(u) - A(u, u) at
/// the solution u: bulk terms, chi-scaled loads and the Nitsche terms on
/// both sides of every trace point. rho holds the design densities used
/// for the last assembly; throws std::logic_error if u is stale.
Sensitivities compute_sensitivities(const Discretization& disc, const DisplacementField& u, const Eigen::VectorXd& rho);

/// dPi/dchi per density cell (without the chain-rule factor).
Eigen::VectorXd energy_derivatives(const Discretization& disc, const Eigen::VectorXd& u, const Eigen::VectorXd& chi);

}  // namespace cutopt
