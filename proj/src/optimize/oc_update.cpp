#include "cutopt/optimize/oc_update.hpp"

#include "cutopt/common.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cutopt {

double chi_volume_fraction(const Eigen::VectorXd& rho, const Eigen::VectorXd& volumes, const DensityModel& model) {
  double num = 0.0, den = 0.0;
  for (int k = 0; k < rho.size(); ++k) {
    num += chi_from_rho(rho[k], model) * volumes[k];
    den += volumes[k];
  }
  return num / den;
}

Eigen::VectorXd oc_step(const Eigen::VectorXd& rho, const Eigen::VectorXd& dpi, const Eigen::VectorXd& dlambda,
                        const Eigen::VectorXd& volumes, double eta, const OcSettings& s) {
  Eigen::VectorXd out(rho.size());
  for (int k = 0; k < rho.size(); ++k) {
    const double dl = std::max(dlambda[k], s.guard * volumes[k]);
    double B = std::max(0.0, -dpi[k] / (eta * dl));
    if (s.damping != 1.0) B = std::pow(B, s.damping);
    const double lo = std::max(0.0, rho[k] - s.move);
    const double hi = std::min(1.0, rho[k] + s.move);
    out[k] = std::clamp(rho[k] * B, lo, hi);
  }
  return out;
}

OcResult oc_update(const Eigen::VectorXd& rho, const Eigen::VectorXd& dpi, const Eigen::VectorXd& dlambda,
                   const Eigen::VectorXd& volumes, double target, const DensityModel& model, const OcSettings& s) {
  if (!(s.move > 0.0 && s.move <= 1.0)) throw ConfigError("move limit must be in (0, 1]");
  double lo = s.eta_min, hi = s.eta_max;
  OcResult r;
  // Volume decreases with eta.
  const double v_lo = chi_volume_fraction(oc_step(rho, dpi, dlambda, volumes, lo, s), volumes, model);
  const double v_hi = chi_volume_fraction(oc_step(rho, dpi, dlambda, volumes, hi, s), volumes, model);
  if (v_lo < target - s.volume_tol || v_hi > target + s.volume_tol) {
    std::ostringstream os;
    os << "volume bisection failed: target " << target << " outside [" << v_hi << ", " << v_lo
       << "] reachable for eta in [" << lo << ", " << hi << "]";
    const long nonneg = (dpi.array() >= 0.0).count();
    if (v_lo < target && nonneg > 0)
      os << "; " << nonneg << " cells have nonnegative sensitivity and can only lose material"
         << " (loads applied to the design domain scale with its density)";
    throw SolverError(os.str());
  }
  for (int it = 1; it <= s.max_bisections; ++it) {
    const double eta = std::sqrt(lo * hi);
    r.rho = oc_step(rho, dpi, dlambda, volumes, eta, s);
    r.volume = chi_volume_fraction(r.rho, volumes, model);
    r.eta = eta;
    r.bisections = it;
    if (std::abs(r.volume - target) <= s.volume_tol) return r;
    if (r.volume > target)
      lo = eta;
    else
      hi = eta;
  }
  if (std::abs(r.volume - target) <= 10 * s.volume_tol) return r;
  std::ostringstream os;
  os << "volume bisection did not converge: volume " << r.volume << ", target " << target << ", bracket [" << lo
     << ", " << hi << "]";
  throw SolverError(os.str());
}

}  // namespace cutopt
