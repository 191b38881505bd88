#include "cutopt/model.hpp"

#include <cmath>
#include <sstream>

namespace cutopt {

MaterialParams lame_from_engineering(double E, double nu) {
  if (!(E > 0.0) || !std::isfinite(E)) {
    std::ostringstream os;
    os << "Young's modulus must be positive and finite, got " << E;
    throw ConfigError(os.str());
  }
  if (!(nu >= 0.0)) {
    std::ostringstream os;
    os << "Poisson's ratio must be non-negative, got " << nu;
    throw ConfigError(os.str());
  }
  if (!(nu < 0.5)) {
    std::ostringstream os;
    os << "Poisson's ratio " << nu
       << " is at or beyond the incompressible limit 0.5; only compressible materials are supported";
    throw ConfigError(os.str());
  }
  MaterialParams m;
  m.E = E;
  m.nu = nu;
  m.mu_hat = E / (2.0 * (1.0 + nu));
  m.lambda_hat = E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
  return m;
}

double effective_lambda(const MaterialParams& m, PlaneMode mode) {
  if (mode == PlaneMode::Strain) return m.lambda_hat;
  return 2.0 * m.mu_hat * m.lambda_hat / (m.lambda_hat + 2.0 * m.mu_hat);
}

void DensityModel::validate() const {
  if (!(chi_min > 0.0 && chi_min < 1.0))
    throw ConfigError("density.chi_min must lie in (0, 1)");
  if (!(q >= 1.0)) throw ConfigError("density.q must be >= 1");
  if (!(delta_vol > 0.0 && delta_vol <= 1.0))
    throw ConfigError("density.volume_fraction must lie in (0, 1]");
  if (ramp_iters < 0) throw ConfigError("density.ramp must be >= 0");
}

namespace {
void check_rho(double rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) {
    std::ostringstream os;
    os << "density value " << rho << " outside [0, 1]";
    throw std::domain_error(os.str());
  }
}
}  // namespace

double chi_from_rho(double rho, const DensityModel& model) {
  check_rho(rho);
  return model.chi_min + std::pow(rho, model.q) * (1.0 - model.chi_min);
}

double dchi_drho(double rho, const DensityModel& model) {
  check_rho(rho);
  if (rho == 0.0) return model.q == 1.0 ? (1.0 - model.chi_min) : 0.0;
  return model.q * std::pow(rho, model.q - 1.0) * (1.0 - model.chi_min);
}

double Polynomial2::operator()(const Vec2& p) const {
  double s = 0.0;
  for (const auto& t : terms) s += t.coef * std::pow(p.x(), t.px) * std::pow(p.y(), t.py);
  return s;
}

const TractionLoad* LoadSpec::find_traction(const std::string& tag) const {
  for (const auto& t : tractions)
    if (t.tag == tag) return &t;
  return nullptr;
}

}  // namespace cutopt
