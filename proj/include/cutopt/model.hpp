#pragma once

#include "cutopt/common.hpp"

#include <functional>
#include <string>
#include <vector>

namespace cutopt {

/// Isotropic linear-elastic material. The hatted Lamé parameters are the
/// full-density values; the assembled parameters are chi * mu_hat and
/// chi * lambda_hat.
struct MaterialParams {
  double E = 1.0;
  double nu = 0.3;
  double mu_hat = 0.0;
  double lambda_hat = 0.0;
};

/// Plane strain uses the 3D Lamé relations directly; plane stress replaces
/// lambda by 2 mu lambda / (lambda + 2 mu).
enum class PlaneMode { Strain, Stress };

/// Throws ConfigError unless E > 0 and 0 <= nu < 0.5.
MaterialParams lame_from_engineering(double E, double nu);

/// Lambda as used in the 2D constitutive law for the given plane mode.
double effective_lambda(const MaterialParams& m, PlaneMode mode);

/// SIMP density model with a linear volume-target ramp.
struct DensityModel {
  double chi_min = 1e-6;
  double q = 3.0;
  double delta_vol = 0.5;
  int ramp_iters = 100;

  void validate() const;
};

/// chi = chi_min + rho^q (1 - chi_min). Throws std::domain_error for rho
/// outside [0, 1].
double chi_from_rho(double rho, const DensityModel& model);
double dchi_drho(double rho, const DensityModel& model);

/// Sum of coef * x^px * y^py.
struct Polynomial2 {
  struct Term {
    double coef = 0.0;
    int px = 0;
    int py = 0;
    bool operator==(const Term&) const = default;
  };
  std::vector<Term> terms;

  double operator()(const Vec2& x) const;
  bool operator==(const Polynomial2&) const = default;

  static Polynomial2 constant(double c) { return Polynomial2{{{c, 0, 0}}}; }
};

struct PolyVectorField {
  Polynomial2 x;
  Polynomial2 y;

  Vec2 operator()(const Vec2& p) const { return {x(p), y(p)}; }
  bool operator==(const PolyVectorField&) const = default;
};

using VectorField = std::function<Vec2(const Vec2&)>;

struct TractionLoad {
  std::string tag;  ///< name used by "neumann:<tag>" boundary tags
  VectorField traction;
};

/// Unscaled load data; the assembly multiplies everything by chi.
struct LoadSpec {
  /// Per subdomain; an empty function means no body force.
  std::vector<VectorField> body_force;
  std::vector<TractionLoad> tractions;

  const TractionLoad* find_traction(const std::string& tag) const;
};

}  // namespace cutopt
