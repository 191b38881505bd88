#include "cutopt/model.hpp"
#include "cutopt/optimize/sensitivities.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace cutopt;

TEST_CASE("Lame parameters from E and nu") {
  const MaterialParams m = lame_from_engineering(1.0, 0.3);
  CHECK(m.mu_hat == doctest::Approx(1.0 / 2.6).epsilon(1e-15));
  CHECK(m.lambda_hat == doctest::Approx(0.3 / (1.3 * 0.4)).epsilon(1e-15));
  // Plane stress: lambda* = E nu / (1 - nu^2)
  CHECK(effective_lambda(m, PlaneMode::Stress) == doctest::Approx(0.3 / 0.91).epsilon(1e-14));
  CHECK(effective_lambda(m, PlaneMode::Strain) == m.lambda_hat);
}

TEST_CASE("incompressible and invalid materials are rejected") {
  CHECK_THROWS_AS(lame_from_engineering(1.0, 0.5), ConfigError);
  CHECK_THROWS_AS(lame_from_engineering(1.0, -0.1), ConfigError);
  CHECK_THROWS_AS(lame_from_engineering(0.0, 0.3), ConfigError);
  try {
    lame_from_engineering(1.0, 0.5);
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("incompressible") != std::string::npos);
  }
}

TEST_CASE("SIMP map and its derivative") {
  DensityModel m;
  CHECK(chi_from_rho(0.0, m) == doctest::Approx(1e-6));
  CHECK(chi_from_rho(1.0, m) == 1.0);
  CHECK(chi_from_rho(0.5, m) == doctest::Approx(1e-6 + 0.125 * (1 - 1e-6)).epsilon(1e-15));
  for (double r : {0.1, 0.37, 0.8}) {
    const double h = 1e-6;
    const double fd = (chi_from_rho(r + h, m) - chi_from_rho(r - h, m)) / (2 * h);
    CHECK(dchi_drho(r, m) == doctest::Approx(fd).epsilon(1e-8));
  }
  CHECK_THROWS_AS(chi_from_rho(1.1, m), std::domain_error);
  CHECK_THROWS_AS(chi_from_rho(-0.1, m), std::domain_error);
}

TEST_CASE("density model validation") {
  DensityModel m;
  m.validate();
  m.chi_min = 0.0;
  CHECK_THROWS_AS(m.validate(), ConfigError);
  m.chi_min = 1e-6;
  m.q = 0.5;
  CHECK_THROWS_AS(m.validate(), ConfigError);
}

TEST_CASE("volume ramp") {
  DensityModel m;
  CHECK(volume_target(0, m) == 1.0);
  CHECK(volume_target(50, m) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(volume_target(100, m) == 0.5);
  CHECK(volume_target(250, m) == 0.5);
  m.ramp_iters = 0;
  CHECK(volume_target(0, m) == 0.5);
}

TEST_CASE("polynomial loads") {
  Polynomial2 p{{{2.0, 1, 0}, {-1.0, 0, 2}, {0.5, 0, 0}}};
  std::mt19937 gen(3);
  std::uniform_real_distribution<double> d(-2, 2);
  for (int k = 0; k < 10; ++k) {
    const Vec2 x(d(gen), d(gen));
    CHECK(p(x) == doctest::Approx(2 * x.x() - x.y() * x.y() + 0.5).epsilon(1e-14));
  }
  LoadSpec loads;
  loads.tractions.push_back({"tip", PolyVectorField{Polynomial2::constant(0), Polynomial2::constant(-1)}});
  REQUIRE(loads.find_traction("tip") != nullptr);
  CHECK(loads.find_traction("tip")->traction(Vec2(3, 4)).y() == -1.0);
  CHECK(loads.find_traction("other") == nullptr);
}
