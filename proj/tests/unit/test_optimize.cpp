#include "cutopt/cli_io/config.hpp"
#include "cutopt/cli_io/problem_builder.hpp"
#include "cutopt/optimize/filter.hpp"
#include "cutopt/optimize/oc_update.hpp"
#include "cutopt/optimize/optimizer.hpp"
#include "cutopt/optimize/sensitivities.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace cutopt;

namespace {

std::vector<Vec2> grid_centroids(int nx, int ny, double d) {
  std::vector<Vec2> c;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) c.push_back(Vec2((i + 0.5) * d, (j + 0.5) * d));
  return c;
}

// Straight from the definition, with no neighbor lists.
Eigen::VectorXd brute_force_filter(const std::vector<Vec2>& cen, int n_design, double r, const Eigen::VectorXd& raw,
                                   const Eigen::VectorXd& rho, const Eigen::VectorXd& vol, double gamma) {
  const int n = static_cast<int>(cen.size());
  Eigen::VectorXd out(n_design);
  for (int k = 0; k < n_design; ++k) {
    double num = 0.0, den = 0.0;
    for (int j = 0; j < n; ++j) {
      const double w = std::max(0.0, r - (cen[k] - cen[j]).norm());
      const double rj = j < n_design ? rho[j] : 1.0;
      num += w * rj * raw[j] / std::max(vol[j], gamma);
      den += w;
    }
    out[k] = vol[k] / std::max(rho[k], gamma) * num / den;
  }
  return out;
}

// Design square [0, 0.5]^2 meshed by a single density cell, loaded through a
// bilinear block glued to its right edge.
const char* kSingleCell = R"({
  "geometry": {
    "design": [[
      {"line": [0, 0], "tag": "free"},
      {"line": [0.5, 0], "tag": "interface:1"},
      {"line": [0.5, 0.5], "tag": "free"},
      {"line": [0, 0.5], "tag": "dirichlet"}
    ]],
    "patches": [{
      "map": {"type": "bilinear", "corners": [[0.5, 0], [1, 0], [1, 0.5], [0.5, 0.5]]},
      "nx": 1, "ny": 1,
      "edges": {"xi0": "interface:0", "xi1": "neumann:tip"}
    }]
  },
  "mesh": {"h": 1.0, "angle": 0.0, "density_level": 1},
  "loads": {"tractions": {"tip": {"y": -1}}},
  "density": {"ramp_iters": 4},
  "filter": {"radius": 0.3}
})";

// Two design cells side by side; the block sits on top of the right one.
const char* kTwoCell = R"({
  "geometry": {
    "design": [[
      {"line": [0, 0], "tag": "free"},
      {"line": [1, 0], "tag": "free"},
      {"line": [1, 0.5], "tag": "interface:1"},
      {"line": [0.5, 0.5], "tag": "free"},
      {"line": [0, 0.5], "tag": "dirichlet"}
    ]],
    "patches": [{
      "map": {"type": "bilinear", "corners": [[0.5, 0.5], [1, 0.5], [1, 0.75], [0.5, 0.75]]},
      "nx": 1, "ny": 1,
      "edges": {"eta0": "interface:0", "eta1": "neumann:top"}
    }]
  },
  "mesh": {"h": 1.0, "angle": 0.0, "density_level": 1},
  "loads": {"tractions": {"top": {"y": -1}}},
  "density": {"ramp_iters": 10, "volume_fraction": 0.5},
  "filter": {"radius": 0.3}
})";

}  // namespace

TEST_CASE("filter is linear in the raw sensitivities") {
  const auto cen = grid_centroids(7, 5, 0.1);
  const int n = static_cast<int>(cen.size());
  const int nd = 25;
  const FilterSpec f = build_filter(cen, nd, 0.25);
  std::mt19937 gen(3);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  Eigen::VectorXd rho(nd), vol(n), x(n), y(n);
  for (int k = 0; k < nd; ++k) rho[k] = u(gen);
  for (int k = 0; k < n; ++k) {
    vol[k] = 0.01 * u(gen);
    x[k] = u(gen) - 0.5;
    y[k] = u(gen) - 0.5;
  }
  const double a = 0.7, b = -2.3;
  const Eigen::VectorXd lhs = filter_sensitivities(a * x + b * y, rho, vol, f);
  const Eigen::VectorXd rhs = a * filter_sensitivities(x, rho, vol, f) + b * filter_sensitivities(y, rho, vol, f);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-13 * rhs.cwiseAbs().maxCoeff());

  const Eigen::VectorXd ref = brute_force_filter(cen, nd, 0.25, x, rho, vol, 1e-6);
  CHECK((filter_sensitivities(x, rho, vol, f) - ref).cwiseAbs().maxCoeff() <= 1e-12 * ref.cwiseAbs().maxCoeff());
}

TEST_CASE("uniform field is a fixed point of the filter") {
  const auto cen = grid_centroids(6, 6, 0.2);
  const int n = static_cast<int>(cen.size());
  const FilterSpec f = build_filter(cen, n, 0.5);
  const Eigen::VectorXd rho = Eigen::VectorXd::Constant(n, 0.4);
  const Eigen::VectorXd vol = Eigen::VectorXd::Constant(n, 0.04);
  const Eigen::VectorXd raw = Eigen::VectorXd::Constant(n, -3.0);
  const Eigen::VectorXd out = filter_sensitivities(raw, rho, vol, f);
  for (int k = 0; k < n; ++k) CHECK(out[k] == doctest::Approx(-3.0).epsilon(1e-13));
}

TEST_CASE("filter impulse stays within the radius") {
  const auto cen = grid_centroids(9, 9, 0.1);
  const int n = static_cast<int>(cen.size());
  const double r = 0.22;
  const FilterSpec f = build_filter(cen, n, r);
  const Eigen::VectorXd rho = Eigen::VectorXd::Ones(n);
  const Eigen::VectorXd vol = Eigen::VectorXd::Constant(n, 0.01);
  Eigen::VectorXd raw = Eigen::VectorXd::Zero(n);
  const int mid = 40;
  raw[mid] = 1.0;
  const Eigen::VectorXd out = filter_sensitivities(raw, rho, vol, f);
  const Eigen::VectorXd ref = brute_force_filter(cen, n, r, raw, rho, vol, 1e-6);
  for (int k = 0; k < n; ++k) {
    CHECK(out[k] == doctest::Approx(ref[k]).epsilon(1e-12));
    if ((cen[k] - cen[mid]).norm() >= r) CHECK(out[k] == 0.0);
  }
}

TEST_CASE("oc step with a fixed multiplier") {
  OcSettings s;
  const Eigen::VectorXd rho = Eigen::VectorXd::Constant(1, 0.5);
  const Eigen::VectorXd vol = Eigen::VectorXd::Ones(1);
  // B = 1.8: rho B = 0.9 is clipped by the move limit to 0.7.
  Eigen::VectorXd r = oc_step(rho, Eigen::VectorXd::Constant(1, -1.8), Eigen::VectorXd::Ones(1), vol, 1.0, s);
  CHECK(r[0] == doctest::Approx(0.7).epsilon(1e-14));
  // B = 1.2 stays inside the limit.
  r = oc_step(rho, Eigen::VectorXd::Constant(1, -1.2), Eigen::VectorXd::Ones(1), vol, 1.0, s);
  CHECK(r[0] == doctest::Approx(0.6).epsilon(1e-14));
  // Nonnegative sensitivity gives B = 0; the lower limit applies.
  r = oc_step(rho, Eigen::VectorXd::Constant(1, 0.3), Eigen::VectorXd::Ones(1), vol, 1.0, s);
  CHECK(r[0] == doctest::Approx(0.3).epsilon(1e-14));
}

TEST_CASE("oc bisection agrees with a multiplier scan") {
  DensityModel m;
  OcSettings s;
  s.volume_tol = 1e-10;
  const Eigen::VectorXd rho = (Eigen::VectorXd(4) << 0.9, 0.5, 0.3, 0.7).finished();
  const Eigen::VectorXd dpi = (Eigen::VectorXd(4) << -2.0, -0.4, -1.1, -0.05).finished();
  const Eigen::VectorXd vol = (Eigen::VectorXd(4) << 1.0, 0.5, 0.8, 0.3).finished();
  Eigen::VectorXd dl(4);
  for (int k = 0; k < 4; ++k) dl[k] = dchi_drho(rho[k], m) * vol[k];
  const double target = 0.3;
  const OcResult res = oc_update(rho, dpi, dl, vol, target, m, s);
  CHECK(res.volume == doctest::Approx(target).epsilon(1e-8));

  // Scan log(eta) on a fine grid, keep the closest volume.
  double best = 1e300;
  Eigen::VectorXd best_rho;
  for (int i = 0; i <= 400000; ++i) {
    const double eta = std::exp(-8.0 + 16.0 * i / 400000.0);
    const Eigen::VectorXd r = oc_step(rho, dpi, dl, vol, eta, s);
    const double err = std::abs(chi_volume_fraction(r, vol, m) - target);
    if (err < best) {
      best = err;
      best_rho = r;
    }
  }
  REQUIRE(best < 1e-4);
  CHECK((res.rho - best_rho).cwiseAbs().maxCoeff() < 1e-3);
  for (int k = 0; k < 4; ++k) {
    CHECK(res.rho[k] >= std::max(0.0, rho[k] - s.move) - 1e-15);
    CHECK(res.rho[k] <= std::min(1.0, rho[k] + s.move) + 1e-15);
  }
}

TEST_CASE("oc reports an unreachable volume target") {
  DensityModel m;
  const Eigen::VectorXd rho = Eigen::VectorXd::Constant(3, 1.0);
  const Eigen::VectorXd dpi = Eigen::VectorXd::Constant(3, -1.0);
  const Eigen::VectorXd dl = Eigen::VectorXd::Constant(3, 3.0);
  const Eigen::VectorXd vol = Eigen::VectorXd::Ones(3);
  // The move limit keeps rho >= 0.8, so chi >= 0.512.
  CHECK_THROWS_AS(oc_update(rho, dpi, dl, vol, 0.2, m), SolverError);
}

TEST_CASE("single design cell ends at the target volume") {
  ProblemConfig c = parse_config(kSingleCell);
  Discretization disc(build_problem(c));
  REQUIRE(disc.num_design_cells() == 1);
  const OptimizationState st = run_optimization(disc, build_settings(c), 8);
  const DensityModel& m = disc.definition().density;
  CHECK(chi_from_rho(st.rho[0], m) == doctest::Approx(0.5).epsilon(1e-6));
  for (const auto& row : st.history) CHECK(row.volume_actual == doctest::Approx(row.volume_target).epsilon(1e-6));
}

TEST_CASE("two cell design matches a compliance scan") {
  ProblemConfig c = parse_config(kTwoCell);
  Discretization disc(build_problem(c));
  REQUIRE(disc.num_design_cells() == 2);
  const DensityModel& m = disc.definition().density;
  const double v0 = disc.cells()[0].volume, v1 = disc.cells()[1].volume;
  const double budget = m.delta_vol * (v0 + v1);

  // Exhaustive scan over the feasible line chi0 V0 + chi1 V1 = budget,
  // away from chi_min where the system is too ill-conditioned to solve.
  Optimizer probe(disc, build_settings(c));
  double best_c = 1e300, best_chi0 = 0.0;
  const double lo = std::max(0.01, (budget - v1) / v0), hi = std::min(1.0, (budget - 0.01 * v1) / v0);
  for (int i = 0; i <= 400; ++i) {
    const double chi0 = lo + (hi - lo) * i / 400.0;
    const double chi1 = (budget - chi0 * v0) / v1;
    Eigen::VectorXd rho(2);
    rho[0] = std::pow((chi0 - m.chi_min) / (1.0 - m.chi_min), 1.0 / m.q);
    rho[1] = std::pow(std::max(0.0, chi1 - m.chi_min) / (1.0 - m.chi_min), 1.0 / m.q);
    LinearSystem sys;
    const DisplacementField u = probe.solve(rho, &sys);
    const double comp = compliance(u, sys);
    if (comp < best_c) {
      best_c = comp;
      best_chi0 = chi0;
    }
  }
  const double best_chi1 = (budget - best_chi0 * v0) / v1;

  // At the scan optimum the volume-normalized chi derivatives balance.
  {
    Eigen::VectorXd rho(2);
    rho[0] = std::pow((best_chi0 - m.chi_min) / (1.0 - m.chi_min), 1.0 / m.q);
    rho[1] = std::pow((best_chi1 - m.chi_min) / (1.0 - m.chi_min), 1.0 / m.q);
    LinearSystem sys;
    const DisplacementField u = probe.solve(rho, &sys);
    const Sensitivities sen = compute_sensitivities(disc, u, rho);
    const double g0 = sen.dpi[0] / (dchi_drho(rho[0], m) * v0);
    const double g1 = sen.dpi[1] / (dchi_drho(rho[1], m) * v1);
    CHECK(std::abs(g0 - g1) < 0.05 * std::abs(g0));
  }

  // The update ends in a two-cycle that straddles the optimum.
  OptimizationSettings s = build_settings(c);
  s.convergence = 0.0;
  const OptimizationState st = run_optimization(disc, s, 200);
  const Eigen::VectorXd prev = [&] {
    Optimizer opt(disc, s);
    OptimizationState p = opt.initial_state();
    opt.run(p, 199);
    return p.rho;
  }();
  const double a = chi_from_rho(st.rho[0], m), b = chi_from_rho(prev[0], m);
  INFO("scan chi0 = " << best_chi0 << " c = " << best_c << ", cycle chi0 = " << a << ", " << b);
  CHECK((a > chi_from_rho(st.rho[1], m)) == (best_chi0 > best_chi1));
  CHECK(std::min(a, b) <= best_chi0);
  CHECK(std::max(a, b) >= best_chi0);
  for (const auto& row : st.history)
    if (row.iter > m.ramp_iters) CHECK(row.compliance >= best_c * (1.0 - 1e-3));
}

TEST_CASE("optimizer keeps bounds and volume") {
  ProblemConfig c = parse_config(R"({"geometry": {"preset": "cantilever"}, "mesh": {"h": 0.1},
                                     "density": {"ramp_iters": 5}})");
  Discretization disc(build_problem(c));
  Optimizer opt(disc, build_settings(c));
  OptimizationState st = opt.initial_state();
  CHECK(st.rho.size() == disc.num_design_cells());
  CHECK(st.rho.minCoeff() == 1.0);
  opt.run(st, 8);
  REQUIRE(st.history.size() == 8);
  for (std::size_t i = 0; i < st.history.size(); ++i) {
    const HistoryRow& row = st.history[i];
    CHECK(row.iter == static_cast<int>(i) + 1);
    CHECK(row.volume_target == doctest::Approx(volume_target(row.iter, disc.definition().density)));
    CHECK(std::abs(row.volume_actual - row.volume_target) < 1e-6);
    CHECK(row.max_delta_rho <= 0.2 + 1e-12);
  }
  CHECK(st.rho.minCoeff() >= 0.0);
  CHECK(st.rho.maxCoeff() <= 1.0);
  CHECK(disc.volume_fraction(st.rho) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("compliance derivative matches finite differences") {
  ProblemConfig c = parse_config(R"({"geometry": {"preset": "cantilever"}, "mesh": {"h": 0.2}})");
  Discretization disc(build_problem(c));
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> u(0.3, 0.9);
  Eigen::VectorXd rho(disc.num_design_cells());
  for (int k = 0; k < rho.size(); ++k) rho[k] = u(gen);
  const GradientCheck g = check_gradient(disc, rho, 6, 1e-6, 1);
  REQUIRE(!g.cells.empty());
  CHECK(g.max_rel_error < 1e-4);
}

TEST_CASE("stale displacement is rejected") {
  ProblemConfig c = parse_config(R"({"geometry": {"preset": "cantilever"}, "mesh": {"h": 0.2}})");
  Discretization disc(build_problem(c));
  const Eigen::VectorXd rho = Eigen::VectorXd::Ones(disc.num_design_cells());
  const LinearSystem sys = assemble_system(disc, disc.chi_from_design(rho));
  const DisplacementField u = solve_displacement(sys);
  CHECK_NOTHROW(compute_sensitivities(disc, u, rho));
  const LinearSystem sys2 = assemble_system(disc, disc.chi_from_design(rho));
  CHECK_THROWS_AS(compute_sensitivities(disc, u, rho), std::logic_error);
}
