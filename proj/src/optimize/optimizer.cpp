#include "cutopt/optimize/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace cutopt {

Optimizer::Optimizer(const Discretization& disc, OptimizationSettings settings)
    : disc_(disc), settings_(settings), solver_(settings.solver) {
  const auto& cells = disc.cells();
  std::vector<Vec2> centroids(cells.size());
  volumes_.resize(static_cast<int>(cells.size()));
  for (std::size_t c = 0; c < cells.size(); ++c) {
    centroids[c] = cells[c].centroid;
    volumes_[c] = cells[c].volume;
  }
  filter_ = build_filter(centroids, disc.num_design_cells(), settings.filter_radius * disc.fe_mesh().spacing(),
                         settings.filter_gamma);
  design_volumes_ = volumes_.head(disc.num_design_cells());
}

OptimizationState Optimizer::initial_state() const {
  OptimizationState s;
  s.rho = Eigen::VectorXd::Ones(disc_.num_design_cells());
  s.volume_target = 1.0;
  return s;
}

DisplacementField Optimizer::solve(const Eigen::VectorXd& rho, LinearSystem* sys_out) {
  LinearSystem sys = assemble_system(disc_, disc_.chi_from_design(rho));
  DisplacementField u = solver_.solve(sys);
  if (sys_out) *sys_out = std::move(sys);
  return u;
}

const HistoryRow& Optimizer::step(OptimizationState& state) {
  const DensityModel& model = disc_.definition().density;
  const int i = state.iteration + 1;
  const double target = volume_target(i, model);
  LinearSystem sys;
  const DisplacementField u = solve(state.rho, &sys);
  const double c = compliance(u, sys);
  const Sensitivities s = compute_sensitivities(disc_, u, state.rho);
  const Eigen::VectorXd filtered = filter_sensitivities(s.dpi, state.rho, volumes_, filter_);
  const OcResult oc = oc_update(state.rho, filtered, s.dlambda, design_volumes_, target, model, settings_.oc);

  HistoryRow row;
  row.iter = i;
  row.volume_target = target;
  row.volume_actual = oc.volume;
  row.compliance = c;
  row.max_delta_rho = (oc.rho - state.rho).cwiseAbs().maxCoeff();
  row.eta = oc.eta;

  state.rho = oc.rho;
  state.iteration = i;
  state.volume_target = target;
  state.change = row.max_delta_rho;
  state.converged = settings_.convergence > 0.0 && i >= model.ramp_iters && row.max_delta_rho < settings_.convergence;
  state.history.push_back(row);
  return state.history.back();
}

void Optimizer::run(OptimizationState& state, int max_iters,
                    const std::function<void(const OptimizationState&)>& on_iteration) {
  while (state.iteration < max_iters && !state.converged) {
    step(state);
    if (on_iteration) on_iteration(state);
  }
}

OptimizationState run_optimization(const Discretization& disc, const OptimizationSettings& settings, int max_iters) {
  Optimizer opt(disc, settings);
  OptimizationState s = opt.initial_state();
  opt.run(s, max_iters);
  return s;
}

GradientCheck check_gradient(const Discretization& disc, const Eigen::VectorXd& rho, int count, double step,
                             unsigned seed, double min_volume_fraction) {
  GradientCheck g;
  DisplacementSolver solver;
  struct Solved {
    LinearSystem sys;
    Eigen::VectorXd u;
  };
  auto solve_at = [&](const Eigen::VectorXd& r) {
    Solved s{assemble_system(disc, disc.chi_from_design(r)), {}};
    s.u = solver.solve(s.sys).u;
    return s;
  };
  // c+ - c- = u-.(A- - A+)u+ + (b+ - b-).(u+ + u-) holds exactly for exact
  // solutions; unlike b+.u+ - b-.u- it does not cancel, so solver round-off
  // stays below the step.
  auto diff = [&](const Solved& p, const Solved& m) {
    const Eigen::SparseMatrix<double> dA = m.sys.A - p.sys.A;
    return m.u.dot(dA * p.u) + (p.sys.b - m.sys.b).dot(p.u + m.u);
  };
  const LinearSystem sys = assemble_system(disc, disc.chi_from_design(rho));
  const DisplacementField u = solver.solve(sys);
  const Sensitivities s = compute_sensitivities(disc, u, rho);

  std::vector<int> candidates;
  const double full = disc.cell_mesh().cell_area();
  for (int c = 0; c < disc.num_design_cells(); ++c)
    if (disc.cells()[c].volume >= min_volume_fraction * full && rho[c] > step && rho[c] < 1.0 - step)
      candidates.push_back(c);
  std::mt19937 gen(seed);
  std::shuffle(candidates.begin(), candidates.end(), gen);
  candidates.resize(std::min<std::size_t>(candidates.size(), count));
  std::sort(candidates.begin(), candidates.end());
  for (int c : candidates) {
    Eigen::VectorXd rp = rho, rm = rho;
    rp[c] += step;
    rm[c] -= step;
    const double fd = diff(solve_at(rp), solve_at(rm)) / (2.0 * step);
    g.cells.push_back(c);
    g.analytic.push_back(s.dpi[c]);
    g.numeric.push_back(fd);
    const double rel = std::abs(s.dpi[c] - fd) / std::max(std::abs(fd), 1e-300);
    g.max_rel_error = std::max(g.max_rel_error, rel);
  }
  return g;
}

}  // namespace cutopt
