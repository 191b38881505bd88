#pragma once

#include "cutopt/optimize/filter.hpp"
#include "cutopt/optimize/oc_update.hpp"
#include "cutopt/optimize/sensitivities.hpp"

#include <functional>
#include <vector>

namespace cutopt {

struct OptimizationSettings {
  double filter_radius = 1.2;  ///< in units of the FE mesh size h
  double filter_gamma = 1e-6;
  OcSettings oc;
  SolverSettings solver;
  double convergence = 0.01;  ///< max |delta rho| after the ramp; <= 0 disables
};

struct HistoryRow {
  int iter = 0;
  double volume_target = 0.0;
  double volume_actual = 0.0;
  double compliance = 0.0;
  double max_delta_rho = 0.0;
  double eta = 0.0;

  bool operator==(const HistoryRow&) const = default;
};

struct OptimizationState {
  int iteration = 0;  ///< completed iterations
  Eigen::VectorXd rho;
  double volume_target = 1.0;
  double change = 1.0;
  bool converged = false;
  std::vector<HistoryRow> history;
};

/// SIMP / optimality-criteria loop over a fixed discretization.
class Optimizer {
 public:
  Optimizer(const Discretization& disc, OptimizationSettings settings);

  /// rho = 1 on every design cell.
  OptimizationState initial_state() const;
  /// One iteration: target, assemble, solve, compliance, sensitivities,
  /// filter, update. The state is only modified on success.
  const HistoryRow& step(OptimizationState& state);
  /// Iterates until max_iters total iterations or convergence; the
  /// callback runs after each completed iteration.
  void run(OptimizationState& state, int max_iters,
           const std::function<void(const OptimizationState&)>& on_iteration = {});

  /// Assemble and solve for the given design densities.
  DisplacementField solve(const Eigen::VectorXd& rho, LinearSystem* sys_out = nullptr);
  const FilterSpec& filter() const { return filter_; }
  const OptimizationSettings& settings() const { return settings_; }
  const Discretization& discretization() const { return disc_; }

 private:
  const Discretization& disc_;
  OptimizationSettings settings_;
  FilterSpec filter_;
  Eigen::VectorXd volumes_;
  Eigen::VectorXd design_volumes_;
  DisplacementSolver solver_;
};

/// Convenience wrapper: fresh state, run, return.
OptimizationState run_optimization(const Discretization& disc, const OptimizationSettings& settings, int max_iters);

/// Relative difference between analytic and central-difference compliance
/// derivatives on `count` cells chosen by a seeded generator.
struct GradientCheck {
  std::vector<int> cells;
  std::vector<double> analytic;
  std::vector<double> numeric;
  double max_rel_error = 0.0;
};
GradientCheck check_gradient(const Discretization& disc, const Eigen::VectorXd& rho, int count, double step,
                             unsigned seed, double min_volume_fraction = 0.25);

}  // namespace cutopt
