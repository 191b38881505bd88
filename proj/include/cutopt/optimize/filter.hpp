#pragma once

#include "cutopt/common.hpp"

#include <vector>

namespace cutopt {

/// Neighborhoods of the sensitivity filter. Rows are the design cells
/// (the first n_design cells); columns run over all cells, so nondesign
/// cells take part with rho = 1.
struct FilterSpec {
  double r_min = 0.0;
  double gamma = 1e-6;
  int n_design = 0;
  int n_total = 0;
  std::vector<int> offsets;  ///< CSR row pointers, size n_design + 1
  std::vector<int> neighbors;
  std::vector<double> weights;  ///< H = max(0, r_min - dist)
};

FilterSpec build_filter(const std::vector<Vec2>& centroids, int n_design, double r_min, double gamma = 1e-6);

/// V_k / max(rho_k, gamma) * sum_j H_kj rho_j raw_j / max(V_j, gamma) / sum_j H_kj.
/// raw and volumes cover all cells; rho covers the design cells.
Eigen::VectorXd filter_sensitivities(const Eigen::VectorXd& raw, const Eigen::VectorXd& rho,
                                     const Eigen::VectorXd& volumes, const FilterSpec& spec);

}  // namespace cutopt
