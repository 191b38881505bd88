#pragma once

#include "cutopt/assembly/discretization.hpp"
#include "cutopt/optimize/optimizer.hpp"

#include <string>
#include <vector>

namespace cutopt {

inline constexpr const char* kHistoryHeader = "iter,volume_target,volume_actual,compliance,max_delta_rho,eta";

/// Legacy VTK (ASCII) unstructured grid of the active level-k design cells
/// with cell data rho and chi. Numbers use 9 significant digits.
void write_density_vtk(const std::string& path, const Discretization& disc, const Eigen::VectorXd& rho);

/// Triangulation of every clipped integration cell with point data
/// displacement and von_mises, and cell data chi.
void write_fields_vtk(const std::string& path, const Discretization& disc, const Eigen::VectorXd& u,
                      const Eigen::VectorXd& chi);

void write_history_csv(const std::string& path, const std::vector<HistoryRow>& history);
std::string history_csv_row(const HistoryRow& row);

/// Creates the directory (and parents) if needed; throws IoError.
void ensure_directory(const std::string& dir);

}  // namespace cutopt
