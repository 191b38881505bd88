#pragma once

#include "cutopt/assembly/discretization.hpp"
#include "cutopt/cli_io/config.hpp"
#include "cutopt/optimize/optimizer.hpp"

namespace cutopt {

/// Expands presets and polygonizes curved design edges with chords of at
/// most h / 2^(k+2). Throws GeometryError for invalid layouts.
Geometry2D build_geometry(const GeometryConfig& g, double h, int density_level);

Polynomial2 to_polynomial(const PolyTerms& terms);
ProblemDefinition build_problem(const ProblemConfig& c);
OptimizationSettings build_settings(const ProblemConfig& c);

}  // namespace cutopt
