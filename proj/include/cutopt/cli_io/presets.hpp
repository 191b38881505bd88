#pragma once

#include "cutopt/cli_io/config.hpp"

#include <set>
#include <string>
#include <vector>

namespace cutopt {

/// Built-in geometries. Coordinates are reconstructions chosen to resemble
/// the classic benchmark layouts, not measured data. Patch element counts
/// follow from h so that patch elements roughly match the background grid.
///
///   unit_square          [0,1]^2, left edge clamped, right edge load "tip"
///   cantilever           [0,2]x[0,1], clamped left, load "tip" on a solid
///                        block (id 1) at the middle of the right edge
///   ring_cantilever      cantilever with two curved clamped beams (ids 1, 2)
///                        and a four-sector ring (ids 3-6) loaded on its
///                        inner circle ("ring")
///   ring_cantilever_mod  ring_cantilever plus a solid block (id 7) embedded
///                        in the design domain
///   truss                [0,3]x[0,1] frame of clamped chords (ids 1, 2), an
///                        end post (id 3, load "tip") and two diagonals
///                        (ids 4, 5); the design domain is three polygons
const std::vector<std::string>& preset_names();

/// Throws ConfigError for unknown names.
GeometryConfig preset_geometry(const std::string& name, double h);
std::map<std::string, VectorPolyConfig> preset_tractions(const std::string& name);

/// Names used by "neumann:<name>" tags of an explicit geometry.
std::set<std::string> referenced_tractions(const GeometryConfig& g);

}  // namespace cutopt
