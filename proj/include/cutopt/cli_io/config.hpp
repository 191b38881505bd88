#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace cutopt {

using Point = std::array<double, 2>;
/// Polynomial sum_k c_k x^px_k y^py_k stored as [c, px, py] triples.
using PolyTerms = std::vector<std::array<double, 3>>;

struct VectorPolyConfig {
  PolyTerms x;
  PolyTerms y;
  bool operator==(const VectorPolyConfig&) const = default;
};

/// One item of a design loop: a vertex starting a straight edge, or a run
/// of vertices sampled along a patch edge.
struct LoopItemConfig {
  bool is_curve = false;
  Point point{};  ///< line items
  int patch = 0;  ///< curve items: subdomain id of the patch
  std::string edge;
  double from = 0.0, to = 1.0;
  std::string tag = "free";
  bool operator==(const LoopItemConfig&) const = default;
};

struct EdgePieceConfig {
  double from = 0.0, to = 1.0;
  std::string tag = "free";
  bool operator==(const EdgePieceConfig&) const = default;
};

struct PatchConfig {
  std::string map = "bilinear";  ///< bilinear, biquadratic, polar
  std::vector<Point> points;     ///< 4 corners or 9 nodes
  Point center{};
  double r0 = 0.0, r1 = 0.0, theta0 = 0.0, theta1 = 0.0;
  int nx = 1, ny = 1;
  std::map<std::string, std::vector<EdgePieceConfig>> edges;
  bool operator==(const PatchConfig&) const = default;
};

struct GeometryConfig {
  std::string preset;  ///< empty for explicit geometry
  std::vector<std::vector<LoopItemConfig>> design;
  std::vector<PatchConfig> patches;
  bool operator==(const GeometryConfig&) const = default;
};

struct MaterialConfig {
  double E = 1.0;
  double nu = 0.3;
  bool operator==(const MaterialConfig&) const = default;
};

struct ProblemConfig {
  int version = 1;
  GeometryConfig geometry;
  // mesh
  double h = 0.05;
  double angle = 0.4487989505128276;  ///< pi / 7
  int density_level = 1;
  int degree = 2;
  // materials
  MaterialConfig material;
  std::map<int, MaterialConfig> subdomain_materials;
  std::string plane = "strain";
  // loads
  std::map<int, VectorPolyConfig> body_force;
  std::map<std::string, VectorPolyConfig> tractions;
  // Nitsche and stabilization
  double beta = 40.0;
  double ghost_scale = 1e-4;
  bool ghost_penalty = true;
  // density model
  double chi_min = 1e-6;
  double q = 3.0;
  double volume_fraction = 0.5;
  int ramp_iters = 100;
  // filter
  double filter_radius = 1.2;
  double filter_gamma = 1e-6;
  // OC
  double move = 0.2;
  double damping = 1.0;
  double volume_tol = 1e-7;
  // solver
  std::string solver_method = "auto";
  double solver_tol = 1e-10;
  int solver_max_iter = 20000;
  int cg_threshold = 100000;
  // run control
  int max_iters = 300;
  double convergence = 0.01;
  int checkpoint_every = 10;
  bool deterministic = true;
  // output
  std::string output_dir = "output";
  std::string output_prefix = "cutopt";
  bool write_vtk = true;
  bool write_history = true;
  bool write_checkpoint = true;

  bool operator==(const ProblemConfig&) const = default;
};

/// Parses a JSON document (comments allowed). An empty document yields
/// the default problem. Unknown keys, type errors and out-of-range values
/// throw ConfigError naming the offending field.
ProblemConfig parse_config(const std::string& text);
ProblemConfig load_config_file(const std::string& path);

/// Fully resolved document; parse_config(serialize_config(c)) == c.
nlohmann::ordered_json config_to_json(const ProblemConfig& c);
std::string serialize_config(const ProblemConfig& c);

/// FNV-1a hash of the serialized config, as 16 hex digits.
std::string config_hash(const ProblemConfig& c);

}  // namespace cutopt
