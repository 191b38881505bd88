#include "cutopt/cli_io/problem_builder.hpp"

#include "cutopt/cli_io/presets.hpp"

#include <cmath>
#include <sstream>

namespace cutopt {

namespace {

Vec2 vec(const Point& p) { return {p[0], p[1]}; }

Patch build_patch(const PatchConfig& pc) {
  Patch p;
  if (pc.map == "bilinear") {
    p.map = ParametricMap::bilinear(vec(pc.points[0]), vec(pc.points[1]), vec(pc.points[2]), vec(pc.points[3]));
  } else if (pc.map == "biquadratic") {
    std::array<Vec2, 9> nodes;
    for (int k = 0; k < 9; ++k) nodes[k] = vec(pc.points[k]);
    p.map = ParametricMap::biquadratic(nodes);
  } else {
    p.map = ParametricMap::polar(vec(pc.center), pc.r0, pc.r1, pc.theta0, pc.theta1);
  }
  p.nx = pc.nx;
  p.ny = pc.ny;
  for (int e = 0; e < 4; ++e) p.edges[e] = {EdgePiece{0.0, 1.0, BoundaryTag::free()}};
  for (const auto& [name, pieces] : pc.edges) {
    auto& dst = p.edges[static_cast<int>(parse_patch_edge(name))];
    dst.clear();
    for (const auto& piece : pieces) dst.push_back({piece.from, piece.to, BoundaryTag::parse(piece.tag)});
  }
  return p;
}

}  // namespace

Geometry2D build_geometry(const GeometryConfig& config, double h, int density_level) {
  const GeometryConfig g = config.preset.empty() ? config : preset_geometry(config.preset, h);
  Geometry2D geo;
  for (const auto& pc : g.patches) geo.patches.push_back(build_patch(pc));
  const double chord = h / std::pow(2.0, density_level + 2);
  std::vector<PolygonLoop> loops;
  for (std::size_t l = 0; l < g.design.size(); ++l) {
    const auto& items = g.design[l];
    PolygonLoop loop;
    std::vector<Vec2> starts, ends;
    for (const auto& item : items) {
      const BoundaryTag tag = BoundaryTag::parse(item.tag);
      if (!item.is_curve) {
        loop.vertices.push_back(vec(item.point));
        loop.edge_tags.push_back(tag);
        starts.push_back(vec(item.point));
        ends.push_back(vec(item.point));
        continue;
      }
      if (item.patch < 1 || item.patch > static_cast<int>(geo.patches.size())) {
        std::ostringstream os;
        os << "design loop " << l << " follows an edge of nonexistent patch " << item.patch;
        throw GeometryError(os.str());
      }
      const Patch& p = geo.patches[item.patch - 1];
      const auto pts = p.sample_edge(parse_patch_edge(item.edge), item.from, item.to, chord);
      for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        loop.vertices.push_back(pts[k]);
        loop.edge_tags.push_back(tag);
      }
      starts.push_back(pts.front());
      ends.push_back(pts.back());
    }
    // A curve must end where the next item starts.
    for (std::size_t k = 0; k < items.size(); ++k) {
      if (!items[k].is_curve) continue;
      const Vec2 next = starts[(k + 1) % items.size()];
      if ((ends[k] - next).norm() > 1e-9) {
        std::ostringstream os;
        os << "design loop " << l << " item " << k << ": curve ends at (" << ends[k].x() << ", " << ends[k].y()
           << ") but the next item starts at (" << next.x() << ", " << next.y() << ")";
        throw GeometryError(os.str());
      }
    }
    loops.push_back(std::move(loop));
  }
  geo.design = PolygonSet(std::move(loops));
  geo.validate(1e-9);
  return geo;
}

Polynomial2 to_polynomial(const PolyTerms& terms) {
  Polynomial2 p;
  for (const auto& t : terms) p.terms.push_back({t[0], static_cast<int>(t[1]), static_cast<int>(t[2])});
  return p;
}

ProblemDefinition build_problem(const ProblemConfig& c) {
  ProblemDefinition def;
  def.geometry = build_geometry(c.geometry, c.h, c.density_level);
  def.h = c.h;
  def.angle = c.angle;
  def.density_level = c.density_level;
  def.degree = c.degree;
  const int n = def.geometry.num_subdomains();
  for (int id = 0; id < n; ++id) {
    auto it = c.subdomain_materials.find(id);
    const MaterialConfig& m = it == c.subdomain_materials.end() ? c.material : it->second;
    def.materials.push_back(lame_from_engineering(m.E, m.nu));
  }
  def.plane = c.plane == "stress" ? PlaneMode::Stress : PlaneMode::Strain;
  def.loads.body_force.assign(n, VectorField{});
  for (const auto& [id, f] : c.body_force) {
    if (id >= n) throw ConfigError("body force given for nonexistent subdomain " + std::to_string(id));
    PolyVectorField field{to_polynomial(f.x), to_polynomial(f.y)};
    def.loads.body_force[id] = field;
  }
  for (const auto& [name, f] : c.tractions) {
    PolyVectorField field{to_polynomial(f.x), to_polynomial(f.y)};
    def.loads.tractions.push_back({name, field});
  }
  def.nitsche.beta = c.beta;
  def.nitsche.ghost_scale = c.ghost_scale;
  def.nitsche.ghost_penalty = c.ghost_penalty;
  def.density.chi_min = c.chi_min;
  def.density.q = c.q;
  def.density.delta_vol = c.volume_fraction;
  def.density.ramp_iters = c.ramp_iters;
  return def;
}

OptimizationSettings build_settings(const ProblemConfig& c) {
  OptimizationSettings s;
  s.filter_radius = c.filter_radius;
  s.filter_gamma = c.filter_gamma;
  s.oc.move = c.move;
  s.oc.damping = c.damping;
  s.oc.volume_tol = c.volume_tol;
  s.solver.method = c.solver_method == "direct" ? SolverSettings::Method::Direct
                    : c.solver_method == "cg"   ? SolverSettings::Method::CG
                                                : SolverSettings::Method::Auto;
  s.solver.tol = c.solver_tol;
  s.solver.max_iter = c.solver_max_iter;
  s.solver.cg_threshold = c.cg_threshold;
  s.convergence = c.convergence;
  return s;
}

}  // namespace cutopt
