#include "cutopt/cli_io/presets.hpp"

#include "cutopt/common.hpp"
#include "cutopt/geometry/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cutopt {

namespace {

constexpr double kPi = std::numbers::pi;

LoopItemConfig line(double x, double y, const std::string& tag = "free") {
  LoopItemConfig it;
  it.point = {x, y};
  it.tag = tag;
  return it;
}

LoopItemConfig curve(int patch, const std::string& edge, double from, double to, const std::string& tag) {
  LoopItemConfig it;
  it.is_curve = true;
  it.patch = patch;
  it.edge = edge;
  it.from = from;
  it.to = to;
  it.tag = tag;
  return it;
}

std::string iface(int id) { return "interface:" + std::to_string(id); }

int count(double length, double h) { return std::max(1, static_cast<int>(std::ceil(length / h - 1e-9))); }

PatchConfig bilinear(Point p00, Point p10, Point p11, Point p01, double h) {
  PatchConfig p;
  p.map = "bilinear";
  p.points = {p00, p10, p11, p01};
  auto dist = [](Point a, Point b) { return std::hypot(a[0] - b[0], a[1] - b[1]); };
  p.nx = count(std::max(dist(p00, p10), dist(p01, p11)), h);
  p.ny = count(std::max(dist(p00, p01), dist(p10, p11)), h);
  return p;
}

// Pieces of a straight edge from breakpoints in edge parameter.
std::vector<EdgePieceConfig> pieces(const std::vector<double>& breaks, const std::vector<std::string>& tags) {
  std::vector<EdgePieceConfig> out;
  for (std::size_t k = 0; k < tags.size(); ++k) out.push_back({breaks[k], breaks[k + 1], tags[k]});
  return out;
}

std::vector<EdgePieceConfig> whole(const std::string& tag) { return {{0.0, 1.0, tag}}; }

GeometryConfig unit_square() {
  GeometryConfig g;
  g.design = {{line(0, 0), line(1, 0, "neumann:tip"), line(1, 1), line(0, 1, "dirichlet")}};
  return g;
}

// The load sits on a small solid block so that removing design material
// cannot remove the load.
GeometryConfig cantilever(double h) {
  GeometryConfig g;
  PatchConfig block = bilinear({1.9, 0.4}, {2.0, 0.4}, {2.0, 0.6}, {1.9, 0.6}, h);
  block.edges = {{"eta0", whole(iface(0))}, {"xi1", whole("neumann:tip")}, {"eta1", whole(iface(0))},
                 {"xi0", whole(iface(0))}};
  g.patches = {block};
  const std::string t = iface(1);
  g.design = {{line(0, 0), line(2, 0), line(2, 0.4, t), line(1.9, 0.4, t), line(1.9, 0.6, t), line(2, 0.6),
               line(2, 1), line(0, 1, "dirichlet")}};
  return g;
}

const Point kRingCenter{1.6, 0.5};
constexpr double kRingInner = 0.1;
constexpr double kRingOuter = 0.18;

GeometryConfig ring_cantilever(double h, bool with_block) {
  GeometryConfig g;
  // Curved beams along the top and bottom edges, clamped at x = 0.
  PatchConfig top;
  top.map = "biquadratic";
  top.points = {{0, 0.9}, {0.7, 0.85}, {1.4, 0.9}, {0, 0.95}, {0.7, 0.925}, {1.4, 0.95}, {0, 1}, {0.7, 1}, {1.4, 1}};
  top.nx = count(1.4, h);
  top.ny = count(0.1, h);
  top.edges = {{"eta0", whole(iface(0))}, {"xi1", whole(iface(0))}, {"eta1", whole("free")}, {"xi0", whole("dirichlet")}};
  PatchConfig bottom = top;
  bottom.points = {{0, 0}, {0.7, 0}, {1.4, 0}, {0, 0.05}, {0.7, 0.075}, {1.4, 0.05}, {0, 0.1}, {0.7, 0.15}, {1.4, 0.1}};
  bottom.edges = {{"eta0", whole("free")}, {"xi1", whole(iface(0))}, {"eta1", whole(iface(0))}, {"xi0", whole("dirichlet")}};
  g.patches = {top, bottom};
  // Ring of four polar sectors, ids 3..6 counterclockwise from theta = 0.
  for (int s = 0; s < 4; ++s) {
    PatchConfig p;
    p.map = "polar";
    p.center = kRingCenter;
    p.r0 = kRingInner;
    p.r1 = kRingOuter;
    p.theta0 = s * kPi / 2;
    p.theta1 = (s + 1) * kPi / 2;
    p.nx = count(kRingOuter - kRingInner, h);
    p.ny = count(kRingOuter * kPi / 2, h);
    const int prev = 3 + (s + 3) % 4;
    const int next = 3 + (s + 1) % 4;
    p.edges = {{"xi0", whole("neumann:ring")}, {"xi1", whole(iface(0))}, {"eta0", whole(iface(prev))},
               {"eta1", whole(iface(next))}};
    g.patches.push_back(p);
  }
  std::vector<LoopItemConfig> outer = {
      curve(2, "eta1", 0, 1, iface(2)), line(1.4, 0.1, iface(2)), line(1.4, 0), line(2, 0), line(2, 1),
      line(1.4, 1, iface(1)),           curve(1, "eta0", 1, 0, iface(1)), line(0, 0.9, "dirichlet")};
  std::vector<LoopItemConfig> ring;
  for (int s = 0; s < 4; ++s) ring.push_back(curve(3 + s, "xi1", 0, 1, iface(3 + s)));
  g.design = {outer, ring};
  if (with_block) {
    PatchConfig block = bilinear({1.25, 0.4}, {1.35, 0.4}, {1.35, 0.6}, {1.25, 0.6}, h);
    block.edges = {{"eta0", whole(iface(0))}, {"xi1", whole(iface(0))}, {"eta1", whole(iface(0))},
                   {"xi0", whole(iface(0))}};
    g.patches.push_back(block);
    const std::string t = iface(7);
    g.design.push_back({line(1.25, 0.4, t), line(1.35, 0.4, t), line(1.35, 0.6, t), line(1.25, 0.6, t)});
  }
  return g;
}

GeometryConfig truss(double h) {
  GeometryConfig g;
  const double L = 3.0;
  auto u = [&](double x) { return x / L; };
  PatchConfig top = bilinear({0, 0.9}, {3, 0.9}, {3, 1}, {0, 1}, h);
  top.edges = {{"eta0", pieces({0, u(1.5), u(1.6), u(2.4), u(2.5), u(2.9), 1},
                               {iface(0), iface(4), iface(0), iface(5), iface(0), iface(3)})},
               {"xi1", whole("free")},
               {"eta1", whole("free")},
               {"xi0", whole("dirichlet")}};
  PatchConfig bottom = bilinear({0, 0}, {3, 0}, {3, 0.1}, {0, 0.1}, h);
  bottom.edges = {{"eta0", whole("free")},
                  {"xi1", whole("free")},
                  {"eta1", pieces({0, u(1.0), u(1.1), u(2.0), u(2.1), u(2.9), 1},
                                  {iface(0), iface(4), iface(0), iface(5), iface(0), iface(3)})},
                  {"xi0", whole("dirichlet")}};
  PatchConfig post = bilinear({2.9, 0.1}, {3, 0.1}, {3, 0.9}, {2.9, 0.9}, h);
  post.edges = {{"eta0", whole(iface(2))}, {"xi1", whole("neumann:tip")}, {"eta1", whole(iface(1))},
                {"xi0", whole(iface(0))}};
  PatchConfig diag_a = bilinear({1.0, 0.1}, {1.1, 0.1}, {1.6, 0.9}, {1.5, 0.9}, h);
  diag_a.edges = {{"eta0", whole(iface(2))}, {"xi1", whole(iface(0))}, {"eta1", whole(iface(1))},
                  {"xi0", whole(iface(0))}};
  PatchConfig diag_b = bilinear({2.0, 0.1}, {2.1, 0.1}, {2.5, 0.9}, {2.4, 0.9}, h);
  diag_b.edges = diag_a.edges;
  g.patches = {top, bottom, post, diag_a, diag_b};
  g.design = {
      {line(0, 0.1, iface(2)), line(1.0, 0.1, iface(4)), line(1.5, 0.9, iface(1)), line(0, 0.9, "dirichlet")},
      {line(1.1, 0.1, iface(2)), line(2.0, 0.1, iface(5)), line(2.4, 0.9, iface(1)), line(1.6, 0.9, iface(4))},
      {line(2.1, 0.1, iface(2)), line(2.9, 0.1, iface(3)), line(2.9, 0.9, iface(1)), line(2.5, 0.9, iface(5))}};
  return g;
}

VectorPolyConfig constant(double x, double y) {
  VectorPolyConfig f;
  if (x != 0.0) f.x = {{x, 0, 0}};
  if (y != 0.0) f.y = {{y, 0, 0}};
  return f;
}

// Downward pressure on the inner ring circle, A (1 - ((x - cx) / r0)^2),
// scaled to unit total force.
VectorPolyConfig ring_load() {
  const double a = 1.0 / (kPi * kRingInner);
  const double cx = kRingCenter[0];
  const double s = a / (kRingInner * kRingInner);
  VectorPolyConfig f;
  f.y = {{-a + s * cx * cx, 0, 0}, {-2.0 * s * cx, 1, 0}, {s, 2, 0}};
  return f;
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"unit_square", "cantilever", "ring_cantilever", "ring_cantilever_mod",
                                                 "truss"};
  return names;
}

GeometryConfig preset_geometry(const std::string& name, double h) {
  if (name == "unit_square") return unit_square();
  if (name == "cantilever") return cantilever(h);
  if (name == "ring_cantilever") return ring_cantilever(h, false);
  if (name == "ring_cantilever_mod") return ring_cantilever(h, true);
  if (name == "truss") return truss(h);
  std::string list;
  for (const auto& n : preset_names()) list += (list.empty() ? "" : ", ") + n;
  throw ConfigError("unknown preset '" + name + "' (available: " + list + ")");
}

std::map<std::string, VectorPolyConfig> preset_tractions(const std::string& name) {
  if (name == "unit_square") return {{"tip", constant(0.0, -1.0)}};
  if (name == "cantilever") return {{"tip", constant(0.0, -5.0)}};
  if (name == "ring_cantilever" || name == "ring_cantilever_mod") return {{"ring", ring_load()}};
  if (name == "truss") return {{"tip", constant(0.0, -1.25)}};
  return {};
}

std::set<std::string> referenced_tractions(const GeometryConfig& g) {
  std::set<std::string> out;
  auto add = [&](const std::string& tag) {
    BoundaryTag t = BoundaryTag::parse(tag);
    if (t.kind == TagKind::Neumann) out.insert(t.load);
  };
  for (const auto& loop : g.design)
    for (const auto& item : loop) add(item.tag);
  for (const auto& p : g.patches)
    for (const auto& [edge, ps] : p.edges)
      for (const auto& piece : ps) add(piece.tag);
  return out;
}

}  // namespace cutopt
