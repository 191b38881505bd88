#include "cutopt/assembly/discretization.hpp"
#include "cutopt/cli_io/config.hpp"
#include "cutopt/cli_io/problem_builder.hpp"
#include "cutopt/geometry/background_mesh.hpp"
#include "cutopt/geometry/cut_quadrature.hpp"
#include "cutopt/geometry/ghost_faces.hpp"
#include "cutopt/geometry/parametric_map.hpp"
#include "cutopt/geometry/polygon.hpp"
#include "cutopt/geometry/quadrature_rules.hpp"
#include "cutopt/geometry/subdomain.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace cutopt;

namespace {

PolygonLoop make_loop(const std::vector<Vec2>& v, BoundaryTag tag = BoundaryTag::free()) {
  PolygonLoop l;
  l.vertices = v;
  l.edge_tags.assign(v.size(), tag);
  return l;
}

// Integral of x^a y^b over the polygon by Green's theorem,
// int x^a y^b dA = oint x^(a+1) y^b / (a+1) dy, with a high-order edge rule.
double green_moment(const PolygonSet& poly, int a, int b) {
  const auto& g = gauss_legendre(12);
  double s = 0.0;
  for (const auto& e : poly.edges())
    for (std::size_t q = 0; q < g.points.size(); ++q) {
      const Vec2 x = e.a + g.points[q] * (e.b - e.a);
      s += g.weights[q] * std::pow(x.x(), a + 1) / (a + 1) * std::pow(x.y(), b) * (e.b.y() - e.a.y());
    }
  return s;
}

double quad_moment(const std::vector<CellRule>& rules, int a, int b) {
  double s = 0.0;
  for (const auto& r : rules)
    for (std::size_t q = 0; q < r.points.size(); ++q)
      s += r.weights[q] * std::pow(r.points[q].x(), a) * std::pow(r.points[q].y(), b);
  return s;
}

PolygonSet l_shape_with_hole() {
  auto outer = make_loop({{0.05, 0.02}, {1.03, 0.02}, {1.03, 0.47}, {0.51, 0.49}, {0.49, 1.01}, {0.05, 1.01}});
  auto hole = make_loop({{0.2, 0.2}, {0.3, 0.35}, {0.15, 0.4}});
  return PolygonSet({outer, hole});
}

}  // namespace

TEST_CASE("boundary tags parse and print") {
  for (const std::string s : {"free", "dirichlet", "neumann:tip", "interface:3"})
    CHECK(BoundaryTag::parse(s).str() == s);
  CHECK(BoundaryTag::parse("interface:3").partner == 3);
  CHECK_THROWS_AS(BoundaryTag::parse("clamped"), ConfigError);
  CHECK_THROWS_AS(BoundaryTag::parse("interface:x"), ConfigError);
  CHECK_THROWS_AS(BoundaryTag::parse("neumann:"), ConfigError);
}

TEST_CASE("polygon validation and orientation") {
  // Clockwise outer loop is reoriented.
  PolygonSet cw({make_loop({{0, 0}, {0, 1}, {1, 1}, {1, 0}})});
  CHECK(cw.loops()[0].signed_area() == doctest::Approx(1.0));
  CHECK(cw.area() == doctest::Approx(1.0));
  PolygonSet holed = l_shape_with_hole();
  CHECK(holed.loops()[1].signed_area() < 0.0);
  CHECK(holed.contains(Vec2(0.1, 0.1)));
  CHECK_FALSE(holed.contains(Vec2(0.22, 0.3)));
  CHECK_FALSE(holed.contains(Vec2(0.8, 0.8)));
  CHECK_THROWS_AS(PolygonSet({make_loop({{0, 0}, {1, 1}, {1, 0}, {0, 1}})}), GeometryError);
  CHECK_THROWS_AS(PolygonSet({make_loop({{0, 0}, {1, 0}})}), GeometryError);
  CHECK_THROWS_AS(PolygonSet({make_loop({{0, 0}, {1, 0}, {1, 0}, {0, 1}})}), GeometryError);
  CHECK_THROWS_AS(PolygonSet({make_loop({{0, 0}, {1, 0}, {2, 0}})}), GeometryError);
}

TEST_CASE("rotated background mesh") {
  BoundingBox bb{{0, 0}, {2, 1}};
  const double angle = std::numbers::pi / 7;
  const BackgroundMesh m = build_background_mesh(bb, 0.1, angle, 0);
  CHECK(m.spacing() == doctest::Approx(0.1));
  CHECK(m.axis1.dot(m.axis2) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(std::atan2(m.axis1.y(), m.axis1.x()) == doctest::Approx(angle));
  for (const Vec2 c : {Vec2(0, 0), Vec2(2, 0), Vec2(2, 1), Vec2(0, 1)}) {
    const Vec2 g = m.to_grid(c);
    CHECK(g.x() >= -1e-9);
    CHECK(g.y() >= -1e-9);
    CHECK(g.x() <= m.nx + 1e-9);
    CHECK(g.y() <= m.ny + 1e-9);
    CHECK((m.to_physical(g) - c).norm() < 1e-14);
  }
  const BackgroundMesh r = m.refined(2);
  CHECK(r.nx == 4 * m.nx);
  CHECK(r.spacing() == doctest::Approx(0.025));
  const int cell = r.index(9, 6);
  CHECK(r.parent_element(cell, 2) == m.index(2, 1));
}

TEST_CASE("Gauss-Legendre rules") {
  for (int n = 1; n <= 8; ++n) {
    const auto& g = gauss_legendre(n);
    for (int d = 0; d <= 2 * n - 1; ++d) {
      double s = 0.0;
      for (int q = 0; q < n; ++q) s += g.weights[q] * std::pow(g.points[q], d);
      CHECK(s == doctest::Approx(1.0 / (d + 1)).epsilon(1e-14));
    }
  }
}

TEST_CASE("cut cell areas sum to the polygon area") {
  const PolygonSet poly = l_shape_with_hole();
  for (double angle : {0.0, std::numbers::pi / 7, 0.3}) {
    const BackgroundMesh m = build_background_mesh(poly.bbox(), 0.07, angle, 1);
    const CellDecomposition cells(m, poly);
    double sum = 0.0;
    for (int c = 0; c < m.num_elements(); ++c) {
      CHECK(cells.area_fraction(c) >= 0.0);
      CHECK(cells.area_fraction(c) <= 1.0 + 1e-14);
      double t = 0.0;
      for (const auto& z : cells.trapezoids(c)) t += z.area();
      CHECK(t == doctest::Approx(cells.area_fraction(c)).epsilon(1e-12));
      sum += cells.area(c);
    }
    CHECK(sum == doctest::Approx(poly.area()).epsilon(1e-13));
  }
}

TEST_CASE("cut volume quadrature is exact for polynomials up to its order") {
  const PolygonSet poly = l_shape_with_hole();
  const BackgroundMesh m = build_background_mesh(poly.bbox(), 0.09, std::numbers::pi / 7, 1);
  const CellDecomposition cells(m, poly);
  for (int order : {2, 4, 6}) {
    const auto rules = cut_volume_quadrature(cells, order);
    for (const auto& r : rules)
      for (double w : r.weights) CHECK(w > 0.0);
    for (int a = 0; a <= order; ++a)
      for (int b = 0; a + b <= order; ++b) {
        const double exact = green_moment(poly, a, b);
        CHECK(quad_moment(rules, a, b) == doctest::Approx(exact).epsilon(1e-12));
      }
  }
}

TEST_CASE("moment of x^2 y over the unit right triangle") {
  // int_0^1 int_0^(1-x) x^2 y dy dx = 1/2 int x^2 (1-x)^2 dx = 1/60
  PolygonSet tri({make_loop({{0, 0}, {1, 0}, {0, 1}})});
  const BackgroundMesh m = build_background_mesh(BoundingBox{{0, 0}, {1, 1}}, 0.5, 0.0, 0);
  const CellDecomposition cells(m, tri);
  const auto rules = cut_volume_quadrature(cells, 4);
  CHECK(quad_moment(rules, 2, 1) == doctest::Approx(1.0 / 60.0).epsilon(1e-14));
  CHECK(quad_moment(rules, 0, 0) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("element classification and ghost faces") {
  const PolygonSet poly = l_shape_with_hole();
  const BackgroundMesh m = build_background_mesh(poly.bbox(), 0.1, std::numbers::pi / 7, 0);
  const ActiveMesh act = classify_elements(m, poly);
  int inside = 0;
  for (int e = 0; e < m.num_elements(); ++e) {
    if (act.element_class[e] == ElementClass::Inside) {
      ++inside;
      CHECK(act.area[e] == doctest::Approx(m.cell_area()));
      CHECK(poly.contains(m.center(e)));
    }
    if (act.element_class[e] == ElementClass::Outside) CHECK(act.area[e] == 0.0);
  }
  CHECK(inside > 0);
  CHECK(act.num_cut() > 0);
  const auto faces = ghost_faces(act);
  CHECK_FALSE(faces.empty());
  for (const auto& f : faces) {
    CHECK(act.active(f.left));
    CHECK(act.active(f.right));
    CHECK((act.element_class[f.left] == ElementClass::Cut || act.element_class[f.right] == ElementClass::Cut));
    const auto [il, jl] = m.ij(f.left);
    const auto [ir, jr] = m.ij(f.right);
    CHECK(std::abs(il - ir) + std::abs(jl - jr) == 1);
    CHECK(f.length == doctest::Approx(0.1));
  }
}

TEST_CASE("parametric maps: inverse and Jacobian") {
  std::array<Vec2, 9> nodes = {Vec2(0, 0.9), Vec2(0.7, 0.85), Vec2(1.4, 0.9), Vec2(0, 0.95), Vec2(0.7, 0.925),
                               Vec2(1.4, 0.95), Vec2(0, 1), Vec2(0.7, 1), Vec2(1.4, 1)};
  const std::vector<ParametricMap> maps = {
      ParametricMap::biquadratic(nodes), ParametricMap::polar(Vec2(1, 2), 0.1, 0.3, 0.2, 1.4),
      ParametricMap::bilinear(Vec2(1.0, 0.1), Vec2(1.1, 0.1), Vec2(1.6, 0.9), Vec2(1.5, 0.9))};
  std::mt19937 gen(11);
  std::uniform_real_distribution<double> d(0, 1);
  for (const auto& map : maps)
    for (int k = 0; k < 20; ++k) {
      const Vec2 ref(d(gen), d(gen));
      const auto inv = map.inverse(map(ref));
      CHECK(inv.converged);
      CHECK((inv.ref - ref).norm() < 1e-11);
      const double h = 1e-6;
      const Mat2 J = map.jacobian(ref);
      const Vec2 dx = (map(ref + Vec2(h, 0)) - map(ref - Vec2(h, 0))) / (2 * h);
      const Vec2 dy = (map(ref + Vec2(0, h)) - map(ref - Vec2(0, h))) / (2 * h);
      CHECK((J.col(0) - dx).norm() < 1e-8);
      CHECK((J.col(1) - dy).norm() < 1e-8);
    }
}

TEST_CASE("patch edge normals point outward") {
  Patch p;
  p.map = ParametricMap::polar(Vec2(0, 0), 1.0, 2.0, 0.0, std::numbers::pi / 2);
  // xi = 0 is the inner arc: outward means toward the center.
  const Vec2 n_in = p.edge_normal(PatchEdge::Xi0, 0.5);
  const Vec2 x_in = p.map(p.edge_ref(PatchEdge::Xi0, 0.5));
  CHECK(n_in.dot(x_in) == doctest::Approx(-x_in.norm()));
  const Vec2 n_out = p.edge_normal(PatchEdge::Xi1, 0.5);
  const Vec2 x_out = p.map(p.edge_ref(PatchEdge::Xi1, 0.5));
  CHECK(n_out.dot(x_out) == doctest::Approx(x_out.norm()));
  CHECK(p.area() == doctest::Approx(0.25 * std::numbers::pi * 3.0).epsilon(1e-12));
}

TEST_CASE("geometry validation catches unmatched interfaces") {
  ProblemConfig c = parse_config(R"({"geometry": {"preset": "cantilever"}})");
  Geometry2D geo = build_geometry(c.geometry, c.h, c.density_level);
  geo.validate();
  geo.patches[0].edges[0] = {EdgePiece{0.0, 1.0, BoundaryTag::interface(5)}};
  CHECK_THROWS_AS(geo.validate(), GeometryError);
}

TEST_CASE("boundary and interface quadrature") {
  SUBCASE("straight interfaces: divergence theorem over the design boundary") {
    const ProblemConfig c = parse_config(R"({"geometry": {"preset": "cantilever"}, "mesh": {"h": 0.1}})");
    Discretization disc(build_problem(c));
    Vec2 sum_n = Vec2::Zero();
    double sum_xn = 0.0;
    double interface_len = 0.0, neumann_len = 0.0;
    for (const auto& tp : disc.traces()) {
      if (tp.kind == TagKind::Interface) interface_len += tp.weight;
      if (tp.kind == TagKind::Neumann) neumann_len += tp.weight;
      if (tp.side[0].subdomain != 0) continue;
      sum_n += tp.weight * tp.normal;
      sum_xn += tp.weight * tp.x.dot(tp.normal);
    }
    // The free edges carry no trace points; add them analytically.
    // Free: bottom (0,0)-(2,0), right pieces (2,0.6)-(2,1) and (2,0)-(2,0.4), top (2,1)-(0,1).
    sum_n += 2.0 * Vec2(0, -1) + 0.8 * Vec2(1, 0) + 2.0 * Vec2(0, 1);
    sum_xn += 0.0 + 0.8 * 2.0 + 2.0 * 1.0;
    CHECK(sum_n.norm() < 1e-12);
    CHECK(sum_xn == doctest::Approx(2.0 * disc.definition().geometry.design.area()).epsilon(1e-12));
    CHECK(interface_len == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(neumann_len == doctest::Approx(0.2).epsilon(1e-12));
  }
  SUBCASE("curved patch edges are integrated exactly") {
    const ProblemConfig c = parse_config(R"({"geometry": {"preset": "ring_cantilever"}, "mesh": {"h": 0.1}})");
    Discretization disc(build_problem(c));
    double ring = 0.0, sector_faces = 0.0;
    for (const auto& tp : disc.traces()) {
      if (tp.kind == TagKind::Neumann) ring += tp.weight;
      if (tp.kind == TagKind::Interface && tp.side[0].subdomain >= 3) sector_faces += tp.weight;
      if (tp.kind == TagKind::Interface) {
        CHECK(tp.two_sided());
        CHECK(tp.side[0].subdomain < tp.side[1].subdomain);
      }
    }
    CHECK(ring == doctest::Approx(2.0 * std::numbers::pi * 0.1).epsilon(1e-12));
    CHECK(sector_faces == doctest::Approx(4 * 0.08).epsilon(1e-12));
  }
}
