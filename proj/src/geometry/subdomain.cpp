#include "cutopt/geometry/subdomain.hpp"

#include "cutopt/geometry/quadrature_rules.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace cutopt {

const char* patch_edge_name(PatchEdge e) {
  switch (e) {
    case PatchEdge::Eta0: return "eta0";
    case PatchEdge::Xi1: return "xi1";
    case PatchEdge::Eta1: return "eta1";
    case PatchEdge::Xi0: return "xi0";
  }
  return "eta0";
}

PatchEdge parse_patch_edge(const std::string& name) {
  if (name == "eta0") return PatchEdge::Eta0;
  if (name == "xi1") return PatchEdge::Xi1;
  if (name == "eta1") return PatchEdge::Eta1;
  if (name == "xi0") return PatchEdge::Xi0;
  throw ConfigError("unknown patch edge '" + name + "' (expected eta0, xi1, eta1, xi0)");
}

Vec2 Patch::edge_ref(PatchEdge e, double t) const {
  switch (e) {
    case PatchEdge::Eta0: return {t, 0.0};
    case PatchEdge::Xi1: return {1.0, t};
    case PatchEdge::Eta1: return {t, 1.0};
    case PatchEdge::Xi0: return {0.0, t};
  }
  return {t, 0.0};
}

Vec2 Patch::edge_normal(PatchEdge e, double t) const {
  const Mat2 J = map.jacobian(edge_ref(e, t));
  const bool along_xi = e == PatchEdge::Eta0 || e == PatchEdge::Eta1;
  const Vec2 tang = along_xi ? Vec2(J.col(0)) : Vec2(J.col(1));
  Vec2 right(tang.y(), -tang.x());
  if (e == PatchEdge::Eta1 || e == PatchEdge::Xi0) right = -right;
  return right.normalized();
}

std::vector<Vec2> Patch::sample_edge(PatchEdge e, double t0, double t1, double max_chord) const {
  // Arc length estimate decides the subdivision count.
  const auto& g = gauss_legendre(8);
  double len = 0.0;
  const bool along_xi = e == PatchEdge::Eta0 || e == PatchEdge::Eta1;
  for (std::size_t q = 0; q < g.points.size(); ++q) {
    const double t = t0 + (t1 - t0) * g.points[q];
    const Mat2 J = map.jacobian(edge_ref(e, t));
    len += g.weights[q] * std::abs(t1 - t0) * (along_xi ? J.col(0) : J.col(1)).norm();
  }
  const int n = std::max(1, static_cast<int>(std::ceil(len / max_chord - 1e-12)));
  std::vector<Vec2> pts;
  pts.reserve(n + 1);
  for (int k = 0; k <= n; ++k) pts.push_back(map(edge_ref(e, t0 + (t1 - t0) * k / n)));
  return pts;
}

double Patch::area() const {
  const auto& g = gauss_legendre(8);
  double a = 0.0;
  for (std::size_t i = 0; i < g.points.size(); ++i)
    for (std::size_t j = 0; j < g.points.size(); ++j)
      a += g.weights[i] * g.weights[j] * map.jacobian(Vec2(g.points[i], g.points[j])).determinant();
  return a;
}

BoundaryTag Patch::tag_at(PatchEdge e, double t) const {
  for (const auto& p : edges[static_cast<int>(e)])
    if (t >= p.t0 && t <= p.t1) return p.tag;
  return BoundaryTag::free();
}

Subdomain Geometry2D::subdomain(int id) const {
  Subdomain s;
  s.id = id;
  if (id == 0)
    s.polygon = design;
  else
    s.patch = patches.at(id - 1);
  return s;
}

namespace {

// Distance from x to the boundary of the patch reference square after
// inverse mapping; large if the point is not on the patch boundary.
double distance_to_patch_boundary(const Patch& p, const Vec2& x) {
  double best = std::numeric_limits<double>::infinity();
  // Newton from a few starting points along the boundary.
  for (int e = 0; e < 4; ++e)
    for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const auto inv = p.map.inverse(x, p.edge_ref(static_cast<PatchEdge>(e), t));
      if (!inv.converged) continue;
      const Vec2 r = inv.ref;
      if (r.x() < -1e-8 || r.x() > 1 + 1e-8 || r.y() < -1e-8 || r.y() > 1 + 1e-8) continue;
      const double d = std::min({std::abs(r.x()), std::abs(1 - r.x()), std::abs(r.y()), std::abs(1 - r.y())});
      // Convert the reference distance to a physical one.
      const double scale = p.map.jacobian(r).norm();
      best = std::min(best, d * scale);
    }
  return best;
}

}  // namespace

void Geometry2D::validate(double tol) const {
  const int n = num_subdomains();
  auto mirrors = [&](int from, int to) {
    if (to == 0) {
      for (const auto& e : design.edges())
        if (e.tag.kind == TagKind::Interface && e.tag.partner == from) return true;
      return false;
    }
    for (const auto& pieces : patches[to - 1].edges)
      for (const auto& pc : pieces)
        if (pc.tag.kind == TagKind::Interface && pc.tag.partner == from) return true;
    return false;
  };
  auto check_partner = [&](int self, const BoundaryTag& tag) {
    if (tag.kind != TagKind::Interface) return;
    std::ostringstream os;
    if (tag.partner < 0 || tag.partner >= n || tag.partner == self) {
      os << "subdomain " << self << " has an interface to nonexistent subdomain " << tag.partner;
      throw GeometryError(os.str());
    }
    if (!mirrors(self, tag.partner)) {
      os << "interface " << self << " -> " << tag.partner << " is not mirrored by subdomain " << tag.partner;
      throw GeometryError(os.str());
    }
  };
  for (const auto& e : design.edges()) check_partner(0, e.tag);
  for (int i = 0; i < static_cast<int>(patches.size()); ++i) {
    const Patch& p = patches[i];
    if (p.nx < 1 || p.ny < 1) {
      std::ostringstream os;
      os << "patch " << i + 1 << " needs at least one element per direction";
      throw GeometryError(os.str());
    }
    for (int a = 0; a <= 8; ++a)
      for (int b = 0; b <= 8; ++b) {
        const double det = p.map.jacobian(Vec2(a / 8.0, b / 8.0)).determinant();
        if (!(det > 0.0)) {
          std::ostringstream os;
          os << "patch " << i + 1 << " map has a non-positive Jacobian at (" << a / 8.0 << ", " << b / 8.0 << ")";
          throw GeometryError(os.str());
        }
      }
    for (int e = 0; e < 4; ++e) {
      double last = 0.0;
      for (const auto& pc : p.edges[e]) {
        if (pc.t0 < last - 1e-14 || pc.t1 <= pc.t0 || pc.t1 > 1.0 + 1e-14) {
          std::ostringstream os;
          os << "patch " << i + 1 << " edge " << patch_edge_name(static_cast<PatchEdge>(e))
             << " has overlapping or unordered pieces";
          throw GeometryError(os.str());
        }
        last = pc.t1;
        check_partner(i + 1, pc.tag);
      }
    }
  }
  // Design interface edges must lie on the partner patch boundary.
  for (const auto& e : design.edges()) {
    if (e.tag.kind != TagKind::Interface) continue;
    const Patch& p = patches[e.tag.partner - 1];
    for (const Vec2& v : {e.a, e.b, Vec2(0.5 * (e.a + e.b))}) {
      const double d = distance_to_patch_boundary(p, v);
      // The chord midpoint may sit off a curved edge by the sagitta.
      const double allowed = (v == e.a || v == e.b) ? tol : std::max(tol, 0.1 * (e.b - e.a).norm());
      if (!(d <= allowed)) {
        std::ostringstream os;
        os << "design interface edge (" << e.a.x() << ", " << e.a.y() << ") - (" << e.b.x() << ", " << e.b.y()
           << ") does not lie on the boundary of subdomain " << e.tag.partner << " (gap " << d << ")";
        throw GeometryError(os.str());
      }
    }
  }
}

MapEval map_eval(const Subdomain& sub, const Vec2& ref) {
  if (!sub.patch) throw GeometryError("map_eval called on a subdomain without a parametric map");
  const double eps = 1e-12;
  if (!(ref.x() >= -eps && ref.x() <= 1 + eps && ref.y() >= -eps && ref.y() <= 1 + eps)) {
    std::ostringstream os;
    os << "reference point (" << ref.x() << ", " << ref.y() << ") outside [0,1]^2";
    throw GeometryError(os.str());
  }
  MapEval m{sub.patch->map(ref), sub.patch->map.jacobian(ref)};
  if (!(m.J.determinant() > 0.0)) {
    std::ostringstream os;
    os << "singular or inverted map Jacobian at (" << ref.x() << ", " << ref.y() << ")";
    throw GeometryError(os.str());
  }
  return m;
}

}  // namespace cutopt
