#include "cutopt/geometry/curve_quadrature.hpp"

#include "cutopt/geometry/quadrature_rules.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace cutopt {

bool patch_inverse(const Patch& patch, const Vec2& x, Vec2& ref, double tol) {
  auto accept = [&](const ParametricMap::Inverse& inv) {
    if (!inv.converged) return false;
    const Vec2 r = inv.ref;
    if (r.x() < -tol || r.x() > 1 + tol || r.y() < -tol || r.y() > 1 + tol) return false;
    ref = r.cwiseMax(Vec2(0.0, 0.0)).cwiseMin(Vec2(1.0, 1.0));
    return true;
  };
  if (accept(patch.map.inverse(x, ref.cwiseMax(Vec2(0, 0)).cwiseMin(Vec2(1, 1))))) return true;
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; b <= 4; ++b)
      if (accept(patch.map.inverse(x, Vec2(a / 4.0, b / 4.0)))) return true;
  return false;
}

namespace {

TraceSide locate_design(const DesignGrids& d, const Vec2& x, const Vec2& mid, const Vec2& n_out) {
  const BackgroundMesh& cm = d.cells->mesh();
  const int levels = cm.level - d.fe->mesh.level;
  const Vec2 gmid = cm.to_grid(mid - 1e-9 * cm.spacing() * n_out);
  int cell = cm.locate(gmid);
  if (cell < 0 || d.cells->area_fraction(cell) < d.tol) {
    // Fall back to the nearest active cell around the point.
    const Vec2 gx = cm.to_grid(mid);
    const int ci = static_cast<int>(std::floor(gx.x())), cj = static_cast<int>(std::floor(gx.y()));
    double best = std::numeric_limits<double>::infinity();
    cell = -1;
    for (int dj = -2; dj <= 2; ++dj)
      for (int di = -2; di <= 2; ++di) {
        const int i = ci + di, j = cj + dj;
        if (i < 0 || j < 0 || i >= cm.nx || j >= cm.ny) continue;
        const int c = cm.index(i, j);
        if (d.cells->area_fraction(c) < d.tol) continue;
        const double dx = std::max({0.0, i - gx.x(), gx.x() - (i + 1)});
        const double dy = std::max({0.0, j - gx.y(), gx.y() - (j + 1)});
        const double dist = std::hypot(dx, dy) - 1e-3 * d.cells->area_fraction(c);
        if (dist < best) {
          best = dist;
          cell = c;
        }
      }
    if (cell < 0) {
      std::ostringstream os;
      os << "boundary point (" << x.x() << ", " << x.y() << ") has no active design cell nearby";
      throw GeometryError(os.str());
    }
  }
  TraceSide s;
  s.subdomain = 0;
  s.cell = cell;
  s.element = cm.parent_element(cell, levels);
  s.grid = d.fe->mesh.to_grid(x);
  return s;
}

TraceSide locate_patch(const Patch& p, int id, int level, const Vec2& ref, const Vec2& mid_ref) {
  const int f = 1 << level;
  const int nxk = p.nx * f, nyk = p.ny * f;
  const int ci = std::clamp(static_cast<int>(std::floor(mid_ref.x() * nxk)), 0, nxk - 1);
  const int cj = std::clamp(static_cast<int>(std::floor(mid_ref.y() * nyk)), 0, nyk - 1);
  TraceSide s;
  s.subdomain = id;
  s.cell = ci + nxk * cj;
  s.element = (ci >> level) + p.nx * (cj >> level);
  s.grid = Vec2(ref.x() * p.nx, ref.y() * p.ny);
  return s;
}

// Refines the break list of a curve parameter interval so that the
// integer parts of g(t) are constant on each piece (sample + bisection).
void add_crossings(std::vector<double>& breaks, const std::function<Vec2(double)>& g, int samples) {
  std::vector<double> out;
  std::sort(breaks.begin(), breaks.end());
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double a = breaks[k], b = breaks[k + 1];
    out.push_back(a);
    auto key = [&](double t) {
      const Vec2 v = g(t);
      return std::make_pair(std::floor(v.x()), std::floor(v.y()));
    };
    double prev = a;
    auto kprev = key(a + 1e-12 * (b - a));
    for (int s = 1; s <= samples; ++s) {
      const double t = s == samples ? b - 1e-12 * (b - a) : a + (b - a) * s / samples;
      const auto kt = key(t);
      for (int guard = 0; guard < 8 && kt != kprev; ++guard) {
        double lo = prev, hi = t;
        for (int it = 0; it < 60; ++it) {
          const double m = 0.5 * (lo + hi);
          if (key(m) == kprev)
            lo = m;
          else
            hi = m;
        }
        if (hi - out.back() > 1e-12 * (b - a) && b - hi > 1e-12 * (b - a)) out.push_back(hi);
        prev = hi;
        kprev = key(hi);
      }
      prev = t;
      kprev = kt;
    }
  }
  out.push_back(breaks.back());
  breaks = std::move(out);
}

}  // namespace

std::vector<CurvePoint> boundary_interface_quadrature(const Geometry2D& geo, const DesignGrids& design,
                                                      int density_level, int points, double tol) {
  std::vector<CurvePoint> out;
  const BackgroundMesh& cm = design.cells->mesh();

  // Straight design edges with Dirichlet or Neumann tags.
  {
    const auto& g = gauss_legendre(points);
    for (const auto& e : geo.design.edges()) {
      if (e.tag.kind != TagKind::Dirichlet && e.tag.kind != TagKind::Neumann) continue;
      const Vec2 A = cm.to_grid(e.a), B = cm.to_grid(e.b);
      std::vector<double> ts{0.0, 1.0};
      for (int c = 0; c < 2; ++c) {
        const double lo = std::min(A[c], B[c]), hi = std::max(A[c], B[c]);
        if (hi - lo < 1e-14) continue;
        for (double m = std::ceil(lo); m <= hi; m += 1.0) ts.push_back((m - A[c]) / (B[c] - A[c]));
      }
      std::sort(ts.begin(), ts.end());
      const Vec2 d = e.b - e.a;
      const double len = d.norm();
      const Vec2 n(d.y() / len, -d.x() / len);
      for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
        const double t0 = ts[k], t1 = ts[k + 1];
        if ((t1 - t0) * len < 1e-14 * cm.spacing()) continue;
        const Vec2 mid = e.a + 0.5 * (t0 + t1) * d;
        for (std::size_t q = 0; q < g.points.size(); ++q) {
          CurvePoint cp;
          cp.x = e.a + (t0 + (t1 - t0) * g.points[q]) * d;
          cp.weight = g.weights[q] * (t1 - t0) * len;
          cp.normal = n;
          cp.tag = e.tag;
          cp.side[0] = locate_design(design, cp.x, mid, n);
          out.push_back(cp);
        }
      }
    }
  }

  // Patch edges.
  const auto& g = gauss_legendre(points + 2);
  const int f = 1 << density_level;
  for (int pi = 0; pi < static_cast<int>(geo.patches.size()); ++pi) {
    const Patch& P = geo.patches[pi];
    const int id = pi + 1;
    for (int ei = 0; ei < 4; ++ei) {
      const auto edge = static_cast<PatchEdge>(ei);
      const bool along_xi = edge == PatchEdge::Eta0 || edge == PatchEdge::Eta1;
      const int nk = (along_xi ? P.nx : P.ny) * f;
      for (const auto& piece : P.edges[ei]) {
        const auto& tag = piece.tag;
        if (tag.kind == TagKind::Free) continue;
        if (tag.kind == TagKind::Interface && tag.partner != 0 && tag.partner < id) continue;

        std::vector<double> breaks{piece.t0, piece.t1};
        for (int m = 0; m <= nk; ++m) {
          const double t = static_cast<double>(m) / nk;
          if (t > piece.t0 && t < piece.t1) breaks.push_back(t);
        }
        std::sort(breaks.begin(), breaks.end());
        const Patch* partner = nullptr;
        Vec2 guess(0.5, 0.5);
        if (tag.kind == TagKind::Interface) {
          if (tag.partner == 0) {
            add_crossings(breaks, [&](double t) { return cm.to_grid(P.map(P.edge_ref(edge, t))); }, 16);
          } else {
            partner = &geo.patches[tag.partner - 1];
            const int pf = f;
            add_crossings(
                breaks,
                [&](double t) {
                  Vec2 r = guess;
                  if (!patch_inverse(*partner, P.map(P.edge_ref(edge, t)), r, 1e-8)) return Vec2(-1.0, -1.0);
                  guess = r;
                  return Vec2(r.x() * partner->nx * pf, r.y() * partner->ny * pf);
                },
                16);
          }
        }

        for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
          const double t0 = breaks[k], t1 = breaks[k + 1];
          const double tm = 0.5 * (t0 + t1);
          const Vec2 mid_ref = P.edge_ref(edge, tm);
          const Vec2 mid = P.map(mid_ref);
          const Vec2 n_mid = P.edge_normal(edge, tm);
          Vec2 partner_mid_ref(0.5, 0.5);
          if (partner) {
            partner_mid_ref = guess;
            if (!patch_inverse(*partner, mid, partner_mid_ref, tol * 100)) {
              std::ostringstream os;
              os << "interface between subdomains " << id << " and " << tag.partner << " does not match at ("
                 << mid.x() << ", " << mid.y() << ")";
              throw GeometryError(os.str());
            }
            guess = partner_mid_ref;
          }
          for (std::size_t q = 0; q < g.points.size(); ++q) {
            const double t = t0 + (t1 - t0) * g.points[q];
            const Vec2 ref = P.edge_ref(edge, t);
            const Mat2 J = P.map.jacobian(ref);
            const double speed = (along_xi ? J.col(0) : J.col(1)).norm();
            CurvePoint cp;
            cp.x = P.map(ref);
            cp.weight = g.weights[q] * (t1 - t0) * speed;
            cp.tag = tag;
            const Vec2 n_out = P.edge_normal(edge, t);
            const TraceSide self = locate_patch(P, id, density_level, ref, mid_ref);
            if (tag.kind != TagKind::Interface) {
              cp.normal = n_out;
              cp.side[0] = self;
            } else if (tag.partner == 0) {
              cp.normal = -n_out;
              cp.side[0] = locate_design(design, cp.x, mid, -n_mid);
              cp.side[1] = self;
            } else {
              Vec2 r = partner_mid_ref;
              if (!patch_inverse(*partner, cp.x, r, tol * 100)) {
                std::ostringstream os;
                os << "interface between subdomains " << id << " and " << tag.partner << " does not match at ("
                   << cp.x.x() << ", " << cp.x.y() << ")";
                throw GeometryError(os.str());
              }
              cp.normal = n_out;
              cp.side[0] = self;
              cp.side[1] = locate_patch(*partner, tag.partner, density_level, r, partner_mid_ref);
            }
            out.push_back(cp);
          }
        }
      }
    }
  }
  return out;
}

}  // namespace cutopt
