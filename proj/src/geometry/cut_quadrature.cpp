#include "cutopt/geometry/cut_quadrature.hpp"

#include "cutopt/geometry/quadrature_rules.hpp"

#include <algorithm>
#include <cmath>

namespace cutopt {

namespace {

struct LocalSeg {
  Vec2 a, b;  // cell-local, oriented with the domain on the left
};

// Liang-Barsky clip of p + t (q - p), t in [0,1], against [0,1]^2.
bool clip_unit(const Vec2& p, const Vec2& q, Vec2& ca, Vec2& cb) {
  double t0 = 0.0, t1 = 1.0;
  const Vec2 d = q - p;
  const double P[4] = {-d.x(), d.x(), -d.y(), d.y()};
  const double Q[4] = {p.x(), 1.0 - p.x(), p.y(), 1.0 - p.y()};
  for (int k = 0; k < 4; ++k) {
    if (P[k] == 0.0) {
      if (Q[k] < 0.0) return false;
      continue;
    }
    const double r = Q[k] / P[k];
    if (P[k] < 0.0) {
      if (r > t1) return false;
      t0 = std::max(t0, r);
    } else {
      if (r < t0) return false;
      t1 = std::min(t1, r);
    }
  }
  ca = p + t0 * d;
  cb = p + t1 * d;
  return true;
}

std::vector<Trapezoid> decompose(const std::vector<LocalSeg>& segs, const auto& inside_at) {
  std::vector<double> xs{0.0, 1.0};
  for (const auto& s : segs) {
    xs.push_back(std::clamp(s.a.x(), 0.0, 1.0));
    xs.push_back(std::clamp(s.b.x(), 0.0, 1.0));
  }
  std::sort(xs.begin(), xs.end());
  std::vector<double> ev;
  for (double x : xs)
    if (ev.empty() || x - ev.back() > 1e-13) ev.push_back(x);
  ev.back() = 1.0;

  std::vector<Trapezoid> out;
  struct Span {
    double ya, yb, ym;
    bool above;
  };
  std::vector<Span> spans;
  for (std::size_t k = 0; k + 1 < ev.size(); ++k) {
    const double xa = ev[k], xb = ev[k + 1], xm = 0.5 * (xa + xb);
    spans.clear();
    for (const auto& s : segs) {
      const double dx = s.b.x() - s.a.x();
      if (std::abs(dx) < 1e-15) continue;
      if (std::min(s.a.x(), s.b.x()) > xm || std::max(s.a.x(), s.b.x()) < xm) continue;
      auto y_at = [&](double x) { return std::clamp(s.a.y() + (x - s.a.x()) * (s.b.y() - s.a.y()) / dx, 0.0, 1.0); };
      spans.push_back({y_at(xa), y_at(xb), y_at(xm), dx > 0.0});
    }
    if (spans.empty()) {
      if (inside_at(Vec2(xm, 0.5))) out.push_back({xa, xb, 0.0, 0.0, 1.0, 1.0});
      continue;
    }
    std::sort(spans.begin(), spans.end(), [](const Span& l, const Span& r) { return l.ym < r.ym; });
    auto add = [&](double la, double lb, double ha, double hb) {
      const double area = 0.5 * (xb - xa) * ((ha - la) + (hb - lb));
      if (area > 0.0) out.push_back({xa, xb, la, lb, ha, hb});
    };
    if (!spans.front().above) add(0.0, 0.0, spans.front().ya, spans.front().yb);
    for (std::size_t m = 0; m + 1 < spans.size(); ++m)
      if (spans[m].above) add(spans[m].ya, spans[m].yb, spans[m + 1].ya, spans[m + 1].yb);
    if (spans.back().above) add(spans.back().ya, spans.back().yb, 1.0, 1.0);
  }
  return out;
}

}  // namespace

CellDecomposition::CellDecomposition(const BackgroundMesh& mesh, const PolygonSet& poly) : mesh_(mesh) {
  const int n = mesh.num_elements();
  fraction_.assign(n, 0.0);
  first_.assign(n, -1);
  count_.assign(n, 0);

  std::vector<std::vector<LocalSeg>> bins(n);
  for (const auto& e : poly.edges()) {
    const Vec2 A = mesh.to_grid(e.a), B = mesh.to_grid(e.b);
    const double tmin = std::min(A.y(), B.y()), tmax = std::max(A.y(), B.y());
    const int jlo = std::max(0, static_cast<int>(std::ceil(tmin)) - 1);
    const int jhi = std::min(mesh.ny - 1, static_cast<int>(std::floor(tmax)));
    for (int j = jlo; j <= jhi; ++j) {
      // s-range of the segment within row j (closed)
      double smin, smax;
      if (B.y() == A.y()) {
        smin = std::min(A.x(), B.x());
        smax = std::max(A.x(), B.x());
      } else {
        const double ta = std::clamp((j - A.y()) / (B.y() - A.y()), 0.0, 1.0);
        const double tb = std::clamp((j + 1 - A.y()) / (B.y() - A.y()), 0.0, 1.0);
        const double sa = A.x() + ta * (B.x() - A.x()), sb = A.x() + tb * (B.x() - A.x());
        smin = std::min(sa, sb);
        smax = std::max(sa, sb);
      }
      const int ilo = std::max(0, static_cast<int>(std::ceil(smin)) - 1);
      const int ihi = std::min(mesh.nx - 1, static_cast<int>(std::floor(smax)));
      for (int i = ilo; i <= ihi; ++i) {
        const Vec2 off(i, j);
        Vec2 ca, cb;
        if (!clip_unit(A - off, B - off, ca, cb)) continue;
        if ((cb - ca).norm() < 1e-14) continue;
        bins[mesh.index(i, j)].push_back({ca, cb});
      }
    }
  }

  for (int c = 0; c < n; ++c) {
    auto [i, j] = mesh.ij(c);
    const Vec2 off(i, j);
    auto inside_at = [&](const Vec2& local) { return poly.contains(mesh.to_physical(local + off)); };
    if (bins[c].empty()) {
      fraction_[c] = inside_at(Vec2(0.5, 0.5)) ? 1.0 : 0.0;
      continue;
    }
    auto traps = decompose(bins[c], inside_at);
    double a = 0.0;
    for (const auto& t : traps) a += t.area();
    fraction_[c] = a;
    first_[c] = static_cast<int>(trap_.size());
    count_[c] = static_cast<int>(traps.size());
    trap_.insert(trap_.end(), traps.begin(), traps.end());
  }
}

std::vector<Trapezoid> CellDecomposition::trapezoids(int cell) const {
  if (first_[cell] >= 0) return {trap_.begin() + first_[cell], trap_.begin() + first_[cell] + count_[cell]};
  if (fraction_[cell] > 0.0) return {Trapezoid{}};
  return {};
}

int ActiveMesh::num_cut() const {
  return static_cast<int>(std::count(element_class.begin(), element_class.end(), ElementClass::Cut));
}

ActiveMesh classify_elements(const BackgroundMesh& mesh, const PolygonSet& poly, double tol) {
  return classify_from_cells(mesh, CellDecomposition(mesh, poly), tol);
}

ActiveMesh classify_from_cells(const BackgroundMesh& fe_mesh, const CellDecomposition& cells, double tol) {
  const BackgroundMesh& cm = cells.mesh();
  const int levels = cm.level - fe_mesh.level;
  ActiveMesh am;
  am.mesh = fe_mesh;
  const int ne = fe_mesh.num_elements();
  am.element_class.assign(ne, ElementClass::Outside);
  am.area.assign(ne, 0.0);
  std::vector<char> any(ne, 0);
  for (int c = 0; c < cm.num_elements(); ++c) {
    const int e = cm.parent_element(c, levels);
    am.area[e] += cells.area(c);
    if (cells.area_fraction(c) >= tol) any[e] = 1;
  }
  const double full = fe_mesh.cell_area();
  for (int e = 0; e < ne; ++e) {
    if (!any[e]) continue;
    am.element_class[e] = am.area[e] / full > 1.0 - tol ? ElementClass::Inside : ElementClass::Cut;
    am.active_ids.push_back(e);
  }
  return am;
}

CellRule cell_rule(const CellDecomposition& cells, int cell, int order) {
  const auto& mesh = cells.mesh();
  const auto& g = gauss_legendre(gauss_points_for_order(order));
  auto [i, j] = mesh.ij(cell);
  const Vec2 off(i, j);
  const double scale = mesh.cell_area();
  CellRule r;
  r.cell = cell;
  Vec2 moment = Vec2::Zero();
  for (const auto& t : cells.trapezoids(cell)) {
    const double w = t.x1 - t.x0;
    for (std::size_t a = 0; a < g.points.size(); ++a) {
      const double u = g.points[a];
      const double x = t.x0 + w * u;
      const double lo = t.lo0 + (t.lo1 - t.lo0) * u;
      const double hi = t.hi0 + (t.hi1 - t.hi0) * u;
      if (hi <= lo) continue;
      for (std::size_t b = 0; b < g.points.size(); ++b) {
        const double y = lo + (hi - lo) * g.points[b];
        const double wt = g.weights[a] * g.weights[b] * w * (hi - lo) * scale;
        const Vec2 p = mesh.to_physical(off + Vec2(x, y));
        r.points.push_back(p);
        r.weights.push_back(wt);
        r.volume += wt;
        moment += wt * p;
      }
    }
  }
  if (r.volume < 1e-14 * scale) {
    r.points.clear();
    r.weights.clear();
    r.volume = 0.0;
    r.centroid = mesh.center(cell);
  } else {
    r.centroid = moment / r.volume;
  }
  return r;
}

std::vector<CellRule> cut_volume_quadrature(const CellDecomposition& cells, int order, double tol) {
  std::vector<CellRule> rules;
  for (int c = 0; c < cells.mesh().num_elements(); ++c)
    if (cells.area_fraction(c) >= tol) rules.push_back(cell_rule(cells, c, order));
  return rules;
}

}  // namespace cutopt
