#include "cutopt/cli_io/writers.hpp"

#include "cutopt/solve/solve.hpp"

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace cutopt {

namespace {

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

void close_output(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("error while writing '" + path + "'");
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

struct Triangle {
  std::array<Vec2, 3> grid;  ///< FE grid coordinates of the owning subdomain
  std::array<Vec2, 3> x;
  int cell = -1;  ///< density cell
};

// Grid coordinates on the FE grid of a density cell's subdomain for a
// point given in cell-local coordinates.
Vec2 cell_local_to_grid(const Discretization& disc, const DensityCell& c, const Vec2& local) {
  const int k = disc.definition().density_level;
  const double scale = 1.0 / (1 << k);
  int nxk = 0;
  if (c.subdomain == 0) {
    nxk = disc.cell_mesh().nx;
  } else {
    const Patch& p = disc.definition().geometry.patches[c.subdomain - 1];
    nxk = p.nx << k;
  }
  const int ci = c.cell % nxk, cj = c.cell / nxk;
  return {(ci + local.x()) * scale, (cj + local.y()) * scale};
}

std::vector<Triangle> triangulate(const Discretization& disc) {
  std::vector<Triangle> tris;
  const auto& cells = disc.cells();
  for (int ci = 0; ci < static_cast<int>(cells.size()); ++ci) {
    const DensityCell& c = cells[ci];
    const SubdomainSpace& sp = disc.spaces()[c.subdomain];
    auto add_quad = [&](const std::array<Vec2, 4>& q) {
      for (const auto& idx : {std::array<int, 3>{0, 1, 2}, std::array<int, 3>{0, 2, 3}}) {
        Triangle t;
        t.cell = ci;
        for (int v = 0; v < 3; ++v) {
          t.grid[v] = cell_local_to_grid(disc, c, q[idx[v]]);
          t.x[v] = sp.map.to_physical(t.grid[v]);
        }
        const double area = cross2(t.x[1] - t.x[0], t.x[2] - t.x[0]);
        if (std::abs(area) > 1e-14 * disc.cell_mesh().cell_area()) tris.push_back(t);
      }
    };
    if (c.subdomain == 0) {
      for (const Trapezoid& tz : disc.decomposition().trapezoids(c.cell))
        add_quad({Vec2(tz.x0, tz.lo0), Vec2(tz.x1, tz.lo1), Vec2(tz.x1, tz.hi1), Vec2(tz.x0, tz.hi0)});
    } else {
      add_quad({Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)});
    }
  }
  return tris;
}

int element_of(const SubdomainSpace& sp, const Vec2& grid, int fallback) {
  const int e = sp.space.locate(grid);
  return e >= 0 && sp.space.element_active(e) ? e : fallback;
}

}  // namespace

void ensure_directory(const std::string& dir) {
  if (dir.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
}

void write_density_vtk(const std::string& path, const Discretization& disc, const Eigen::VectorXd& rho) {
  const int n = disc.num_design_cells();
  if (rho.size() != n) throw std::invalid_argument("write_density_vtk: rho size does not match the design cells");
  const Eigen::VectorXd chi = disc.chi_from_design(rho);
  const BackgroundMesh& mesh = disc.cell_mesh();
  auto out = open_output(path);
  out << "# vtk DataFile Version 3.0\n";
  out << "cutopt density v1\n";
  out << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << 4 * n << " double\n";
  for (int c = 0; c < n; ++c) {
    const auto [i, j] = mesh.ij(disc.cells()[c].cell);
    for (const Vec2& g : {Vec2(i, j), Vec2(i + 1, j), Vec2(i + 1, j + 1), Vec2(i, j + 1)}) {
      const Vec2 x = mesh.to_physical(g);
      out << num(x.x()) << ' ' << num(x.y()) << " 0\n";
    }
  }
  out << "CELLS " << n << ' ' << 5 * n << '\n';
  for (int c = 0; c < n; ++c) out << "4 " << 4 * c << ' ' << 4 * c + 1 << ' ' << 4 * c + 2 << ' ' << 4 * c + 3 << '\n';
  out << "CELL_TYPES " << n << '\n';
  for (int c = 0; c < n; ++c) out << "9\n";
  out << "CELL_DATA " << n << '\n';
  out << "SCALARS rho double 1\nLOOKUP_TABLE default\n";
  for (int c = 0; c < n; ++c) out << num(rho[c]) << '\n';
  out << "SCALARS chi double 1\nLOOKUP_TABLE default\n";
  for (int c = 0; c < n; ++c) out << num(chi[c]) << '\n';
  out << "SCALARS area_fraction double 1\nLOOKUP_TABLE default\n";
  for (int c = 0; c < n; ++c) out << num(disc.cells()[c].volume / mesh.cell_area()) << '\n';
  close_output(out, path);
}

void write_fields_vtk(const std::string& path, const Discretization& disc, const Eigen::VectorXd& u,
                      const Eigen::VectorXd& chi) {
  const auto tris = triangulate(disc);
  const std::size_t n = tris.size();
  std::vector<Vec2> disp(3 * n);
  std::vector<double> vm(3 * n);
  for (std::size_t t = 0; t < n; ++t) {
    const DensityCell& c = disc.cells()[tris[t].cell];
    const SubdomainSpace& sp = disc.spaces()[c.subdomain];
    for (int v = 0; v < 3; ++v) {
      // Vertices on element borders are evaluated in the owning element.
      const Vec2 inner = tris[t].grid[v] + 1e-9 * ((tris[t].grid[0] + tris[t].grid[1] + tris[t].grid[2]) / 3.0 -
                                                   tris[t].grid[v]);
      const int e = element_of(sp, inner, c.element);
      disp[3 * t + v] = displacement_at(disc, u, c.subdomain, e, tris[t].grid[v]);
      vm[3 * t + v] = stress_at(disc, u, chi[tris[t].cell], c.subdomain, e, tris[t].grid[v]).von_mises;
    }
  }
  auto out = open_output(path);
  out << "# vtk DataFile Version 3.0\n";
  out << "cutopt fields v1\n";
  out << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << 3 * n << " double\n";
  for (const auto& t : tris)
    for (const Vec2& x : t.x) out << num(x.x()) << ' ' << num(x.y()) << " 0\n";
  out << "CELLS " << n << ' ' << 4 * n << '\n';
  for (std::size_t t = 0; t < n; ++t) out << "3 " << 3 * t << ' ' << 3 * t + 1 << ' ' << 3 * t + 2 << '\n';
  out << "CELL_TYPES " << n << '\n';
  for (std::size_t t = 0; t < n; ++t) out << "5\n";
  out << "CELL_DATA " << n << '\n';
  out << "SCALARS chi double 1\nLOOKUP_TABLE default\n";
  for (const auto& t : tris) out << num(chi[t.cell]) << '\n';
  out << "SCALARS subdomain int 1\nLOOKUP_TABLE default\n";
  for (const auto& t : tris) out << disc.cells()[t.cell].subdomain << '\n';
  out << "POINT_DATA " << 3 * n << '\n';
  out << "VECTORS displacement double\n";
  for (const Vec2& d : disp) out << num(d.x()) << ' ' << num(d.y()) << " 0\n";
  out << "SCALARS von_mises double 1\nLOOKUP_TABLE default\n";
  for (double v : vm) out << num(v) << '\n';
  close_output(out, path);
}

std::string history_csv_row(const HistoryRow& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g", r.iter, r.volume_target, r.volume_actual,
                r.compliance, r.max_delta_rho, r.eta);
  return buf;
}

void write_history_csv(const std::string& path, const std::vector<HistoryRow>& history) {
  auto out = open_output(path);
  out << kHistoryHeader << '\n';
  for (const auto& r : history) out << history_csv_row(r) << '\n';
  close_output(out, path);
}

}  // namespace cutopt
