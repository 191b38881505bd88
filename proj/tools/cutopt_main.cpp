// Command-line driver: run, check, resume, dump-matrix.
#include "cutopt/assembly/assemble.hpp"
#include "cutopt/cli_io/checkpoint.hpp"
#include "cutopt/cli_io/config.hpp"
#include "cutopt/cli_io/problem_builder.hpp"
#include "cutopt/cli_io/writers.hpp"
#include "cutopt/optimize/optimizer.hpp"
#include "cutopt/solve/solve.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>

using namespace cutopt;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitSolver = 2;

struct Options {
  std::string input;
  std::string config_override;  ///< resume: config the checkpoint must match
  int max_iters = -1;
  std::string output_dir;
  int threads = 1;
  bool verify = false;
};

std::string out_path(const ProblemConfig& c, const std::string& suffix) {
  return (c.output_dir.empty() ? std::string() : c.output_dir + "/") + c.output_prefix + suffix;
}

void apply_overrides(ProblemConfig& c, const Options& o) {
  if (o.max_iters >= 0) c.max_iters = o.max_iters;
  if (!o.output_dir.empty()) c.output_dir = o.output_dir;
  if (o.threads < 1) throw ConfigError("--threads must be >= 1");
}

const char* mark(bool is_default) { return is_default ? "default" : "set"; }

void print_banner(const ProblemConfig& c, const Discretization& disc, int threads) {
  const ProblemConfig d;
  const double mu0 = disc.spaces()[0].mu_hat;
  std::printf("cutopt: config %s\n", config_hash(c).c_str());
  std::printf("  geometry        %s, %d subdomain(s)\n", c.geometry.preset.empty() ? "explicit" : c.geometry.preset.c_str(),
              disc.definition().geometry.num_subdomains());
  std::printf("  grid            h = %g, angle = %.10g rad [%s], k = %d [%s], p = %d [%s]\n", c.h, c.angle,
              mark(c.angle == d.angle), c.density_level, mark(c.density_level == d.density_level), c.degree,
              mark(c.degree == d.degree));
  std::printf("  nitsche         beta = %g [%s, 10 p^2 = %g]\n", c.beta,
              mark(c.beta == 10.0 * c.degree * c.degree), 10.0 * c.degree * c.degree);
  std::printf("  ghost penalty   %s, gamma_k = mu0 * %g / k! [%s]:", c.ghost_penalty ? "on" : "off", c.ghost_scale,
              mark(c.ghost_scale == d.ghost_scale));
  double fact = 1.0;
  for (int k = 1; k <= c.degree; ++k) {
    fact *= k;
    std::printf(" %.3g", mu0 * c.ghost_scale / fact);
  }
  std::printf("\n");
  std::printf("  density         chi_min = %g [%s], q = %g [%s], volume = %g [%s], ramp = %d [%s]\n", c.chi_min,
              mark(c.chi_min == d.chi_min), c.q, mark(c.q == d.q), c.volume_fraction,
              mark(c.volume_fraction == d.volume_fraction), c.ramp_iters, mark(c.ramp_iters == d.ramp_iters));
  std::printf("  filter          R_min = %g h [%s], gamma = %g [%s]\n", c.filter_radius,
              mark(c.filter_radius == d.filter_radius), c.filter_gamma, mark(c.filter_gamma == d.filter_gamma));
  std::printf("  oc              move = %g [%s], damping = %g [%s]\n", c.move, mark(c.move == d.move), c.damping,
              mark(c.damping == d.damping));
  std::printf("  run             max_iters = %d, convergence = %g, threads = %d\n", c.max_iters, c.convergence,
              threads);
  std::printf("  discretization  %d equations, %d design cells (%d cut elements), %zu trace points, %zu ghost faces\n",
              disc.num_equations(), disc.num_design_cells(), disc.active_mesh().num_cut(), disc.traces().size(),
              disc.ghost_face_set().size());
  std::fflush(stdout);
}

void write_outputs(const ProblemConfig& c, Optimizer& opt, const OptimizationState& st, bool checkpoint) {
  const Discretization& disc = opt.discretization();
  ensure_directory(c.output_dir);
  if (c.write_history) write_history_csv(out_path(c, "_history.csv"), st.history);
  if (c.write_vtk) {
    write_density_vtk(out_path(c, "_density.vtk"), disc, st.rho);
    const DisplacementField u = opt.solve(st.rho);
    write_fields_vtk(out_path(c, "_fields.vtk"), disc, u.u, disc.chi_from_design(st.rho));
  }
  if (checkpoint && c.write_checkpoint) write_checkpoint(out_path(c, ".ckpt"), c, st);
}

int optimize(ProblemConfig c, OptimizationState* resumed, const Options& o) {
  apply_overrides(c, o);
  const auto t0 = std::chrono::steady_clock::now();
  Discretization disc(build_problem(c));
  print_banner(c, disc, o.threads);
  Optimizer opt(disc, build_settings(c));

  if (o.verify) {
    std::mt19937 gen(12345);
    std::uniform_real_distribution<double> dist(0.3, 0.9);
    Eigen::VectorXd rho(disc.num_design_cells());
    for (Eigen::Index i = 0; i < rho.size(); ++i) rho[i] = dist(gen);
    const GradientCheck g = check_gradient(disc, rho, 10, 1e-6, 7u);
    std::printf("verify: %zu cells, max relative error %.3e\n", g.cells.size(), g.max_rel_error);
    if (!(g.max_rel_error < 1e-4)) {
      std::fprintf(stderr, "error: sensitivity check failed (max relative error %.3e >= 1e-4)\n", g.max_rel_error);
      return kExitSolver;
    }
  }

  OptimizationState st = resumed ? *resumed : opt.initial_state();
  if (st.rho.size() != disc.num_design_cells())
    throw ConfigError("checkpoint holds " + std::to_string(st.rho.size()) + " densities but the problem has " +
                      std::to_string(disc.num_design_cells()) + " design cells");
  if (c.max_iters == 0 || st.iteration >= c.max_iters || st.converged) {
    write_outputs(c, opt, st, false);
    std::printf("no iterations to run; wrote initial state to %s\n", c.output_dir.c_str());
    return 0;
  }
  ensure_directory(c.output_dir);
  opt.run(st, c.max_iters, [&](const OptimizationState& s) {
    const HistoryRow& r = s.history.back();
    std::printf("iter %4d  target %.4f  volume %.6f  compliance %.8e  change %.4f  eta %.4e\n", r.iter,
                r.volume_target, r.volume_actual, r.compliance, r.max_delta_rho, r.eta);
    std::fflush(stdout);
    if (c.checkpoint_every > 0 && s.iteration % c.checkpoint_every == 0) {
      if (c.write_checkpoint) write_checkpoint(out_path(c, ".ckpt"), c, s);
      if (c.write_history) write_history_csv(out_path(c, "_history.csv"), s.history);
    }
  });
  write_outputs(c, opt, st, true);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%s after %d iterations (%.1f s); outputs in %s\n", st.converged ? "converged" : "stopped",
              st.iteration, secs, c.output_dir.empty() ? "." : c.output_dir.c_str());
  return 0;
}

int cmd_check(ProblemConfig c, const Options& o) {
  apply_overrides(c, o);
  Discretization disc(build_problem(c));
  print_banner(c, disc, o.threads);
  const auto& geo = disc.definition().geometry;
  double quad_area = 0.0;
  for (int i = 0; i < disc.num_design_cells(); ++i) quad_area += disc.cells()[i].volume;
  std::printf("design area: polygon %.12g, quadrature %.12g\n", geo.design.area(), quad_area);
  int counts[4] = {0, 0, 0, 0};
  double lengths[4] = {0, 0, 0, 0};
  for (const auto& tp : disc.traces()) {
    counts[static_cast<int>(tp.kind)]++;
    lengths[static_cast<int>(tp.kind)] += tp.weight;
  }
  const char* names[4] = {"free", "dirichlet", "neumann", "interface"};
  for (int k = 1; k < 4; ++k)
    std::printf("%-9s trace points %6d, length %.12g\n", names[k], counts[k], lengths[k]);

  ensure_directory(c.output_dir);
  const std::string cells_path = out_path(c, "_cut_cells.csv");
  std::ofstream cells(cells_path);
  if (!cells) throw IoError("cannot open '" + cells_path + "' for writing");
  cells << "cell,element,fraction,trapezoid,x0,y0,x1,y1,x2,y2,x3,y3\n";
  const BackgroundMesh& cm = disc.cell_mesh();
  for (int i = 0; i < disc.num_design_cells(); ++i) {
    const DensityCell& dc = disc.cells()[i];
    const double frac = disc.decomposition().area_fraction(dc.cell);
    if (frac >= 1.0 - 1e-12) continue;
    const auto [ci, cj] = cm.ij(dc.cell);
    const auto traps = disc.decomposition().trapezoids(dc.cell);
    for (std::size_t t = 0; t < traps.size(); ++t) {
      const Trapezoid& z = traps[t];
      cells << dc.cell << ',' << dc.element << ',' << frac << ',' << t;
      for (const Vec2& l : {Vec2(z.x0, z.lo0), Vec2(z.x1, z.lo1), Vec2(z.x1, z.hi1), Vec2(z.x0, z.hi0)}) {
        const Vec2 x = cm.to_physical(Vec2(ci + l.x(), cj + l.y()));
        cells << ',' << x.x() << ',' << x.y();
      }
      cells << '\n';
    }
  }
  const std::string pts_path = out_path(c, "_quadrature.csv");
  std::ofstream pts(pts_path);
  if (!pts) throw IoError("cannot open '" + pts_path + "' for writing");
  pts << "kind,x,y,weight,nx,ny,side0,side1\n";
  pts.precision(12);
  for (const auto& tp : disc.traces())
    pts << names[static_cast<int>(tp.kind)] << ',' << tp.x.x() << ',' << tp.x.y() << ',' << tp.weight << ','
        << tp.normal.x() << ',' << tp.normal.y() << ',' << tp.side[0].subdomain << ',' << tp.side[1].subdomain << '\n';
  std::printf("wrote %s and %s\n", cells_path.c_str(), pts_path.c_str());
  return 0;
}

int cmd_dump_matrix(ProblemConfig c, const Options& o) {
  apply_overrides(c, o);
  Discretization disc(build_problem(c));
  const Eigen::VectorXd rho = Eigen::VectorXd::Ones(disc.num_design_cells());
  const LinearSystem sys = assemble_system(disc, disc.chi_from_design(rho));
  ensure_directory(c.output_dir);
  const std::string path = out_path(c, "_matrix.txt");
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_matrix_market_like(out, sys.A);
  const std::string rhs_path = out_path(c, "_rhs.txt");
  std::ofstream rhs(rhs_path);
  if (!rhs) throw IoError("cannot open '" + rhs_path + "' for writing");
  rhs << "# cutopt rhs v1\n" << sys.b.size() << '\n';
  char buf[32];
  for (Eigen::Index i = 0; i < sys.b.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g\n", sys.b[i]);
    rhs << buf;
  }
  if (!out || !rhs) throw IoError("error while writing '" + path + "'");
  std::printf("wrote %s (%ld x %ld, %ld nonzeros) and %s\n", path.c_str(), long(sys.A.rows()), long(sys.A.cols()),
              long(sys.A.nonZeros()), rhs_path.c_str());
  return 0;
}

void add_common(CLI::App* sub, Options& o, bool optimize_flags) {
  sub->add_option("--output-dir", o.output_dir, "Directory for output files");
  sub->add_option("--threads", o.threads, "Worker thread cap (computation is sequential)")->check(CLI::PositiveNumber);
  if (optimize_flags) {
    sub->add_option("--max-iters", o.max_iters, "Total iteration count; 0 writes the initial state only")
        ->check(CLI::NonNegativeNumber);
    sub->add_flag("--verify", o.verify, "Finite-difference sensitivity check before optimizing");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Density-based topology optimization on cut B-spline meshes"};
  app.require_subcommand(1);
  Options o;
  auto* run = app.add_subcommand("run", "Optimize the problem described by a config file");
  run->add_option("config", o.input, "Config file (JSON)")->required();
  add_common(run, o, true);
  auto* check = app.add_subcommand("check", "Geometry and quadrature diagnostics");
  check->add_option("config", o.input, "Config file (JSON)")->required();
  add_common(check, o, false);
  auto* resume = app.add_subcommand("resume", "Continue an interrupted run from a checkpoint");
  resume->add_option("checkpoint", o.input, "Checkpoint file")->required();
  resume->add_option("--config", o.config_override, "Refuse to resume unless the checkpoint matches this config");
  add_common(resume, o, true);
  auto* dump = app.add_subcommand("dump-matrix", "Write the full-density system matrix in coordinate format");
  dump->add_option("config", o.input, "Config file (JSON)")->required();
  add_common(dump, o, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return optimize(load_config_file(o.input), nullptr, o);
    if (*check) return cmd_check(load_config_file(o.input), o);
    if (*dump) return cmd_dump_matrix(load_config_file(o.input), o);
    if (*resume) {
      Checkpoint cp = read_checkpoint(o.input);
      if (!o.config_override.empty()) require_matching_config(cp, load_config_file(o.config_override));
      std::printf("resuming from iteration %d\n", cp.state.iteration);
      return optimize(cp.config, &cp.state, o);
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const GeometryError& e) {
    std::fprintf(stderr, "geometry error: %s\n", e.what());
    return kExitConfig;
  } catch (const IoError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return kExitConfig;
  } catch (const SolverError& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return kExitSolver;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitSolver;
  }
  return 0;
}
