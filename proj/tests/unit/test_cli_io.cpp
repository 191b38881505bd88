#include "cutopt/cli_io/checkpoint.hpp"
#include "cutopt/cli_io/config.hpp"
#include "cutopt/cli_io/presets.hpp"
#include "cutopt/cli_io/problem_builder.hpp"
#include "cutopt/cli_io/writers.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace cutopt;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("cutopt_unit_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("empty config gives the defaults") {
  const ProblemConfig c = parse_config("{}");
  CHECK(c.geometry.preset == "unit_square");
  CHECK(c.h == 0.05);
  CHECK(c.degree == 2);
  CHECK(c.beta == 40.0);
  CHECK(c.volume_fraction == 0.5);
  CHECK(c.ramp_iters == 100);
  CHECK(c.move == 0.2);
  CHECK(c.max_iters == 300);
  CHECK(c.tractions.count("tip") == 1);
  CHECK(parse_config("  \n") == c);
}

TEST_CASE("invalid configs are rejected with a path") {
  CHECK(error_of(R"({"materials": {"default": {"E": 1, "nu": 0.5}}})").find("incompressible") != std::string::npos);
  CHECK(error_of(R"({"mesh": {"hh": 0.1}})").find("/mesh/hh") != std::string::npos);
  CHECK(error_of(R"({"density": {"chi_min": 0}})").find("/density") != std::string::npos);
  CHECK(error_of(R"({"geometry": {"preset": "nope"}})").find("/geometry/preset") != std::string::npos);
  CHECK(error_of(R"({"loads": {"body_force": {"3": {"x": 1}}}})").find("no such subdomain") != std::string::npos);
  const std::string syntax = error_of("{\n  \"mesh\": {\"h\": 0.1,}\n}");
  CHECK(syntax.find("line 2") != std::string::npos);
  CHECK(syntax.find("column") != std::string::npos);
}

TEST_CASE("configs survive a serialization round trip") {
  std::mt19937 gen(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto names = preset_names();
  for (int t = 0; t < 20; ++t) {
    std::ostringstream s;
    s.precision(17);
    s << R"({"geometry": {"preset": ")" << names[t % names.size()] << R"("},)"
      << R"("mesh": {"h": )" << 0.05 + 0.1 * u(gen) << R"(, "angle": )" << u(gen) << "},"
      << R"("materials": {"default": {"E": )" << 1.0 + u(gen) << R"(, "nu": )" << 0.4 * u(gen) << "}},"
      << R"("density": {"chi_min": )" << 1e-6 + 1e-3 * u(gen) << R"(, "volume_fraction": )" << 0.2 + 0.6 * u(gen)
      << "},"
      << R"("oc": {"move": )" << 0.05 + 0.5 * u(gen) << "},"
      << R"("run": {"max_iters": )" << t << R"(, "checkpoint_every": )" << t % 4 << "},"
      << R"("plane": ")" << (t % 2 ? "stress" : "strain") << R"("})";
    const ProblemConfig a = parse_config(s.str());
    const ProblemConfig b = parse_config(serialize_config(a));
    CHECK(a == b);
    CHECK(config_hash(a) == config_hash(b));
  }
  const ProblemConfig ring = parse_config(R"({"geometry": {"preset": "truss"}})");
  ProblemConfig shifted = ring;
  shifted.output_dir = "elsewhere";
  CHECK(config_hash(ring) == config_hash(shifted));
  shifted.h = 0.04;
  CHECK(config_hash(ring) != config_hash(shifted));
}

TEST_CASE("explicit geometry round trips") {
  const char* text = R"({
    "geometry": {
      "design": [[
        {"line": [0, 0], "tag": "free"},
        {"line": [0.5, 0], "tag": "interface:1"},
        {"line": [0.5, 0.5], "tag": "free"},
        {"line": [0, 0.5], "tag": "dirichlet"}
      ]],
      "patches": [{
        "map": {"type": "bilinear", "corners": [[0.5, 0], [1, 0], [1, 0.5], [0.5, 0.5]]},
        "nx": 2, "ny": 1,
        "edges": {"xi0": "interface:0", "xi1": [{"from": 0, "to": 0.5, "tag": "neumann:a"},
                                               {"from": 0.5, "to": 1, "tag": "free"}]}
      }]
    },
    "loads": {"tractions": {"a": {"x": [[1.0, 1, 0], [2.0, 0, 2]]}}}
  })";
  const ProblemConfig a = parse_config(text);
  CHECK(parse_config(serialize_config(a)) == a);
  CHECK(error_of(std::string(text).replace(std::string(text).find("\"a\": {"), 6, "\"b\": {")).find("neumann:a") !=
        std::string::npos);
}

TEST_CASE("history csv") {
  const fs::path dir = scratch("csv");
  HistoryRow r{1, 0.995, 0.995, 12.5, 0.2, 1.25};
  write_history_csv((dir / "h.csv").string(), {r, r});
  std::istringstream in(slurp(dir / "h.csv"));
  std::string line;
  std::getline(in, line);
  CHECK(line == kHistoryHeader);
  std::getline(in, line);
  CHECK(line == history_csv_row(r));
  CHECK(line.rfind("1,", 0) == 0);
}

TEST_CASE("density vtk holds one quad per design cell") {
  const ProblemConfig c = parse_config(R"({"geometry": {"preset": "cantilever"}, "mesh": {"h": 0.1}})");
  Discretization disc(build_problem(c));
  const fs::path dir = scratch("vtk");
  const Eigen::VectorXd rho = Eigen::VectorXd::Ones(disc.num_design_cells());
  write_density_vtk((dir / "d.vtk").string(), disc, rho);
  std::istringstream in(slurp(dir / "d.vtk"));
  std::string line, word;
  int cells = -1, types = 0;
  std::vector<double> rho_read;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    ls >> word;
    if (word == "CELLS") ls >> cells;
    if (word == "CELL_TYPES") {
      int n = 0;
      ls >> n;
      for (int k = 0; k < n; ++k) {
        std::getline(in, line);
        types += line == "9";
      }
    }
    if (line == "SCALARS rho double 1") {
      std::getline(in, line);
      for (int k = 0; k < cells; ++k) {
        std::getline(in, line);
        rho_read.push_back(std::stod(line));
      }
    }
  }
  CHECK(cells == disc.num_design_cells());
  CHECK(types == cells);
  REQUIRE(rho_read.size() == static_cast<std::size_t>(cells));
  for (double v : rho_read) CHECK(v == 1.0);
}

TEST_CASE("checkpoint round trip and resume") {
  ProblemConfig c = parse_config(R"({"geometry": {"preset": "cantilever"}, "mesh": {"h": 0.1},
                                     "density": {"ramp_iters": 4}})");
  Discretization disc(build_problem(c));
  const OptimizationSettings s = build_settings(c);

  const OptimizationState full = run_optimization(disc, s, 6);

  Optimizer first(disc, s);
  OptimizationState st = first.initial_state();
  first.run(st, 3);
  const fs::path dir = scratch("ckpt");
  const std::string path = (dir / "c.ckpt").string();
  write_checkpoint(path, c, st);
  CHECK_FALSE(fs::exists(path + ".tmp"));

  const Checkpoint cp = read_checkpoint(path);
  CHECK(cp.config == c);
  CHECK(cp.hash == config_hash(c));
  CHECK(cp.state.iteration == 3);
  CHECK(cp.state.rho == st.rho);
  CHECK(cp.state.history == st.history);
  CHECK_NOTHROW(require_matching_config(cp, c));

  Discretization disc2(build_problem(cp.config));
  Optimizer second(disc2, build_settings(cp.config));
  OptimizationState resumed = cp.state;
  second.run(resumed, 6);
  CHECK(resumed.rho == full.rho);
  CHECK(resumed.history == full.history);

  ProblemConfig other = c;
  other.volume_fraction = 0.4;
  CHECK_THROWS_AS(require_matching_config(cp, other), ConfigError);

  std::string text = slurp(path);
  text.replace(text.rfind("end"), 3, "xyz");
  std::ofstream(dir / "bad.ckpt") << text;
  CHECK_THROWS_AS(read_checkpoint((dir / "bad.ckpt").string()), ConfigError);
  CHECK_THROWS_AS(read_checkpoint((dir / "missing.ckpt").string()), IoError);
}
