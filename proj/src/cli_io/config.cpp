#include "cutopt/cli_io/config.hpp"

#include "cutopt/cli_io/presets.hpp"
#include "cutopt/cli_io/problem_builder.hpp"

#include "cutopt/common.hpp"
#include "cutopt/geometry/polygon.hpp"
#include "cutopt/geometry/subdomain.hpp"
#include "cutopt/model.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace cutopt {

namespace {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError((path.empty() ? std::string("/") : path) + ": " + msg);
}

std::string type_name(const json& j) { return j.type_name(); }

// Object reader that records which keys were consumed so leftovers can be
// reported as unknown.
class Obj {
 public:
  Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object, got " + type_name(j_));
  }

  const json* find(const std::string& key) {
    used_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }
  std::string at(const std::string& key) const { return path_ + "/" + key; }

  void number(const std::string& key, double& out) {
    if (const json* v = find(key)) out = as_number(*v, at(key));
  }
  void integer(const std::string& key, int& out) {
    if (const json* v = find(key)) out = as_int(*v, at(key));
  }
  void boolean(const std::string& key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) fail(at(key), "expected a boolean, got " + type_name(*v));
      out = v->get<bool>();
    }
  }
  void string(const std::string& key, std::string& out) {
    if (const json* v = find(key)) out = as_string(*v, at(key));
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!used_.count(it.key())) fail(at(it.key()), "unknown key");
  }

  static double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number, got " + type_name(v));
    double x = v.get<double>();
    if (!std::isfinite(x)) fail(path, "value must be finite");
    return x;
  }
  static int as_int(const json& v, const std::string& path) {
    if (v.is_number_integer()) return v.get<int>();
    if (v.is_number_float()) {
      double x = v.get<double>();
      if (x == std::floor(x) && std::abs(x) < 2e9) return static_cast<int>(x);
    }
    fail(path, "expected an integer, got " + type_name(v));
  }
  static std::string as_string(const json& v, const std::string& path) {
    if (!v.is_string()) fail(path, "expected a string, got " + type_name(v));
    return v.get<std::string>();
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

Point parse_point(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) fail(path, "expected a point [x, y]");
  return {Obj::as_number(v[0], path + "/0"), Obj::as_number(v[1], path + "/1")};
}

void check_tag(const std::string& tag, const std::string& path) {
  try {
    BoundaryTag::parse(tag);
  } catch (const ConfigError& e) {
    fail(path, e.what());
  }
}

PolyTerms parse_poly(const json& v, const std::string& path) {
  PolyTerms out;
  if (v.is_number()) {
    out.push_back({Obj::as_number(v, path), 0.0, 0.0});
    return out;
  }
  if (!v.is_array()) fail(path, "expected a number or a list of [coef, px, py] terms");
  for (std::size_t k = 0; k < v.size(); ++k) {
    const std::string p = path + "/" + std::to_string(k);
    if (!v[k].is_array() || v[k].size() != 3) fail(p, "expected a term [coef, px, py]");
    double c = Obj::as_number(v[k][0], p + "/0");
    int px = Obj::as_int(v[k][1], p + "/1");
    int py = Obj::as_int(v[k][2], p + "/2");
    if (px < 0 || py < 0) fail(p, "exponents must be non-negative");
    out.push_back({c, double(px), double(py)});
  }
  return out;
}

VectorPolyConfig parse_vector_poly(const json& v, const std::string& path) {
  Obj o(v, path);
  VectorPolyConfig f;
  if (const json* x = o.find("x")) f.x = parse_poly(*x, o.at("x"));
  if (const json* y = o.find("y")) f.y = parse_poly(*y, o.at("y"));
  o.finish();
  return f;
}

LoopItemConfig parse_loop_item(const json& v, const std::string& path) {
  Obj o(v, path);
  LoopItemConfig item;
  const json* line = o.find("line");
  const json* curve = o.find("curve");
  if ((line != nullptr) == (curve != nullptr)) fail(path, "loop item needs exactly one of 'line' or 'curve'");
  if (line) {
    item.point = parse_point(*line, o.at("line"));
  } else {
    item.is_curve = true;
    Obj c(*curve, o.at("curve"));
    if (!c.find("patch")) fail(c.at("patch"), "missing");
    c.integer("patch", item.patch);
    if (!c.find("edge")) fail(c.at("edge"), "missing");
    c.string("edge", item.edge);
    try {
      parse_patch_edge(item.edge);
    } catch (const ConfigError& e) {
      fail(c.at("edge"), e.what());
    }
    c.number("from", item.from);
    c.number("to", item.to);
    if (item.from < 0.0 || item.from > 1.0 || item.to < 0.0 || item.to > 1.0)
      fail(o.at("curve"), "edge parameters must lie in [0, 1]");
    c.finish();
  }
  o.string("tag", item.tag);
  check_tag(item.tag, o.at("tag"));
  o.finish();
  return item;
}

std::vector<EdgePieceConfig> parse_edge(const json& v, const std::string& path) {
  if (v.is_string()) {
    check_tag(v.get<std::string>(), path);
    return {EdgePieceConfig{0.0, 1.0, v.get<std::string>()}};
  }
  if (!v.is_array() || v.empty()) fail(path, "expected a tag or a list of {from, to, tag} pieces");
  std::vector<EdgePieceConfig> out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const std::string p = path + "/" + std::to_string(k);
    Obj o(v[k], p);
    EdgePieceConfig piece;
    o.number("from", piece.from);
    o.number("to", piece.to);
    o.string("tag", piece.tag);
    check_tag(piece.tag, o.at("tag"));
    o.finish();
    out.push_back(piece);
  }
  if (out.front().from != 0.0 || out.back().to != 1.0) fail(path, "pieces must cover [0, 1]");
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (!(out[k].to > out[k].from)) fail(path + "/" + std::to_string(k), "piece has empty parameter range");
    if (k > 0 && out[k].from != out[k - 1].to) fail(path + "/" + std::to_string(k), "pieces must be contiguous");
  }
  return out;
}

PatchConfig parse_patch(const json& v, const std::string& path) {
  Obj o(v, path);
  PatchConfig p;
  const json* map = o.find("map");
  if (!map) fail(o.at("map"), "missing");
  Obj m(*map, o.at("map"));
  if (!m.find("type")) fail(m.at("type"), "missing");
  m.string("type", p.map);
  if (p.map == "bilinear" || p.map == "biquadratic") {
    const std::string key = p.map == "bilinear" ? "corners" : "nodes";
    const std::size_t n = p.map == "bilinear" ? 4 : 9;
    const json* pts = m.find(key);
    if (!pts || !pts->is_array() || pts->size() != n)
      fail(m.at(key), "expected " + std::to_string(n) + " points");
    for (std::size_t k = 0; k < n; ++k) p.points.push_back(parse_point((*pts)[k], m.at(key) + "/" + std::to_string(k)));
  } else if (p.map == "polar") {
    const json* c = m.find("center");
    if (!c) fail(m.at("center"), "missing");
    p.center = parse_point(*c, m.at("center"));
    const json* r = m.find("r");
    if (!r) fail(m.at("r"), "missing");
    Point rr = parse_point(*r, m.at("r"));
    const json* t = m.find("theta");
    if (!t) fail(m.at("theta"), "missing");
    Point tt = parse_point(*t, m.at("theta"));
    p.r0 = rr[0];
    p.r1 = rr[1];
    p.theta0 = tt[0];
    p.theta1 = tt[1];
    if (!(p.r0 > 0.0 && p.r1 > p.r0)) fail(m.at("r"), "need 0 < r0 < r1");
    if (!(p.theta1 > p.theta0)) fail(m.at("theta"), "need theta0 < theta1");
  } else {
    fail(m.at("type"), "unknown map type '" + p.map + "' (bilinear, biquadratic, polar)");
  }
  m.finish();
  if (!o.find("nx") || !o.find("ny")) fail(path, "patch needs element counts nx and ny");
  o.integer("nx", p.nx);
  o.integer("ny", p.ny);
  if (p.nx < 1 || p.ny < 1) fail(path, "nx and ny must be >= 1");
  if (const json* e = o.find("edges")) {
    Obj eo(*e, o.at("edges"));
    for (const char* name : {"eta0", "xi1", "eta1", "xi0"})
      if (const json* ev = eo.find(name)) p.edges[name] = parse_edge(*ev, eo.at(name));
    eo.finish();
  }
  o.finish();
  return p;
}

void parse_geometry(const json& v, const std::string& path, GeometryConfig& g) {
  Obj o(v, path);
  o.string("preset", g.preset);
  const json* design = o.find("design");
  const json* patches = o.find("patches");
  if (!g.preset.empty()) {
    if (design || patches) fail(path, "'preset' cannot be combined with 'design' or 'patches'");
    o.finish();
    return;
  }
  if (!design) fail(o.at("design"), "missing geometry: give a preset or a design polygon");
  if (!design->is_array() || design->empty()) fail(o.at("design"), "expected a non-empty list of loops");
  for (std::size_t l = 0; l < design->size(); ++l) {
    const std::string lp = o.at("design") + "/" + std::to_string(l);
    const json& loop = (*design)[l];
    if (!loop.is_array() || loop.empty()) fail(lp, "expected a non-empty list of loop items");
    std::vector<LoopItemConfig> items;
    for (std::size_t k = 0; k < loop.size(); ++k) items.push_back(parse_loop_item(loop[k], lp + "/" + std::to_string(k)));
    g.design.push_back(std::move(items));
  }
  if (patches) {
    if (!patches->is_array()) fail(o.at("patches"), "expected a list");
    for (std::size_t k = 0; k < patches->size(); ++k)
      g.patches.push_back(parse_patch((*patches)[k], o.at("patches") + "/" + std::to_string(k)));
  }
  o.finish();
}

MaterialConfig parse_material(const json& v, const std::string& path) {
  Obj o(v, path);
  MaterialConfig m;
  o.number("E", m.E);
  o.number("nu", m.nu);
  o.finish();
  try {
    lame_from_engineering(m.E, m.nu);
  } catch (const ConfigError& e) {
    fail(path, e.what());
  }
  return m;
}

int parse_subdomain_key(const std::string& key, const std::string& path) {
  std::size_t pos = 0;
  int id = -1;
  try {
    id = std::stoi(key, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != key.size() || id < 0) fail(path, "expected a subdomain id (0 = design), got '" + key + "'");
  return id;
}

// Line and column of a byte offset in the source text.
std::string location(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

ojson poly_json(const PolyTerms& terms) {
  ojson arr = ojson::array();
  for (const auto& t : terms) arr.push_back({t[0], int(t[1]), int(t[2])});
  return arr;
}

ojson vector_poly_json(const VectorPolyConfig& f) {
  ojson o = ojson::object();
  o["x"] = poly_json(f.x);
  o["y"] = poly_json(f.y);
  return o;
}

}  // namespace

ProblemConfig parse_config(const std::string& text) {
  json doc;
  bool blank = text.find_first_not_of(" \t\r\n") == std::string::npos;
  if (!blank) {
    try {
      doc = json::parse(text, nullptr, true, true);
    } catch (const json::parse_error& e) {
      throw ConfigError("syntax error at " + location(text, e.byte > 0 ? e.byte - 1 : 0) + ": " + e.what());
    }
  } else {
    doc = json::object();
  }
  if (!doc.is_object()) fail("", "top level must be an object");

  ProblemConfig c;
  Obj top(doc, "");
  top.integer("version", c.version);
  if (c.version != 1) fail("/version", "unsupported config version " + std::to_string(c.version));

  if (const json* g = top.find("geometry")) {
    parse_geometry(*g, "/geometry", c.geometry);
  } else {
    c.geometry.preset = "unit_square";
  }

  bool beta_given = false;
  if (const json* m = top.find("mesh")) {
    Obj o(*m, "/mesh");
    o.number("h", c.h);
    o.number("angle", c.angle);
    o.integer("density_level", c.density_level);
    o.integer("degree", c.degree);
    o.finish();
    if (!(c.h > 0.0)) fail("/mesh/h", "must be positive");
    if (c.density_level < 0 || c.density_level > 6) fail("/mesh/density_level", "must lie in [0, 6]");
    if (c.degree < 1 || c.degree > 4) fail("/mesh/degree", "must lie in [1, 4]");
  }
  if (const json* m = top.find("materials")) {
    Obj o(*m, "/materials");
    if (const json* d = o.find("default")) c.material = parse_material(*d, "/materials/default");
    if (const json* ps = o.find("per_subdomain")) {
      Obj po(*ps, "/materials/per_subdomain");
      for (auto it = ps->begin(); it != ps->end(); ++it) {
        po.find(it.key());
        int id = parse_subdomain_key(it.key(), po.at(it.key()));
        c.subdomain_materials[id] = parse_material(it.value(), po.at(it.key()));
      }
    }
    o.finish();
  } else {
    parse_material(json{{"E", c.material.E}, {"nu", c.material.nu}}, "/materials/default");
  }
  top.string("plane", c.plane);
  if (c.plane != "strain" && c.plane != "stress") fail("/plane", "expected 'strain' or 'stress'");

  if (const json* l = top.find("loads")) {
    Obj o(*l, "/loads");
    if (const json* bf = o.find("body_force")) {
      Obj bo(*bf, "/loads/body_force");
      for (auto it = bf->begin(); it != bf->end(); ++it) {
        bo.find(it.key());
        int id = parse_subdomain_key(it.key(), bo.at(it.key()));
        c.body_force[id] = parse_vector_poly(it.value(), bo.at(it.key()));
      }
    }
    if (const json* tr = o.find("tractions")) {
      Obj to(*tr, "/loads/tractions");
      for (auto it = tr->begin(); it != tr->end(); ++it) {
        to.find(it.key());
        c.tractions[it.key()] = parse_vector_poly(it.value(), to.at(it.key()));
      }
    }
    o.finish();
  }
  if (const json* n = top.find("nitsche")) {
    Obj o(*n, "/nitsche");
    beta_given = o.find("beta") != nullptr;
    o.number("beta", c.beta);
    o.number("ghost_scale", c.ghost_scale);
    o.boolean("ghost_penalty", c.ghost_penalty);
    o.finish();
    if (!(c.beta > 0.0)) fail("/nitsche/beta", "must be positive");
    if (!(c.ghost_scale >= 0.0)) fail("/nitsche/ghost_scale", "must be non-negative");
  }
  if (!beta_given) c.beta = 10.0 * c.degree * c.degree;

  if (const json* d = top.find("density")) {
    Obj o(*d, "/density");
    o.number("chi_min", c.chi_min);
    o.number("q", c.q);
    o.number("volume_fraction", c.volume_fraction);
    o.integer("ramp_iters", c.ramp_iters);
    o.finish();
    DensityModel dm{c.chi_min, c.q, c.volume_fraction, c.ramp_iters};
    try {
      dm.validate();
    } catch (const ConfigError& e) {
      fail("/density", e.what());
    }
  }
  if (const json* f = top.find("filter")) {
    Obj o(*f, "/filter");
    o.number("radius", c.filter_radius);
    o.number("gamma", c.filter_gamma);
    o.finish();
    if (!(c.filter_radius > 0.0)) fail("/filter/radius", "must be positive");
    if (!(c.filter_gamma > 0.0)) fail("/filter/gamma", "must be positive");
  }
  if (const json* f = top.find("oc")) {
    Obj o(*f, "/oc");
    o.number("move", c.move);
    o.number("damping", c.damping);
    o.number("volume_tol", c.volume_tol);
    o.finish();
    if (!(c.move > 0.0 && c.move <= 1.0)) fail("/oc/move", "must lie in (0, 1]");
    if (!(c.damping > 0.0)) fail("/oc/damping", "must be positive");
    if (!(c.volume_tol > 0.0)) fail("/oc/volume_tol", "must be positive");
  }
  if (const json* s = top.find("solver")) {
    Obj o(*s, "/solver");
    o.string("method", c.solver_method);
    o.number("tol", c.solver_tol);
    o.integer("max_iter", c.solver_max_iter);
    o.integer("cg_threshold", c.cg_threshold);
    o.finish();
    if (c.solver_method != "auto" && c.solver_method != "direct" && c.solver_method != "cg")
      fail("/solver/method", "expected 'auto', 'direct' or 'cg'");
    if (!(c.solver_tol > 0.0)) fail("/solver/tol", "must be positive");
    if (c.solver_max_iter < 1) fail("/solver/max_iter", "must be >= 1");
  }
  if (const json* r = top.find("run")) {
    Obj o(*r, "/run");
    o.integer("max_iters", c.max_iters);
    o.number("convergence", c.convergence);
    o.integer("checkpoint_every", c.checkpoint_every);
    o.boolean("deterministic", c.deterministic);
    o.finish();
    if (c.max_iters < 0) fail("/run/max_iters", "must be >= 0");
    if (c.checkpoint_every < 0) fail("/run/checkpoint_every", "must be >= 0");
  }
  if (const json* out = top.find("output")) {
    Obj o(*out, "/output");
    o.string("dir", c.output_dir);
    o.string("prefix", c.output_prefix);
    o.boolean("vtk", c.write_vtk);
    o.boolean("history", c.write_history);
    o.boolean("checkpoint", c.write_checkpoint);
    o.finish();
  }
  top.finish();

  if (!c.geometry.preset.empty()) {
    try {
      preset_geometry(c.geometry.preset, c.h);
    } catch (const ConfigError& e) {
      fail("/geometry/preset", e.what());
    }
    for (auto& [name, field] : preset_tractions(c.geometry.preset)) c.tractions.emplace(name, field);
  }
  Geometry2D geo;
  try {
    geo = build_geometry(c.geometry, c.h, c.density_level);
  } catch (const GeometryError& e) {
    fail("/geometry", e.what());
  }
  const int n_sub = geo.num_subdomains();
  for (const auto& [id, m] : c.subdomain_materials)
    if (id >= n_sub)
      fail("/materials/per_subdomain/" + std::to_string(id), "no such subdomain");
  for (const auto& [id, f] : c.body_force)
    if (id >= n_sub)
      fail("/loads/body_force/" + std::to_string(id), "no such subdomain");
  for (const std::string& name : referenced_tractions(c.geometry))
    if (!c.tractions.count(name)) fail("/loads/tractions", "boundary tag 'neumann:" + name + "' has no traction");
  return c;
}

ProblemConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

ojson config_to_json(const ProblemConfig& c) {
  ojson j;
  j["version"] = c.version;
  ojson g = ojson::object();
  if (!c.geometry.preset.empty()) {
    g["preset"] = c.geometry.preset;
  } else {
    ojson loops = ojson::array();
    for (const auto& loop : c.geometry.design) {
      ojson items = ojson::array();
      for (const auto& item : loop) {
        ojson it;
        if (item.is_curve) {
          it["curve"] = {{"patch", item.patch}, {"edge", item.edge}, {"from", item.from}, {"to", item.to}};
        } else {
          it["line"] = {item.point[0], item.point[1]};
        }
        it["tag"] = item.tag;
        items.push_back(it);
      }
      loops.push_back(items);
    }
    g["design"] = loops;
    ojson patches = ojson::array();
    for (const auto& p : c.geometry.patches) {
      ojson pj;
      ojson map;
      map["type"] = p.map;
      if (p.map == "polar") {
        map["center"] = {p.center[0], p.center[1]};
        map["r"] = {p.r0, p.r1};
        map["theta"] = {p.theta0, p.theta1};
      } else {
        ojson pts = ojson::array();
        for (const auto& q : p.points) pts.push_back({q[0], q[1]});
        map[p.map == "bilinear" ? "corners" : "nodes"] = pts;
      }
      pj["map"] = map;
      pj["nx"] = p.nx;
      pj["ny"] = p.ny;
      ojson edges = ojson::object();
      for (const auto& [name, pieces] : p.edges) {
        ojson arr = ojson::array();
        for (const auto& piece : pieces) arr.push_back({{"from", piece.from}, {"to", piece.to}, {"tag", piece.tag}});
        edges[name] = arr;
      }
      pj["edges"] = edges;
      patches.push_back(pj);
    }
    g["patches"] = patches;
  }
  j["geometry"] = g;
  j["mesh"] = {{"h", c.h}, {"angle", c.angle}, {"density_level", c.density_level}, {"degree", c.degree}};
  ojson per = ojson::object();
  for (const auto& [id, m] : c.subdomain_materials) per[std::to_string(id)] = {{"E", m.E}, {"nu", m.nu}};
  j["materials"] = {{"default", {{"E", c.material.E}, {"nu", c.material.nu}}}, {"per_subdomain", per}};
  j["plane"] = c.plane;
  ojson bf = ojson::object();
  for (const auto& [id, f] : c.body_force) bf[std::to_string(id)] = vector_poly_json(f);
  ojson tr = ojson::object();
  for (const auto& [name, f] : c.tractions) tr[name] = vector_poly_json(f);
  j["loads"] = {{"body_force", bf}, {"tractions", tr}};
  j["nitsche"] = {{"beta", c.beta}, {"ghost_scale", c.ghost_scale}, {"ghost_penalty", c.ghost_penalty}};
  j["density"] = {{"chi_min", c.chi_min}, {"q", c.q}, {"volume_fraction", c.volume_fraction}, {"ramp_iters", c.ramp_iters}};
  j["filter"] = {{"radius", c.filter_radius}, {"gamma", c.filter_gamma}};
  j["oc"] = {{"move", c.move}, {"damping", c.damping}, {"volume_tol", c.volume_tol}};
  j["solver"] = {{"method", c.solver_method}, {"tol", c.solver_tol}, {"max_iter", c.solver_max_iter},
                 {"cg_threshold", c.cg_threshold}};
  j["run"] = {{"max_iters", c.max_iters}, {"convergence", c.convergence}, {"checkpoint_every", c.checkpoint_every},
              {"deterministic", c.deterministic}};
  j["output"] = {{"dir", c.output_dir}, {"prefix", c.output_prefix}, {"vtk", c.write_vtk},
                 {"history", c.write_history}, {"checkpoint", c.write_checkpoint}};
  return j;
}

std::string serialize_config(const ProblemConfig& c) { return config_to_json(c).dump(2); }

std::string config_hash(const ProblemConfig& c) {
  // Output locations do not change the computation.
  ProblemConfig k = c;
  k.output_dir.clear();
  k.output_prefix.clear();
  k.max_iters = 0;
  const std::string s = config_to_json(k).dump();
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char ch : s) {
    hash ^= ch;
    hash *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace cutopt
