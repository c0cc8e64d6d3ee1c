#include "nvem/config.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "nvem/errors.hpp"

namespace nvem {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

const std::map<std::string, std::set<std::string>>& allowed_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"problem", {"name", "method", "stab", "tolerance", "methods", "eig_count"}},
      {"mesh",
       {"kind", "nx", "ny", "level", "x0", "y0", "x1", "y1", "distortion", "seed", "file",
        "files"}},
      {"material", {"young", "poisson", "condition", "lambda", "mu", "density", "thickness"}},
      {"bc", {"dirichlet", "traction"}},
      {"dynamics",
       {"alpha", "dt", "t_end", "q1", "q2", "gravity", "load", "amplitude", "ramp_a", "ramp_b",
        "cutoff", "omega", "point", "force", "probe", "vtk_every"}},
      {"output", {"dir"}},
  };
  return keys;
}

}  // namespace

Config Config::parse(std::istream& in) {
  Config cfg;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ParseError("config line " + std::to_string(lineno) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      cfg.sections_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    if (section.empty())
      throw ParseError("config line " + std::to_string(lineno) + ": key outside any section");
    cfg.sections_[section].emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  cfg.require_known_keys();
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file '" + path + "'");
  return parse(in);
}

void Config::require_known_keys() const {
  const auto& allowed = allowed_keys();
  for (const auto& [section, entries] : sections_) {
    const auto it = allowed.find(section);
    if (it == allowed.end()) {
      std::string names;
      for (const auto& [s, _] : allowed) names += (names.empty() ? "" : ", ") + s;
      throw ParseError("unknown config section [" + section + "] (valid: " + names + ")");
    }
    for (const auto& [key, _] : entries) {
      if (!it->second.count(key)) {
        std::string names;
        for (const auto& k : it->second) names += (names.empty() ? "" : ", ") + k;
        throw ParseError("unknown key '" + key + "' in [" + section + "] (valid: " + names + ")");
      }
    }
  }
}

std::optional<std::string> Config::get(const std::string& section, const std::string& key) const {
  const auto it = sections_.find(section);
  if (it == sections_.end()) return std::nullopt;
  std::optional<std::string> out;
  for (const auto& [k, v] : it->second)
    if (k == key) out = v;
  return out;
}

std::vector<std::string> Config::get_all(const std::string& section,
                                         const std::string& key) const {
  std::vector<std::string> out;
  const auto it = sections_.find(section);
  if (it == sections_.end()) return out;
  for (const auto& [k, v] : it->second)
    if (k == key) out.push_back(v);
  return out;
}

std::string Config::get_or(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
  return get(section, key).value_or(fallback);
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
  const auto v = get(section, key);
  if (!v) return fallback;
  try {
    size_t pos = 0;
    const double d = std::stod(*v, &pos);
    if (pos != v->size()) throw std::invalid_argument("");
    return d;
  } catch (...) {
    throw ParseError("config value '" + *v + "' for " + section + "." + key +
                     " is not a number");
  }
}

int Config::get_int(const std::string& section, const std::string& key, int fallback) const {
  const double d = get_double(section, key, fallback);
  const int i = static_cast<int>(d);
  if (static_cast<double>(i) != d)
    throw ParseError("config value for " + section + "." + key + " is not an integer");
  return i;
}

Method parse_method(const std::string& s) {
  if (s == "vem") return Method::Vem;
  if (s == "nvem") return Method::Nvem;
  throw ParseError("unknown method '" + s + "' (valid: vem, nvem)");
}

Stabilization parse_stabilization(const std::string& s) {
  if (s == "plain") return Stabilization::Plain;
  if (s == "dtilde") return Stabilization::Dtilde;
  if (s == "dmu-full") return Stabilization::DmuFull;
  if (s == "dmu-shear") return Stabilization::DmuShear;
  throw ParseError("unknown stabilization '" + s +
                   "' (valid: plain, dtilde, dmu-full, dmu-shear)");
}

namespace {

std::vector<std::string> split_words(const std::string& s) {
  std::istringstream ss(s);
  std::vector<std::string> out;
  std::string w;
  while (ss >> w) out.push_back(w);
  return out;
}

Vec2 parse_vec2(const std::string& s, const std::string& what) {
  const auto w = split_words(s);
  if (w.size() != 2) throw ParseError(what + " expects two numbers, got '" + s + "'");
  try {
    return Vec2(std::stod(w[0]), std::stod(w[1]));
  } catch (...) {
    throw ParseError(what + " expects two numbers, got '" + s + "'");
  }
}

std::optional<double> parse_component(const std::string& s, const std::string& what) {
  if (s == "free") return std::nullopt;
  try {
    return std::stod(s);
  } catch (...) {
    throw ParseError(what + ": expected a number or 'free', got '" + s + "'");
  }
}

}  // namespace

RunConfig parse_run_config(const Config& cfg) {
  RunConfig rc;
  rc.problem = cfg.get_or("problem", "name", "custom");
  rc.method = parse_method(cfg.get_or("problem", "method", "nvem"));
  rc.stab = parse_stabilization(cfg.get_or("problem", "stab", "dtilde"));
  rc.tolerance = cfg.get_double("problem", "tolerance", 1e-12);
  rc.methods = split_words(cfg.get_or("problem", "methods", ""));
  rc.eig_count = cfg.get_int("problem", "eig_count", 8);

  rc.mesh_kind = cfg.get_or("mesh", "kind", "quad");
  rc.nx = cfg.get_int("mesh", "nx", 8);
  rc.ny = cfg.get_int("mesh", "ny", 8);
  rc.level = cfg.get_int("mesh", "level", 0);
  if (cfg.get("mesh", "x0") || cfg.get("mesh", "x1")) {
    rc.domain = Rect{cfg.get_double("mesh", "x0", 0.0), cfg.get_double("mesh", "y0", 0.0),
                     cfg.get_double("mesh", "x1", 1.0), cfg.get_double("mesh", "y1", 1.0)};
    rc.domain_set = true;
  }
  rc.distortion = cfg.get_double("mesh", "distortion", 0.3);
  rc.seed = static_cast<std::uint64_t>(cfg.get_int("mesh", "seed", 1));
  rc.mesh_file = cfg.get_or("mesh", "file", "");
  rc.mesh_files = split_words(cfg.get_or("mesh", "files", ""));

  if (cfg.get("material", "young") || cfg.get("material", "lambda")) {
    const std::string condition = cfg.get_or("material", "condition", "strain");
    const double density = cfg.get_double("material", "density", 0.0);
    const double thickness = cfg.get_double("material", "thickness", 1.0);
    if (condition == "lame") {
      rc.material = MaterialModel::lame(cfg.get_double("material", "lambda", 0.0),
                                        cfg.get_double("material", "mu", 0.0), density, thickness);
    } else if (condition == "strain" || condition == "stress") {
      rc.material = MaterialModel::isotropic(
          cfg.get_double("material", "young", 0.0), cfg.get_double("material", "poisson", 0.0),
          condition == "strain" ? PlaneCondition::Strain : PlaneCondition::Stress, density,
          thickness);
    } else {
      throw ParseError("unknown material condition '" + condition +
                       "' (valid: strain, stress, lame)");
    }
  }

  for (const std::string& entry : cfg.get_all("bc", "dirichlet")) {
    const auto w = split_words(entry);
    if (w.size() != 3)
      throw ParseError("bc.dirichlet expects '<tag> <ux|free> <uy|free>', got '" + entry + "'");
    rc.bc_dirichlet.push_back(
        {w[0], parse_component(w[1], "bc.dirichlet"), parse_component(w[2], "bc.dirichlet")});
  }
  for (const std::string& entry : cfg.get_all("bc", "traction")) {
    const auto w = split_words(entry);
    if (w.size() != 3)
      throw ParseError("bc.traction expects '<tag> <tx> <ty>', got '" + entry + "'");
    try {
      rc.bc_traction.push_back({w[0], Vec2(std::stod(w[1]), std::stod(w[2]))});
    } catch (...) {
      throw ParseError("bc.traction expects numeric components, got '" + entry + "'");
    }
  }

  if (cfg.get("dynamics", "dt") || cfg.get("dynamics", "t_end")) {
    rc.has_dynamics = true;
    DynamicsBlock& d = rc.dynamics;
    d.alpha = cfg.get_double("dynamics", "alpha", d.alpha);
    d.dt = cfg.get_double("dynamics", "dt", d.dt);
    d.t_end = cfg.get_double("dynamics", "t_end", d.t_end);
    d.q1 = cfg.get_double("dynamics", "q1", d.q1);
    d.q2 = cfg.get_double("dynamics", "q2", d.q2);
    d.gravity = cfg.get_double("dynamics", "gravity", d.gravity);
    d.load = cfg.get_or("dynamics", "load", d.load);
    d.amplitude = cfg.get_double("dynamics", "amplitude", d.amplitude);
    d.ramp_a = cfg.get_double("dynamics", "ramp_a", d.ramp_a);
    d.ramp_b = cfg.get_double("dynamics", "ramp_b", d.ramp_b);
    d.cutoff = cfg.get_double("dynamics", "cutoff", d.cutoff);
    d.omega = cfg.get_double("dynamics", "omega", d.omega);
    if (const auto v = cfg.get("dynamics", "point")) d.point = parse_vec2(*v, "dynamics.point");
    if (const auto v = cfg.get("dynamics", "force")) d.force = parse_vec2(*v, "dynamics.force");
    if (const auto v = cfg.get("dynamics", "probe")) d.probe = parse_vec2(*v, "dynamics.probe");
    d.vtk_every = cfg.get_int("dynamics", "vtk_every", 0);
  }

  rc.out_dir = cfg.get_or("output", "dir", "out");
  return rc;
}

}  // namespace nvem
