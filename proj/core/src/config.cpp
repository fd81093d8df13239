#include "ringflow/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "ringflow/errors.hpp"

namespace ringflow {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    size_t used = 0;
    double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("bad numeric value for '" + key + "': " + v);
  }
}

std::vector<double> parse_double_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_double(key, item));
  }
  return out;
}

std::vector<Vec2> parse_point_list(const std::string& key, const std::string& v) {
  // "x1 y1; x2 y2; ..."
  std::vector<Vec2> out;
  std::stringstream ss(v);
  std::string pair;
  while (std::getline(ss, pair, ';')) {
    pair = trim(pair);
    if (pair.empty()) continue;
    std::stringstream ps(pair);
    double x, y;
    if (!(ps >> x >> y)) throw ConfigError("bad point list for '" + key + "'");
    out.push_back({x, y});
  }
  return out;
}

} // namespace

ConvexRing make_preset_ring(const std::string& name, double eps_k, double trunc_delta) {
  ConvexRegion omega, inner;
  if (name == "square") {
    omega = ConvexRegion::make_polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
    inner = ConvexRegion::make_point({0, 0});
  } else if (name == "truncated-square") {
    double d = trunc_delta;
    if (!(d > 0) || d >= 1) throw ConfigError("truncated-square delta must be in (0,1)");
    omega = ConvexRegion::make_polygon(
        {{-1 + d, -1}, {1, -1}, {1, 1}, {-1, 1}, {-1, -1 + d}});
    inner = ConvexRegion::make_point({0, 0});
  } else if (name == "rectangle") {
    // A thin inner strip puts the middle of the long edges at unit
    // distance from the inner region, so the boundary speed is
    // constant there and the flow crosses as parallel straight lines.
    omega = ConvexRegion::make_polygon({{-2, -1}, {2, -1}, {2, 1}, {-2, 1}});
    inner = ConvexRegion::make_polygon(
        {{-1, -0.05}, {1, -0.05}, {1, 0.05}, {-1, 0.05}});
  } else if (name == "annulus") {
    omega = ConvexRegion::make_disk({0, 0}, 2.0);
    inner = ConvexRegion::make_disk({0, 0}, 1.0);
  } else if (name == "disk") {
    omega = ConvexRegion::make_disk({0, 0}, 1.0);
    inner = ConvexRegion::make_point({0, 0});
  } else if (name.rfind("ngon(", 0) == 0 && name.back() == ')') {
    int n = 0;
    try {
      n = std::stoi(name.substr(5, name.size() - 6));
    } catch (const std::exception&) {
      throw ConfigError("bad ngon preset: " + name);
    }
    if (n < 3 || n > 1024) throw ConfigError("ngon vertex count out of range");
    // Apothem 1, so the ring is already normalized.
    double rc = 1.0 / std::cos(std::numbers::pi / n);
    std::vector<Vec2> verts;
    for (int k = 0; k < n; ++k) {
      double phi = 2.0 * std::numbers::pi * k / n;
      verts.push_back({rc * std::cos(phi), rc * std::sin(phi)});
    }
    omega = ConvexRegion::make_polygon(std::move(verts));
    inner = ConvexRegion::make_point({0, 0});
  } else {
    throw ConfigError("unknown preset: " + name);
  }
  return normalize_ring(omega, inner, eps_k);
}

ConvexRing ring_from_config(const RunConfig& config) {
  if (!config.preset.empty())
    return make_preset_ring(config.preset, config.eps_k, config.trunc_delta);
  if (!config.has_inline_geometry)
    throw ConfigError("configuration names neither a preset nor inline geometry");
  return normalize_ring(config.omega, config.inner, config.eps_k);
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  cfg.ps.clear();

  std::map<std::string, std::string> kv;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value: " + line);
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (kv.count(key)) throw ConfigError("duplicate key: " + key);
    kv[key] = value;
  }

  std::string omega_kind, inner_kind;
  for (auto& [key, value] : kv) {
    if (key == "preset") {
      cfg.preset = value;
    } else if (key == "p") {
      cfg.ps = parse_double_list(key, value);
    } else if (key == "h") {
      cfg.h = parse_double(key, value);
    } else if (key == "seeds") {
      cfg.seeds.kind = SeedStrategy::Kind::count;
      cfg.seeds.count = static_cast<int>(parse_double(key, value));
    } else if (key == "seeds_per_edge") {
      cfg.seeds.kind = SeedStrategy::Kind::per_edge;
      cfg.seeds.per_edge = static_cast<int>(parse_double(key, value));
    } else if (key == "seed_points") {
      cfg.seeds.kind = SeedStrategy::Kind::explicit_list;
      cfg.seeds.points = parse_point_list(key, value);
    } else if (key == "eps_k") {
      cfg.eps_k = parse_double(key, value);
    } else if (key == "delta") {
      cfg.trunc_delta = parse_double(key, value);
    } else if (key == "boundary_samples") {
      cfg.boundary_samples = static_cast<int>(parse_double(key, value));
    } else if (key == "out") {
      cfg.out_dir = value;
    } else if (key == "omega.kind") {
      omega_kind = value;
    } else if (key == "omega.vertices") {
      cfg.omega.vertices = parse_point_list(key, value);
    } else if (key == "omega.center") {
      auto pts = parse_point_list(key, value);
      if (pts.size() != 1) throw ConfigError("omega.center wants one point");
      cfg.omega.center = pts[0];
    } else if (key == "omega.radius") {
      cfg.omega.radius = parse_double(key, value);
    } else if (key == "inner.kind") {
      inner_kind = value;
    } else if (key == "inner.vertices") {
      cfg.inner.vertices = parse_point_list(key, value);
    } else if (key == "inner.center" || key == "inner.location") {
      auto pts = parse_point_list(key, value);
      if (pts.size() != 1) throw ConfigError(key + " wants one point");
      cfg.inner.center = pts[0];
    } else if (key == "inner.radius") {
      cfg.inner.radius = parse_double(key, value);
    } else if (key.rfind("tol.", 0) == 0) {
      cfg.tol_overrides[key.substr(4)] = parse_double(key, value);
    } else {
      throw ConfigError("unknown configuration key: " + key);
    }
  }

  auto kind_of = [](const std::string& k) {
    if (k == "polygon") return RegionKind::polygon;
    if (k == "disk") return RegionKind::disk;
    if (k == "point") return RegionKind::point;
    throw ConfigError("unknown region kind: " + k);
  };
  if (!omega_kind.empty() || !inner_kind.empty()) {
    if (omega_kind.empty() || inner_kind.empty())
      throw ConfigError("inline geometry needs both omega.kind and inner.kind");
    cfg.omega.kind = kind_of(omega_kind);
    cfg.inner.kind = kind_of(inner_kind);
    cfg.has_inline_geometry = true;
  }
  if (cfg.preset.empty() && !cfg.has_inline_geometry)
    throw ConfigError("configuration names neither a preset nor inline geometry");
  if (!cfg.preset.empty() && cfg.has_inline_geometry)
    throw ConfigError("give either a preset or inline geometry, not both");
  if (!cfg.preset.empty() && cfg.preset != "square" && cfg.preset != "truncated-square" &&
      cfg.preset != "rectangle" && cfg.preset != "annulus" && cfg.preset != "disk" &&
      !(cfg.preset.rfind("ngon(", 0) == 0 && cfg.preset.back() == ')'))
    throw ConfigError("unknown preset: " + cfg.preset);

  if (cfg.ps.empty()) throw ConfigError("empty exponent list");
  std::sort(cfg.ps.begin(), cfg.ps.end());
  for (double p : cfg.ps)
    if (!(p >= 2.0) || p > 128.0) throw ConfigError("exponents must lie in [2,128]");
  if (!(cfg.h > 0) || cfg.h >= 0.5) throw ConfigError("h must lie in (0, 0.5)");
  if (!(cfg.eps_k > 0) || cfg.eps_k > 0.25) throw ConfigError("eps_k out of range");
  if (cfg.seeds.kind == SeedStrategy::Kind::count && cfg.seeds.count < 1)
    throw ConfigError("seed count must be positive");
  if (cfg.boundary_samples < 64) throw ConfigError("boundary_samples must be >= 64");
  return cfg;
}

RunConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::map<std::string, double> parse_tol_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read tolerance file: " + path.string());
  std::map<std::string, double> out;
  std::string line;
  while (std::getline(in, line)) {
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value: " + line);
    out[trim(line.substr(0, eq))] = parse_double("tol", trim(line.substr(eq + 1)));
  }
  return out;
}

std::vector<Vec2> make_seeds(const ConvexRing& ring, const SeedStrategy& strategy) {
  if (strategy.kind == SeedStrategy::Kind::explicit_list) return strategy.points;
  BoundaryParam param(ring.omega);
  std::vector<Vec2> seeds;
  if (strategy.kind == SeedStrategy::Kind::count) {
    for (int k = 0; k < strategy.count; ++k)
      seeds.push_back(param.point_at(param.total_length() * k / strategy.count));
  } else {
    if (ring.omega.kind != RegionKind::polygon)
      throw ConfigError("per-edge seeding needs a polygon boundary");
    const auto& vp = param.vertex_params();
    size_t nv = vp.size();
    for (size_t j = 0; j < nv; ++j) {
      double lo = vp[j];
      double hi = (j + 1 < nv) ? vp[j + 1] : param.total_length();
      for (int k = 0; k < strategy.per_edge; ++k)
        seeds.push_back(param.point_at(lo + (hi - lo) * k / strategy.per_edge));
    }
  }
  return seeds;
}

} // namespace ringflow
