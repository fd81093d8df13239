#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ringflow/geometry.hpp"

namespace ringflow {

struct SeedStrategy {
  enum class Kind { count, explicit_list, per_edge };
  Kind kind = Kind::count;
  int count = 64;
  int per_edge = 8;
  std::vector<Vec2> points;
};

/// One run of the pipeline: a domain, an exponent sweep, a mesh size,
/// a seeding rule, optional threshold overrides and an output folder.
struct RunConfig {
  std::string preset;                    // empty when inline geometry is given
  bool has_inline_geometry = false;
  ConvexRegion omega;
  ConvexRegion inner;

  std::vector<double> ps{4, 8, 16, 32, 64};
  double h = 0.05;
  SeedStrategy seeds;
  double eps_k = 0.02;
  double trunc_delta = 0.2;
  int boundary_samples = 512;
  std::map<std::string, double> tol_overrides;
  std::filesystem::path out_dir = "out";
};

/// Preset rings: "square", "truncated-square" (cut size delta),
/// "rectangle", "annulus", "disk", "ngon(N)".
ConvexRing make_preset_ring(const std::string& name, double eps_k = 0.02,
                            double trunc_delta = 0.2);

ConvexRing ring_from_config(const RunConfig& config);

/// Flat key/value configuration text: `key = value` lines, `#`
/// comments, UTF-8. Unknown keys are rejected with ConfigError.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::filesystem::path& path);

/// Threshold overrides: `check_id = value` lines.
std::map<std::string, double> parse_tol_file(const std::filesystem::path& path);

/// Seed points on the outer boundary according to the strategy
/// (uniform arclength for `count`, per-edge uniform for `per_edge`).
std::vector<Vec2> make_seeds(const ConvexRing& ring, const SeedStrategy& strategy);

} // namespace ringflow
