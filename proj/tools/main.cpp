// Command-line front end: solve, trace, ridge, verify and figure
// subcommands over preset or configured convex rings.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "ringflow/closed_forms.hpp"
#include "ringflow/config.hpp"
#include "ringflow/errors.hpp"
#include "ringflow/field.hpp"
#include "ringflow/field_checks.hpp"
#include "ringflow/io.hpp"
#include "ringflow/level_set.hpp"
#include "ringflow/ridge.hpp"
#include "ringflow/streamline.hpp"
#include "ringflow/verify.hpp"

namespace {

using namespace ringflow;

struct CommonFlags {
  std::string preset;
  std::string config_file;
  std::string p_list;
  double h = -1;
  std::string seeds;
  std::string tol_file;
  std::string out_dir;
  double eps_k = -1;
  double delta = -1;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--preset", f.preset,
                  "Domain preset: square, truncated-square, rectangle, annulus, "
                  "disk, ngon(N)");
  cmd->add_option("--config", f.config_file, "Flat key/value configuration file");
  cmd->add_option("--p", f.p_list, "Comma-separated exponent list, e.g. 4,8,16");
  cmd->add_option("--h", f.h, "Target mesh edge length in (0, 0.5)");
  cmd->add_option("--seeds", f.seeds, "Seed count, or a file of `x y` lines");
  cmd->add_option("--tol-file", f.tol_file, "Per-check threshold overrides");
  cmd->add_option("--out", f.out_dir, "Output directory");
  cmd->add_option("--eps-k", f.eps_k, "Regularization radius for point inner regions");
  cmd->add_option("--delta", f.delta, "Cut size of the truncated-square preset");
}

RunConfig build_config(const CommonFlags& f) {
  RunConfig cfg;
  if (!f.config_file.empty()) cfg = parse_config_file(f.config_file);
  if (!f.preset.empty()) {
    cfg.preset = f.preset;
    cfg.has_inline_geometry = false;
  }
  if (cfg.preset.empty() && !cfg.has_inline_geometry)
    throw ConfigError("name a --preset or give --config with geometry");
  if (!f.p_list.empty()) {
    cfg.ps.clear();
    std::stringstream ss(f.p_list);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) cfg.ps.push_back(std::stod(item));
    std::sort(cfg.ps.begin(), cfg.ps.end());
  }
  if (cfg.ps.empty()) throw ConfigError("empty exponent list");
  if (f.h > 0) cfg.h = f.h;
  if (f.eps_k > 0) cfg.eps_k = f.eps_k;
  if (f.delta > 0) cfg.trunc_delta = f.delta;
  if (!f.out_dir.empty()) cfg.out_dir = f.out_dir;
  if (!f.seeds.empty()) {
    try {
      size_t used = 0;
      int count = std::stoi(f.seeds, &used);
      if (used == f.seeds.size()) {
        cfg.seeds.kind = SeedStrategy::Kind::count;
        cfg.seeds.count = count;
      } else {
        throw std::invalid_argument(f.seeds);
      }
    } catch (const std::exception&) {
      std::ifstream in(f.seeds);
      if (!in) throw ConfigError("--seeds is neither a count nor a readable file");
      cfg.seeds.kind = SeedStrategy::Kind::explicit_list;
      cfg.seeds.points.clear();
      double x, y;
      while (in >> x >> y) cfg.seeds.points.push_back({x, y});
    }
  }
  if (!f.tol_file.empty())
    for (auto& [k, v] : parse_tol_file(f.tol_file)) cfg.tol_overrides[k] = v;
  return cfg;
}

struct Pipeline {
  ConvexRing ring;
  std::shared_ptr<const TriangleMesh> mesh;
  std::vector<ScalarField> fields;

  const ScalarField& top() const { return fields.back(); }
};

Pipeline run_solve(const RunConfig& cfg) {
  Pipeline pl{ring_from_config(cfg), nullptr, {}};
  pl.mesh = generate_mesh(pl.ring, cfg.h);
  pl.fields = solve_p_sweep(pl.mesh, cfg.ps, SolveOptions{});
  return pl;
}

int cmd_solve(const CommonFlags& f) {
  RunConfig cfg = build_config(f);
  Pipeline pl = run_solve(cfg);
  for (const ScalarField& field : pl.fields) {
    GradientField grad = recover_gradient(field);
    char name[64];
    std::snprintf(name, sizeof(name), "field_p%g", field.p);
    write_field_text(field, grad, cfg.out_dir / (std::string(name) + ".txt"));
    write_field_binary(field, cfg.out_dir / (std::string(name) + ".bin"));
    write_solve_report(field, cfg.out_dir / (std::string(name) + ".log"));
    std::cout << "p=" << field.p << "  vertices=" << pl.mesh->vertex_count()
              << "  iterations=" << field.report.total_iterations() << "\n";
  }
  std::cout << "wrote " << pl.fields.size() << " field(s) to " << cfg.out_dir.string()
            << "\n";
  return 0;
}

int cmd_trace(const CommonFlags& f) {
  RunConfig cfg = build_config(f);
  Pipeline pl = run_solve(cfg);
  GradientField grad = recover_gradient(pl.top());
  FieldSampler sampler(pl.top(), grad);
  std::vector<Streamline> streams;
  for (Vec2 seed : make_seeds(pl.ring, cfg.seeds))
    streams.push_back(trace(sampler, pl.ring, seed));
  write_streamlines_text(streams, pl.top(), cfg.out_dir / "streamlines.txt");
  write_streamlines_json(streams, cfg.out_dir / "streamlines.json");
  std::cout << "traced " << streams.size() << " streamline(s) at p=" << pl.top().p
            << " into " << cfg.out_dir.string() << "\n";
  return 0;
}

int cmd_ridge(const CommonFlags& f) {
  RunConfig cfg = build_config(f);
  Pipeline pl = run_solve(cfg);
  GradientField grad = recover_gradient(pl.top());
  BoundarySpeedProfile profile = boundary_speed(pl.top(), pl.ring, cfg.boundary_samples);
  RidgeGraph ridge = build_ridge(pl.top(), grad, pl.ring, profile);
  write_ridge_json(ridge, cfg.out_dir / "ridge.json");
  std::cout << "ridge: " << ridge.attracting().size() << " attracting streamline(s), "
            << ridge.merges().size() << " merge(s); wrote "
            << (cfg.out_dir / "ridge.json").string() << "\n";
  return 0;
}

int cmd_verify(const CommonFlags& f) {
  RunConfig cfg = build_config(f);
  VerificationReport report = run_suite(cfg);
  std::filesystem::create_directories(cfg.out_dir);
  std::ofstream out(cfg.out_dir / "report.txt");
  out << render_report(report);
  std::cout << render_report_table(report);
  std::cout << "report written to " << (cfg.out_dir / "report.txt").string() << "\n";
  return report.all_pass() ? 0 : 1;
}

int cmd_figure(const CommonFlags& f) {
  RunConfig cfg = build_config(f);
  Pipeline pl = run_solve(cfg);
  GradientField grad = recover_gradient(pl.top());
  FieldSampler sampler(pl.top(), grad);

  FigureData fig;
  fig.ring = pl.ring;
  for (double c : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}) {
    try {
      fig.level_loops.emplace_back(c, extract_level_loops(pl.top(), c));
    } catch (const DomainError&) {
      // level unresolved on this mesh; skip the curve
    }
  }
  std::vector<Streamline> streams;
  for (Vec2 seed : make_seeds(pl.ring, cfg.seeds))
    streams.push_back(trace(sampler, pl.ring, seed));
  BoundarySpeedProfile profile = boundary_speed(pl.top(), pl.ring, cfg.boundary_samples);
  RidgeGraph ridge = build_ridge(pl.top(), grad, pl.ring, profile);

  write_streamlines_text(streams, pl.top(), cfg.out_dir / "streamlines.txt");
  write_ridge_json(ridge, cfg.out_dir / "ridge.json");
  for (const Streamline& s : streams) fig.streamlines.push_back(&s);
  fig.ridge = &ridge;
  write_figure_svg(fig, cfg.out_dir / "figure.svg");
  std::cout << "figure written to " << (cfg.out_dir / "figure.svg").string() << "\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"p-harmonic potentials, gradient-flow streamlines and ridges in "
               "planar convex rings"};
  app.require_subcommand(1);
  // --h is a domain flag (mesh size), so help stays on --help alone.
  app.set_help_flag("--help", "Print help");

  CommonFlags flags;
  auto* solve = app.add_subcommand("solve", "Solve the exponent sweep, export fields");
  auto* tracec = app.add_subcommand("trace", "Trace streamlines from boundary seeds");
  auto* ridgec = app.add_subcommand("ridge", "Build the ridge of attracting streamlines");
  auto* verifyc = app.add_subcommand("verify", "Run the full check suite");
  auto* figurec = app.add_subcommand("figure", "Emit a vector figure of the flow");
  for (auto* cmd : {solve, tracec, ridgec, verifyc, figurec}) {
    cmd->set_help_flag("--help", "Print help");
    add_common(cmd, flags);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(flags);
    if (tracec->parsed()) return cmd_trace(flags);
    if (ridgec->parsed()) return cmd_ridge(flags);
    if (verifyc->parsed()) return cmd_verify(flags);
    if (figurec->parsed()) return cmd_figure(flags);
  } catch (const ringflow::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
