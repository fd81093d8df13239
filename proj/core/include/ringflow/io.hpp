#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ringflow/field.hpp"
#include "ringflow/geometry.hpp"
#include "ringflow/ridge.hpp"
#include "ringflow/streamline.hpp"

namespace ringflow {

/// Tabular field export: one `id x y u speed` row per vertex.
void write_field_text(const ScalarField& field, const GradientField& grad,
                      const std::filesystem::path& path);

struct FieldTable {
  std::vector<int> id;
  std::vector<double> x, y, u, speed;
};
FieldTable read_field_text(const std::filesystem::path& path);

/// Binary field container with a version header; exact round trip.
void write_field_binary(const ScalarField& field, const std::filesystem::path& path);
ScalarField read_field_binary(const std::filesystem::path& path);

/// Structured-text log of the continuation stages (iterations,
/// residuals, energies per stage).
void write_solve_report(const ScalarField& field, const std::filesystem::path& path);

/// Tabular streamline export: `id t x y u speed` rows.
void write_streamlines_text(std::span<const Streamline> streamlines,
                            const ScalarField& field,
                            const std::filesystem::path& path);

struct StreamlineTable {
  std::vector<int> id;
  std::vector<double> t, x, y, u, speed;
};
StreamlineTable read_streamlines_text(const std::filesystem::path& path);

/// Polyline document (JSON) for the figure emitter.
void write_streamlines_json(std::span<const Streamline> streamlines,
                            const std::filesystem::path& path);

/// Ridge export: segment list with source indices and merge events.
void write_ridge_json(const RidgeGraph& ridge, const std::filesystem::path& path);

/// Everything the figure shows; the emitter only reads it.
struct FigureData {
  ConvexRing ring;
  std::vector<std::pair<double, std::vector<std::vector<Vec2>>>> level_loops;
  std::vector<const Streamline*> streamlines;
  const RidgeGraph* ridge = nullptr;
};

/// Vector figure (SVG, 6-decimal coordinates) with the domain, level
/// curves, streamlines and the ridge highlighted.
void write_figure_svg(const FigureData& data, const std::filesystem::path& path);

} // namespace ringflow
