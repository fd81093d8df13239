#include "ringflow/io.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "ringflow/errors.hpp"

namespace ringflow {

namespace {

constexpr char field_magic[4] = {'R', 'F', 'L', 'D'};
constexpr std::uint32_t field_version = 1;

std::ofstream open_out(const std::filesystem::path& path, bool binary = false) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw IoError("cannot read " + path.string());
  return in;
}

template <typename T>
void put(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw IoError("truncated binary field file");
  return v;
}

std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_g6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

} // namespace

void write_field_text(const ScalarField& field, const GradientField& grad,
                      const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "# id x y u speed\n";
  for (int v = 0; v < field.mesh->vertex_count(); ++v) {
    out << v << ' ' << fmt_g17(field.mesh->vertices[v].x) << ' '
        << fmt_g17(field.mesh->vertices[v].y) << ' ' << fmt_g17(field.values[v]) << ' '
        << fmt_g17(grad.vertex_speed[v]) << '\n';
  }
}

FieldTable read_field_text(const std::filesystem::path& path) {
  auto in = open_in(path);
  FieldTable table;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    int id;
    double x, y, u, s;
    if (!(ss >> id >> x >> y >> u >> s)) throw IoError("bad field row: " + line);
    table.id.push_back(id);
    table.x.push_back(x);
    table.y.push_back(y);
    table.u.push_back(u);
    table.speed.push_back(s);
  }
  return table;
}

void write_field_binary(const ScalarField& field, const std::filesystem::path& path) {
  auto out = open_out(path, true);
  out.write(field_magic, 4);
  put(out, field_version);
  put(out, field.p);
  put(out, field.mesh->h);
  put(out, static_cast<std::uint64_t>(field.mesh->vertex_count()));
  put(out, static_cast<std::uint64_t>(field.mesh->triangle_count()));
  for (Vec2 v : field.mesh->vertices) {
    put(out, v.x);
    put(out, v.y);
  }
  for (auto& t : field.mesh->triangles)
    for (int v : t) put(out, static_cast<std::int32_t>(v));
  for (VertexTag t : field.mesh->tags) put(out, static_cast<std::uint8_t>(t));
  for (double u : field.values) put(out, u);
  for (int v : field.mesh->outer_loop) put(out, static_cast<std::int32_t>(v));
  put(out, static_cast<std::int32_t>(-1));
  for (int v : field.mesh->inner_loop) put(out, static_cast<std::int32_t>(v));
  put(out, static_cast<std::int32_t>(-1));
}

ScalarField read_field_binary(const std::filesystem::path& path) {
  auto in = open_in(path, true);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, field_magic, 4) != 0)
    throw IoError("not a field file: " + path.string());
  auto version = get<std::uint32_t>(in);
  if (version != field_version) throw IoError("unsupported field file version");

  auto mesh = std::make_shared<TriangleMesh>();
  ScalarField field;
  field.p = get<double>(in);
  mesh->h = get<double>(in);
  auto nv = get<std::uint64_t>(in);
  auto nt = get<std::uint64_t>(in);
  mesh->vertices.resize(nv);
  for (auto& v : mesh->vertices) {
    v.x = get<double>(in);
    v.y = get<double>(in);
  }
  mesh->triangles.resize(nt);
  for (auto& t : mesh->triangles)
    for (int k = 0; k < 3; ++k) t[k] = get<std::int32_t>(in);
  mesh->tags.resize(nv);
  for (auto& t : mesh->tags) t = static_cast<VertexTag>(get<std::uint8_t>(in));
  field.values.resize(nv);
  for (auto& u : field.values) u = get<double>(in);
  for (std::int32_t v = get<std::int32_t>(in); v >= 0; v = get<std::int32_t>(in))
    mesh->outer_loop.push_back(v);
  for (std::int32_t v = get<std::int32_t>(in); v >= 0; v = get<std::int32_t>(in))
    mesh->inner_loop.push_back(v);
  mesh->rebuild_derived();
  field.mesh = std::move(mesh);
  return field;
}

void write_solve_report(const ScalarField& field, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "p = " << fmt_g17(field.p) << '\n';
  out << "converged = " << (field.report.converged ? "true" : "false") << '\n';
  out << "stages = " << field.report.stages.size() << '\n';
  for (size_t i = 0; i < field.report.stages.size(); ++i) {
    const StageReport& st = field.report.stages[i];
    out << "stage." << i << ".p = " << fmt_g17(st.p) << '\n';
    out << "stage." << i << ".iterations = " << st.iterations << '\n';
    out << "stage." << i << ".residual = " << fmt_g17(st.grad_norm) << '\n';
    out << "stage." << i << ".energies =";
    for (double e : st.energies) out << ' ' << fmt_g17(e);
    out << '\n';
    out << "stage." << i << ".residuals =";
    for (double r : st.residuals) out << ' ' << fmt_g17(r);
    out << '\n';
  }
}

void write_streamlines_text(std::span<const Streamline> streamlines,
                            const ScalarField& field,
                            const std::filesystem::path& path) {
  GradientField dummy;
  dummy.mesh = field.mesh;
  dummy.vertex_gradient.assign(field.mesh->vertex_count(), Vec2{0, 0});
  dummy.vertex_speed.assign(field.mesh->vertex_count(), 0.0);
  FieldSampler sampler(field, dummy);

  auto out = open_out(path);
  out << "# id t x y u speed\n";
  for (size_t i = 0; i < streamlines.size(); ++i) {
    const Streamline& s = streamlines[i];
    for (size_t k = 0; k < s.points.size(); ++k) {
      out << i << ' ' << fmt_g17(s.times[k]) << ' ' << fmt_g17(s.points[k].x) << ' '
          << fmt_g17(s.points[k].y) << ' ' << fmt_g17(sampler.value(s.points[k])) << ' '
          << fmt_g17(s.speeds[k]) << '\n';
    }
  }
}

StreamlineTable read_streamlines_text(const std::filesystem::path& path) {
  auto in = open_in(path);
  StreamlineTable table;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    int id;
    double t, x, y, u, s;
    if (!(ss >> id >> t >> x >> y >> u >> s)) throw IoError("bad streamline row: " + line);
    table.id.push_back(id);
    table.t.push_back(t);
    table.x.push_back(x);
    table.y.push_back(y);
    table.u.push_back(u);
    table.speed.push_back(s);
  }
  return table;
}

void write_streamlines_json(std::span<const Streamline> streamlines,
                            const std::filesystem::path& path) {
  nlohmann::ordered_json doc;
  doc["kind"] = "streamlines";
  auto& arr = doc["streamlines"] = nlohmann::ordered_json::array();
  for (size_t i = 0; i < streamlines.size(); ++i) {
    const Streamline& s = streamlines[i];
    nlohmann::ordered_json js;
    js["id"] = i;
    js["seed"] = {s.seed.x, s.seed.y};
    js["termination"] = s.termination == Termination::reached_inner ? "reached_inner"
                        : s.termination == Termination::stagnated   ? "stagnated"
                                                                    : "left_domain";
    js["total_time"] = s.total_time;
    auto& pts = js["points"] = nlohmann::ordered_json::array();
    for (size_t k = 0; k < s.points.size(); ++k)
      pts.push_back({s.times[k], s.points[k].x, s.points[k].y, s.speeds[k]});
    arr.push_back(std::move(js));
  }
  open_out(path) << doc.dump(1) << '\n';
}

void write_ridge_json(const RidgeGraph& ridge, const std::filesystem::path& path) {
  nlohmann::ordered_json doc;
  doc["kind"] = "ridge";
  auto& segs = doc["segments"] = nlohmann::ordered_json::array();
  for (auto& [seg, gamma] : ridge.segments()) {
    segs.push_back({{"gamma", gamma},
                    {"a", {seg.first.x, seg.first.y}},
                    {"b", {seg.second.x, seg.second.y}}});
  }
  auto& merges = doc["merges"] = nlohmann::ordered_json::array();
  for (const MeetingEvent& ev : ridge.merges()) {
    merges.push_back({{"first", ev.first},
                      {"second", ev.second},
                      {"point", {ev.point.x, ev.point.y}},
                      {"t_first", ev.t_first},
                      {"t_second", ev.t_second}});
  }
  open_out(path) << doc.dump(1) << '\n';
}

namespace {

void svg_polyline(std::ostream& out, const std::vector<Vec2>& pts, bool closed,
                  const std::string& style) {
  if (pts.size() < 2) return;
  out << "<path d=\"M";
  for (size_t i = 0; i < pts.size(); ++i) {
    out << ' ' << fmt_g6(pts[i].x) << ' ' << fmt_g6(-pts[i].y);
    if (i == 0) out << " L";
  }
  if (closed) out << " Z";
  out << "\" " << style << "/>\n";
}

std::vector<Vec2> region_outline(const ConvexRegion& region) {
  if (region.kind == RegionKind::polygon) return region.vertices;
  std::vector<Vec2> pts;
  int n = 128;
  for (int k = 0; k < n; ++k) {
    double phi = 2.0 * 3.14159265358979323846 * k / n;
    pts.push_back(region.center +
                  Vec2{region.radius * std::cos(phi), region.radius * std::sin(phi)});
  }
  return pts;
}

} // namespace

void write_figure_svg(const FigureData& data, const std::filesystem::path& path) {
  auto outline = region_outline(data.ring.omega);
  Vec2 lo = outline[0], hi = outline[0];
  for (Vec2 p : outline) {
    lo.x = std::min(lo.x, p.x);
    lo.y = std::min(lo.y, p.y);
    hi.x = std::max(hi.x, p.x);
    hi.y = std::max(hi.y, p.y);
  }
  double pad = 0.05 * std::max(hi.x - lo.x, hi.y - lo.y);

  auto out = open_out(path);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << fmt_g6(lo.x - pad)
      << ' ' << fmt_g6(-hi.y - pad) << ' ' << fmt_g6(hi.x - lo.x + 2 * pad) << ' '
      << fmt_g6(hi.y - lo.y + 2 * pad) << "\" width=\"720\" height=\"720\">\n";

  svg_polyline(out, outline, true,
               "fill=\"none\" stroke=\"#000000\" stroke-width=\"0.012\"");
  auto inner_outline = region_outline(data.ring.meshed_inner());
  svg_polyline(out, inner_outline, true,
               "fill=\"#d0d0d0\" stroke=\"#000000\" stroke-width=\"0.008\"");

  for (auto& [c, loops] : data.level_loops) {
    (void)c;
    for (auto& loop : loops)
      svg_polyline(out, loop, true,
                   "fill=\"none\" stroke=\"#7fb2d9\" stroke-width=\"0.006\"");
  }
  for (const Streamline* s : data.streamlines) {
    if (s)
      svg_polyline(out, s->points, false,
                   "fill=\"none\" stroke=\"#e08030\" stroke-width=\"0.008\"");
  }
  if (data.ridge && !data.ridge->empty()) {
    for (const Streamline& g : data.ridge->attracting())
      svg_polyline(out, g.points, false,
                   "fill=\"none\" stroke=\"#c02020\" stroke-width=\"0.016\"");
  }
  out << "</svg>\n";
}

} // namespace ringflow
