#include "passage/output.hpp"

#include <cmath>
#include <cstdio>

#include "passage/scene_io.hpp"

namespace passage {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

void write_flux_csv(std::ostream& out, const FluxSeries& series) {
  const Eigen::Index k = series.j.rows();
  out << "t,j_total,c_total";
  for (Eigen::Index a = 1; a <= k; ++a) out << ",j_" << a;
  for (Eigen::Index a = 1; a <= k; ++a) out << ",c_" << a;
  out << '\n';
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    const auto col = static_cast<Eigen::Index>(i);
    out << format_number(series.times[i]) << ',' << format_number(series.j_total[i]) << ','
        << format_number(series.c_total[i]);
    for (Eigen::Index a = 0; a < k; ++a) out << ',' << format_number(series.j(a, col));
    for (Eigen::Index a = 0; a < k; ++a) out << ',' << format_number(series.c(a, col));
    out << '\n';
  }
}

void write_grid_csv(std::ostream& out, const FieldGrid& grid) {
  out << "x,y,value,mask\n";
  for (int j = 0; j < grid.spec.ny; ++j) {
    for (int i = 0; i < grid.spec.nx; ++i) {
      const int mask = grid.state(j, i);
      const double value = mask == kCellOpen ? grid.values(j, i) : std::nan("");
      out << format_number(grid.spec.x(i)) << ',' << format_number(grid.spec.y(j)) << ',' << format_number(value)
          << ',' << mask << '\n';
    }
  }
}

std::vector<std::string> absorber_labels(const Scene& scene) {
  std::vector<std::string> labels;
  for (int k = 0; k < scene.num_dirichlet(); ++k) {
    const std::string& label = scene.bodies[k].label;
    labels.push_back(label.empty() ? "absorber_" + std::to_string(k + 1) : label);
  }
  return labels;
}

namespace {

nlohmann::ordered_json common_metadata(const Scene& scene, const RunInfo& run) {
  nlohmann::ordered_json meta;
  meta["schema_version"] = kSchemaVersion;
  meta["N"] = run.base_n;
  meta["M"] = run.M;
  meta["tolerance"] = run.tolerance;
  meta["threads"] = run.threads;
  meta["deterministic"] = run.deterministic;
  meta["self_quadrature"] = run.self_quadrature;
  meta["scene_hash"] = scene_hash(scene);
  meta["scene"] = scene_to_json(scene);
  meta["labels"] = absorber_labels(scene);
  return meta;
}

}  // namespace

nlohmann::ordered_json grid_metadata(const FieldGrid& grid, const Scene& scene, const RunInfo& run) {
  nlohmann::ordered_json meta = common_metadata(scene, run);
  meta["kind"] = "grid";
  meta["t"] = grid.t;
  meta["grid"] = {{"xmin", grid.spec.xmin}, {"xmax", grid.spec.xmax}, {"ymin", grid.spec.ymin},
                  {"ymax", grid.spec.ymax}, {"nx", grid.spec.nx},     {"ny", grid.spec.ny}};
  int inside = 0, failed = 0, near = 0, negative = 0;
  for (int j = 0; j < grid.spec.ny; ++j) {
    for (int i = 0; i < grid.spec.nx; ++i) {
      inside += grid.state(j, i) == kCellInside;
      failed += grid.state(j, i) == kCellFailed;
      if (grid.state(j, i) != kCellOpen) continue;
      near += grid.near_boundary(j, i);
      negative += grid.values(j, i) < 0.0;
    }
  }
  meta["cells"] = {{"inside", inside}, {"failed", failed}, {"near_boundary", near}, {"negative", negative}};
  meta["solves"] = grid.solves;
  return meta;
}

nlohmann::ordered_json flux_metadata(const FluxSeries& series, const Scene& scene, const RunInfo& run) {
  nlohmann::ordered_json meta = common_metadata(scene, run);
  meta["kind"] = "flux";
  meta["times"] = series.times.size();
  int failed = 0;
  for (std::size_t i = 0; i < series.times.size(); ++i) failed += !series.ok(i);
  meta["failed_times"] = failed;
  meta["solves"] = series.solves.size();
  return meta;
}

RunLog::RunLog(const std::string& path) : out_(open_output(path)) {}

void RunLog::write(const nlohmann::ordered_json& record) {
  if (!out_.is_open()) return;
  out_ << record.dump() << '\n';
  out_.flush();
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::ios_base::failure("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace passage
