#pragma once

// File formats shared by the CLI and the plotting scripts.
//
// Flux CSV:  t,j_total,c_total,j_1..j_K,c_1..c_K   one row per time
// Grid CSV:  x,y,value,mask                        row-major, x fastest
//   mask 0 = open cell, 1 = inside a body, 2 = evaluation failed;
//   value is "nan" whenever mask != 0.
// Numbers use 17 significant digits; NaN prints as "nan".

#include <fstream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "passage/eval.hpp"
#include "passage/flux.hpp"

namespace passage {

inline constexpr const char* kSchemaVersion = "passage-output/1";

/// %.17g, or "nan" / "inf" / "-inf".
std::string format_number(double value);

void write_flux_csv(std::ostream& out, const FluxSeries& series);
void write_grid_csv(std::ostream& out, const FieldGrid& grid);

struct RunInfo {
  int base_n = 128;
  int M = kDefaultTalbotNodes;
  double tolerance = 1e-12;
  int threads = 1;
  bool deterministic = false;
  std::string self_quadrature = "odd-even";
};

/// Sidecar metadata for a heat-map grid.
nlohmann::ordered_json grid_metadata(const FieldGrid& grid, const Scene& scene, const RunInfo& run);

/// Sidecar metadata for a flux series; columns lists the absorber labels
/// in CSV order.
nlohmann::ordered_json flux_metadata(const FluxSeries& series, const Scene& scene, const RunInfo& run);

/// Absorber labels in CSV column order; unlabeled absorbers get
/// "absorber_<k>" (1-based).
std::vector<std::string> absorber_labels(const Scene& scene);

/// Machine-readable run log, one JSON object per line, flushed per record.
class RunLog {
 public:
  RunLog() = default;
  /// Throws std::ios_base::failure when the file cannot be opened.
  explicit RunLog(const std::string& path);
  void write(const nlohmann::ordered_json& record);
  bool active() const { return out_.is_open(); }

 private:
  std::ofstream out_;
};

/// Opens for writing or throws std::ios_base::failure naming the path.
std::ofstream open_output(const std::string& path);

}  // namespace passage
