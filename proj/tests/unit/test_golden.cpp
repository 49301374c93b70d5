#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "passage/output.hpp"
#include "passage/scene_io.hpp"

using namespace passage;

// The golden artifacts feed the plotting scripts; recomputing them must give
// the same layout and the same numbers.

namespace {

std::vector<std::vector<std::string>> read_csv_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream cols(line);
    std::string cell;
    while (std::getline(cols, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  return nlohmann::json::parse(in);
}

const std::string kGolden = PASSAGE_GOLDEN_DIR;

void check_same(const std::vector<std::vector<std::string>>& golden, const std::string& fresh_text) {
  std::vector<std::vector<std::string>> fresh;
  std::istringstream in(fresh_text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream cols(line);
    std::string cell;
    while (std::getline(cols, cell, ',')) cells.push_back(cell);
    fresh.push_back(cells);
  }
  REQUIRE(fresh.size() == golden.size());
  CHECK(fresh[0] == golden[0]);
  for (std::size_t r = 1; r < golden.size(); ++r) {
    REQUIRE(fresh[r].size() == golden[r].size());
    for (std::size_t c = 0; c < golden[r].size(); ++c) {
      if (golden[r][c] == "nan") {
        CHECK(fresh[r][c] == "nan");
      } else {
        const double g = std::stod(golden[r][c]), f = std::stod(fresh[r][c]);
        CHECK(std::abs(f - g) <= 1e-12 * std::max(1.0, std::abs(g)));
      }
    }
  }
}

}  // namespace

TEST_CASE("golden disc flux series") {
  const auto meta = read_json_file(kGolden + "/disc_flux.json");
  CHECK(meta["schema_version"] == kSchemaVersion);
  const Scene scene = parse_scene(meta["scene"].dump());
  CHECK(scene_hash(scene) == meta["scene_hash"]);
  const auto golden = read_csv_file(kGolden + "/disc_flux.csv");
  std::vector<double> times;
  for (std::size_t r = 1; r < golden.size(); ++r) times.push_back(std::stod(golden[r][0]));
  CHECK(times.size() == meta["times"]);

  const FluxSeries series = flux_time_series(scene, meta["N"].get<int>(), times, meta["M"].get<int>());
  std::ostringstream fresh;
  write_flux_csv(fresh, series);
  check_same(golden, fresh.str());
}

TEST_CASE("golden disc heat map at t = 0.1") {
  const auto meta = read_json_file(kGolden + "/disc_grid_t0.1.json");
  CHECK(meta["schema_version"] == kSchemaVersion);
  const Scene scene = parse_scene(meta["scene"].dump());
  const auto& g = meta["grid"];
  const GridSpec spec{g["xmin"], g["xmax"], g["ymin"], g["ymax"], g["nx"], g["ny"]};
  const FieldGrid grid = eval_density_grid(scene, meta["N"].get<int>(), spec, meta["t"].get<double>(),
                                           meta["M"].get<int>());
  std::ostringstream fresh;
  write_grid_csv(fresh, grid);
  check_same(read_csv_file(kGolden + "/disc_grid_t0.1.csv"), fresh.str());

  // The early-time contour halo leaves small negative values that a log
  // colour scale has to clamp; their count is part of the metadata.
  const auto recomputed = grid_metadata(grid, scene, RunInfo{});
  CHECK(recomputed["cells"]["negative"] == meta["cells"]["negative"]);
  CHECK(meta["cells"]["negative"].get<int>() > 0);
  CHECK(meta["cells"]["failed"] == 2);  // the source and a boundary node
}
