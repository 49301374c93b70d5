#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "passage/output.hpp"
#include "passage/scene_io.hpp"
#include "unit/scenes.hpp"

using namespace passage;
using passage::testing::circle_body;

namespace {

std::vector<std::vector<std::string>> read_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
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

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(1e10) == "10000000000");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(format_number(-INFINITY) == "-inf");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("flux CSV layout") {
  FluxSeries series;
  series.times = {1.0, 10.0};
  series.j_total = {0.3, std::nan("")};
  series.c_total = {0.25, std::nan("")};
  series.j = Eigen::MatrixXd(2, 2);
  series.j << 0.1, std::nan(""), 0.2, std::nan("");
  series.c = Eigen::MatrixXd(2, 2);
  series.c << 0.05, std::nan(""), 0.2, std::nan("");
  series.errors = {"", "GMRES did not converge"};

  std::ostringstream out;
  write_flux_csv(out, series);
  const auto rows = read_csv(out.str());
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::vector<std::string>{"t", "j_total", "c_total", "j_1", "j_2", "c_1", "c_2"});
  CHECK(rows[1] == std::vector<std::string>{"1", "0.29999999999999999", "0.25", "0.10000000000000001",
                                            "0.20000000000000001", "0.050000000000000003", "0.20000000000000001"});
  CHECK(rows[2][0] == "10");
  for (std::size_t k = 1; k < rows[2].size(); ++k) CHECK(rows[2][k] == "nan");
}

TEST_CASE("grid CSV and metadata") {
  const Scene scene = make_scene({circle_body(1.0)}, Vec2(2, 0), "disc");
  const GridSpec spec{-1.5, 1.5, -1.0, 1.0, 4, 3};
  const FieldGrid grid = eval_density_grid(scene, 32, spec, 1.0);

  std::ostringstream out;
  write_grid_csv(out, grid);
  const auto rows = read_csv(out.str());
  REQUIRE(rows.size() == 1 + 4 * 3);
  CHECK(rows[0] == std::vector<std::string>{"x", "y", "value", "mask"});
  // Row-major with x fastest.
  CHECK(rows[1][0] == "-1.5");
  CHECK(rows[1][1] == "-1");
  CHECK(rows[2][0] == "-0.5");
  CHECK(rows[5][1] == "0");
  // (-0.5, 0) lies inside the absorber.
  CHECK(rows[6][0] == "-0.5");
  CHECK(rows[6][2] == "nan");
  CHECK(rows[6][3] == "1");
  CHECK(rows[1][3] == "0");
  CHECK(std::isfinite(std::stod(rows[1][2])));

  RunInfo run;
  run.base_n = 32;
  const auto meta = grid_metadata(grid, scene, run);
  CHECK(meta["schema_version"] == kSchemaVersion);
  CHECK(meta["kind"] == "grid");
  CHECK(meta["t"] == 1.0);
  CHECK(meta["M"] == kDefaultTalbotNodes);
  CHECK(meta["N"] == 32);
  CHECK(meta["grid"]["nx"] == 4);
  CHECK(meta["grid"]["ymax"] == 1.0);
  CHECK(meta["scene_hash"] == scene_hash(scene));
  CHECK(meta["scene"]["bodies"][0]["kind"] == "circle");
  CHECK(meta["cells"]["inside"] == 2);
  CHECK(meta["labels"] == nlohmann::json::array({"absorber_1"}));
  // The embedded scene reproduces the hash.
  CHECK(scene_hash(parse_scene(meta["scene"].dump())) == meta["scene_hash"]);
}

TEST_CASE("flux metadata and labels") {
  Body blue = circle_body(0.5, Vec2(3, 0));
  blue.label = "blue";
  const Scene scene = make_scene({blue, circle_body(0.5, Vec2(-3, 0)), circle_body(0.5, Vec2(0, 3),
                                                                                    BoundaryCondition::kNeumann)},
                                 Vec2::Zero());
  CHECK(absorber_labels(scene) == std::vector<std::string>{"blue", "absorber_2"});
  const FluxSeries series = flux_time_series(scene, 16, {1.0, -1.0});
  const auto meta = flux_metadata(series, scene, RunInfo{});
  CHECK(meta["kind"] == "flux");
  CHECK(meta["times"] == 2);
  CHECK(meta["failed_times"] == 1);
  CHECK(meta["solves"] == series.solves.size());
}

TEST_CASE("run log writes one JSON object per line") {
  const auto path = std::filesystem::temp_directory_path() / "passage_run_log_test.jsonl";
  {
    RunLog log(path.string());
    CHECK(log.active());
    log.write({{"event", "start"}});
    log.write({{"event", "done"}, {"seconds", 1.5}});
  }
  std::ifstream in(path);
  std::string line;
  std::vector<nlohmann::json> records;
  while (std::getline(in, line)) records.push_back(nlohmann::json::parse(line));
  REQUIRE(records.size() == 2);
  CHECK(records[1]["seconds"] == 1.5);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(RunLog("/nonexistent-dir/x.jsonl"), std::ios_base::failure);
  RunLog inactive;
  CHECK_FALSE(inactive.active());
  CHECK_NOTHROW(inactive.write({{"event", "ignored"}}));
}
