// passage: command-line driver for the first-passage solver.
//
// Exit codes: 0 success, 2 bad configuration or scene, 3 convergence
// failure (solver or validation), 4 I/O error.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "passage/output.hpp"
#include "passage/scene_io.hpp"
#include "passage/studies.hpp"

namespace fs = std::filesystem;
using namespace passage;

namespace {

enum ExitCode { kOk = 0, kConfig = 2, kConvergence = 3, kIo = 4 };

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string scene;
  int n = 128;
  int m = kDefaultTalbotNodes;
  std::vector<double> times;
  std::vector<double> times_log;  // start, stop, count
  std::vector<double> grid;       // xmin xmax ymin ymax nx ny
  std::string out = ".";
  int threads = 0;  // 0: OpenMP default
  bool deterministic = false;
  double tol = 1e-12;
  std::string self_quadrature = "odd-even";
};

bool is_count(double v) { return v >= 2 && v == std::floor(v) && v < 1e6; }

std::vector<double> resolve_times(const RunConfig& cfg) {
  if (!cfg.times.empty() && !cfg.times_log.empty()) throw ConfigError("give either --times or --times-log, not both");
  std::vector<double> times = cfg.times;
  if (!cfg.times_log.empty()) {
    const double count = cfg.times_log[2];
    if (!(count >= 1 && count == std::floor(count) && count <= 1e5)) {
      throw ConfigError("--times-log COUNT must be a positive integer");
    }
    if (!(cfg.times_log[0] > 0.0) || !(cfg.times_log[1] >= cfg.times_log[0])) {
      throw ConfigError("--times-log needs 0 < START <= STOP");
    }
    times = log_spaced(cfg.times_log[0], cfg.times_log[1], static_cast<int>(count));
  }
  if (times.empty()) throw ConfigError("no times given (use --times or --times-log)");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0) || !std::isfinite(times[i])) throw ConfigError("times must be positive and finite");
    if (i > 0 && !(times[i] > times[i - 1])) throw ConfigError("times must be strictly increasing");
  }
  return times;
}

GridSpec resolve_grid(const RunConfig& cfg) {
  if (cfg.grid.empty()) throw ConfigError("--grid XMIN XMAX YMIN YMAX NX NY is required");
  if (!is_count(cfg.grid[4]) || !is_count(cfg.grid[5])) throw ConfigError("--grid NX and NY must be integers >= 2");
  GridSpec spec{cfg.grid[0], cfg.grid[1], cfg.grid[2], cfg.grid[3], static_cast<int>(cfg.grid[4]),
                static_cast<int>(cfg.grid[5])};
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("--grid: ") + e.what());
  }
  return spec;
}

SelfQuadrature resolve_self(const RunConfig& cfg) {
  return cfg.self_quadrature == "corrected" ? SelfQuadrature::kLogCorrected : SelfQuadrature::kSubtracted;
}

void validate_common(const RunConfig& cfg) {
  if (cfg.n < 4 || cfg.n % 2 != 0) throw ConfigError("--n must be an even integer >= 4");
  if (cfg.m < 1 || cfg.m > 64) throw ConfigError("--m must lie in [1, 64]");
  if (!(cfg.tol > 0.0 && cfg.tol < 1.0)) throw ConfigError("--tol must lie in (0, 1)");
  if (cfg.threads < 0) throw ConfigError("--threads must be >= 0");
}

int apply_threads(const RunConfig& cfg) {
#ifdef _OPENMP
  // Reductions already run in a fixed order; a single thread also pins the
  // order of any library-internal parallel loops.
  if (cfg.deterministic) {
    omp_set_num_threads(1);
  } else if (cfg.threads > 0) {
    omp_set_num_threads(cfg.threads);
  }
  return omp_get_max_threads();
#else
  (void)cfg;
  return 1;
#endif
}

Scene read_scene(const RunConfig& cfg) {
  if (cfg.scene.empty()) throw ConfigError("--scene is required");
  return load_scene(cfg.scene);
}

RunInfo run_info(const RunConfig& cfg, int threads) {
  return RunInfo{cfg.n, cfg.m, cfg.tol, threads, cfg.deterministic, cfg.self_quadrature};
}

std::string output_stem(const RunConfig& cfg) {
  fs::create_directories(cfg.out);
  return (fs::path(cfg.out) / fs::path(cfg.scene).stem()).string();
}

void add_run_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--scene", cfg.scene, "Scene JSON file")->required();
  cmd->add_option("--n", cfg.n, "Base nodes per body")->capture_default_str();
  cmd->add_option("--m", cfg.m, "Talbot nodes per time (half count)")->capture_default_str();
  cmd->add_option("--times", cfg.times, "Explicit output times");
  cmd->add_option("--times-log", cfg.times_log, "Log-spaced times: START STOP COUNT")->expected(3);
  cmd->add_option("--out", cfg.out, "Output directory")->capture_default_str();
  cmd->add_option("--threads", cfg.threads, "Worker threads (0: runtime default)");
  cmd->add_flag("--deterministic", cfg.deterministic, "Single-threaded, fixed-order reductions");
  cmd->add_option("--tol", cfg.tol, "GMRES relative tolerance")->capture_default_str();
  cmd->add_option("--self-quadrature", cfg.self_quadrature, "Flux self term rule")
      ->check(CLI::IsMember({"odd-even", "corrected"}))
      ->capture_default_str();
}

nlohmann::ordered_json complex_json(Complex z) { return {z.real(), z.imag()}; }

int cmd_flux(const RunConfig& cfg) {
  validate_common(cfg);
  const std::vector<double> times = resolve_times(cfg);
  const Scene scene = read_scene(cfg);
  if (scene.num_dirichlet() == 0) throw ConfigError("scene has no absorbing body; flux is identically zero");
  const int threads = apply_threads(cfg);
  const std::string stem = output_stem(cfg);
  RunLog log(stem + "_run.jsonl");
  log.write({{"event", "start"}, {"command", "flux"}, {"scene", cfg.scene}, {"times", times.size()},
             {"N", cfg.n}, {"M", cfg.m}, {"threads", threads}});

  SolverOptions options;
  options.tolerance = cfg.tol;
  const auto start = std::chrono::steady_clock::now();
  const FluxSeries series = flux_time_series(scene, cfg.n, times, cfg.m, options, resolve_self(cfg));
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  for (const SolveRecord& r : series.solves) {
    log.write({{"event", "solve"}, {"t", r.t}, {"s", complex_json(r.s)}, {"iterations", r.iterations},
               {"residual", r.residual}, {"seconds", r.seconds}});
  }
  int failed = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    int worst = 0;
    for (const SolveRecord& r : series.solves) {
      if (r.t == times[i]) worst = std::max(worst, r.iterations);
    }
    nlohmann::ordered_json rec{{"event", "time"}, {"t", times[i]}, {"ok", series.ok(i)}, {"max_iterations", worst}};
    if (series.ok(i)) {
      rec["c_total"] = series.c_total[i];
    } else {
      rec["error"] = series.errors[i];
      ++failed;
      std::cerr << "t = " << format_number(times[i]) << ": " << series.errors[i] << '\n';
    }
    log.write(rec);
  }

  std::ofstream csv = open_output(stem + "_flux.csv");
  write_flux_csv(csv, series);
  std::ofstream meta = open_output(stem + "_flux.json");
  nlohmann::ordered_json m = flux_metadata(series, scene, run_info(cfg, threads));
  meta << m.dump(2) << '\n';
  if (!csv || !meta) throw std::ios_base::failure("write failed under '" + cfg.out + "'");
  log.write({{"event", "done"}, {"seconds", seconds}, {"failed_times", failed}});

  std::cout << "wrote " << stem << "_flux.csv (" << times.size() << " times, " << series.solves.size()
            << " solves, " << format_number(seconds) << " s)\n";
  return failed == 0 ? kOk : kConvergence;
}

int cmd_heatmap(const RunConfig& cfg) {
  validate_common(cfg);
  const std::vector<double> times = resolve_times(cfg);
  const GridSpec spec = resolve_grid(cfg);
  const Scene scene = read_scene(cfg);
  const int threads = apply_threads(cfg);
  const std::string stem = output_stem(cfg);
  RunLog log(stem + "_heatmap_run.jsonl");
  log.write({{"event", "start"}, {"command", "heatmap"}, {"scene", cfg.scene}, {"times", times.size()},
             {"N", cfg.n}, {"M", cfg.m}, {"threads", threads}});

  SolverOptions options;
  options.tolerance = cfg.tol;
  int failed_cells = 0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    const FieldGrid grid = eval_density_grid(scene, cfg.n, spec, times[k], cfg.m, options);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const std::string base = stem + "_grid_" + std::to_string(k);
    std::ofstream csv = open_output(base + ".csv");
    write_grid_csv(csv, grid);
    std::ofstream meta = open_output(base + ".json");
    const nlohmann::ordered_json m = grid_metadata(grid, scene, run_info(cfg, threads));
    meta << m.dump(2) << '\n';
    if (!csv || !meta) throw std::ios_base::failure("write failed for '" + base + "'");
    const int failed = m["cells"]["failed"].get<int>();
    failed_cells += failed;
    log.write({{"event", "grid"}, {"t", times[k]}, {"file", base + ".csv"}, {"solves", grid.solves},
               {"failed_cells", failed}, {"seconds", seconds}});
    std::cout << "wrote " << base << ".csv (t = " << format_number(times[k]) << ", " << format_number(seconds)
              << " s)\n";
  }
  log.write({{"event", "done"}, {"failed_cells", failed_cells}});
  // Cells on the source itself are singular; solver failures throw instead.
  if (failed_cells > 0) std::cerr << "warning: " << failed_cells << " cell(s) could not be evaluated (mask 2)\n";
  return kOk;
}

int cmd_scene_check(const RunConfig& cfg) {
  validate_common(cfg);
  const Scene scene = read_scene(cfg);
  const DiscretizedScene disc = discretize(scene, cfg.n);
  std::cout << "scene: " << (scene.name.empty() ? cfg.scene : scene.name) << "\nhash: " << scene_hash(scene)
            << "\nsource: (" << format_number(scene.source.x()) << ", " << format_number(scene.source.y()) << ")\n";
  for (std::size_t k = 0; k < scene.bodies.size(); ++k) {
    const Body& b = scene.bodies[k];
    std::printf("body %zu: %-18s %-9s nodes %-5d perimeter %.6g%s%s\n", k + 1, shape_kind(b.shape).c_str(),
                b.bc == BoundaryCondition::kDirichlet ? "absorbing" : "reflecting", disc.bodies[k].n,
                disc.bodies[k].perimeter(), b.label.empty() ? "" : "  label ", b.label.c_str());
  }
  const double separation = min_separation(disc), spacing = max_node_spacing(disc);
  std::printf("min separation %.6g, max node spacing %.6g\n", separation, spacing);
  if (separation < 5.0 * spacing) {
    std::printf("warning: bodies closer than 5 node spacings; near-singular quadrature error is likely\n");
  }
  if (const auto ring = find_reflector_ring(scene)) {
    std::printf("reflector ring: %d circles of radius %.6g on radius %.6g, confining ratio rho = %.3f\n", ring->count,
                ring->reflector_radius, ring->ring_radius, ring->rho);
  }
  return kOk;
}

int cmd_validate_talbot(const std::vector<int>& ms, const std::vector<double>& times, const std::vector<double>& xs,
                        const std::string& out) {
  if (ms.size() < 2) throw ConfigError("M sweep needs at least two values");
  if (times.empty() || xs.empty()) throw ConfigError("empty sweep");
  for (const int m : ms) {
    if (m < 1 || m > 64) throw ConfigError("M values must lie in [1, 64]");
  }
  for (const double x : xs) {
    if (!(std::abs(x) < kPi)) throw ConfigError("x must lie in (-pi, pi)");
  }
  for (const double t : times) {
    if (!(t > 0.0)) throw ConfigError("times must be positive");
  }
  const TalbotSweep sweep = talbot_sweep(ms, times, xs);

  std::printf("%4s", "M");
  for (const double t : times) std::printf("  t=%-10g", t);
  std::printf("\n");
  for (std::size_t mi = 0; mi < ms.size(); ++mi) {
    std::printf("%4d", ms[mi]);
    for (std::size_t ti = 0; ti < times.size(); ++ti) std::printf("  %-12.3e", sweep.max_error(ti, mi));
    std::printf("\n");
  }
  bool pass = true;
  std::printf("slope");
  for (const double s : sweep.slopes) {
    std::printf("  %-12.3f", s);
    pass = pass && std::abs(s + 1.2) <= 0.15 * 1.2;
  }
  std::printf("\nexpected -1.2 +/- 15%%: %s\n", pass ? "pass" : "FAIL");

  if (!out.empty()) {
    fs::create_directories(out);
    std::ofstream csv = open_output((fs::path(out) / "talbot_sweep.csv").string());
    csv << "M,t,max_error\n";
    for (std::size_t mi = 0; mi < ms.size(); ++mi) {
      for (std::size_t ti = 0; ti < times.size(); ++ti) {
        csv << ms[mi] << ',' << format_number(times[ti]) << ',' << format_number(sweep.max_error(ti, mi)) << '\n';
      }
    }
  }
  return pass ? kOk : kConvergence;
}

int cmd_validate_disc(const std::vector<int>& ns, double t, int m, const std::string& out) {
  if (ns.size() < 2) throw ConfigError("N sweep needs at least two values");
  for (const int n : ns) {
    if (n < 4 || n % 2 != 0) throw ConfigError("N values must be even and >= 4");
  }
  if (!(t > 0.0)) throw ConfigError("t must be positive");
  const std::vector<DiscTarget> targets = default_disc_targets();
  const DiscFieldStudy field = disc_field_study(ns, targets, 2.0, t, m);
  const DiscFluxStudy flux = disc_flux_study(ns, 2.0, t, m);

  std::printf("field relative error, max over the t = %g contour nodes\n%-22s", t, "target");
  for (const int n : ns) std::printf("  N=%-9d", n);
  std::printf("  order\n");
  for (std::size_t k = 0; k < targets.size(); ++k) {
    char name[64];
    std::snprintf(name, sizeof name, "(%.3f, %.3f)%s", targets[k].x.x(), targets[k].x.y(), targets[k].gray ? " gray" : "");
    std::printf("%-22s", name);
    for (std::size_t i = 0; i < ns.size(); ++i) std::printf("  %-11.3e", field.errors(k, i));
    std::printf("  %.2f%s\n", field.orders[k], targets[k].gray ? " (excluded)" : "");
  }
  std::printf("%-22s", "flux C(s)");
  for (const double e : flux.errors) std::printf("  %-11.3e", e);
  std::printf("  %.2f\n", flux.order);

  const bool field_ok = field.min_order >= 2.7;
  const bool flux_ok = std::abs(flux.order - 1.0) <= 0.3;
  std::printf("field order %.2f (>= 2.7): %s\nflux order %.2f (1.0 +/- 0.3): %s\n", field.min_order,
              field_ok ? "pass" : "FAIL", flux.order, flux_ok ? "pass" : "FAIL");

  if (!out.empty()) {
    fs::create_directories(out);
    std::ofstream csv = open_output((fs::path(out) / "disc_convergence.csv").string());
    csv << "quantity,x,y,gray,N,error\n";
    for (std::size_t k = 0; k < targets.size(); ++k) {
      for (std::size_t i = 0; i < ns.size(); ++i) {
        csv << "field," << format_number(targets[k].x.x()) << ',' << format_number(targets[k].x.y()) << ','
            << targets[k].gray << ',' << ns[i] << ',' << format_number(field.errors(k, i)) << '\n';
      }
    }
    for (std::size_t i = 0; i < ns.size(); ++i) {
      csv << "flux,nan,nan,0," << ns[i] << ',' << format_number(flux.errors[i]) << '\n';
    }
  }
  return field_ok && flux_ok ? kOk : kConvergence;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Brownian first-passage solver: survival densities and capture-time distributions"};
  app.require_subcommand(1);

  RunConfig flux_cfg, heat_cfg, check_cfg;
  CLI::App* flux = app.add_subcommand("flux", "Absorption flux j(t) and cumulative flux c(t) per absorber");
  add_run_options(flux, flux_cfg);
  CLI::App* heat = app.add_subcommand("heatmap", "Survival density p(x, t) on a rectangular grid");
  add_run_options(heat, heat_cfg);
  heat->add_option("--grid", heat_cfg.grid, "XMIN XMAX YMIN YMAX NX NY")->expected(6)->required();
  CLI::App* check = app.add_subcommand("scene-check", "Validate a scene and report separations and rho");
  check->add_option("--scene", check_cfg.scene, "Scene JSON file")->required();
  check->add_option("--n", check_cfg.n, "Base nodes per body")->capture_default_str();

  std::vector<int> talbot_ms{4, 5, 6, 7, 8, 9, 10, 11, 12};
  std::vector<double> talbot_times{0.1, 1.0, 5.0, 10.0}, talbot_xs{0.0, 0.5, 2.0};
  std::string talbot_out;
  CLI::App* vt = app.add_subcommand("validate-talbot", "Talbot M-sweep on the 1D heat problem");
  vt->add_option("--m-values", talbot_ms, "Talbot node counts")->capture_default_str();
  vt->add_option("--times", talbot_times, "Times")->capture_default_str();
  vt->add_option("--x", talbot_xs, "Positions in (-pi, pi)")->capture_default_str();
  vt->add_option("--out", talbot_out, "Directory for talbot_sweep.csv");

  std::vector<int> disc_ns{32, 64, 128, 256};
  double disc_t = 10.0;
  int disc_m = kDefaultTalbotNodes;
  std::string disc_out;
  CLI::App* vd = app.add_subcommand("validate-disc", "Field and flux convergence on the unit absorbing disc");
  vd->add_option("--n-values", disc_ns, "Node counts")->capture_default_str();
  vd->add_option("--t", disc_t, "Time whose contour nodes are used")->capture_default_str();
  vd->add_option("--m", disc_m, "Talbot nodes")->capture_default_str();
  vd->add_option("--out", disc_out, "Directory for disc_convergence.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    if (*flux) return cmd_flux(flux_cfg);
    if (*heat) return cmd_heatmap(heat_cfg);
    if (*check) return cmd_scene_check(check_cfg);
    if (*vt) return cmd_validate_talbot(talbot_ms, talbot_times, talbot_xs, talbot_out);
    if (*vd) return cmd_validate_disc(disc_ns, disc_t, disc_m, disc_out);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const SceneError& e) {
    std::cerr << "scene error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const NoConvergence& e) {
    std::cerr << "convergence failure: " << e.what() << '\n';
    return kConvergence;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  }
  return kConfig;
}
