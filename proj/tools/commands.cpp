#include "commands.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "tisr/baselines.hpp"
#include "tisr/dense.hpp"
#include "tisr/metrics.hpp"
#include "tisr/selfsim.hpp"
#include "tisr/simgen.hpp"
#include "tisr/solver.hpp"

namespace tisr::cli {

namespace fs = std::filesystem;

namespace {

// Dense oracle checks are limited to HR images of at most this many pixels.
constexpr std::size_t kOracleMaxPixels = 32 * 32;

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

const std::string& require_key(const RunConfig& config, const std::string& key) {
  const std::string& value = config.get(key);
  if (value.empty()) throw Error(ErrorCode::Config, "missing required key '" + key + "'");
  return value;
}

fs::path output_dir_of(const fs::path& output_file) {
  fs::path dir = output_file.parent_path();
  return dir.empty() ? fs::path(".") : dir;
}

void ensure_parent(const fs::path& file) {
  const fs::path dir = output_dir_of(file);
  fs::create_directories(dir);
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  return out;
}

std::vector<SourceImage> load_sources(const RunConfig& config) {
  std::vector<SourceImage> sources;
  for (const auto& path : config.get_list("sources")) {
    sources.push_back({path, read_image(path)});
  }
  return sources;
}

SyntheticSources synthetic_spec(const RunConfig& config) {
  const auto size = static_cast<std::size_t>(config.get_int("synthetic_size"));
  return {static_cast<std::size_t>(config.get_int("synthetic_count")), size, size};
}

StackedObservation load_pair(const RunConfig& config, bool need_y2) {
  StackedObservation obs;
  obs.y1 = read_image(require_key(config, "y1"));
  if (need_y2) {
    obs.y2 = read_image(require_key(config, "y2"));
    require_same_shape(obs.y1, obs.y2, "twin images");
  }
  return obs;
}

SelfSimGraph graph_from_reference(const RunConfig& config, const Image& y1,
                                  const DegradationModel& model) {
  const PatchGrid hr = config.hr_grid(model.hr_height, model.hr_width);
  const PatchGrid lr = hr.downscaled(model.factor);
  return build_graph(y1, lr, hr, static_cast<std::size_t>(config.get_int("neighbors")),
                     config.search_radius(y1.height(), y1.width()),
                     config.get_double("alpha_eps"));
}

struct MethodScores {
  double psnr = 0.0;
  double ssim = 0.0;
};

}  // namespace

void write_run_meta(const fs::path& dir, const std::string& command,
                    const RunConfig& config) {
  fs::create_directories(dir);
  auto out = open_out(dir / "run.meta");
  out << "command=" << command << '\n';
  config.write(out);
}

std::vector<ManifestRow> read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open manifest " + path.string());
  const fs::path base = output_dir_of(path);
  std::string line;
  std::getline(in, line);
  if (line != "tile_id,source,protocol,shift_n,true_shift_x,true_shift_y,y1,y2,ground_truth") {
    throw Error(ErrorCode::MalformedHeader, "unexpected manifest header in " + path.string());
  }
  std::vector<ManifestRow> rows;
  int number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 9) {
      throw Error(ErrorCode::MalformedHeader,
                  path.string() + ":" + std::to_string(number) + ": expected 9 fields");
    }
    ManifestRow row;
    row.tile_id = fields[0];
    row.source = fields[1];
    row.protocol = fields[2];
    row.shift_n = std::stoi(fields[3]);
    row.true_shift_x = std::stod(fields[4]);
    row.true_shift_y = std::stod(fields[5]);
    row.y1 = base / fields[6];
    row.y2 = base / fields[7];
    row.ground_truth = base / fields[8];
    rows.push_back(std::move(row));
  }
  return rows;
}

int cmd_simulate(const RunConfig& config, std::ostream& log) {
  const fs::path out_dir = require_key(config, "output");
  fs::create_directories(out_dir);
  const Protocol protocol = config.protocol();
  const auto entries =
      make_dataset(load_sources(config), synthetic_spec(config), protocol, config.seed());
  if (entries.empty()) {
    throw Error(ErrorCode::Config,
                "no tiles produced: give sources or synthetic_count at least tile_size");
  }
  auto manifest = open_out(out_dir / "manifest.csv");
  manifest << "tile_id,source,protocol,shift_n,true_shift_x,true_shift_y,y1,y2,ground_truth\n";
  for (const auto& e : entries) {
    const std::string y1 = e.tile_id + "_y1.pgm";
    const std::string y2 = e.tile_id + "_y2.pgm";
    const std::string gt = e.tile_id + "_gt.pgm";
    write_image(e.pair.y1, out_dir / y1);
    write_image(e.pair.y2, out_dir / y2);
    write_image(*e.pair.ground_truth, out_dir / gt);
    manifest << e.tile_id << ',' << e.source << ',' << to_string(e.protocol.kind) << ','
             << (e.protocol.kind == ProtocolKind::Ideal ? 5 : e.protocol.shift_n) << ','
             << fixed(e.pair.true_shift_x, 4) << ',' << fixed(e.pair.true_shift_y, 4) << ','
             << y1 << ',' << y2 << ',' << gt << '\n';
  }
  write_run_meta(out_dir, "simulate", config);
  log << "simulate: wrote " << entries.size() << " pairs to " << out_dir.string() << '\n';
  return kOk;
}

int cmd_solve(const RunConfig& config, std::ostream& log) {
  const StackedObservation obs = load_pair(config, true);
  const DegradationModel model =
      config.model(obs.y1.height() * 2, obs.y1.width() * 2);
  const SolverConfig solver = config.solver();
  const SelfSimGraph graph = graph_from_reference(config, obs.y1, model);
  const fs::path output = require_key(config, "output");

  log << "solve: lambda=" << config.get("lambda") << " c=" << config.get("c")
      << " k=" << config.get("neighbors") << " edges=" << graph.edges.size() << '\n';
  const SolveResult result = solve_tisr(obs, model, graph, solver);

  ensure_parent(output);
  write_image(result.z, output);
  if (const std::string& log_path = config.get("log"); !log_path.empty()) {
    ensure_parent(log_path);
    auto out = open_out(log_path);
    write_iteration_log(out, result.state, solver, graph.neighbors_per_node);
  }
  write_run_meta(output_dir_of(output), "solve", config);

  const double final_objective =
      objective(result.z, obs, model, graph, solver.lambda);
  log << "solve: " << result.state.iter << " iterations, objective "
      << fixed(final_objective, 10) << '\n';

  if (config.get_bool("oracle_check")) {
    if (model.hr_height * model.hr_width > kOracleMaxPixels) {
      throw Error(ErrorCode::Config, "oracle_check is limited to HR images of 32x32 pixels");
    }
    const Image dense_z = dense::direct_minimizer(obs, model, graph, solver.lambda);
    const double dense_objective = objective(dense_z, obs, model, graph, solver.lambda);
    const double gap = std::abs(final_objective - dense_objective);
    const bool ok = gap <= config.get_double("oracle_tol");
    log << "oracle_check: dense objective " << fixed(dense_objective, 10) << ", gap "
        << gap << (ok ? " (pass)" : " (FAIL)") << '\n';
    if (!ok) return kCheckFailed;
  }
  return kOk;
}

int cmd_baseline(const RunConfig& config, std::ostream& log) {
  const std::string& method = config.get("method");
  const fs::path output = require_key(config, "output");
  Image z;
  if (method == "bicubic") {
    z = bicubic_x2(load_pair(config, false).y1);
  } else if (method == "ibp") {
    const StackedObservation obs = load_pair(config, true);
    const DegradationModel model = config.model(obs.y1.height() * 2, obs.y1.width() * 2);
    IbpResult result = ibp_reconstruct(obs, model, config.ibp());
    if (result.diverged) log << "baseline: warning: IBP residual grew, returning best iterate\n";
    if (const std::string& log_path = config.get("log"); !log_path.empty()) {
      ensure_parent(log_path);
      auto out = open_out(log_path);
      out << "iter,residual\n";
      for (std::size_t i = 0; i < result.residuals.size(); ++i) {
        char line[64];
        std::snprintf(line, sizeof line, "%zu,%.17g\n", i, result.residuals[i]);
        out << line;
      }
    }
    z = std::move(result.z);
  } else {
    throw Error(ErrorCode::Config, "unknown baseline method '" + method + "'");
  }
  ensure_parent(output);
  write_image(z, output);
  write_run_meta(output_dir_of(output), "baseline", config);
  log << "baseline: " << method << " -> " << output.string() << '\n';
  return kOk;
}

int cmd_evaluate(const RunConfig& config, std::ostream& log) {
  const auto rows = read_manifest(require_key(config, "manifest"));
  const fs::path recon_dir = require_key(config, "recon_dir");
  const fs::path output = require_key(config, "output");
  const bool with_shift = config.get_bool("register");
  const int upsample = static_cast<int>(config.get_int("upsample"));

  std::vector<MetricReport> reports;
  for (const auto& row : rows) {
    const Image recon = read_image(recon_dir / (row.tile_id + ".pgm"));
    const Image truth = read_image(row.ground_truth);
    MetricReport report = evaluate_pair(row.tile_id, recon, truth);
    if (with_shift) {
      report.shift = estimate_shift(read_image(row.y1), read_image(row.y2), upsample);
    }
    reports.push_back(std::move(report));
  }
  ensure_parent(output);
  auto out = open_out(output);
  write_metrics_csv(out, reports);
  write_run_meta(output_dir_of(output), "evaluate", config);
  const MetricReport mean_row = mean_report(reports);
  log << "evaluate: " << reports.size() << " images, mean PSNR "
      << format_metric(mean_row.psnr_db) << " dB, mean SSIM " << format_metric(mean_row.ssim)
      << '\n';
  return kOk;
}

int cmd_register(const RunConfig& config, std::ostream& log) {
  const StackedObservation obs = load_pair(config, true);
  const ShiftEstimate est =
      estimate_shift(obs.y1, obs.y2, static_cast<int>(config.get_int("upsample")));
  std::ostringstream csv;
  csv << "dx,dy,confidence\n"
      << format_metric(est.dx) << ',' << format_metric(est.dy) << ','
      << format_metric(est.confidence) << '\n';
  if (const std::string& output = config.get("output"); !output.empty()) {
    ensure_parent(output);
    auto out = open_out(output);
    out << csv.str();
    write_run_meta(output_dir_of(output), "register", config);
  } else {
    log << csv.str();
  }
  return kOk;
}

int cmd_benchmark(const RunConfig& config, std::ostream& log) {
  const fs::path output = require_key(config, "output");
  const auto scene_size = static_cast<std::size_t>(config.get_int("scene_size"));
  const auto scene_count = static_cast<std::size_t>(config.get_int("scenes"));

  // Scenes: tiles of the given sources first, then synthetic scenes.
  std::vector<Image> scenes;
  for (const auto& src : load_sources(config)) {
    for (std::size_t r = 0; r + scene_size <= src.image.height(); r += scene_size) {
      for (std::size_t c = 0; c + scene_size <= src.image.width(); c += scene_size) {
        if (scenes.size() < scene_count) {
          scenes.push_back(crop(src.image, r, c, scene_size, scene_size));
        }
      }
    }
  }
  for (std::uint64_t i = 0; scenes.size() < scene_count; ++i) {
    scenes.push_back(synthetic_scene(scene_size, scene_size, config.seed() + i));
  }

  const SolverConfig solver = config.solver();
  const IbpOptions ibp = config.ibp();
  const Kernel kernel = gaussian_kernel(static_cast<std::size_t>(config.get_int("kernel_size")),
                                        config.get_double("kernel_variance"));
  constexpr int kShifts = 11;
  const char* methods[] = {"cosup", "ibp", "bicubic"};
  std::vector<std::array<MethodScores, 3>> grid(kShifts);

  for (int n = 0; n < kShifts; ++n) {
    for (const Image& scene : scenes) {
      const TwinPair pair = simulate_nonideal(scene, n, n, kernel);
      const StackedObservation obs = pair.observation();
      DegradationModel model = config.model(pair.model.hr_height, pair.model.hr_width);
      const SelfSimGraph graph = graph_from_reference(config, obs.y1, model);
      const Image recon[3] = {solve_tisr(obs, model, graph, solver).z,
                              ibp_reconstruct(obs, model, ibp).z, bicubic_x2(obs.y1)};
      for (int m = 0; m < 3; ++m) {
        grid[n][m].psnr += psnr(recon[m], *pair.ground_truth);
        grid[n][m].ssim += ssim(recon[m], *pair.ground_truth);
      }
    }
    log << "benchmark: shift " << fixed(0.1 * n, 1) << " done\n";
  }

  ensure_parent(output);
  auto out = open_out(output);
  out << "method,metric";
  for (int n = 0; n < kShifts; ++n) out << ',' << fixed(0.1 * n, 1);
  out << '\n';
  const double count = static_cast<double>(scenes.size());
  for (int m = 0; m < 3; ++m) {
    out << methods[m] << ",psnr";
    for (int n = 0; n < kShifts; ++n) out << ',' << fixed(grid[n][m].psnr / count, 6);
    out << '\n' << methods[m] << ",ssim";
    for (int n = 0; n < kShifts; ++n) out << ',' << fixed(grid[n][m].ssim / count, 6);
    out << '\n';
  }
  write_run_meta(output_dir_of(output), "benchmark", config);
  return kOk;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"simulate", "solve",    "baseline",
                                                 "evaluate", "register", "benchmark"};
  return names;
}

int run_command(const std::string& name, const RunConfig& config, std::ostream& log) {
  config.validate();
  if (name == "simulate") return cmd_simulate(config, log);
  if (name == "solve") return cmd_solve(config, log);
  if (name == "baseline") return cmd_baseline(config, log);
  if (name == "evaluate") return cmd_evaluate(config, log);
  if (name == "register") return cmd_register(config, log);
  if (name == "benchmark") return cmd_benchmark(config, log);
  log << "unknown command '" << name << "'\n";
  return kUsage;
}

}  // namespace tisr::cli
