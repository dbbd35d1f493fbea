#include "tisr/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

namespace tisr {

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = {
      // solver
      {"lambda", "0.1", "regularization strength"},
      {"c", "2", "ADMM penalty parameter"},
      {"admm_iters", "30", "maximum ADMM iterations"},
      {"cg_tol", "1e-8", "relative residual target of inner CG solves"},
      {"cg_max_iter", "500", "iteration cap of inner CG solves"},
      {"primal_tol", "1e-6", "early stop on ||x-z||/max(||z||,1) (0 disables)"},
      // self-similarity graph
      {"patch_size", "8", "HR patch edge q (even)"},
      {"patch_stride", "4", "HR patch stride (even)"},
      {"neighbors", "3", "neighbors per patch k"},
      {"search_radius", "10", "search window radius in lattice steps"},
      {"full_search_max_lr", "64", "use a full search when the LR image fits in this size"},
      {"alpha_eps", "1e-6", "lower clamp on patch distances"},
      // degradation
      {"kernel_size", "7", "Gaussian blur size (odd)"},
      {"kernel_variance", "0.65", "Gaussian blur variance"},
      {"factor", "2", "decimation factor (only 2 is supported)"},
      {"shift_rows", "1", "twin shift, HR rows (down)"},
      {"shift_cols", "1", "twin shift, HR columns (left)"},
      // simulation
      {"protocol", "ideal", "ideal | nonideal"},
      {"tile_size", "512", "tile edge in source pixels"},
      {"shift_n", "5", "nonideal twin offset in original pixels (0..10)"},
      {"sources", "", "comma-separated source PGM paths"},
      {"synthetic_count", "0", "number of synthetic source scenes"},
      {"synthetic_size", "512", "edge of synthetic source scenes"},
      {"seed", "0", "seed for every random choice"},
      // baselines
      {"method", "bicubic", "baseline method: bicubic | ibp"},
      {"ibp_iters", "50", "IBP iterations"},
      {"ibp_step", "0.5", "IBP step size"},
      // registration / evaluation
      {"upsample", "100", "registration upsampling factor"},
      {"register", "false", "add estimated twin shifts to evaluation rows"},
      {"manifest", "", "dataset manifest CSV"},
      {"recon_dir", "", "directory holding <tile_id>.pgm reconstructions"},
      // benchmark
      {"scenes", "10", "number of scenes in the shift sweep"},
      {"scene_size", "640", "original-resolution scene edge (multiple of 10)"},
      // I/O
      {"y1", "", "reference LR image"},
      {"y2", "", "twin LR image"},
      {"ground_truth", "", "HR ground truth (optional)"},
      {"output", "", "output file or directory"},
      {"log", "", "per-iteration CSV log path"},
      {"oracle_check", "false", "compare against the dense direct minimizer"},
      {"oracle_tol", "1e-6", "allowed objective gap for oracle_check"},
  };
  return keys;
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void config_error(const std::string& message) {
  throw Error(ErrorCode::Config, message);
}

}  // namespace

RunConfig::RunConfig() {
  for (const auto& key : config_keys()) values_[key.name] = key.default_value;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  auto it = values_.find(key);
  if (it == values_.end()) config_error("unknown key '" + key + "'");
  it->second = value;
}

void RunConfig::load_text(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = origin + ":" + std::to_string(number) + ": ";
    if (eq == std::string::npos) config_error(where + "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (!values_.contains(key)) config_error(where + "unknown key '" + key + "'");
    values_[key] = trim(line.substr(eq + 1));
  }
}

void RunConfig::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  load_text(buffer.str(), path.string());
}

void RunConfig::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) config_error("override '" + assignment + "' is not key=value");
  const std::string key = trim(assignment.substr(0, eq));
  if (!values_.contains(key)) config_error("override: unknown key '" + key + "'");
  values_[key] = trim(assignment.substr(eq + 1));
}

const std::string& RunConfig::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) config_error("unknown key '" + key + "'");
  return it->second;
}

double RunConfig::get_double(const std::string& key) const {
  const std::string& text = get(key);
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    config_error("key '" + key + "': '" + text + "' is not a number");
  }
}

long long RunConfig::get_int(const std::string& key) const {
  const std::string& text = get(key);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    config_error("key '" + key + "': '" + text + "' is not an integer");
  }
  return v;
}

bool RunConfig::get_bool(const std::string& key) const {
  const std::string& text = get(key);
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  config_error("key '" + key + "': '" + text + "' is not a boolean");
}

std::vector<std::string> RunConfig::get_list(const std::string& key) const {
  std::vector<std::string> items;
  std::stringstream in(get(key));
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

SolverConfig RunConfig::solver() const {
  SolverConfig s;
  s.lambda = get_double("lambda");
  s.c = get_double("c");
  s.admm_iters = static_cast<int>(get_int("admm_iters"));
  s.cg_tol = get_double("cg_tol");
  s.cg_max_iter = static_cast<int>(get_int("cg_max_iter"));
  s.primal_tol = get_double("primal_tol");
  return s;
}

DegradationModel RunConfig::model(std::size_t hr_height, std::size_t hr_width) const {
  DegradationModel m;
  m.kernel = gaussian_kernel(static_cast<std::size_t>(get_int("kernel_size")),
                             get_double("kernel_variance"));
  m.factor = static_cast<std::size_t>(get_int("factor"));
  m.shift_rows = static_cast<int>(get_int("shift_rows"));
  m.shift_cols = static_cast<int>(get_int("shift_cols"));
  m.hr_height = hr_height;
  m.hr_width = hr_width;
  m.validate();
  return m;
}

Protocol RunConfig::protocol() const {
  Protocol p;
  p.kind = parse_protocol(get("protocol"));
  p.tile_size = static_cast<std::size_t>(get_int("tile_size"));
  p.shift_n = static_cast<int>(get_int("shift_n"));
  p.kernel_size = static_cast<std::size_t>(get_int("kernel_size"));
  p.kernel_variance = get_double("kernel_variance");
  return p;
}

IbpOptions RunConfig::ibp() const {
  IbpOptions o;
  o.iters = static_cast<int>(get_int("ibp_iters"));
  o.step = get_double("ibp_step");
  return o;
}

std::uint64_t RunConfig::seed() const {
  return static_cast<std::uint64_t>(get_int("seed"));
}

PatchGrid RunConfig::hr_grid(std::size_t hr_height, std::size_t hr_width) const {
  return PatchGrid(hr_height, hr_width, static_cast<std::size_t>(get_int("patch_size")),
                   static_cast<std::size_t>(get_int("patch_stride")));
}

int RunConfig::search_radius(std::size_t lr_height, std::size_t lr_width) const {
  const auto limit = static_cast<std::size_t>(get_int("full_search_max_lr"));
  if (lr_height <= limit && lr_width <= limit) return kFullSearch;
  return static_cast<int>(get_int("search_radius"));
}

void RunConfig::validate() const {
  auto require = [](bool ok, const std::string& message) {
    if (!ok) config_error(message);
  };
  solver().validate();
  require(get_int("factor") == 2, "factor: only 2 is supported");
  const long long q = get_int("patch_size");
  const long long s = get_int("patch_stride");
  require(q >= 4 && q % 2 == 0, "patch_size must be an even integer >= 4");
  require(s >= 2 && s % 2 == 0, "patch_stride must be an even integer >= 2");
  require(get_int("neighbors") >= 1, "neighbors must be >= 1");
  require(get_int("search_radius") >= 0, "search_radius must be >= 0");
  require(get_int("full_search_max_lr") >= 0, "full_search_max_lr must be >= 0");
  require(get_double("alpha_eps") > 0.0, "alpha_eps must be positive");
  const long long k = get_int("kernel_size");
  require(k >= 1 && k % 2 == 1, "kernel_size must be odd");
  require(get_double("kernel_variance") > 0.0, "kernel_variance must be positive");
  protocol();
  const long long shift_n = get_int("shift_n");
  require(shift_n >= 0 && shift_n <= 10, "shift_n must lie in 0..10");
  require(get_int("tile_size") > 0, "tile_size must be positive");
  require(get_int("synthetic_count") >= 0, "synthetic_count must be >= 0");
  require(get_int("synthetic_size") > 0, "synthetic_size must be positive");
  require(get_int("seed") >= 0, "seed must be >= 0");
  const std::string& method = get("method");
  require(method == "bicubic" || method == "ibp", "method must be bicubic or ibp");
  require(get_int("ibp_iters") >= 0, "ibp_iters must be >= 0");
  require(get_double("ibp_step") >= 0.0, "ibp_step must be >= 0");
  require(get_int("upsample") >= 10, "upsample must be >= 10");
  get_bool("register");
  get_bool("oracle_check");
  require(get_double("oracle_tol") > 0.0, "oracle_tol must be positive");
  require(get_int("scenes") >= 1, "scenes must be >= 1");
  const long long scene = get_int("scene_size");
  require(scene > 0 && scene % 10 == 0, "scene_size must be a positive multiple of 10");
}

void RunConfig::write(std::ostream& out) const {
  for (const auto& [key, value] : values_) out << key << '=' << value << '\n';
}

}  // namespace tisr
