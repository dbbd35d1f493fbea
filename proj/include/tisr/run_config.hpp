#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "tisr/baselines.hpp"
#include "tisr/degradation.hpp"
#include "tisr/simgen.hpp"
#include "tisr/solver.hpp"

namespace tisr {

struct ConfigKey {
  const char* name;
  const char* default_value;
  const char* help;
};

/// Every key accepted in a run configuration, with its default.
const std::vector<ConfigKey>& config_keys();

/// Flat key=value configuration. Lines are `key = value`; `#` starts a
/// comment; blank lines are ignored. Unknown keys are rejected.
class RunConfig {
 public:
  /// All keys at their defaults.
  RunConfig();

  /// Throws ErrorCode::Config with "file:line: ..." diagnostics.
  void load_file(const std::filesystem::path& path);
  void load_text(const std::string& text, const std::string& origin = "<text>");
  /// Applies one "key=value" override.
  void apply_override(const std::string& assignment);
  void set(const std::string& key, const std::string& value);

  const std::string& get(const std::string& key) const;
  double get_double(const std::string& key) const;
  long long get_int(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  std::vector<std::string> get_list(const std::string& key) const;

  SolverConfig solver() const;
  DegradationModel model(std::size_t hr_height, std::size_t hr_width) const;
  Protocol protocol() const;
  IbpOptions ibp() const;
  std::uint64_t seed() const;

  /// Patch lattice for an HR image; falls back to a full search when the LR
  /// image is at most `full_search_max_lr` on both sides.
  PatchGrid hr_grid(std::size_t hr_height, std::size_t hr_width) const;
  int search_radius(std::size_t lr_height, std::size_t lr_width) const;

  /// Checks every value parses and satisfies its domain.
  void validate() const;

  /// Sorted "key=value" lines.
  void write(std::ostream& out) const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace tisr
