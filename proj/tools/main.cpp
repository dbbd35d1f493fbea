#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "tisr/error.hpp"

namespace {

std::string keys_help() {
  std::string text = "\nConfiguration keys (key = value, overridable with --set):\n";
  for (const auto& key : tisr::config_keys()) {
    std::string line = "  " + std::string(key.name);
    line.resize(22, ' ');
    text += line + key.help + " [" + key.default_value + "]\n";
  }
  return text;
}

const char* command_help(const std::string& name) {
  if (name == "simulate") return "Simulate twin LR pairs and write a manifest";
  if (name == "solve") return "Reconstruct an HR image from a twin pair";
  if (name == "baseline") return "Run the bicubic or IBP baseline";
  if (name == "evaluate") return "Score reconstructions listed in a manifest";
  if (name == "register") return "Estimate the subpixel shift between y1 and y2";
  return "Sweep the nonideal shift and tabulate PSNR/SSIM";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Twin-image super-resolution toolkit"};
  app.footer(keys_help());
  app.require_subcommand(1);

  struct Options {
    std::string config_file;
    std::vector<std::string> overrides;
    bool oracle_check = false;
  };
  Options opts;
  for (const auto& name : tisr::cli::command_names()) {
    CLI::App* sub = app.add_subcommand(name, command_help(name));
    sub->add_option("-c,--config", opts.config_file, "key = value configuration file")
        ->check(CLI::ExistingFile);
    sub->add_option("-s,--set", opts.overrides, "override one key (KEY=VALUE), repeatable");
    if (name == "solve") {
      sub->add_flag("--oracle-check", opts.oracle_check,
                    "compare against the dense minimizer (small images only)");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int status = app.exit(e);
    return status == 0 ? tisr::cli::kOk : tisr::cli::kUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    tisr::RunConfig config;
    if (!opts.config_file.empty()) config.load_file(opts.config_file);
    for (const auto& assignment : opts.overrides) config.apply_override(assignment);
    if (opts.oracle_check) config.set("oracle_check", "true");
    return tisr::cli::run_command(command, config, std::cerr);
  } catch (const tisr::Error& e) {
    std::cerr << "tisr " << command << ": " << tisr::to_string(e.code()) << ": " << e.what()
              << '\n';
    return e.code() == tisr::ErrorCode::Config ? tisr::cli::kUsage : tisr::cli::kFailure;
  } catch (const std::exception& e) {
    std::cerr << "tisr " << command << ": " << e.what() << '\n';
    return tisr::cli::kFailure;
  }
}
