#include <iostream>

#include "CLI11.hpp"
#include "superint/runner.hpp"

namespace {

using superint::runner::ConfigError;
using superint::runner::RunConfig;

struct CliOptions {
  std::string config_path;
  std::string preset;
  std::string out_dir = ".";
  std::optional<uint64_t> seed;
  std::optional<int> samples;
  std::string command;  // set by the chosen subcommand, may stay empty
};

RunConfig resolve_config(const CliOptions& o) {
  RunConfig cfg;
  if (!o.config_path.empty()) {
    cfg = superint::runner::load_config_file(o.config_path);
  } else if (!o.preset.empty()) {
    cfg = superint::runner::parse_config(superint::runner::preset(o.preset));
  } else if (o.command == "charts" || o.command == "audit") {
    nlohmann::json j;
    j["command"] = o.command;
    cfg = superint::runner::parse_config(j);
  } else {
    throw ConfigError("need --config or --preset for this command");
  }
  if (!o.command.empty()) cfg.command = o.command;
  if (o.seed) cfg.seed = *o.seed;
  if (o.samples) cfg.samples = *o.samples;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"superintegrable-system verification suites and simulations"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  CliOptions opt;
  app.add_option("--config", opt.config_path, "path to a JSON run configuration");
  app.add_option("--preset", opt.preset, "built-in configuration name");
  app.add_option("--seed", opt.seed, "seed override");
  app.add_option("--samples", opt.samples, "sample count override");
  app.add_option("--out", opt.out_dir, "output directory for reports and trajectories");

  for (const char* name : {"verify", "simulate", "audit", "charts"}) {
    auto* sub = app.add_subcommand(name, "");
    sub->callback([&opt, name]() { opt.command = name; });
  }
  auto* list = app.add_subcommand("presets", "list built-in presets");

  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) {
    for (const auto& n : superint::runner::preset_names()) std::cout << n << "\n";
    return 0;
  }

  try {
    const RunConfig cfg = resolve_config(opt);
    const auto outcome = superint::runner::run(cfg, opt.out_dir, &std::cout);
    return outcome.exit_code;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
