#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "scarlab/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"scarlab: scarred collision states in periodic three-body systems"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SCARLAB_VERSION);

  std::string config_path;
  std::vector<std::string> overrides;
  scarlab::cli::Options opts;
  std::string out_dir = opts.out_dir.string();

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"solve1d", "diagonalize the 1D model in one momentum sector"},
      {"solve3d", "diagonalize one 3D momentum sector per exchange parity"},
      {"analyze", "position-space grids, overlaps, projections and C(t) for selected states"},
      {"orbit", "integrate classical centre-of-mass orbits"},
      {"estimate", "critical points, saddle frequencies and harmonic scar levels"},
      {"report", "compare predicted scar gaps with a computed 1D spectrum"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("-c,--config", config_path, "config file with per-command sections");
    sub->add_option("-o,--out", out_dir, "output directory")->capture_default_str();
    sub->add_option("-s,--set", overrides, "override, e.g. model.gamma=1e-4")->take_all();
    sub->add_flag("--allow-large", opts.allow_large, "lift the 3D memory budget");
  }

  CLI11_PARSE(app, argc, argv);
  opts.out_dir = out_dir;

  const std::string command = app.get_subcommands().front()->get_name();
  scarlab::ConfigFile config;
  try {
    if (!config_path.empty()) config = scarlab::ConfigFile::load(config_path);
    scarlab::cli::apply_overrides(config, overrides);
  } catch (const scarlab::ConfigError& e) {
    std::cerr << "config error: " << e.what();
    if (!e.key().empty()) std::cerr << " [key: " << e.key() << "]";
    std::cerr << '\n';
    return scarlab::cli::kConfigError;
  }
  return scarlab::cli::run(command, config, opts, std::cout, std::cerr);
}
