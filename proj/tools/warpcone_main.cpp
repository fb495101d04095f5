#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "warpcone/config.hpp"
#include "warpcone/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for warped cones over group actions"};
  app.footer("exit codes: 0 pass, 1 assertion failure, 2 usage or config error");

  std::string experiment;
  std::string config_path;
  std::string out_dir = ".";
  long long seed = 0;
  long long cap = 0;

  std::string kinds_help;
  for (const auto& k : warpcone::experiment_kinds()) {
    if (!kinds_help.empty()) kinds_help += ", ";
    kinds_help += k;
  }
  app.add_option("experiment", experiment, "one of: " + kinds_help)->required();
  app.add_option("--config", config_path, "scenario config file")->required();
  app.add_option("--out", out_dir, "output directory (default .)");
  auto* seed_opt = app.add_option("--seed", seed, "override [params] seed");
  auto* cap_opt = app.add_option("--cap", cap, "override [params] cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  warpcone::Config cfg;
  try {
    cfg = warpcone::parse_config_file(config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    std::cerr << "error: cannot create output directory " << out_dir << ": " << ec.message()
              << "\n";
    return 2;
  }

  warpcone::RunOptions opt;
  opt.out_dir = out_dir;
  if (seed_opt->count() > 0) opt.seed = seed;
  if (cap_opt->count() > 0) opt.cap = cap;

  warpcone::RunOutcome out = warpcone::run_scenario(cfg, experiment, opt);
  for (const auto& f : out.failures) std::cerr << "error: " << f << "\n";
  for (const auto& f : out.outputs) std::cout << "wrote " << f << "\n";
  return out.exit_code;
}
