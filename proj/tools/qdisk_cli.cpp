#include <CLI11.hpp>

#include <iostream>

#include "qdisk/config.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string preset;
  qdisk::Overrides ov;
  std::string modes;
};

void add_common(CLI::App* sub, CommonArgs& args) {
  sub->add_option("--config", args.config_path, "JSON configuration file");
  sub->add_option("--preset", args.preset, "named preset: base, kernel1, kernel2");
  sub->add_option_function<long>("--K", [&args](const long& v) { args.ov.K = v; },
                                 "truncation size");
  sub->add_option("--modes", args.modes, "mode window MIN..MAX");
  sub->add_option_function<double>("--tol", [&args](const double& v) { args.ov.tol = v; },
                                   "identity tolerance");
  sub->add_option_function<std::uint64_t>(
      "--seed", [&args](const std::uint64_t& v) { args.ov.seed = v; }, "fixture seed");
  sub->add_option_function<std::string>(
      "--out", [&args](const std::string& v) { args.ov.out_dir = v; }, "output directory");
}

qdisk::RunConfig resolve(CommonArgs& args) {
  qdisk::RunConfig cfg;
  if (!args.config_path.empty())
    cfg = qdisk::load_config(args.config_path);
  else if (!args.preset.empty())
    cfg = qdisk::preset_config(args.preset);
  else
    cfg = qdisk::preset_config("base");

  if (!args.modes.empty()) {
    auto pos = args.modes.find("..");
    if (pos == std::string::npos)
      throw qdisk::config_error("--modes expects MIN..MAX");
    try {
      args.ov.n_min = std::stol(args.modes.substr(0, pos));
      args.ov.n_max = std::stol(args.modes.substr(pos + 2));
    } catch (const std::exception&) {
      throw qdisk::config_error("--modes expects MIN..MAX integers");
    }
  }
  qdisk::apply_overrides(cfg, args.ov);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"covariant Dirac-type operators and parametrices on the quantum disk"};
  app.require_subcommand(1);

  CommonArgs args;
  int (*run)(const qdisk::RunConfig&, std::ostream&) = nullptr;

  auto* check = app.add_subcommand("check", "verify the hypothesis conditions");
  auto* kernel = app.add_subcommand("kernel", "per-mode kernel membership and dimension");
  auto* verify = app.add_subcommand("verify", "full spectral-triple verification battery");
  auto* spectrum = app.add_subcommand("spectrum", "HS-norm and singular-value series (CSV)");
  for (auto* sub : {check, kernel, verify, spectrum}) add_common(sub, args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (check->parsed()) run = qdisk::cmd_check;
  if (kernel->parsed()) run = qdisk::cmd_kernel;
  if (verify->parsed()) run = qdisk::cmd_verify;
  if (spectrum->parsed()) run = qdisk::cmd_spectrum;

  try {
    qdisk::RunConfig cfg = resolve(args);
    return run(cfg, std::cout);
  } catch (const qdisk::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
