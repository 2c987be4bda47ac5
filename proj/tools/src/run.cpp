#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "finiteband/error.hpp"
#include "finiteband/io.hpp"
#include "finiteband_cli/cli.hpp"

namespace finiteband::cli {

int run(int argc, char** argv) {
  CLI::App app{"Reflectionless finite-band matrix Schroedinger potentials"};
  app.require_subcommand(1);

  std::string config_path, out_dir, profile_path;
  std::vector<std::string> tols;
  std::optional<std::uint64_t> seed;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_dir, "output directory")->required();
    sub->add_option("--tol", tols, "tolerance override key=value")->take_all();
    sub->add_option("--seed", seed, "seed override");
  };
  auto* construct = app.add_subcommand("construct", "write potential.csv, pencils.json, metadata.json");
  auto* verify = app.add_subcommand("verify", "check the identity ledger and write report.json");
  auto* sample = app.add_subcommand("sample", "write green.csv, density.csv, xi.csv, discriminant.csv");
  common(construct);
  common(verify);
  common(sample);
  verify->add_option("--profile", profile_path, "potential.csv to verify instead of the configured potential");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return ConfigFailure;
  }

  try {
    const RunConfig cfg = parse_config(read_text_file(config_path), tols, seed);
    if (construct->parsed()) {
      cmd_construct(cfg, out_dir);
      return Pass;
    }
    if (sample->parsed()) {
      cmd_sample(cfg, out_dir);
      return Pass;
    }
    std::optional<std::filesystem::path> profile;
    if (!profile_path.empty()) profile = profile_path;
    const Report rep = cmd_verify(cfg, out_dir, profile);
    for (const auto& e : rep.entries)
      std::printf("%s %-24s %.3e (tol %.0e)\n", e.pass ? "pass" : "FAIL", e.name.c_str(), e.max_residual, e.tol);
    return rep.pass() ? Pass : IdentityFailure;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.code()) {
      case ErrorCode::ConfigError:
      case ErrorCode::ParseError:
        return ConfigFailure;
      default:
        return NumericalFailure;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return NumericalFailure;
  }
}

}  // namespace finiteband::cli
