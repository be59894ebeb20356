#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"

namespace {

using meanret::cli::CliOptions;
using meanret::cli::ExperimentConfig;

struct ParsedArgs {
  std::string config_path;
  CliOptions opt;
};

void add_common_flags(CLI::App* cmd, ParsedArgs& args, bool needs_config) {
  if (needs_config) {
    cmd->add_option("--config", args.config_path, "experiment config (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
  }
  cmd->add_option("--out", args.opt.out_dir, "output directory")
      ->capture_default_str();
  cmd->add_option("--format", args.opt.format, "report format")
      ->check(CLI::IsMember({"json", "csv", "both"}))
      ->capture_default_str();
  cmd->add_option_function<std::uint64_t>(
      "--seed", [&args](std::uint64_t s) { args.opt.seed = s; },
      "override the config's seeds");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Invariant means on finite semigroups and Folner windows, averaged-map "
      "retractions onto common fixed-point sets, and quantitative checks of "
      "their contraction, Holder and threshold bounds"};
  app.require_subcommand(1);

  ParsedArgs mean_args, retract_args, verify_args, holder_args, thr_args;
  CLI::App* c_mean =
      app.add_subcommand("mean", "solve or evaluate an invariant mean");
  add_common_flags(c_mean, mean_args, true);
  CLI::App* c_retract =
      app.add_subcommand("retract", "iterate the averaged map from x0");
  add_common_flags(c_retract, retract_args, true);
  CLI::App* c_verify =
      app.add_subcommand("verify", "run the full invariant suite");
  add_common_flags(c_verify, verify_args, true);
  CLI::App* c_holder =
      app.add_subcommand("holder", "verify only the Holder envelope");
  add_common_flags(c_holder, holder_args, true);
  CLI::App* c_threshold =
      app.add_subcommand("threshold", "print fixed-point Lipschitz thresholds "
                         "and the convexity modulus table");
  add_common_flags(c_threshold, thr_args, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // bad flags are input errors
  }

  try {
    if (c_mean->parsed())
      return meanret::cli::cmd_mean(meanret::cli::load_config(mean_args.config_path),
                      mean_args.opt);
    if (c_retract->parsed())
      return meanret::cli::cmd_retract(meanret::cli::load_config(retract_args.config_path),
                         retract_args.opt);
    if (c_verify->parsed())
      return meanret::cli::cmd_verify(meanret::cli::load_config(verify_args.config_path),
                        verify_args.opt, false);
    if (c_holder->parsed())
      return meanret::cli::cmd_verify(meanret::cli::load_config(holder_args.config_path),
                        holder_args.opt, true);
    if (c_threshold->parsed()) return meanret::cli::cmd_threshold(thr_args.opt);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
