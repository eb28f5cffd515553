#include <CLI11.hpp>
#include <cstdio>
#include <exception>

#include "bloch/errors.hpp"
#include "cli_commands.hpp"
#include "cli_config.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_flag;
  bool force_bem = false;
  unsigned threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_config) {
  auto* config = cmd->add_option("--config", args.config_path, "job config (JSON)");
  if (needs_config) config->required();
  cmd->add_option("--out", args.out_flag, "output root (default $BLOCH_OUT or ./out)");
  cmd->add_option("--threads", args.threads, "worker threads for matrix assembly (0 = all)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Asymptotic Bloch-wave dispersion and cluster fields for periodic media "
               "with small inclusions"};
  app.require_subcommand(1);

  CommonArgs args;
  auto* exceptional = app.add_subcommand("exceptional", "classify a Bloch vector");
  add_common(exceptional, args, true);
  auto* polarizability =
      app.add_subcommand("polarizability", "inclusion polarizability tensor (analytic or BEM)");
  add_common(polarizability, args, true);
  polarizability->add_flag("--force-bem", args.force_bem,
                           "run the BEM solver even for sphere geometry");
  auto* dispersion = app.add_subcommand("dispersion", "dispersion branches at fixed k or a scan");
  add_common(dispersion, args, true);
  dispersion->add_flag("--force-bem", args.force_bem,
                       "run the BEM solver even for sphere geometry");
  auto* cluster = app.add_subcommand("cluster", "synthesize cluster fields on a grid");
  add_common(cluster, args, true);
  cluster->add_flag("--force-bem", args.force_bem,
                    "run the BEM solver even for sphere geometry");
  auto* validate = app.add_subcommand("validate", "run the validation suite");
  add_common(validate, args, false);

  CLI11_PARSE(app, argc, argv);

  try {
    bloch::cli::Options options;
    options.config_path = args.config_path;
    options.out_root = bloch::cli::resolve_out_root(args.out_flag);
    options.force_bem = args.force_bem;
    options.threads = args.threads;

    if (validate->parsed()) return bloch::cli::cmd_validate(options);

    const bloch::cli::JobConfig config = bloch::cli::JobConfig::load(options.config_path);
    if (exceptional->parsed()) return bloch::cli::cmd_exceptional(config, options);
    if (polarizability->parsed()) return bloch::cli::cmd_polarizability(config, options);
    if (dispersion->parsed()) return bloch::cli::cmd_dispersion(config, options);
    if (cluster->parsed()) return bloch::cli::cmd_cluster(config, options);
  } catch (const bloch::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
