#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "fock/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "focklab: numerical laboratory for big Hankel operators on "
      "radial-weight Fock spaces"};
  app.fallthrough(true);

  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  int jobs = 1;
  bool strict = false;
  app.add_option("--config", config_path, "experiment configuration (JSON)")
      ->required();
  app.add_option("--out", out_dir, "output directory for report.json and CSVs");
  app.add_option("--seed", seed, "override the config seed");
  app.add_option("--jobs", jobs, "scenario-level parallelism bound");
  app.add_flag("--strict", strict, "fail on informational band violations too");

  static const std::map<std::string, std::string> descriptions = {
      {"moments", "radial moment table with convexity/error checks"},
      {"kernel-check", "kernel growth, Bergman matrix, polyball diagnostics"},
      {"bloch", "Bloch norms, direction-ratio bands, little-Bloch tails"},
      {"bmo", "BMO norms, mean-oscillation route agreement, decay"},
      {"hankel", "truncated Hankel spectra and monotonicity"},
      {"schatten", "Schatten norms, Besov/BMO integrals, growth flags"},
      {"compactness", "decay dichotomy diagnostics"},
      {"equivalence", "Bloch / Hankel / BMO norm ratio bands"},
      {"fejer", "Fejer approximation sweep"},
      {"identities", "trace and Hilbert-Schmidt multiplier identities"}};
  for (const std::string& name : fock::cli::subcommand_names())
    app.add_subcommand(name, descriptions.at(name));
  app.require_subcommand(1);

  CLI11_PARSE(app, argc, argv);

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    const fock::cli::ExperimentConfig config =
        fock::cli::parse_config_file(config_path);
    fock::cli::RunOptions opt;
    opt.out_dir = out_dir;
    opt.seed = seed;
    opt.jobs = jobs;
    opt.strict = strict;
    const fock::cli::Report rep = fock::cli::run_subcommand(cmd, config, opt);
    for (const auto& sc : rep.scenarios) {
      for (const auto& chk : sc.checks) {
        const bool counts = chk.asserted || strict;
        std::printf("[%s] %s/%s value=%.6g tol=%.6g%s\n",
                    chk.pass ? "PASS" : (counts ? "FAIL" : "warn"),
                    sc.id.c_str(), chk.name.c_str(), chk.value, chk.tolerance,
                    chk.asserted ? "" : " (informational)");
      }
    }
    std::printf("%s: %s (%.2fs, seed %llu, report in %s)\n", cmd.c_str(),
                rep.pass() ? "PASS" : "FAIL", rep.runtime_s,
                static_cast<unsigned long long>(rep.seed), out_dir.c_str());
    return rep.pass() ? 0 : 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 3;
  }
}
