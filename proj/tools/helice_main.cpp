// helice: configuration-interaction solver for two-electron atoms with
// reduced-density entanglement reporting.
//
// Subcommands: solve | convergence | spectrum | table | fit.
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "helice/errors.hpp"
#include "helice/run.hpp"

namespace {

struct Flags {
  std::string config_path;
  std::string sector;
  std::string nmax;
  int lmax = -1;
  std::string state;
  bool optimize = false;
  int budget = -1;
  bool serial = false;
  std::string format;
  std::string out;
  std::string in;
};

void add_common_flags(CLI::App* cmd, Flags& flags) {
  cmd->add_option("--config", flags.config_path, "Config file (flat key = value lines)");
  cmd->add_option("--sector", flags.sector, "singlet|triplet|both")
      ->check(CLI::IsMember({"singlet", "triplet", "both"}));
  cmd->add_option("--nmax", flags.nmax, "Radial functions per l (scalar or comma list)");
  cmd->add_option("--lmax", flags.lmax, "Largest angular momentum");
  cmd->add_option("--state", flags.state, "State label, e.g. \"1s2s 3S\"");
  cmd->add_flag("--optimize", flags.optimize, "Optimize the exponent schedule variationally");
  cmd->add_option("--budget", flags.budget, "Objective evaluation budget for --optimize");
  cmd->add_flag("--serial", flags.serial, "Single-threaded deterministic mode");
  cmd->add_option("--format", flags.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", flags.out, "Output path ('-' = stdout)");
  cmd->add_option("--in", flags.in, "Input table document (fit only)");
}

helice::RunConfig resolve_config(const Flags& flags) {
  helice::RunConfig config;
  if (!flags.config_path.empty()) config = helice::load_config_file(flags.config_path);

  if (!flags.sector.empty()) {
    if (flags.sector == "singlet") config.sector = helice::RunConfig::Sector::singlet;
    if (flags.sector == "triplet") config.sector = helice::RunConfig::Sector::triplet;
    if (flags.sector == "both") config.sector = helice::RunConfig::Sector::both;
  }
  if (!flags.nmax.empty()) {
    config.n_max.clear();
    for (const auto& piece : CLI::detail::split(flags.nmax, ','))
      config.n_max.push_back(std::stoi(piece));
  }
  if (flags.lmax >= 0) config.l_max = flags.lmax;
  if (!flags.state.empty()) config.state = flags.state;
  if (flags.optimize) config.optimize = true;
  if (flags.budget > 0) config.budget = flags.budget;
  if (flags.serial) config.serial = true;
  if (flags.format == "csv") config.format = helice::RunConfig::Format::csv;
  if (flags.format == "json") config.format = helice::RunConfig::Format::json;
  if (!flags.out.empty()) config.out = flags.out;
  if (!flags.in.empty()) config.fit_input = flags.in;

  helice::validate_config(config);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-electron configuration-interaction solver with entanglement reporting"};
  app.require_subcommand(1);

  Flags flags;
  auto* solve = app.add_subcommand("solve", "Solve a sector and list eigenstates");
  auto* convergence =
      app.add_subcommand("convergence", "Ground-state entropy over an (nmax, lmax) grid");
  auto* spectrum = app.add_subcommand("spectrum", "Reduced-density eigenvalue dump for one state");
  auto* table = app.add_subcommand("table", "Entropy table for the |1s,ns> states");
  auto* fit = app.add_subcommand("fit", "Power-law fit of entanglement vs n");
  for (auto* cmd : {solve, convergence, spectrum, table, fit}) add_common_flags(cmd, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    const helice::RunConfig config = resolve_config(flags);
    std::string document;
    if (solve->parsed()) document = helice::cmd_solve(config);
    if (convergence->parsed()) document = helice::cmd_convergence(config);
    if (spectrum->parsed()) document = helice::cmd_spectrum(config);
    if (table->parsed()) document = helice::cmd_table(config);
    if (fit->parsed()) document = helice::cmd_fit(config);
    helice::write_document(config, document);
  } catch (const helice::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const helice::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
