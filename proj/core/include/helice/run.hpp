#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "helice/ci.hpp"
#include "helice/entanglement.hpp"
#include "helice/fit.hpp"
#include "helice/optimize.hpp"
#include "helice/sto.hpp"

namespace helice {

/// Fully validated run configuration.  Parsed from flat key = value text;
/// any unknown key or out-of-range value aborts before computation.
struct RunConfig {
  double z = 2.0;
  int l_max = 2;
  std::vector<int> n_max;  // per l (single entry broadcasts); empty = default

  enum class Sector { singlet, triplet, both };
  Sector sector = Sector::singlet;

  enum class ExponentMode { even_tempered, explicit_list };
  ExponentMode exponent_mode = ExponentMode::even_tempered;
  std::vector<double> alpha = {2.0};  // per l, broadcast
  std::vector<double> beta = {0.6};
  std::vector<std::vector<double>> xi;  // explicit exponents per l

  bool optimize = false;
  int budget = 2000;
  int opt_target = 1;  // eigenvalue ordinal minimized by the optimizer

  double drop_threshold = 1e-10;

  std::vector<std::string> states;  // label filter for solve
  std::string state;                // spectrum target label
  int n_from = 0, n_to = 0;         // table row range; 0 = sector default

  std::vector<int> grid_nmax = {5, 6, 10, 11};
  std::vector<int> grid_lmax = {0, 1, 2, 3};

  enum class Format { csv, json };
  Format format = Format::csv;
  std::string out = "-";
  bool serial = false;
  bool interaction = true;  // debug switch for the 1/r12 term
  std::string fit_input;    // table document consumed by the fit command
  std::string trace_out;    // optimizer trace CSV path ("<sector>." prefix on the extension)
};

/// Parses and validates config text; diagnostics carry the line number.
RunConfig parse_config_text(const std::string& text);
RunConfig load_config_file(const std::string& path);
void validate_config(const RunConfig& config);

/// Everything produced by solving one sector.
struct SectorSolution {
  SpatialSector sector = SpatialSector::symmetric;
  std::vector<OrthonormalRadialBasis> bases;
  std::vector<Configuration> configs;
  std::vector<CiState> states;
  std::vector<std::vector<double>> resolved_xi;  // exponents actually used, per l
  std::vector<int> retained;                     // per l
  int optimizer_evaluations = 0;
};

/// Builds the radial bases (optimizing exponents when requested), assembles
/// the Hamiltonian, diagonalizes and labels the states.
SectorSolution solve_sector(const RunConfig& config, SpatialSector sector);

/// Table row shared by the table and fit commands.
struct TableRow {
  std::string label;
  int n = 0;  // principal number of the outer electron
  double energy = 0.0;
  double s_vn = 0.0;
  double s_lin = 0.0;
  double s0 = 0.0;
  double entanglement = 0.0;
  double dehesa = 0.0;
  double ipr = 0.0;
  double fermionic = 0.0;      // S - 1, informational, triplet rows only
  bool has_fermionic = false;  // JSON output carries it when set
};

/// Rows |1s,ns> for n in the configured range of one sector.  When
/// solution_out is given it receives the underlying sector solution.
std::vector<TableRow> build_table_rows(const RunConfig& config, SpatialSector sector,
                                       SectorSolution* solution_out = nullptr);

/// Parses a table document previously produced by cmd_table (CSV or JSON).
std::vector<TableRow> read_table_document(const std::string& text);

/// The five CLI commands; each returns the complete output document.
std::string cmd_solve(const RunConfig& config);
std::string cmd_convergence(const RunConfig& config);
std::string cmd_spectrum(const RunConfig& config);
std::string cmd_table(const RunConfig& config);
std::string cmd_fit(const RunConfig& config);

/// Writes a document to config.out ("-" = stdout).
void write_document(const RunConfig& config, const std::string& document);

}  // namespace helice
