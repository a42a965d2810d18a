#include "helice/run.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "helice/errors.hpp"

namespace helice {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

double parse_double(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
  }
}

int parse_int(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const int i = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
  }
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "on" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "off" || v == "0" || v == "no") return false;
  throw ConfigError("key '" + key + "': expected a boolean, got '" + v + "'");
}

std::vector<double> parse_double_list(const std::string& v, const std::string& key) {
  std::vector<double> out;
  for (const auto& item : split(v, ',')) out.push_back(parse_double(item, key));
  if (out.empty()) throw ConfigError("key '" + key + "': empty list");
  return out;
}

std::vector<int> parse_int_list(const std::string& v, const std::string& key) {
  std::vector<int> out;
  for (const auto& item : split(v, ',')) out.push_back(parse_int(item, key));
  if (out.empty()) throw ConfigError("key '" + key + "': empty list");
  return out;
}

template <typename T>
std::vector<T> broadcast(std::vector<T> values, int count, const std::string& what) {
  if (static_cast<int>(values.size()) == 1) return std::vector<T>(count, values.front());
  if (static_cast<int>(values.size()) >= count) {
    values.resize(count);
    return values;
  }
  throw ConfigError(what + ": expected 1 or >= " + std::to_string(count) + " entries");
}

std::string fmt_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string fmt_sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10e", v);
  return buf;
}

std::string sector_key(RunConfig::Sector s) {
  switch (s) {
    case RunConfig::Sector::singlet: return "singlet";
    case RunConfig::Sector::triplet: return "triplet";
    default: return "both";
  }
}

std::vector<SpatialSector> requested_sectors(const RunConfig& config) {
  switch (config.sector) {
    case RunConfig::Sector::singlet: return {SpatialSector::symmetric};
    case RunConfig::Sector::triplet: return {SpatialSector::antisymmetric};
    default: return {SpatialSector::symmetric, SpatialSector::antisymmetric};
  }
}

SpatialSector sector_from_label(const std::string& label) {
  const std::string norm = normalize_label(label);
  if (norm.size() >= 2) {
    const std::string tail = norm.substr(norm.size() - 2);
    if (tail == "1s") return SpatialSector::symmetric;
    if (tail == "3s") return SpatialSector::antisymmetric;
  }
  throw ConfigError("cannot infer the sector from state label '" + label + "'");
}

std::vector<int> resolve_n_per_l(const RunConfig& config) {
  if (config.exponent_mode == RunConfig::ExponentMode::explicit_list) {
    if (static_cast<int>(config.xi.size()) < config.l_max + 1)
      throw ConfigError("explicit exponent mode: need xi0..xi" + std::to_string(config.l_max));
    std::vector<int> n;
    for (int l = 0; l <= config.l_max; ++l) {
      if (config.xi[l].empty())
        throw ConfigError("explicit exponent mode: xi" + std::to_string(l) + " is empty");
      if (config.xi[l].size() > 30)
        throw ConfigError("explicit exponent mode: at most 30 functions per l");
      n.push_back(static_cast<int>(config.xi[l].size()));
    }
    if (!config.n_max.empty()) {
      const auto given = broadcast(config.n_max, config.l_max + 1, "nmax");
      if (given != n) throw ConfigError("nmax conflicts with explicit exponent list lengths");
    }
    return n;
  }
  std::vector<int> base = config.n_max.empty() ? std::vector<int>{10} : config.n_max;
  return broadcast(base, config.l_max + 1, "nmax");
}

std::vector<std::vector<double>> even_tempered_exponents(const RunConfig& config,
                                                         const std::vector<int>& n_per_l,
                                                         const std::vector<double>& alpha,
                                                         const std::vector<double>& beta) {
  std::vector<std::vector<double>> xi(config.l_max + 1);
  for (int l = 0; l <= config.l_max; ++l) {
    xi[l].resize(n_per_l[l]);
    double value = alpha[l];
    for (int i = 0; i < n_per_l[l]; ++i) {
      xi[l][i] = value;
      value *= beta[l];
    }
  }
  return xi;
}

std::vector<std::vector<double>> resolve_exponents(const RunConfig& config,
                                                   const std::vector<int>& n_per_l) {
  if (config.exponent_mode == RunConfig::ExponentMode::explicit_list) return config.xi;
  const auto alpha = broadcast(config.alpha, config.l_max + 1, "alpha");
  const auto beta = broadcast(config.beta, config.l_max + 1, "beta");
  return even_tempered_exponents(config, n_per_l, alpha, beta);
}

std::vector<OrthonormalRadialBasis> build_bases(const RunConfig& config,
                                                const std::vector<std::vector<double>>& xi) {
  std::vector<OrthonormalRadialBasis> bases;
  bases.reserve(config.l_max + 1);
  for (int l = 0; l <= config.l_max; ++l) {
    auto raw = explicit_set(l, xi[l]);
    auto basis = orthonormalize(raw, config.drop_threshold);
    bases.push_back(order_for_spectroscopy(basis, config.z));
  }
  return bases;
}

struct SolveOutput {
  std::vector<OrthonormalRadialBasis> bases;
  std::vector<Configuration> configs;
  EigenSolution solution;
};

SolveOutput run_ci(const RunConfig& config, SpatialSector sector,
                   const std::vector<std::vector<double>>& xi) {
  SolveOutput out;
  out.bases = build_bases(config, xi);
  std::vector<int> retained;
  retained.reserve(out.bases.size());
  for (const auto& b : out.bases) retained.push_back(b.retained);
  out.configs = enumerate_configurations(retained, config.l_max, sector);
  AssemblyOptions options;
  options.Z = config.z;
  options.include_interaction = config.interaction;
  options.serial = config.serial;
  const Eigen::MatrixXd H = assemble_hamiltonian(out.configs, out.bases, options);
  out.solution = diagonalize(H);
  return out;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig config;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": empty value for '" + key + "'");

    try {
      if (key == "z") {
        config.z = parse_double(value, key);
      } else if (key == "lmax") {
        config.l_max = parse_int(value, key);
      } else if (key == "nmax") {
        config.n_max = parse_int_list(value, key);
      } else if (key == "sector") {
        if (value == "singlet")
          config.sector = RunConfig::Sector::singlet;
        else if (value == "triplet")
          config.sector = RunConfig::Sector::triplet;
        else if (value == "both")
          config.sector = RunConfig::Sector::both;
        else
          throw ConfigError("key 'sector': expected singlet|triplet|both");
      } else if (key == "exponent_mode") {
        if (value == "even-tempered")
          config.exponent_mode = RunConfig::ExponentMode::even_tempered;
        else if (value == "explicit")
          config.exponent_mode = RunConfig::ExponentMode::explicit_list;
        else
          throw ConfigError("key 'exponent_mode': expected even-tempered|explicit");
      } else if (key == "alpha") {
        config.alpha = parse_double_list(value, key);
      } else if (key == "beta") {
        config.beta = parse_double_list(value, key);
      } else if (key.size() == 3 && key.compare(0, 2, "xi") == 0 && std::isdigit(key[2])) {
        const int l = key[2] - '0';
        if (static_cast<int>(config.xi.size()) < l + 1) config.xi.resize(l + 1);
        config.xi[l] = parse_double_list(value, key);
      } else if (key == "optimize") {
        config.optimize = parse_bool(value, key);
      } else if (key == "budget") {
        config.budget = parse_int(value, key);
      } else if (key == "opt_target") {
        config.opt_target = parse_int(value, key);
      } else if (key == "drop_threshold") {
        config.drop_threshold = parse_double(value, key);
      } else if (key == "states") {
        config.states = split(value, ',');
      } else if (key == "state") {
        config.state = value;
      } else if (key == "n_range") {
        const auto dots = value.find("..");
        if (dots == std::string::npos)
          throw ConfigError("key 'n_range': expected the form FROM..TO");
        config.n_from = parse_int(trim(value.substr(0, dots)), key);
        config.n_to = parse_int(trim(value.substr(dots + 2)), key);
      } else if (key == "grid_nmax") {
        config.grid_nmax = parse_int_list(value, key);
      } else if (key == "grid_lmax") {
        config.grid_lmax = parse_int_list(value, key);
      } else if (key == "format") {
        if (value == "csv")
          config.format = RunConfig::Format::csv;
        else if (value == "json")
          config.format = RunConfig::Format::json;
        else
          throw ConfigError("key 'format': expected csv|json");
      } else if (key == "out") {
        config.out = value;
      } else if (key == "serial") {
        config.serial = parse_bool(value, key);
      } else if (key == "interaction") {
        config.interaction = parse_bool(value, key);
      } else if (key == "in") {
        config.fit_input = value;
      } else if (key == "trace_out") {
        config.trace_out = value;
      } else {
        throw ConfigError("unknown key '" + key + "'");
      }
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  validate_config(config);
  return config;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

void validate_config(const RunConfig& config) {
  if (!(config.z > 0.0) || config.z > 200.0)
    throw ConfigError("z must be in (0, 200]");
  if (config.l_max < 0 || config.l_max > 8) throw ConfigError("lmax must be in [0, 8]");
  for (int n : config.n_max)
    if (n < 1 || n > 30) throw ConfigError("nmax entries must be in [1, 30]");
  for (double a : config.alpha)
    if (!(a > 0.0) || a > 100.0) throw ConfigError("alpha entries must be in (0, 100]");
  for (double b : config.beta)
    if (!(b > 0.0) || b > 3.0) throw ConfigError("beta entries must be in (0, 3]");
  for (std::size_t l = 0; l < config.xi.size(); ++l) {
    if (static_cast<int>(l) > config.l_max && !config.xi[l].empty())
      throw ConfigError("xi" + std::to_string(l) + " given but lmax = " +
                        std::to_string(config.l_max));
    for (double x : config.xi[l])
      if (!(x > 0.0) || x > 100.0) throw ConfigError("xi entries must be in (0, 100]");
  }
  if (config.exponent_mode == RunConfig::ExponentMode::explicit_list &&
      static_cast<int>(config.xi.size()) < config.l_max + 1)
    throw ConfigError("explicit exponent mode requires xi0..xi" + std::to_string(config.l_max));
  if (config.budget < 1 || config.budget > 10000000)
    throw ConfigError("budget must be in [1, 1e7]");
  if (config.opt_target < 1 || config.opt_target > 1000)
    throw ConfigError("opt_target must be in [1, 1000]");
  if (config.drop_threshold < 0.0 || config.drop_threshold > 1e-2)
    throw ConfigError("drop_threshold must be in [0, 1e-2]");
  if (config.n_from != 0 || config.n_to != 0) {
    if (config.n_from < 1 || config.n_to < config.n_from || config.n_to > 30)
      throw ConfigError("n_range must satisfy 1 <= FROM <= TO <= 30");
  }
  if (config.grid_nmax.empty() || config.grid_lmax.empty())
    throw ConfigError("convergence grids must be non-empty");
  for (int n : config.grid_nmax)
    if (n < 1 || n > 30) throw ConfigError("grid_nmax entries must be in [1, 30]");
  for (int l : config.grid_lmax)
    if (l < 0 || l > 8) throw ConfigError("grid_lmax entries must be in [0, 8]");
}

SectorSolution solve_sector(const RunConfig& config, SpatialSector sector) {
  const auto n_per_l = resolve_n_per_l(config);
  auto xi = resolve_exponents(config, n_per_l);

  SectorSolution result;
  result.sector = sector;

  if (config.optimize) {
    const bool tempered = config.exponent_mode == RunConfig::ExponentMode::even_tempered;
    std::vector<double> seed, lower, upper;
    if (tempered) {
      const auto alpha = broadcast(config.alpha, config.l_max + 1, "alpha");
      const auto beta = broadcast(config.beta, config.l_max + 1, "beta");
      for (int l = 0; l <= config.l_max; ++l) {
        seed.push_back(std::clamp(alpha[l], 0.05, 50.0));
        lower.push_back(0.05);
        upper.push_back(50.0);
        seed.push_back(std::clamp(beta[l], 0.05, 2.5));
        lower.push_back(0.05);
        upper.push_back(2.5);
      }
    } else {
      for (int l = 0; l <= config.l_max; ++l)
        for (double x : xi[l]) {
          seed.push_back(std::clamp(x, 0.005, 80.0));
          lower.push_back(0.005);
          upper.push_back(80.0);
        }
    }

    auto params_to_xi = [&, n_per_l](const std::vector<double>& params) {
      if (tempered) {
        std::vector<double> alpha(config.l_max + 1), beta(config.l_max + 1);
        for (int l = 0; l <= config.l_max; ++l) {
          alpha[l] = params[2 * l];
          beta[l] = params[2 * l + 1];
        }
        return even_tempered_exponents(config, n_per_l, alpha, beta);
      }
      std::vector<std::vector<double>> out(config.l_max + 1);
      std::size_t at = 0;
      for (int l = 0; l <= config.l_max; ++l)
        for (int i = 0; i < n_per_l[l]; ++i) out[l].push_back(params[at++]);
      return out;
    };

    OptimizationProblem problem;
    problem.budget = config.budget;
    problem.lower = lower;
    problem.upper = upper;
    problem.objective = [&](const std::vector<double>& params) {
      const auto trial = run_ci(config, sector, params_to_xi(params));
      if (config.opt_target > trial.solution.eigenvalues.size())
        throw NumericalError("optimizer objective: eigenvalue ordinal beyond basis size");
      // Rigorous bound: dropping the (positive) repulsion leaves two
      // hydrogenic electrons, so no eigenvalue can sit below -Z^2.
      if (trial.solution.eigenvalues(0) < -config.z * config.z - 1e-6)
        throw NumericalError("optimizer objective: eigenvalue below the variational bound");
      return trial.solution.eigenvalues(config.opt_target - 1);
    };

    const auto opt = optimize(problem, seed);
    if (!std::isfinite(opt.best_energy))
      throw NumericalError(
          "exponent optimization failed: every evaluation hit a degenerate basis; raise "
          "drop_threshold or change the exponent seed");
    xi = params_to_xi(opt.best_params);
    result.optimizer_evaluations = opt.evaluations;

    if (!config.trace_out.empty()) {
      const std::string path = config.trace_out + "." + sector_name(sector) + ".csv";
      std::ofstream trace(path, std::ios::binary);
      if (!trace) throw ConfigError("cannot open optimizer trace path '" + path + "'");
      write_trace_csv(opt, trace);
    }
  }

  auto ci = run_ci(config, sector, xi);
  result.bases = std::move(ci.bases);
  result.configs = std::move(ci.configs);
  result.states = label_states(ci.solution, result.configs);
  result.resolved_xi = xi;
  for (const auto& b : result.bases) result.retained.push_back(b.retained);
  return result;
}

namespace {

ordered_json meta_json(const RunConfig& config, const std::string& command) {
  ordered_json meta;
  meta["command"] = command;
  meta["z"] = config.z;
  meta["lmax"] = config.l_max;
  try {
    meta["nmax"] = resolve_n_per_l(config);
  } catch (const ConfigError&) {
    meta["nmax"] = config.n_max;
  }
  meta["sector"] = sector_key(config.sector);
  meta["exponent_mode"] = config.exponent_mode == RunConfig::ExponentMode::even_tempered
                              ? "even-tempered"
                              : "explicit";
  meta["alpha"] = config.alpha;
  meta["beta"] = config.beta;
  meta["optimize"] = config.optimize;
  meta["budget"] = config.budget;
  meta["opt_target"] = config.opt_target;
  meta["drop_threshold"] = config.drop_threshold;
  meta["interaction"] = config.interaction;
  meta["serial"] = config.serial;
  meta["format"] = config.format == RunConfig::Format::csv ? "csv" : "json";
  return meta;
}

void add_solution_meta(ordered_json& meta, const SectorSolution& solution) {
  ordered_json block;
  block["retained"] = solution.retained;
  block["xi"] = solution.resolved_xi;
  block["configurations"] = solution.configs.size();
  if (solution.optimizer_evaluations > 0)
    block["optimizer_evaluations"] = solution.optimizer_evaluations;
  meta["basis"][sector_name(solution.sector)] = block;
}

int default_n_from(SpatialSector sector) {
  return sector == SpatialSector::symmetric ? 1 : 2;
}

}  // namespace

std::vector<TableRow> build_table_rows(const RunConfig& config, SpatialSector sector,
                                       SectorSolution* solution_out) {
  auto solution = solve_sector(config, sector);
  const int from = config.n_from > 0 ? config.n_from : default_n_from(sector);
  const int to = config.n_to > 0 ? config.n_to : 7;
  if (sector == SpatialSector::antisymmetric && from < 2)
    throw ConfigError("triplet rows start at n = 2");

  std::vector<TableRow> rows;
  for (int n = from; n <= to; ++n) {
    const int index = (sector == SpatialSector::symmetric) ? n - 1 : n - 2;
    if (index >= static_cast<int>(solution.states.size()))
      throw NumericalError("basis too small: no eigenstate for row n = " + std::to_string(n));
    const CiState& state = solution.states[index];
    const Configuration expected{1, n, 0, sector};
    if (!(state.dominant == expected))
      throw NumericalError("state for row n = " + std::to_string(n) + " is not dominated by " +
                           configuration_label(expected) + "; improve the radial basis");
    const EntropyReport report = make_entropy_report(state, solution.configs, solution.bases);
    TableRow row;
    row.label = state.label;
    row.n = n;
    row.energy = state.energy;
    row.s_vn = report.s_vn;
    row.s_lin = report.s_lin;
    row.s0 = report.s0;
    row.entanglement = report.entanglement;
    row.dehesa = report.dehesa;
    row.ipr = report.ipr;
    row.fermionic = report.fermionic;
    row.has_fermionic = report.has_fermionic;
    rows.push_back(std::move(row));
  }
  if (solution_out) *solution_out = std::move(solution);
  return rows;
}

namespace {

std::string render_table_csv(const std::vector<TableRow>& rows) {
  std::ostringstream out;
  out << "state,n,energy,svn,slin,s0,entanglement,dehesa,ipr\n";
  for (const auto& r : rows) {
    out << r.label << ',' << r.n << ',' << fmt_fixed(r.energy, 6) << ',' << fmt_fixed(r.s_vn, 6)
        << ',' << fmt_fixed(r.s_lin, 6) << ',' << fmt_fixed(r.s0, 0) << ','
        << fmt_fixed(r.entanglement, 6) << ',' << fmt_fixed(r.dehesa, 6) << ','
        << fmt_fixed(r.ipr, 6) << '\n';
  }
  return out.str();
}

ordered_json table_rows_json(const std::vector<TableRow>& rows) {
  ordered_json data = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json row;
    row["state"] = r.label;
    row["n"] = r.n;
    row["energy"] = parse_double(fmt_fixed(r.energy, 6), "energy");
    row["svn"] = parse_double(fmt_fixed(r.s_vn, 6), "svn");
    row["slin"] = parse_double(fmt_fixed(r.s_lin, 6), "slin");
    row["s0"] = r.s0;
    row["entanglement"] = parse_double(fmt_fixed(r.entanglement, 6), "entanglement");
    row["dehesa"] = parse_double(fmt_fixed(r.dehesa, 6), "dehesa");
    row["ipr"] = parse_double(fmt_fixed(r.ipr, 6), "ipr");
    if (r.has_fermionic) row["svn_minus_1"] = parse_double(fmt_fixed(r.fermionic, 6), "svn_minus_1");
    data.push_back(row);
  }
  return data;
}

}  // namespace

std::vector<TableRow> read_table_document(const std::string& text) {
  const std::string body = trim(text);
  if (body.empty()) throw ConfigError("fit input: empty table document");

  std::vector<TableRow> rows;
  if (body.front() == '{') {
    ordered_json doc;
    try {
      doc = ordered_json::parse(body);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("fit input: JSON parse failure: ") + e.what());
    }
    if (!doc.contains("data") || !doc["data"].is_array())
      throw ConfigError("fit input: JSON document has no data array");
    for (const auto& item : doc["data"]) {
      TableRow row;
      row.label = item.at("state").get<std::string>();
      row.n = item.at("n").get<int>();
      row.energy = item.at("energy").get<double>();
      row.s_vn = item.at("svn").get<double>();
      row.s_lin = item.at("slin").get<double>();
      row.s0 = item.at("s0").get<double>();
      row.entanglement = item.at("entanglement").get<double>();
      row.dehesa = item.value("dehesa", 0.0);
      row.ipr = item.value("ipr", 0.0);
      rows.push_back(std::move(row));
    }
    return rows;
  }

  std::istringstream in(body);
  std::string line;
  if (!std::getline(in, line) || trim(line).rfind("state,", 0) != 0)
    throw ConfigError("fit input: expected a table CSV starting with 'state,'");
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() < 7)
      throw ConfigError("fit input line " + std::to_string(line_no) + ": too few columns");
    TableRow row;
    row.label = fields[0];
    row.n = parse_int(fields[1], "n");
    row.energy = parse_double(fields[2], "energy");
    row.s_vn = parse_double(fields[3], "svn");
    row.s_lin = parse_double(fields[4], "slin");
    row.s0 = parse_double(fields[5], "s0");
    row.entanglement = parse_double(fields[6], "entanglement");
    if (fields.size() > 7) row.dehesa = parse_double(fields[7], "dehesa");
    if (fields.size() > 8) row.ipr = parse_double(fields[8], "ipr");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigError("fit input: table has no rows");
  return rows;
}

std::string cmd_solve(const RunConfig& config) {
  struct Listed {
    std::string sector;
    const CiState* state;
  };

  std::vector<SectorSolution> solutions;
  for (SpatialSector sector : requested_sectors(config))
    solutions.push_back(solve_sector(config, sector));

  std::vector<Listed> listing;
  if (config.states.empty()) {
    for (const auto& sol : solutions) {
      const int count = std::min<int>(10, static_cast<int>(sol.states.size()));
      for (int i = 0; i < count; ++i) listing.push_back({sector_name(sol.sector), &sol.states[i]});
    }
  } else {
    for (const auto& wanted : config.states) {
      const std::string norm = normalize_label(wanted);
      const CiState* found = nullptr;
      std::string found_sector;
      for (const auto& sol : solutions)
        for (const auto& state : sol.states)
          if (!found && normalize_label(state.label) == norm) {
            found = &state;
            found_sector = sector_name(sol.sector);
          }
      if (!found) {
        std::string available;
        for (const auto& sol : solutions)
          for (int i = 0; i < std::min<int>(10, static_cast<int>(sol.states.size())); ++i)
            available += (available.empty() ? "" : ", ") + sol.states[i].label;
        throw ConfigError("unknown state '" + wanted + "'; available: " + available);
      }
      listing.push_back({found_sector, found});
    }
  }

  if (config.format == RunConfig::Format::csv) {
    std::ostringstream out;
    out << "sector,ordinal,state,energy,weight\n";
    for (const auto& item : listing)
      out << item.sector << ',' << item.state->ordinal << ',' << item.state->label << ','
          << fmt_fixed(item.state->energy, 6) << ',' << fmt_fixed(item.state->dominant_weight, 6)
          << '\n';
    return out.str();
  }

  ordered_json doc;
  doc["meta"] = meta_json(config, "solve");
  for (const auto& sol : solutions) add_solution_meta(doc["meta"], sol);
  ordered_json data = ordered_json::array();
  for (const auto& item : listing) {
    ordered_json row;
    row["sector"] = item.sector;
    row["ordinal"] = item.state->ordinal;
    row["state"] = item.state->label;
    row["energy"] = parse_double(fmt_fixed(item.state->energy, 6), "energy");
    row["weight"] = parse_double(fmt_fixed(item.state->dominant_weight, 6), "weight");
    data.push_back(row);
  }
  doc["data"] = data;
  return doc.dump(2) + "\n";
}

std::string cmd_convergence(const RunConfig& config) {
  std::vector<std::vector<double>> grid(config.grid_nmax.size(),
                                        std::vector<double>(config.grid_lmax.size(), 0.0));
  for (std::size_t i = 0; i < config.grid_nmax.size(); ++i)
    for (std::size_t j = 0; j < config.grid_lmax.size(); ++j) {
      RunConfig cell = config;
      cell.n_max = {config.grid_nmax[i]};
      cell.l_max = config.grid_lmax[j];
      cell.sector = RunConfig::Sector::singlet;
      if (cell.exponent_mode == RunConfig::ExponentMode::explicit_list) {
        cell.xi.resize(cell.l_max + 1);
        for (auto& xl : cell.xi) {
          if (static_cast<int>(xl.size()) < config.grid_nmax[i])
            throw ConfigError("convergence: explicit exponent lists shorter than grid nmax");
          xl.resize(config.grid_nmax[i]);
        }
        cell.n_max.clear();
      }
      const auto solution = solve_sector(cell, SpatialSector::symmetric);
      if (solution.states.empty()) throw NumericalError("convergence: empty spectrum");
      const auto report =
          make_entropy_report(solution.states.front(), solution.configs, solution.bases);
      grid[i][j] = report.s_vn;
    }

  if (config.format == RunConfig::Format::csv) {
    std::ostringstream out;
    out << "nmax";
    for (int l : config.grid_lmax) out << ",lmax=" << l;
    out << '\n';
    for (std::size_t i = 0; i < config.grid_nmax.size(); ++i) {
      out << config.grid_nmax[i];
      for (std::size_t j = 0; j < config.grid_lmax.size(); ++j)
        out << ',' << fmt_fixed(grid[i][j], 5);
      out << '\n';
    }
    return out.str();
  }

  ordered_json doc;
  doc["meta"] = meta_json(config, "convergence");
  doc["meta"]["grid_nmax"] = config.grid_nmax;
  doc["meta"]["grid_lmax"] = config.grid_lmax;
  ordered_json data;
  data["nmax"] = config.grid_nmax;
  data["lmax"] = config.grid_lmax;
  ordered_json values = ordered_json::array();
  for (auto& row : grid) {
    ordered_json jrow = ordered_json::array();
    for (double v : row) jrow.push_back(parse_double(fmt_fixed(v, 5), "svn"));
    values.push_back(jrow);
  }
  data["svn"] = values;
  doc["data"] = data;
  return doc.dump(2) + "\n";
}

std::string cmd_spectrum(const RunConfig& config) {
  if (config.state.empty())
    throw ConfigError("spectrum requires a state label (config key 'state' or --state)");
  const SpatialSector sector = sector_from_label(config.state);
  const auto solution = solve_sector(config, sector);

  const std::string norm = normalize_label(config.state);
  const CiState* target = nullptr;
  for (const auto& state : solution.states)
    if (normalize_label(state.label) == norm) {
      target = &state;
      break;
    }
  if (!target) {
    std::string available;
    for (int i = 0; i < std::min<int>(12, static_cast<int>(solution.states.size())); ++i)
      available += (available.empty() ? "" : ", ") + solution.states[i].label;
    throw ConfigError("unknown state '" + config.state + "'; available: " + available);
  }

  const ReducedDensity rho = reduced_density(*target, solution.configs, solution.bases);

  if (config.format == RunConfig::Format::csv) {
    std::ostringstream out;
    out << "k,lambda\n";
    for (std::size_t k = 0; k < rho.spectrum.size(); ++k)
      out << (k + 1) << ',' << fmt_sci(rho.spectrum[k]) << '\n';
    return out.str();
  }

  ordered_json doc;
  doc["meta"] = meta_json(config, "spectrum");
  doc["meta"]["state"] = target->label;
  add_solution_meta(doc["meta"], solution);
  ordered_json data = ordered_json::array();
  for (std::size_t k = 0; k < rho.spectrum.size(); ++k) {
    ordered_json row;
    row["k"] = k + 1;
    row["lambda"] = rho.spectrum[k];
    data.push_back(row);
  }
  doc["data"] = data;
  return doc.dump(2) + "\n";
}

std::string cmd_table(const RunConfig& config) {
  std::vector<TableRow> rows;
  std::vector<SectorSolution> solutions;
  for (SpatialSector sector : requested_sectors(config)) {
    SectorSolution solution;
    auto part = build_table_rows(config, sector, &solution);
    rows.insert(rows.end(), part.begin(), part.end());
    solutions.push_back(std::move(solution));
  }

  if (config.format == RunConfig::Format::csv) return render_table_csv(rows);

  ordered_json doc;
  doc["meta"] = meta_json(config, "table");
  if (config.n_from > 0)
    doc["meta"]["n_range"] = {config.n_from, config.n_to};
  else
    doc["meta"]["n_range"] = "sector-default";
  for (const auto& solution : solutions) add_solution_meta(doc["meta"], solution);
  doc["data"] = table_rows_json(rows);
  return doc.dump(2) + "\n";
}

std::string cmd_fit(const RunConfig& config) {
  // The fit always consumes a table document; when no input file is given
  // the table is computed, rendered at output precision, and re-read, so a
  // re-ingested table reproduces the fit exactly.
  std::vector<TableRow> rows;
  if (!config.fit_input.empty()) {
    std::ifstream in(config.fit_input);
    if (!in) throw ConfigError("cannot open fit input '" + config.fit_input + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    rows = read_table_document(buffer.str());
  } else {
    RunConfig table_config = config;
    table_config.format = RunConfig::Format::csv;
    rows = read_table_document(cmd_table(table_config));
  }

  struct SectorFit {
    std::string name;
    PowerLawFit fit;
    std::vector<const TableRow*> points;
  };
  std::vector<SectorFit> fits;
  for (SpatialSector sector : {SpatialSector::symmetric, SpatialSector::antisymmetric}) {
    std::vector<const TableRow*> points;
    for (const auto& row : rows)
      if (sector_from_label(row.label) == sector && row.n >= 2) points.push_back(&row);
    if (points.empty()) continue;
    std::vector<std::pair<double, double>> data;
    for (const auto* p : points) data.push_back({static_cast<double>(p->n), p->entanglement});
    SectorFit sf;
    sf.name = sector_name(sector);
    sf.fit = fit_power_law(data);
    sf.points = points;
    fits.push_back(std::move(sf));
  }
  if (fits.empty()) throw ConfigError("fit: no usable rows with n >= 2");

  if (config.format == RunConfig::Format::csv) {
    std::ostringstream out;
    out << "sector,prefactor,exponent,n,entanglement,energy,residual\n";
    for (const auto& sf : fits) {
      std::size_t used = 0;
      for (const auto* p : sf.points) {
        if (!(p->entanglement > 0.0)) continue;  // skipped by the fit, flagged in warnings
        out << sf.name << ',' << fmt_fixed(sf.fit.prefactor, 6) << ','
            << fmt_fixed(sf.fit.exponent, 6) << ',' << p->n << ','
            << fmt_fixed(p->entanglement, 6) << ',' << fmt_fixed(p->energy, 6) << ','
            << fmt_fixed(sf.fit.residuals[used], 6) << '\n';
        ++used;
      }
    }
    return out.str();
  }

  ordered_json doc;
  doc["meta"] = meta_json(config, "fit");
  ordered_json data = ordered_json::array();
  for (const auto& sf : fits) {
    ordered_json block;
    block["sector"] = sf.name;
    block["prefactor"] = sf.fit.prefactor;
    block["exponent"] = sf.fit.exponent;
    ordered_json points = ordered_json::array();
    std::size_t used = 0;
    for (const auto* p : sf.points) {
      if (!(p->entanglement > 0.0)) continue;
      ordered_json row;
      row["n"] = p->n;
      row["entanglement"] = p->entanglement;
      row["energy"] = p->energy;
      row["residual"] = sf.fit.residuals[used];
      points.push_back(row);
      ++used;
    }
    block["points"] = points;
    block["warnings"] = sf.fit.warnings;
    data.push_back(block);
  }
  doc["data"] = data;
  return doc.dump(2) + "\n";
}

void write_document(const RunConfig& config, const std::string& document) {
  if (config.out == "-") {
    std::cout << document;
    std::cout.flush();
    return;
  }
  std::ofstream out(config.out, std::ios::binary);
  if (!out) throw ConfigError("cannot open output path '" + config.out + "'");
  out << document;
}

}  // namespace helice
