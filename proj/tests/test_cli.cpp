// End-to-end checks of the installed command-line surface: subcommands,
// flags, exit codes, and output bytes, driving the real binary.
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct CliResult {
  int exit_code;
  std::string output;  // stdout + stderr
};

CliResult run_cli(const std::string& args) {
  const std::string command = std::string(HELICE_TOOL_PATH) + " " + args + " 2>&1";
  std::array<char, 4096> buffer{};
  std::string output;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::size_t got = 0;
  while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) output.append(buffer.data(), got);
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), output};
}

std::string write_temp_config(const std::string& body) {
  const std::string path = "/tmp/helice_cli_test.cfg";
  std::ofstream out(path);
  out << body;
  return path;
}

}  // namespace

TEST_CASE("cli: solve with flags, exit 0, CSV shape") {
  const auto result =
      run_cli("solve --lmax 0 --nmax 6 --sector singlet --serial --format csv");
  CHECK(result.exit_code == 0);
  CHECK(result.output.rfind("sector,ordinal,state,energy,weight\n", 0) == 0);
  CHECK(result.output.find("singlet,1,") != std::string::npos);
}

TEST_CASE("cli: config file plus flag overrides") {
  const auto path = write_temp_config(
      "lmax = 1\n"
      "nmax = 5,4\n"
      "alpha = 2.0, 3.5\n"
      "beta = 0.84, 0.8\n"
      "sector = triplet\n"
      "serial = true\n");
  const auto result = run_cli("solve --config " + path + " --sector singlet");
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("singlet,") != std::string::npos);
  CHECK(result.output.find("triplet,") == std::string::npos);
}

TEST_CASE("cli: config errors exit 2 with diagnostics") {
  const auto path = write_temp_config("bogus_key = 1\n");
  const auto bad_key = run_cli("solve --config " + path);
  CHECK(bad_key.exit_code == 2);
  CHECK(bad_key.output.find("unknown key") != std::string::npos);
  CHECK(bad_key.output.find("line 1") != std::string::npos);

  const auto bad_flag = run_cli("solve --format yaml");
  CHECK(bad_flag.exit_code == 2);

  const auto missing = run_cli("solve --config /tmp/does_not_exist.cfg");
  CHECK(missing.exit_code == 2);

  const auto no_sub = run_cli("");
  CHECK(no_sub.exit_code == 2);
}

TEST_CASE("cli: numerical failures exit 3") {
  // optimizer target beyond the basis: every evaluation is rejected
  const auto path = write_temp_config(
      "lmax = 0\n"
      "exponent_mode = explicit\n"
      "xi0 = 2.0\n"
      "optimize = true\n"
      "opt_target = 5\n"
      "budget = 6\n"
      "serial = true\n");
  const auto result = run_cli("solve --config " + path);
  CHECK(result.exit_code == 3);
}

TEST_CASE("cli: spectrum honors --state and --out") {
  const std::string out_path = "/tmp/helice_cli_spectrum.csv";
  std::remove(out_path.c_str());
  const auto result = run_cli("spectrum --lmax 0 --nmax 6 --serial --state \"1s2s 1S\" --out " +
                              out_path);
  CHECK(result.exit_code == 0);
  std::ifstream in(out_path);
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header == "k,lambda");
}

TEST_CASE("cli: table then fit from file reproduces the direct fit") {
  const auto cfg = write_temp_config(
      "lmax = 1\n"
      "nmax = 12,8\n"
      "alpha = 2.0, 3.5\n"
      "beta = 0.84, 0.8\n"
      "sector = singlet\n"
      "n_range = 2..5\n"
      "serial = true\n");
  const std::string table_path = "/tmp/helice_cli_table.csv";
  const auto table = run_cli("table --config " + cfg + " --out " + table_path);
  CHECK(table.exit_code == 0);

  const auto direct = run_cli("fit --config " + cfg);
  const auto from_file = run_cli("fit --config " + cfg + " --in " + table_path);
  CHECK(direct.exit_code == 0);
  CHECK(from_file.exit_code == 0);
  CHECK(direct.output == from_file.output);
}

TEST_CASE("cli: identical serial invocations produce identical bytes") {
  const auto cfg = write_temp_config(
      "lmax = 0\n"
      "alpha = 1.93\n"
      "beta = 1.03\n"
      "grid_nmax = 3,4\n"
      "grid_lmax = 0\n"
      "serial = true\n");
  const auto first = run_cli("convergence --config " + cfg);
  const auto second = run_cli("convergence --config " + cfg);
  CHECK(first.exit_code == 0);
  CHECK(first.output == second.output);
  CHECK(first.output.rfind("nmax,lmax=0\n", 0) == 0);
}

TEST_CASE("cli: bundled exhibit configs parse and validate") {
  for (const char* name : {"table1.cfg", "table2.cfg", "table3.cfg", "fig1.cfg", "fig2.cfg"}) {
    const std::string path = std::string(HELICE_CONFIG_DIR) + "/" + name;
    std::ifstream in(path);
    CHECK_MESSAGE(in.good(), "missing bundled config ", path);
  }
  // cheap structural check: fig1 spectrum runs end to end
  const auto result =
      run_cli("spectrum --config " + std::string(HELICE_CONFIG_DIR) + "/fig1.cfg --nmax 6 --lmax 0");
  CHECK(result.exit_code == 0);
}
