// End-to-end checks of the command-line tool. The binary path comes in
// through the STAGESIM_CLI_PATH compile definition.

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string stdout_text;
};

CliResult run_cli(const std::string& args, const fs::path& work) {
  const fs::path out_file = work / "stdout.txt";
  const std::string cmd = std::string(STAGESIM_CLI_PATH) + " " + args + " > " +
                          out_file.string() + " 2> " +
                          (work / "stderr.txt").string();
  const int raw = std::system(cmd.c_str());
  CliResult r;
#ifdef _WIN32
  r.exit_code = raw;
#else
  r.exit_code = WEXITSTATUS(raw);
#endif
  std::ifstream in(out_file);
  std::ostringstream ss;
  ss << in.rdbuf();
  r.stdout_text = ss.str();
  return r;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("stagesim_cli_" + tag);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("run executes a scenario and writes the outputs") {
  TempDir tmp("run");
  write_file(tmp.path / "config.json",
             R"({"scenario": "inflation", "num_qubits": 6, "steps": 4,
                 "seed": 5})");
  const auto r = run_cli("run --config " + (tmp.path / "config.json").string() +
                             " --out " + (tmp.path / "out").string(),
                         tmp.path);
  CHECK(r.exit_code == 0);
  for (const char* name : {"trajectory.csv", "metrics.csv", "dag.dot",
                           "dag.json", "manifest.json"}) {
    CHECK(fs::exists(tmp.path / "out" / name));
  }
}

TEST_CASE("run honors the seed override") {
  TempDir tmp("seed");
  write_file(tmp.path / "config.json",
             R"({"scenario": "chaos", "num_qubits": 4, "steps": 3,
                 "seed": 5})");
  const auto r = run_cli("run --config " + (tmp.path / "config.json").string() +
                             " --out " + (tmp.path / "out").string() +
                             " --seed 77",
                         tmp.path);
  CHECK(r.exit_code == 0);
  std::ifstream in(tmp.path / "out" / "manifest.json");
  const json man = json::parse(in);
  CHECK(man.at("seed") == 77);
}

TEST_CASE("run rejects a broken config") {
  TempDir tmp("badcfg");
  write_file(tmp.path / "config.json", R"({"scenario": "nope"})");
  const auto r = run_cli(
      "run --config " + (tmp.path / "config.json").string(), tmp.path);
  CHECK(r.exit_code == 2);

  const auto missing =
      run_cli("run --config " + (tmp.path / "absent.json").string(), tmp.path);
  CHECK(missing.exit_code == 2);
}

TEST_CASE("factor prints the partition of a state file") {
  TempDir tmp("factor");
  const double r = 0.7071067811865476;
  json state = {{"num_qubits", 3},
                {"amplitudes", json::array()}};
  for (int i = 0; i < 8; ++i) {
    const double re = (i == 0 || i == 6) ? r : 0.0;
    state["amplitudes"].push_back({re, 0.0});
  }
  write_file(tmp.path / "state.json", state.dump());

  const auto res = run_cli(
      "factor --state " + (tmp.path / "state.json").string(), tmp.path);
  CHECK(res.exit_code == 0);
  const json out = json::parse(res.stdout_text);
  REQUIRE(out.at("blocks").size() == 2);
  CHECK(out.at("blocks")[0] == json::array({0, 1}));
  CHECK(out.at("blocks")[1] == json::array({2}));
}

TEST_CASE("factor rejects a non-unit state") {
  TempDir tmp("badstate");
  write_file(tmp.path / "state.json",
             R"({"num_qubits": 1, "amplitudes": [[0.5, 0], [0, 0]]})");
  const auto r = run_cli(
      "factor --state " + (tmp.path / "state.json").string(), tmp.path);
  CHECK(r.exit_code == 2);
}

TEST_CASE("jw reports clean anticommutators") {
  TempDir tmp("jw");
  const auto r = run_cli("jw --qubits 5", tmp.path);
  CHECK(r.exit_code == 0);
  const json out = json::parse(r.stdout_text);
  CHECK(out.at("num_modes") == 5);
  CHECK(out.at("max_deviation_delta") == 0.0);
  CHECK(out.at("max_deviation_zero") == 0.0);

  const auto bad = run_cli("jw --qubits 40", tmp.path);
  CHECK(bad.exit_code == 2);
}

TEST_CASE("usage errors exit with 2") {
  TempDir tmp("usage");
  CHECK(run_cli("bogus", tmp.path).exit_code == 2);
  CHECK(run_cli("run", tmp.path).exit_code == 2);  // missing --config
  CHECK(run_cli("", tmp.path).exit_code == 2);     // missing subcommand
}

}  // TEST_SUITE
