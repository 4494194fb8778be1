#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "wavipm_cli_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

RunResult run_cli(const std::string& args, const fs::path& dir) {
  fs::path out_file = dir / "stdout.txt", err_file = dir / "stderr.txt";
  std::string cmd = std::string(WAVIPM_CLI_PATH) + " " + args + " > " +
                    out_file.string() + " 2> " + err_file.string();
  int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WEXITSTATUS(status);
  r.out = slurp(out_file);
  r.err = slurp(err_file);
  return r;
}

}  // namespace

TEST_CASE("wavelet-check passes and writes a summary") {
  auto dir = scratch("wc");
  auto r = run_cli("--out " + dir.string() + " wavelet-check --order 3", dir);
  CHECK(r.code == 0);
  auto summary = json::parse(slurp(dir / "summary.json"));
  CHECK(summary.at("pass").get<bool>());
  CHECK(summary.at("config").at("order") == 3);
  CHECK(summary.at("results").at("two_scale_error").get<double>() <= 1e-10);
  // stdout carries the same summary
  CHECK(json::parse(r.out) == summary);
}

TEST_CASE("fit-exponent writes rows.csv and summary.json") {
  auto dir = scratch("fit");
  auto r = run_cli("--out " + dir.string() +
                       " fit-exponent --family perturbed-circle --beta 0"
                       " --gamma 1 --eta 2 --n 4,8,16 --J 6 --nodes 128"
                       " --slope-tol 1",
                   dir);
  CHECK(r.code == 0);
  std::string rows = slurp(dir / "rows.csv");
  CHECK(rows.rfind("index,gamma,eta,d_gamma,d_eta\n", 0) == 0);
  CHECK(std::count(rows.begin(), rows.end(), '\n') == 4);
  auto summary = json::parse(slurp(dir / "summary.json"));
  CHECK(summary.at("pass").is_boolean());
  CHECK(summary.at("results").contains("slope"));
  CHECK(summary.at("results").at("predicted").get<double>() == 0.5);
  CHECK(summary.at("config").at("nodes") == 128);
}

TEST_CASE("unknown config key is rejected by name") {
  auto dir = scratch("badkey");
  std::ofstream(dir / "cfg.json") << "{\"betaa\": 1}";
  auto r = run_cli("--config " + (dir / "cfg.json").string() + " --out " +
                       dir.string() + " fit-exponent --n 4,8,16",
                   dir);
  CHECK(r.code == 2);
  CHECK(r.err.find("betaa") != std::string::npos);
}

TEST_CASE("malformed config JSON is a parse error") {
  auto dir = scratch("badjson");
  std::ofstream(dir / "cfg.json") << "{\"beta\": ";
  auto r = run_cli("--config " + (dir / "cfg.json").string() + " --out " +
                       dir.string() + " fit-exponent --n 4,8,16",
                   dir);
  CHECK(r.code == 2);
  CHECK(r.err.find("parse error") != std::string::npos);
}

TEST_CASE("precondition violations name the constraint") {
  auto dir = scratch("precond");
  auto r = run_cli("--out " + dir.string() +
                       " fit-exponent --eta 0.5 --gamma 1 --n 4,8,16",
                   dir);
  CHECK(r.code == 2);
  CHECK(r.err.find("gamma <= eta") != std::string::npos);
}

TEST_CASE("config values are overridden by flags") {
  auto dir = scratch("override");
  std::ofstream(dir / "cfg.json")
      << "{\"n\": [4, 8, 16], \"J\": 6, \"nodes\": 64, \"slope-tol\": 1}";
  auto r = run_cli("--config " + (dir / "cfg.json").string() + " --out " +
                       dir.string() + " fit-exponent --nodes 128",
                   dir);
  CHECK(r.code == 0);
  auto summary = json::parse(slurp(dir / "summary.json"));
  CHECK(summary.at("config").at("nodes") == 128);   // flag wins
  CHECK(summary.at("config").at("J") == 6);         // config applies
}

TEST_CASE("example5 writes a report with the four slopes") {
  auto dir = scratch("ex5");
  auto r = run_cli("--out " + dir.string() +
                       " example5 --beta 0 --eta 1 --n 4,8,16 --nodes 256 --J 6",
                   dir);
  CHECK(r.code == 0);
  auto report = json::parse(slurp(dir / "report.json"));
  for (auto key : {"slope_displacement", "slope_pairing", "slope_cost",
                   "slope_d_one"})
    CHECK(report.at("results").contains(key));
  CHECK(report.at("results").at("rows").size() == 3);
}

TEST_CASE("estimate recovers a noiseless family member") {
  auto dir = scratch("est");
  auto r = run_cli("--out " + dir.string() +
                       " estimate --spacing 0.02 --grid-count 2 --truth-eps 0.02"
                       " --nodes 128 --J 5",
                   dir);
  CHECK(r.code == 0);
  auto summary = json::parse(slurp(dir / "summary.json"));
  CHECK(summary.at("results").at("chosen") == 3);  // k = +1 of -2..2
  CHECK(summary.at("results").at("ipm").get<double>() <= 1e-10);
}

TEST_CASE("rate artifacts are byte-identical across reruns and workers") {
  const std::string args =
      " rate --spacing 0.0008 --grid-count 2 --n 50,100 --reps 3 --seed 42"
      " --nodes 128 --J 5";
  auto d1 = scratch("rate1");
  auto r1 = run_cli("--workers 1 --out " + d1.string() + args, d1);
  REQUIRE(r1.code == 0);
  auto d2 = scratch("rate2");
  auto r2 = run_cli("--workers 4 --out " + d2.string() + args, d2);
  REQUIRE(r2.code == 0);
  auto d3 = scratch("rate3");
  auto r3 = run_cli("--workers 4 --out " + d3.string() + args, d3);
  REQUIRE(r3.code == 0);

  std::string csv = slurp(d1 / "details.csv");
  CHECK(csv.rfind("n,rep,chosen_index,ipm_loss,ipm_eval\n", 0) == 0);
  CHECK(csv == slurp(d2 / "details.csv"));
  CHECK(csv == slurp(d3 / "details.csv"));
  CHECK(slurp(d1 / "summary.json") == slurp(d2 / "summary.json"));
  CHECK(slurp(d2 / "summary.json") == slurp(d3 / "summary.json"));
}

TEST_CASE("no partial outputs are left behind") {
  auto dir = scratch("atomic");
  auto r = run_cli("--out " + dir.string() + " wavelet-check", dir);
  CHECK(r.code == 0);
  for (const auto& entry : fs::directory_iterator(dir))
    CHECK(entry.path().extension() != ".tmp");
}
