/*
 * Copyright 2026 The ponsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "vendor/doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::string kCli = PONSIM_CLI_PATH;
const std::string kData = PONSIM_DATA_DIR;

struct CmdResult {
  int exit_code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

CmdResult run_cmd(const std::string& args) {
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path() / "ponsim_cli_test";
  fs::create_directories(dir);
  const fs::path out = dir / ("out" + std::to_string(counter));
  const fs::path err = dir / ("err" + std::to_string(counter));
  ++counter;
  const std::string cmd = kCli + " " + args + " > " + out.string() + " 2> " +
                          err.string();
  const int status = std::system(cmd.c_str());
  return {WEXITSTATUS(status), slurp(out), slurp(err)};
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "ponsim_cli_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_scenario(const std::string& name, const std::string& text) {
  const fs::path dir = fresh_dir("scn");
  const fs::path p =
      fs::temp_directory_path() / "ponsim_cli_test" / ("s_" + name + ".json");
  std::ofstream(p) << text;
  return p;
}

} // namespace

TEST_CASE("validate: valid file prints the normalized scenario") {
  const auto r = run_cmd("validate " + kData + "/scenarios/baseline.json");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"stage\": \"TDM_BASELINE\"") != std::string::npos);
  CHECK(r.out.find("\"polling_interval_frames\"") != std::string::npos);
}

TEST_CASE("validate: missing stage names the field, exit 2") {
  const auto p = write_scenario("nostage", R"({"onts":[{"id":1}]})");
  const auto r = run_cmd("validate " + p.string());
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("stage") != std::string::npos);
}

TEST_CASE("validate: unreadable path is an I/O error, exit 1") {
  const auto r = run_cmd("validate /nonexistent/nowhere.json");
  CHECK(r.exit_code == 1);
}

TEST_CASE("run: writes metrics.json, metrics.csv and report.json") {
  const auto dir = fresh_dir("run1");
  const auto r = run_cmd("run " + kData + "/scenarios/baseline.json --out " +
                         dir.string());
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(dir / "metrics.json"));
  CHECK(fs::exists(dir / "metrics.csv"));
  CHECK(fs::exists(dir / "report.json"));

  const std::string csv = slurp(dir / "metrics.csv");
  CHECK(csv.rfind("ont_id,delivered,idle,dropped,collisions,"
                  "mean_latency_ticks,p95_latency_ticks,throughput_mbps\n",
                  0) == 0);
  CHECK(slurp(dir / "report.json").find("\"version\": \"1.0.0\"") !=
        std::string::npos);
}

TEST_CASE("run: the same seed gives byte-identical metrics") {
  const auto d1 = fresh_dir("seed_a");
  const auto d2 = fresh_dir("seed_b");
  CHECK(run_cmd("run " + kData + "/scenarios/baseline.json --seed 42 --out " +
                d1.string()).exit_code == 0);
  CHECK(run_cmd("run " + kData + "/scenarios/baseline.json --seed 42 --out " +
                d2.string()).exit_code == 0);
  CHECK(slurp(d1 / "metrics.json") == slurp(d2 / "metrics.json"));
  CHECK(slurp(d1 / "metrics.csv") == slurp(d2 / "metrics.csv"));

  const auto d3 = fresh_dir("seed_c");
  CHECK(run_cmd("run " + kData + "/scenarios/baseline.json --seed 43 --out " +
                d3.string()).exit_code == 0);
  CHECK(slurp(d1 / "metrics.json") != slurp(d3 / "metrics.json"));
}

TEST_CASE("run: PONSIM_SEED is the default, the flag wins") {
  const auto d1 = fresh_dir("env_a");
  const auto d2 = fresh_dir("env_b");
  const auto d3 = fresh_dir("env_c");
  CHECK(run_cmd("run " + kData + "/scenarios/baseline.json --seed 42 --out " +
                d1.string()).exit_code == 0);
  const std::string env = "PONSIM_SEED=42 " + kCli;
  CHECK(WEXITSTATUS(std::system((env + " run " + kData +
                                 "/scenarios/baseline.json --out " +
                                 d2.string() + " > /dev/null 2>&1")
                                    .c_str())) == 0);
  CHECK(slurp(d1 / "metrics.json") == slurp(d2 / "metrics.json"));
  // flag beats environment
  CHECK(WEXITSTATUS(std::system((env + " run " + kData +
                                 "/scenarios/baseline.json --seed 43 --out " +
                                 d3.string() + " > /dev/null 2>&1")
                                    .c_str())) == 0);
  CHECK(slurp(d1 / "metrics.json") != slurp(d3 / "metrics.json"));
}

TEST_CASE("run: an out-of-reach ONT exits 3 and names the ONT") {
  const auto p = write_scenario(
      "far", R"({"stage":"TDM_BASELINE","duration_s":0.002,
                 "plant":{"feeder_m":15000},
                 "onts":[{"id":4,"fiber_m":6000}]})");
  const auto r = run_cmd("run " + p.string() + " --out " +
                         fresh_dir("far").string());
  CHECK(r.exit_code == 3);
  CHECK(r.err.find("ONT 4") != std::string::npos);
}

TEST_CASE("sweep: writes one row per ONT per value") {
  const auto p = write_scenario(
      "sw", R"({"stage":"TDM_BASELINE","duration_s":0.002,
                "onts":[{"id":1,"fiber_m":1000}],
                "traffic":[{"ont_id":1,"model":"cbr","rate_cells_per_s":30000}]})");
  const auto dir = fresh_dir("sweep1");
  const auto r = run_cmd("sweep " + p.string() +
                         " --param plant.feeder_m --values 1000,2000 --out " +
                         dir.string());
  CHECK(r.exit_code == 0);
  const std::string csv = slurp(dir / "sweep.csv");
  CHECK(csv.rfind("value,ont_id,", 0) == 0);
  CHECK(csv.find("\n1000,1,") != std::string::npos);
  CHECK(csv.find("\n2000,1,") != std::string::npos);
}

TEST_CASE("sweep: non-numeric target key exits 2") {
  const auto r = run_cmd("sweep " + kData +
                         "/scenarios/baseline.json --param stage --values 1 "
                         "--out " + fresh_dir("sweep2").string());
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("stage") != std::string::npos);
}

TEST_CASE("sweep: missing values list is a usage error") {
  const auto r = run_cmd("sweep " + kData +
                         "/scenarios/baseline.json --param plant.feeder_m");
  CHECK(r.exit_code == 2);
}

TEST_CASE("unknown subcommands are usage errors") {
  const auto r = run_cmd("frobnicate");
  CHECK(r.exit_code == 2);
}
