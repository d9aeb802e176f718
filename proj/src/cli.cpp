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

#include "ponsim/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ponsim/errors.hpp"
#include "ponsim/report_io.hpp"
#include "ponsim/runner.hpp"
#include "ponsim/scenario.hpp"
#include "vendor/CLI11.hpp"
#include "vendor/json.hpp"

namespace ponsim {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw std::ios_base::failure("read error on " + path);
  return buf.str();
}

std::optional<std::uint64_t> env_seed() {
  const char* raw = std::getenv("PONSIM_SEED");
  if (!raw || !*raw) return std::nullopt;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (end == raw || *end != '\0')
    throw ValidationError(std::string("PONSIM_SEED: not an integer: ") + raw);
  return static_cast<std::uint64_t>(v);
}

Scenario load_with_seed(const std::string& path,
                        std::optional<std::uint64_t> seed_flag) {
  Scenario s = load_scenario(read_file(path));
  if (auto env = env_seed(); env && !seed_flag) s.seed = *env;
  if (seed_flag) s.seed = *seed_flag;
  return s;
}

json run_report(const Scenario& s) {
  const RunResult r = run_scenario(s);
  json report = report_to_json(s, r);
  report["version"] = kToolVersion;
  return report;
}

void write_run_outputs(const Scenario& s, const json& report,
                       const std::string& out_dir, const std::string& format) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  if (format == "json" || format == "both") {
    json metrics{{"per_ont", report.at("per_ont")},
                 {"plant", report.at("plant")}};
    write_file_atomic((dir / "metrics.json").string(), metrics.dump(2) + "\n");
  }
  if (format == "csv" || format == "both") {
    Metrics m;
    for (const auto& [id, om] : report.at("per_ont").items()) {
      OntMetrics x;
      x.delivered = om.at("delivered").get<std::uint64_t>();
      x.idle = om.at("idle").get<std::uint64_t>();
      x.dropped = om.at("dropped").get<std::uint64_t>();
      x.collisions = om.at("collisions").get<std::uint64_t>();
      x.mean_latency_ticks = om.at("mean_latency_ticks").get<double>();
      x.p95_latency_ticks = om.at("p95_latency_ticks").get<std::uint64_t>();
      x.throughput_mbps = om.at("throughput_mbps").get<double>();
      m.per_ont[static_cast<std::uint32_t>(std::stoul(id))] = x;
    }
    write_file_atomic((dir / "metrics.csv").string(), metrics_to_csv(m));
  }
  write_file_atomic((dir / "report.json").string(), report.dump(2) + "\n");
}

/// Applies one sweep point. The dotted key addresses a numeric field of
/// the normalized scenario JSON ("plant.feeder_m", "onts.0.fiber_m",
/// "temperature_profile.0.1"). The special key "onts.count" replicates the
/// first ONT (and its traffic entry) to ids 1..value.
json apply_sweep_value(const json& base, const std::string& key,
                       double value) {
  json doc = base;
  if (key == "onts.count") {
    const auto n = static_cast<std::size_t>(value);
    if (n < 1 || static_cast<double>(n) != value)
      throw ValidationError("onts.count: must be a positive integer");
    if (!doc.contains("onts") || doc.at("onts").empty())
      throw ValidationError("onts.count: scenario has no template ONT");
    const json tmpl_ont = doc.at("onts").at(0);
    json tmpl_traffic;
    if (doc.contains("traffic"))
      for (const auto& t : doc.at("traffic"))
        if (t.at("ont_id") == tmpl_ont.at("id")) tmpl_traffic = t;
    json onts = json::array();
    json traffic = json::array();
    for (std::size_t i = 1; i <= n; ++i) {
      json o = tmpl_ont;
      o["id"] = i;
      onts.push_back(o);
      if (!tmpl_traffic.is_null()) {
        json t = tmpl_traffic;
        t["ont_id"] = i;
        t["stream"] = i;
        traffic.push_back(t);
      }
    }
    doc["onts"] = onts;
    doc["traffic"] = traffic;
    return doc;
  }

  json* node = &doc;
  std::istringstream keys(key);
  std::string part;
  while (std::getline(keys, part, '.')) {
    if (node->is_array()) {
      std::size_t idx = 0;
      try {
        idx = std::stoul(part);
      } catch (const std::exception&) {
        throw ValidationError(key + ": \"" + part + "\" is not an array index");
      }
      if (idx >= node->size())
        throw ValidationError(key + ": index " + part + " out of range");
      node = &(*node)[idx];
    } else if (node->is_object() && node->contains(part)) {
      node = &(*node)[part];
    } else {
      throw ValidationError(key + ": no such field \"" + part + "\"");
    }
  }
  if (!node->is_number())
    throw ValidationError(key + ": target is not numeric");
  if (node->is_number_integer() || node->is_number_unsigned())
    *node = static_cast<std::int64_t>(value);
  else
    *node = value;
  return doc;
}

int cmd_validate(const std::string& path, std::ostream& out,
                 std::ostream& err) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
  try {
    const Scenario s = load_scenario(text);
    out << scenario_to_json(s).dump(2) << "\n";
    return kExitOk;
  } catch (const ValidationError& e) {
    err << "invalid scenario: " << e.what() << "\n";
    return kExitValidation;
  }
}

int cmd_run(const std::string& path, const std::string& format,
            const std::string& out_dir, std::optional<std::uint64_t> seed,
            std::ostream& out, std::ostream& err) {
  Scenario s;
  try {
    s = load_with_seed(path, seed);
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ValidationError& e) {
    err << "invalid scenario: " << e.what() << "\n";
    return kExitValidation;
  }
  try {
    const json report = run_report(s);
    write_run_outputs(s, report, out_dir, format);
    out << "wrote " << out_dir << "/report.json\n";
    return kExitOk;
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ProtocolError& e) {
    err << "protocol failure: " << e.what() << "\n";
    return kExitProtocol;
  } catch (const PhyError& e) {
    err << "protocol failure: " << e.what() << "\n";
    return kExitProtocol;
  }
}

int cmd_sweep(const std::string& path, const std::string& key,
              const std::vector<double>& values, const std::string& out_dir,
              std::optional<std::uint64_t> seed, std::ostream& out,
              std::ostream& err) {
  json base;
  try {
    base = scenario_to_json(load_with_seed(path, seed));
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ValidationError& e) {
    err << "invalid scenario: " << e.what() << "\n";
    return kExitValidation;
  }
  std::ostringstream csv;
  csv << "value,ont_id,delivered,collisions,mean_latency_ticks,"
         "p95_latency_ticks,throughput_mbps,wdm_links_up\n";
  try {
    for (double v : values) {
      const Scenario s = scenario_from_json(apply_sweep_value(base, key, v));
      const RunResult r = run_scenario(s);
      for (const auto& [id, om] : r.metrics.per_ont)
        csv << v << ',' << id << ',' << om.delivered << ',' << om.collisions
            << ',' << om.mean_latency_ticks << ',' << om.p95_latency_ticks
            << ',' << om.throughput_mbps << ',' << r.metrics.plant.wdm_links_up
            << '\n';
    }
    std::filesystem::create_directories(out_dir);
    write_file_atomic(
        (std::filesystem::path(out_dir) / "sweep.csv").string(), csv.str());
    out << "wrote " << out_dir << "/sweep.csv\n";
    return kExitOk;
  } catch (const ValidationError& e) {
    err << "invalid sweep: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ProtocolError& e) {
    err << "protocol failure: " << e.what() << "\n";
    return kExitProtocol;
  }
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"ponsim: passive optical network access simulator"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  std::string path;
  std::string format = "both";
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::string sweep_key;
  std::vector<double> sweep_values;

  CLI::App* validate = app.add_subcommand("validate", "Check a scenario file");
  validate->add_option("path", path, "scenario JSON file")->required();

  CLI::App* run = app.add_subcommand("run", "Run one scenario");
  run->add_option("path", path, "scenario JSON file")->required();
  run->add_option("--format", format, "csv, json or both")
      ->check(CLI::IsMember({"csv", "json", "both"}));
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--seed", seed, "override the scenario seed");

  CLI::App* sweep = app.add_subcommand("sweep", "Run a parameter sweep");
  sweep->add_option("path", path, "scenario JSON file")->required();
  sweep->add_option("--param", sweep_key, "dotted numeric key")->required();
  sweep->add_option("--values", sweep_values, "sweep points")
      ->required()
      ->expected(1, -1)
      ->delimiter(',');
  sweep->add_option("--out", out_dir, "output directory");
  sweep->add_option("--seed", seed, "override the scenario seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    if (validate->parsed()) return cmd_validate(path, out, err);
    if (run->parsed()) return cmd_run(path, format, out_dir, seed, out, err);
    return cmd_sweep(path, sweep_key, sweep_values, out_dir, seed, out, err);
  } catch (const ValidationError& e) {
    err << "invalid: " << e.what() << "\n";
    return kExitValidation;
  }
}

} // namespace ponsim
