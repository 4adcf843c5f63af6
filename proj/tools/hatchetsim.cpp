// hatchetsim: run one scenario or a sweep of scenarios.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hatchet/config.hpp"
#include "hatchet/sweep.hpp"

namespace fs = std::filesystem;
using namespace hatchet;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<bool> parse_switches(const std::string& s, const char* flag) {
  std::vector<bool> out;
  for (const auto& v : split_list(s)) {
    if (v == "on") out.push_back(true);
    else if (v == "off") out.push_back(false);
    else throw std::runtime_error(std::string(flag) + ": expected on/off, got '" + v + "'");
  }
  return out;
}

std::vector<std::uint64_t> parse_seeds(const std::string& s) {
  std::vector<std::uint64_t> out;
  for (const auto& v : split_list(s)) {
    const auto dots = v.find("..");
    if (dots == std::string::npos) {
      out.push_back(std::stoull(v));
      continue;
    }
    const auto lo = std::stoull(v.substr(0, dots));
    const auto hi = std::stoull(v.substr(dots + 2));
    if (hi < lo) throw std::runtime_error("--seeds: empty range '" + v + "'");
    for (auto x = lo; x <= hi; ++x) out.push_back(x);
  }
  return out;
}

ScenarioConfig load(const std::string& path) {
  ScenarioConfig c = parse_config(read_file(path));
  apply_seed_override(c);
  validate(c);
  return c;
}

void write_outputs(const fs::path& dir, const SweepOutcome& outcome) {
  fs::create_directories(dir / "traces");
  std::string csv = csv_header();
  std::string detections = "# scenario_id\ttime_s\tdetector\tsuspect\tch_i\tch_n\taction\n";
  for (std::size_t i = 0; i < outcome.runs.size(); ++i) {
    const auto& run = outcome.runs[i];
    const auto& id = outcome.rows[i].scenario_id;
    csv += csv_line(outcome.rows[i]);
    write_file(dir / "traces" / (id + ".trace.tsv"), run.trace);
    write_file(dir / "traces" / (id + ".detections.tsv"), run.detection_log);
    std::istringstream lines(run.detection_log);
    for (std::string line; std::getline(lines, line);) {
      if (!line.empty() && line[0] != '#') detections += id + "\t" + line + "\n";
    }
  }
  write_file(dir / "results.csv", csv);
  write_file(dir / "detections.tsv", detections);
}

int report(const SweepOutcome& outcome) {
  for (const auto& e : outcome.errors) std::cerr << "error: " << e << "\n";
  return outcome.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete-event simulator for RPL non-storing networks under source-route tampering"};
  app.require_subcommand(1);

  std::string run_config;
  std::string run_out;
  auto* run_cmd = app.add_subcommand("run", "run a single scenario");
  run_cmd->add_option("config", run_config, "scenario file")->required();
  run_cmd->add_option("--out", run_out, "directory for results.csv, trace and detection log");

  std::string sweep_config, nodes = "", attack = "off", detect = "off", mobility = "static", seeds = "", out_dir;
  unsigned jobs = 0;
  auto* sweep_cmd = app.add_subcommand("sweep", "run every combination of the given parameters");
  sweep_cmd->add_option("config", sweep_config, "base scenario file")->required();
  sweep_cmd->add_option("--nodes", nodes, "node counts, e.g. 10,20,30");
  sweep_cmd->add_option("--attack", attack, "on,off");
  sweep_cmd->add_option("--detect", detect, "on,off");
  sweep_cmd->add_option("--mobility", mobility, "static,rwp");
  sweep_cmd->add_option("--seeds", seeds, "seed list or range, e.g. 1..5");
  sweep_cmd->add_option("--out", out_dir, "output directory")->required();
  sweep_cmd->add_option("--jobs", jobs, "worker threads (0: all cores)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      const ScenarioConfig c = load(run_config);
      const SweepOutcome outcome = run_sweep({c}, 1);
      if (!outcome.ok()) return report(outcome);
      if (run_out.empty()) {
        std::cout << csv_header() << csv_line(outcome.rows.front());
      } else {
        write_outputs(run_out, outcome);
        std::cout << csv_line(outcome.rows.front());
      }
      return 0;
    }

    const ScenarioConfig base = load(sweep_config);
    SweepSpec spec;
    for (const auto& n : split_list(nodes)) spec.nodes.push_back(std::stoi(n));
    spec.attack = parse_switches(attack, "--attack");
    spec.detect = parse_switches(detect, "--detect");
    spec.mobility.clear();
    for (const auto& m : split_list(mobility)) {
      if (m == "static") spec.mobility.push_back(MobilityMode::Static);
      else if (m == "rwp") spec.mobility.push_back(MobilityMode::RandomWaypoint);
      else throw std::runtime_error("--mobility: expected static or rwp, got '" + m + "'");
    }
    spec.seeds = parse_seeds(seeds);
    if (spec.attack.empty() || spec.detect.empty() || spec.mobility.empty()) {
      throw std::runtime_error("--attack, --detect and --mobility need at least one value");
    }

    auto cells = expand_sweep(base, spec);
    for (const auto& c : cells) validate(c);
    const SweepOutcome outcome = run_sweep(cells, jobs);
    if (!outcome.ok()) return report(outcome);
    write_outputs(out_dir, outcome);
    std::cout << "wrote " << outcome.rows.size() << " runs to " << out_dir << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
