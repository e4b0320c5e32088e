#include "crossroads/output.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "crossroads/config.hpp"

namespace crossroads {

using nlohmann::json;
namespace fs = std::filesystem;

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_for_writing(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw std::runtime_error("cannot create output directory " + dir.string() +
                             (ec ? ": " + ec.message() : ""));
  }
}

void write_preamble(std::ostream& out, const ScenarioConfig& config, const char* header) {
  out << "# seed=" << config.seed << ", scenario=" << config.name << "\n" << header << "\n";
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("error while writing " + path.string());
}

}  // namespace

std::vector<OutputFile> write_snapshots(std::span<const SnapshotRecord> records,
                                        std::span<const ProbeSample> probes,
                                        const ScenarioConfig& config, const fs::path& out_dir) {
  ensure_directory(out_dir);
  std::vector<OutputFile> files;

  if (!records.empty()) {
    const fs::path dpath = out_dir / kDensityFile;
    auto dens = open_for_writing(dpath);
    write_preamble(dens, config, "road,time,x_long,rho");
    std::size_t rows = 0;
    for (const auto& r : records) {
      for (Population p : kPopulations) {
        const MacroGrid grid = config.grid(p);
        const auto& values = r.density[index_of(p)];
        for (std::size_t i = 0; i < values.size(); ++i) {
          dens << label_of(p) << ',' << format_real(r.time) << ',' << format_real(grid.center(i)) << ','
               << format_real(values[i]) << '\n';
          ++rows;
        }
      }
    }
    finish(dens, dpath);
    files.push_back({kDensityFile, rows});

    const fs::path apath = out_dir / kAgentsFile;
    auto agents = open_for_writing(apath);
    write_preamble(agents, config, "time,id,p,x1,x2");
    rows = 0;
    for (const auto& r : records) {
      for (const auto& a : r.agents) {
        agents << format_real(r.time) << ',' << a.id << ',' << label_of(a.population) << ','
               << format_real(a.position.x1) << ',' << format_real(a.position.x2) << '\n';
        ++rows;
      }
    }
    finish(agents, apath);
    files.push_back({kAgentsFile, rows});
  }

  if (!probes.empty()) {
    const fs::path ppath = out_dir / kProbesFile;
    auto out = open_for_writing(ppath);
    write_preamble(out, config, "time,road,x_long,rho");
    std::size_t rows = 0;
    for (const auto& s : probes) {
      for (std::size_t k = 0; k < config.probes.size() && k < s.values.size(); ++k) {
        out << format_real(s.time) << ',' << label_of(config.probes[k].road) << ','
            << format_real(config.probes[k].position) << ',' << format_real(s.values[k]) << '\n';
        ++rows;
      }
    }
    finish(out, ppath);
    files.push_back({kProbesFile, rows});
  }
  return files;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json summary_metrics(const RunResult& result, const ScenarioConfig& config, double window_start) {
  json indices = json::array();
  std::vector<double> times;
  times.reserve(result.probe_series.size());
  for (const auto& s : result.probe_series) times.push_back(s.time);
  for (std::size_t k = 0; k < config.probes.size(); ++k) {
    std::vector<double> values;
    values.reserve(result.probe_series.size());
    for (const auto& s : result.probe_series) values.push_back(s.values.at(k));
    json entry{{"road", label_of(config.probes[k].road)},
               {"position", config.probes[k].position},
               {"window", json::array({window_start, config.t_max})}};
    try {
      const double idx = oscillation_index(times, values, window_start, config.t_max);
      entry["value"] = std::isfinite(idx) ? json(idx) : json("inf");
    } catch (const std::invalid_argument&) {
      entry["value"] = nullptr;
    }
    indices.push_back(entry);
  }

  const SimulationState& s = result.final_state;
  json mass = json::array();
  for (Population p : kPopulations) mass.push_back(total_mass(s.density(p), config.domain.road(p).width()));

  double max_courant = 0.0, max_balance = 0.0, min_density = 0.0;
  for (const auto& d : result.steps) {
    max_courant = std::max(max_courant, d.courant);
    max_balance = std::max(max_balance, d.mass_balance_error);
    min_density = std::min(min_density, d.min_density);
  }

  return json{{"oscillation_index", indices},
              {"final_mass", mass},
              {"injected", s.injected},
              {"retired", s.retired},
              {"alive", s.agents.size()},
              {"steps", result.steps.size()},
              {"max_courant", max_courant},
              {"max_mass_balance_error", max_balance},
              {"min_density", min_density}};
}

void write_manifest(const ScenarioConfig& config, const std::vector<OutputFile>& files,
                    const json& metrics, const RunTiming& timing, const fs::path& out_dir) {
  ensure_directory(out_dir);
  json listed = json::array();
  for (const auto& f : files) listed.push_back({{"name", f.name}, {"rows", f.rows}});
  const json manifest{{"config", to_json(config)},
                      {"seed", config.seed},
                      {"code_version", kCodeVersion},
                      {"started_at", timing.started},
                      {"finished_at", timing.finished},
                      {"files", listed},
                      {"metrics", metrics}};
  const fs::path path = out_dir / kManifestFile;
  auto out = open_for_writing(path);
  out << manifest.dump(2) << '\n';
  finish(out, path);
}

std::vector<OutputFile> write_run(const RunResult& result, const ScenarioConfig& config,
                                  const fs::path& out_dir, const RunTiming& timing) {
  auto files = write_snapshots(result.snapshots, result.probe_series, config, out_dir);
  write_manifest(config, files, summary_metrics(result, config), timing, out_dir);
  return files;
}

void write_state_dump(const SimulationState& state, const ScenarioConfig& config, const fs::path& out_dir) {
  SnapshotRecord r;
  r.time = state.time;
  r.density[0] = state.density1.values;
  r.density[1] = state.density2.values;
  r.agents = state.agents;
  const fs::path dir = out_dir / "failure_dump";
  write_snapshots(std::span<const SnapshotRecord>(&r, 1), {}, config, dir);
}

std::vector<ProbeSeries> read_probe_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::vector<ProbeSeries> series;
  std::string line;
  bool header_seen = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != "time,road,x_long,rho") {
        throw std::runtime_error(path.string() + ": unexpected header '" + line + "'");
      }
      header_seen = true;
      continue;
    }
    std::istringstream row(line);
    std::string f[4];
    for (auto& field : f) std::getline(row, field, ',');
    try {
      const double t = std::stod(f[0]);
      const Population road = population_from_label(std::stoi(f[1]));
      const double pos = std::stod(f[2]);
      const double rho = std::stod(f[3]);
      auto it = std::find_if(series.begin(), series.end(),
                             [&](const ProbeSeries& s) { return s.road == road && s.position == pos; });
      if (it == series.end()) it = series.insert(series.end(), ProbeSeries{road, pos, {}, {}});
      it->times.push_back(t);
      it->values.push_back(rho);
    } catch (const std::exception&) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": bad row '" + line + "'");
    }
  }
  if (!header_seen) throw std::runtime_error(path.string() + ": missing header");
  return series;
}

}  // namespace crossroads
