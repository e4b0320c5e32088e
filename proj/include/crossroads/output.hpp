#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "crossroads/sim.hpp"

namespace crossroads {

inline constexpr const char* kCodeVersion = "0.1.0";

inline constexpr const char* kDensityFile = "density.csv";
inline constexpr const char* kAgentsFile = "agents.csv";
inline constexpr const char* kProbesFile = "probes.csv";
inline constexpr const char* kManifestFile = "manifest.json";

/// 17 significant digits, enough for any double to read back bit-exact.
std::string format_real(double v);

struct OutputFile {
  std::string name;
  std::size_t rows{0};  ///< data rows, excluding the comment and header lines
};

/// Writes the delimited-text data files into `out_dir` (created if needed):
///   density.csv  road,time,x_long,rho     one row per cell per snapshot
///   agents.csv   time,id,p,x1,x2          one row per agent per snapshot
///   probes.csv   time,road,x_long,rho     one row per probe per sample
/// Each file starts with a "# seed=..., scenario=..." comment line. Density
/// and agent files are written only when there are snapshots; the probe file
/// only when there are samples. Throws std::runtime_error if the directory
/// cannot be created or a file cannot be written.
std::vector<OutputFile> write_snapshots(std::span<const SnapshotRecord> records,
                                        std::span<const ProbeSample> probes,
                                        const ScenarioConfig& config,
                                        const std::filesystem::path& out_dir);

struct RunTiming {
  std::string started;   ///< ISO-8601 UTC
  std::string finished;
};

std::string utc_timestamp();

/// Summary metrics for the manifest: oscillation indices per probe over
/// [window_start, t_max], final masses and agent counts.
nlohmann::json summary_metrics(const RunResult& result, const ScenarioConfig& config,
                               double window_start = 20.0);

/// Writes manifest.json describing the run.
void write_manifest(const ScenarioConfig& config, const std::vector<OutputFile>& files,
                    const nlohmann::json& metrics, const RunTiming& timing,
                    const std::filesystem::path& out_dir);

/// Writes every output of a run (data files and manifest) and returns the data file list.
std::vector<OutputFile> write_run(const RunResult& result, const ScenarioConfig& config,
                                  const std::filesystem::path& out_dir, const RunTiming& timing);

/// Dumps a state (densities and agents) after a numerical failure.
void write_state_dump(const SimulationState& state, const ScenarioConfig& config,
                      const std::filesystem::path& out_dir);

struct ProbeSeries {
  Population road{Population::two};
  double position{0.0};
  std::vector<double> times;
  std::vector<double> values;
};

/// Reads a probes.csv back, one series per (road, x_long) in file order.
std::vector<ProbeSeries> read_probe_file(const std::filesystem::path& path);

}  // namespace crossroads
