#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dnlsgauge/gauge_flow.hpp"
#include "dnlsgauge/gaussian_measure.hpp"
#include "dnlsgauge/json_io.hpp"

namespace dnlsgauge {

/// Study names accepted in configs.
const std::vector<std::string>& study_names();

struct StudyConfig {
  std::string study;
  MeasureSpec measure;
  FlowOptions flow;
  Json params;  // fully resolved: every default filled in
  std::string output_dir;
  unsigned workers = 0;
};

/// Validates and fills defaults. Accepts either a config or a manifest (its
/// "resolved_config" member). DNLSGAUGE_SEED and DNLSGAUGE_OUTPUT_DIR supply
/// master_seed and output_dir when the config leaves them out.
StudyConfig parse_study_config(const Json& j);

/// Canonical JSON of the resolved config. The hash covers everything except
/// workers and output_dir.
Json resolved_config_json(const StudyConfig& cfg);
std::string config_hash(const StudyConfig& cfg);

struct CsvRow {
  std::string statistic;
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t n = 0;
};

/// Runs the study in memory.
std::vector<CsvRow> run_study(const StudyConfig& cfg);

/// Header "config_hash,statistic,value,stderr,n,seed" plus one line per row.
std::string render_csv(const StudyConfig& cfg, const std::vector<CsvRow>& rows);

struct RunArtifacts {
  std::string csv_path;
  std::string manifest_path;
  std::string hash;
  std::size_t rows = 0;
};

/// Runs the study and writes <study>_<hash>.csv and <study>_<hash>.manifest.json
/// into cfg.output_dir (created if needed).
RunArtifacts run_and_write(const StudyConfig& cfg);

}  // namespace dnlsgauge
