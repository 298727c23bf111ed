#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sirs/model.hpp"

namespace sirs::cli {

enum class Format { Csv, Svg, Both };

struct GridSpec {
  std::string parameter;
  std::vector<double> values;
};

// Point on the trace-zero locus given by (z, p, eta, k).
struct LocusPoint {
  double z = 0, p = 0, eta = 0, k = 0;
};

struct ScenarioConfig {
  std::string task;  // equilibria, classify, hopf, cycles, simulate, sweep, figure
  std::optional<ModelParams> params;
  std::optional<OriginalParams> original;  // kept for reporting
  std::optional<LocusPoint> locus;
  std::optional<GridSpec> grid;
  std::vector<State> initial;
  double t_end = 200;
  double sample_dt = 0.1;
  double rel_tol = 1e-12;
  double r_max = 0;
  int samples = 64;
  std::optional<double> focus_z;
  std::string figure;
  std::string out_dir = "out";
  Format format = Format::Csv;
  std::uint64_t seed = 0;
  int jobs = 0;
};

Format parse_format(const std::string& s);
const char* to_string(Format f);

// Parses and validates a JSON document. Throws ConfigError with a line or
// field diagnostic; parameter violations surface as DomainError.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);

bool needs_params(const std::string& task);
bool known_task(const std::string& task);

}  // namespace sirs::cli
