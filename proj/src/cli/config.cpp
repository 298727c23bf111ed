#include "sirs/cli/config.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "sirs/errors.hpp"

namespace sirs::cli {

using nlohmann::json;

namespace {

const std::vector<std::string> kTasks = {"equilibria", "classify", "hopf", "cycles",
                                         "simulate",   "sweep",    "figure"};

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

double number(const json& obj, const std::string& where, const char* key) {
  if (!obj.contains(key)) throw ConfigError(where + "." + key + ": missing");
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  return v.get<double>();
}

double number_or(const json& obj, const std::string& where, const char* key, double fallback) {
  return obj.contains(key) ? number(obj, where, key) : fallback;
}

int integer_or(const json& obj, const std::string& where, const char* key, int fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
  return v.get<int>();
}

std::string text_or(const json& obj, const std::string& where, const char* key, std::string fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(where + "." + key + ": expected a string");
  return v.get<std::string>();
}

GridSpec parse_grid(const json& g) {
  GridSpec spec;
  only_keys(g, "options.grid", {"parameter", "values", "from", "to", "count"});
  spec.parameter = text_or(g, "options.grid", "parameter", "");
  if (spec.parameter.empty()) throw ConfigError("options.grid.parameter: missing");
  if (g.contains("values")) {
    if (g.contains("from") || g.contains("to") || g.contains("count"))
      throw ConfigError("options.grid: give either values or from/to/count");
    if (!g["values"].is_array()) throw ConfigError("options.grid.values: expected an array");
    for (const auto& v : g["values"]) {
      if (!v.is_number()) throw ConfigError("options.grid.values: expected numbers");
      spec.values.push_back(v.get<double>());
    }
  } else {
    const double from = number(g, "options.grid", "from"), to = number(g, "options.grid", "to");
    const int count = integer_or(g, "options.grid", "count", 0);
    if (count < 2) throw ConfigError("options.grid.count: need at least 2 points");
    for (int i = 0; i < count; ++i) spec.values.push_back(from + (to - from) * i / (count - 1));
  }
  if (spec.values.empty()) throw ConfigError("options.grid: empty grid");
  return spec;
}

}  // namespace

Format parse_format(const std::string& s) {
  if (s == "csv") return Format::Csv;
  if (s == "svg") return Format::Svg;
  if (s == "both") return Format::Both;
  throw ConfigError("format: expected csv, svg or both, got '" + s + "'");
}

const char* to_string(Format f) {
  switch (f) {
    case Format::Csv: return "csv";
    case Format::Svg: return "svg";
    case Format::Both: return "both";
  }
  return "?";
}

bool known_task(const std::string& task) {
  return std::find(kTasks.begin(), kTasks.end(), task) != kTasks.end();
}

bool needs_params(const std::string& task) { return task != "figure" && task != "hopf"; }

ScenarioConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const long line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n');
    throw ConfigError("line " + std::to_string(line) + ": malformed JSON (" + e.what() + ")");
  }
  only_keys(doc, "config", {"version", "task", "params", "original", "options", "output", "seed"});
  if (!doc.contains("version")) throw ConfigError("config.version: missing");
  if (!doc["version"].is_number_integer() || doc["version"].get<int>() != 1)
    throw ConfigError("config.version: only version 1 is supported");

  ScenarioConfig cfg;
  cfg.task = text_or(doc, "config", "task", "");
  if (!cfg.task.empty() && !known_task(cfg.task)) throw ConfigError("config.task: unknown task '" + cfg.task + "'");
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) throw ConfigError("config.seed: expected an unsigned integer");
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }

  if (doc.contains("params") && doc.contains("original"))
    throw ConfigError("config: give exactly one of params and original");
  if (doc.contains("params")) {
    const json& p = doc["params"];
    only_keys(p, "params", {"p", "lambda0", "gamma", "eta", "k"});
    cfg.params = validate_params(number(p, "params", "p"), number(p, "params", "lambda0"),
                                 number(p, "params", "gamma"), number(p, "params", "eta"),
                                 number(p, "params", "k"));
  }
  if (doc.contains("original")) {
    const json& o = doc["original"];
    only_keys(o, "original", {"b", "d", "beta", "delta", "mu", "upsilon", "k"});
    OriginalParams op;
    op.b = number(o, "original", "b");
    op.d = number(o, "original", "d");
    op.beta = number(o, "original", "beta");
    op.delta = number(o, "original", "delta");
    op.mu = number(o, "original", "mu");
    op.upsilon = number(o, "original", "upsilon");
    op.k = number(o, "original", "k");
    cfg.original = op;
    cfg.params = reduce_original_params(op);
  }

  if (doc.contains("options")) {
    const json& o = doc["options"];
    only_keys(o, "options",
              {"grid", "initial", "t_end", "sample_dt", "rel_tol", "r_max", "samples", "focus_z", "figure",
               "locus", "jobs"});
    if (o.contains("grid")) cfg.grid = parse_grid(o["grid"]);
    if (o.contains("initial")) {
      if (!o["initial"].is_array()) throw ConfigError("options.initial: expected an array of [x, y]");
      for (const auto& s : o["initial"]) {
        if (!s.is_array() || s.size() != 2 || !s[0].is_number() || !s[1].is_number())
          throw ConfigError("options.initial: expected [x, y] pairs");
        cfg.initial.push_back({s[0].get<double>(), s[1].get<double>()});
      }
    }
    cfg.t_end = number_or(o, "options", "t_end", cfg.t_end);
    cfg.sample_dt = number_or(o, "options", "sample_dt", cfg.sample_dt);
    cfg.rel_tol = number_or(o, "options", "rel_tol", cfg.rel_tol);
    cfg.r_max = number_or(o, "options", "r_max", cfg.r_max);
    cfg.samples = integer_or(o, "options", "samples", cfg.samples);
    cfg.jobs = integer_or(o, "options", "jobs", cfg.jobs);
    if (o.contains("focus_z")) cfg.focus_z = number(o, "options", "focus_z");
    cfg.figure = text_or(o, "options", "figure", "");
    if (o.contains("locus")) {
      const json& l = o["locus"];
      only_keys(l, "options.locus", {"z", "p", "eta", "k"});
      cfg.locus = LocusPoint{number(l, "options.locus", "z"), number(l, "options.locus", "p"),
                             number(l, "options.locus", "eta"), number(l, "options.locus", "k")};
    }
  }
  if (doc.contains("output")) {
    const json& o = doc["output"];
    only_keys(o, "output", {"dir", "format"});
    cfg.out_dir = text_or(o, "output", "dir", cfg.out_dir);
    cfg.format = parse_format(text_or(o, "output", "format", "csv"));
  }
  if (!(cfg.rel_tol >= 1e-13)) throw ConfigError("options.rel_tol: must be at least 1e-13");
  if (cfg.samples < 2) throw ConfigError("options.samples: must be at least 2");
  if (!(cfg.t_end > 0)) throw ConfigError("options.t_end: must be positive");
  if (!(cfg.sample_dt >= 0)) throw ConfigError("options.sample_dt: must be non-negative");
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace sirs::cli
