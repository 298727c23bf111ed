#include "sirs/cli/run.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <ostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "sirs/cli/report.hpp"
#include "sirs/errors.hpp"
#include "sirs/hopf.hpp"

namespace sirs::cli {

namespace fs = std::filesystem;
using nlohmann::json;

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Match: return "match";
    case Verdict::Mismatch: return "mismatch";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

int displacement_sign_changes(const CycleSearch& s, double d_floor) {
  int last = 0, changes = 0;
  for (double d : s.d) {
    if (std::abs(d) <= d_floor) continue;
    const int sg = d > 0 ? 1 : -1;
    if (last != 0 && sg != last) ++changes;
    last = sg;
  }
  return changes;
}

std::vector<State> fan_starts(const ModelParams& m, std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  // explicit conversion keeps the sequence identical across standard libraries
  auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::vector<State> out;
  while (static_cast<int>(out.size()) < count) {
    const double x = unit() * m.lambda0(), y = unit() * m.lambda0();
    if (x + y <= m.lambda0() && x > 0) out.push_back({x, y});
  }
  return out;
}

namespace {

// Tail of the displacement after the outermost crossing shrinks steadily:
// the shape expected when a further crossing lies just beyond resolution.
bool trending_to_crossing(const CycleSearch& s) {
  const double r_last = s.cycles.empty() ? 0 : s.cycles.back().radius;
  std::vector<double> tail;
  for (std::size_t i = 0; i < s.r.size(); ++i)
    if (s.r[i] > r_last) tail.push_back(std::abs(s.d[i]));
  if (tail.size() < 4) return false;
  for (std::size_t i = tail.size() - 4; i + 1 < tail.size(); ++i)
    if (!(tail[i + 1] < tail[i])) return false;
  return true;
}

void run_cycles_pipeline(const FigureRegistryEntry& e, const FigureOptions& opt, FigureOutcome& out) {
  const ModelParams m = figure_params(e);
  out.equilibria = endemic_equilibria(m);
  bool inconclusive = false;
  for (const auto& eq : out.equilibria) {
    if (!is_focus(eq.kind) || !(eq.det > 0) || eq.trace * eq.trace >= 4 * eq.det) continue;
    FocusCycles fc;
    fc.focus = eq;
    CycleOptions co;
    co.rel_tol = opt.rel_tol;
    co.exec = opt.exec;
    try {
      fc.search = find_limit_cycles(m, eq.z, co);
    } catch (const Inconclusive& x) {
      fc.search = x.partial();
      fc.inconclusive = true;
      fc.note = x.what();
      inconclusive = true;
    }
    out.cycle_count += static_cast<int>(fc.search.cycles.size());
    out.sign_changes = std::max(out.sign_changes, displacement_sign_changes(fc.search));
    out.foci.push_back(std::move(fc));
  }
  std::ostringstream d;
  d << "detected " << out.cycle_count << " cycle(s), expected " << e.expected_cycles << "; "
    << out.sign_changes << " displacement sign change(s)";
  if (out.cycle_count == e.expected_cycles) {
    out.verdict = Verdict::Match;
  } else if (inconclusive) {
    out.verdict = Verdict::Inconclusive;
    d << "; search inconclusive";
  } else if (e.expected_cycles >= 3 && out.sign_changes >= 2 &&
             std::any_of(out.foci.begin(), out.foci.end(),
                         [](const FocusCycles& f) { return trending_to_crossing(f.search); })) {
    out.verdict = Verdict::Inconclusive;
    d << "; displacement tail trends toward a further crossing below resolution";
  } else {
    out.verdict = Verdict::Mismatch;
  }
  out.detail = d.str();
}

std::vector<std::string> sweep_tokens(const SweepResult& s) {
  std::vector<std::string> tok;
  if (!s.points.empty()) tok.push_back("cycle-count-" + std::to_string(s.points[0].cycles));
  for (std::size_t i = 0; i + 1 < s.points.size(); ++i) {
    for (auto kind : {SweepEventKind::SaddleNode, SweepEventKind::Hopf, SweepEventKind::SuspectedHomoclinic,
                      SweepEventKind::CycleCountChange}) {
      for (const auto& ev : s.events) {
        if (ev.index_a != i || ev.kind != kind) continue;
        tok.push_back(to_string(kind));
        if (kind == SweepEventKind::CycleCountChange && ev.count_b == 0 && ev.count_a > 0)
          tok.push_back("cycle-count-to-zero");
      }
    }
    tok.push_back("cycle-count-" + std::to_string(s.points[i + 1].cycles));
  }
  return tok;
}

bool is_subsequence(const std::vector<std::string>& want, const std::vector<std::string>& have) {
  std::size_t j = 0;
  for (const auto& h : have)
    if (j < want.size() && h == want[j]) ++j;
  return j == want.size();
}

void run_sweep_pipeline(const FigureRegistryEntry& e, const FigureOptions& opt, FigureOutcome& out) {
  SweepOptions so;
  so.cycles.rel_tol = opt.rel_tol;
  so.exec = opt.exec;
  out.sweep = bifurcation_sweep(figure_params(e), e.sweep_parameter, e.grid, so);
  out.observed = sweep_tokens(*out.sweep);
  const bool inconclusive = std::any_of(out.sweep->points.begin(), out.sweep->points.end(),
                                        [](const SweepPoint& p) { return p.inconclusive; });
  std::ostringstream d;
  d << "observed:";
  for (const auto& t : out.observed) d << ' ' << t;
  if (is_subsequence(e.expected_events, out.observed))
    out.verdict = Verdict::Match;
  else
    out.verdict = inconclusive ? Verdict::Inconclusive : Verdict::Mismatch;
  out.detail = d.str();
}

void run_classification_pipeline(const FigureRegistryEntry& e, FigureOutcome& out) {
  const ModelParams m = figure_params(e);
  out.equilibria = endemic_equilibria(m);
  if (out.equilibria.empty()) {
    out.verdict = Verdict::Mismatch;
    out.detail = "no endemic equilibrium";
    return;
  }
  // the degenerate point is the one with the smallest |det|
  const auto it = std::min_element(out.equilibria.begin(), out.equilibria.end(),
                                   [](const auto& a, const auto& b) { return std::abs(a.det) < std::abs(b.det); });
  out.degenerate = classify_degenerate(m, it->z);
  const std::string got = to_string(*out.degenerate);
  out.verdict = got == e.expected_kind ? Verdict::Match : Verdict::Mismatch;
  out.detail = "equilibrium z = " + format_number(it->z) + " classified " + got + ", expected " + e.expected_kind;
}

}  // namespace

FigureOutcome evaluate_figure(const FigureRegistryEntry& e, const FigureOptions& opt) {
  FigureOutcome out;
  out.id = e.id;
  switch (e.pipeline) {
    case FigurePipeline::Cycles: run_cycles_pipeline(e, opt, out); break;
    case FigurePipeline::Sweep: run_sweep_pipeline(e, opt, out); break;
    case FigurePipeline::Classification: run_classification_pipeline(e, out); break;
  }
  return out;
}

namespace {

std::string num(double v) { return format_number(v); }

class Writer {
 public:
  Writer(const ScenarioConfig& cfg) : dir_(cfg.out_dir), fmt_(cfg.format) {}
  bool csv() const { return fmt_ != Format::Svg; }
  bool svg() const { return fmt_ != Format::Csv; }
  void file(const std::string& name, const std::string& content) {
    write_atomic(dir_ / name, content);
    files_.push_back(name);
  }
  void csv_file(const std::string& name, const CsvTable& t) {
    if (csv()) file(name, t.str());
  }
  void svg_file(const std::string& name, const std::string& content) {
    if (svg()) file(name, content);
  }
  const std::vector<std::string>& files() const { return files_; }

 private:
  fs::path dir_;
  Format fmt_;
  std::vector<std::string> files_;
};

json params_json(const ModelParams& m) {
  return {{"p", m.p()}, {"lambda0", m.lambda0()}, {"gamma", m.gamma()},
          {"eta", m.eta()}, {"k", m.k()}, {"r0", m.r0()}};
}

CsvTable equilibria_table(const std::vector<EquilibriumReport>& eqs) {
  CsvTable t({"z", "y", "trace", "det", "kind", "multiplicity", "res_H", "res_Hp"});
  for (const auto& e : eqs)
    t.add_row({num(e.z), num(e.y), num(e.trace), num(e.det), to_string(e.kind), std::to_string(e.multiplicity),
               num(e.res_H), num(e.res_Hp)});
  return t;
}

json equilibria_json(const ModelParams& m, const std::vector<EquilibriumReport>& eqs) {
  json arr = json::array();
  for (const auto& e : eqs)
    arr.push_back({{"z", e.z}, {"y", e.y}, {"trace", e.trace}, {"det", e.det}, {"kind", to_string(e.kind)},
                   {"multiplicity", e.multiplicity}});
  return {{"origin", to_string(classify_origin(m))}, {"r0", m.r0()}, {"endemic", arr}};
}

CsvTable displacement_table(const CycleSearch& s) {
  CsvTable t({"r", "P_of_r", "d"});
  for (std::size_t i = 0; i < s.r.size(); ++i) t.add_row({num(s.r[i]), num(s.P[i]), num(s.d[i])});
  return t;
}

void add_cycle_rows(CsvTable& t, const std::string& focus, const CycleSearch& s) {
  for (const auto& c : s.cycles)
    t.add_row({focus, num(c.radius), num(c.period), num(c.amplitude), num(c.slope), num(c.slope_uncertainty),
               to_string(c.stability), num(c.residual)});
}

CsvTable cycles_table() {
  return CsvTable({"focus_z", "radius", "period", "amplitude", "slope", "slope_uncertainty", "stability", "residual"});
}

std::string displacement_svg(const std::string& title, const std::vector<const CycleSearch*>& searches) {
  std::vector<SvgSeries> series;
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c"};
  int c = 0;
  for (const CycleSearch* s : searches) {
    SvgSeries sr;
    sr.label = "focus z=" + format_number(s->section.anchor.x);
    sr.color = colors[c++ % 3];
    for (std::size_t i = 0; i < s->r.size(); ++i) sr.points.push_back({s->r[i], s->d[i]});
    series.push_back(sr);
    SvgSeries cyc;
    cyc.markers = true;
    cyc.color = "#000000";
    for (const auto& rec : s->cycles) cyc.points.push_back({rec.radius, 0.0});
    series.push_back(cyc);
  }
  return svg_plot(title, "r", "d(r) = P(r) - r", series, true);
}

json cycles_json(const CycleSearch& s) {
  json arr = json::array();
  for (const auto& c : s.cycles)
    arr.push_back({{"radius", c.radius}, {"period", c.period}, {"amplitude", c.amplitude}, {"slope", c.slope},
                   {"stability", to_string(c.stability)}, {"residual", c.residual}});
  return {{"anchor", {s.section.anchor.x, s.section.anchor.y}},
          {"direction", {s.section.direction[0], s.section.direction[1]}},
          {"r_max", s.r_max},
          {"samples", s.r.size()},
          {"alternating", s.alternating},
          {"note", s.note},
          {"cycles", arr}};
}

struct Fan {
  CsvTable table{{"traj", "t", "x", "y"}};
  std::vector<SvgSeries> series;
};

Fan phase_fan(const ModelParams& m, const std::vector<State>& starts, double t_end, double dt, double rel_tol) {
  Fan f;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const Trajectory tr = integrate(m, starts[i], t_end, rel_tol, 1e-14, dt);
    SvgSeries s;
    s.color = i % 2 ? "#1f77b4" : "#ff7f0e";
    for (std::size_t j = 0; j < tr.t.size(); ++j) {
      f.table.add_row({std::to_string(i), num(tr.t[j]), num(tr.states[j].x), num(tr.states[j].y)});
      s.points.push_back({tr.states[j].x, tr.states[j].y});
    }
    f.series.push_back(std::move(s));
  }
  return f;
}

SvgSeries rest_points_series(const ModelParams& m, const std::vector<EquilibriumReport>& eqs) {
  SvgSeries s;
  s.markers = true;
  s.color = "#000000";
  s.label = "equilibria";
  s.points.push_back({0, 0});
  for (const auto& e : eqs) s.points.push_back({e.z, e.y});
  (void)m;
  return s;
}

CsvTable sweep_table(const SweepResult& r) {
  CsvTable t({"value", "equilibria", "kinds", "cycles", "inconclusive", "max_period_ratio", "error"});
  for (const auto& p : r.points) {
    std::string kinds;
    for (const auto& e : p.equilibria) kinds += (kinds.empty() ? "" : ";") + std::string(to_string(e.kind));
    t.add_row({num(p.value), std::to_string(p.equilibria.size()), kinds, std::to_string(p.cycles),
               p.inconclusive ? "1" : "0", num(p.max_period_ratio), p.error});
  }
  return t;
}

CsvTable events_table(const SweepResult& r) {
  CsvTable t({"kind", "index_a", "index_b", "a", "b", "count_a", "count_b", "interpretation"});
  for (const auto& e : r.events)
    t.add_row({to_string(e.kind), std::to_string(e.index_a), std::to_string(e.index_b), num(e.a), num(e.b),
               std::to_string(e.count_a), std::to_string(e.count_b), e.interpretation});
  return t;
}

std::string sweep_svg(const SweepResult& r) {
  SvgSeries eq{"equilibria", {}, false, "#1f77b4"}, cy{"cycles", {}, false, "#d62728"};
  for (const auto& p : r.points) {
    eq.points.push_back({p.value, static_cast<double>(p.equilibria.size())});
    cy.points.push_back({p.value, static_cast<double>(p.cycles)});
  }
  eq.markers = cy.markers = true;
  return svg_plot("sweep over " + r.parameter, r.parameter, "count", {eq, cy});
}

json sweep_json(const SweepResult& r) {
  json pts = json::array(), evs = json::array();
  for (const auto& p : r.points) {
    json kinds = json::array();
    for (const auto& e : p.equilibria) kinds.push_back(to_string(e.kind));
    pts.push_back({{"value", p.value}, {"kinds", kinds}, {"cycles", p.cycles}, {"inconclusive", p.inconclusive},
                   {"error", p.error}});
  }
  for (const auto& e : r.events)
    evs.push_back({{"kind", to_string(e.kind)}, {"a", e.a}, {"b", e.b}, {"count_a", e.count_a},
                   {"count_b", e.count_b}, {"interpretation", e.interpretation}});
  return {{"parameter", r.parameter}, {"points", pts}, {"events", evs}};
}

const ModelParams& require_params(const ScenarioConfig& cfg) {
  if (!cfg.params) throw ConfigError("config: task '" + cfg.task + "' needs a params or original block");
  return *cfg.params;
}

int task_equilibria(const ScenarioConfig& cfg, Writer& w, json& result, std::ostream& log) {
  const ModelParams& m = require_params(cfg);
  const auto eqs = endemic_equilibria(m);
  w.csv_file("equilibria.csv", equilibria_table(eqs));
  result["equilibria"] = equilibria_json(m, eqs);
  log << eqs.size() << " endemic equilibri" << (eqs.size() == 1 ? "um" : "a") << "; origin "
      << to_string(classify_origin(m)) << " (R0 = " << num(m.r0()) << ")\n";
  for (const auto& e : eqs) log << "  z = " << num(e.z) << "  " << to_string(e.kind) << '\n';
  return kExitOk;
}

int task_classify(const ScenarioConfig& cfg, Writer& w, json& result, std::ostream& log) {
  const ModelParams& m = require_params(cfg);
  const auto eqs = endemic_equilibria(m);
  CsvTable t({"z", "y", "trace", "det", "kind", "degenerate_kind"});
  t.add_row({"0", "0", "", "", to_string(classify_origin(m)), ""});
  json arr = json::array();
  for (const auto& e : eqs) {
    std::string deg;
    if (e.multiplicity > 1 || e.kind == EquilibriumKind::SaddleNode || e.kind == EquilibriumKind::DegenerateDoubleZero ||
        e.kind == EquilibriumKind::DegenerateNodeStable || e.kind == EquilibriumKind::DegenerateNodeUnstable)
      deg = to_string(classify_degenerate(m, e.z));
    t.add_row({num(e.z), num(e.y), num(e.trace), num(e.det), to_string(e.kind), deg});
    arr.push_back({{"z", e.z}, {"kind", to_string(e.kind)}, {"degenerate_kind", deg}});
    log << "z = " << num(e.z) << "  " << to_string(e.kind) << (deg.empty() ? "" : "  -> " + deg) << '\n';
  }
  w.csv_file("classify.csv", t);
  result["origin"] = to_string(classify_origin(m));
  result["equilibria"] = arr;
  return kExitOk;
}

int task_hopf(const ScenarioConfig& cfg, Writer& w, json& result, std::ostream& log) {
  std::vector<LocusPoint> points;
  if (cfg.locus) points.push_back(*cfg.locus);
  if (cfg.params) {
    for (const auto& e : endemic_equilibria(*cfg.params))
      if (e.det > 0) points.push_back({e.z, cfg.params->p(), cfg.params->eta(), cfg.params->k()});
  }
  if (points.empty()) throw ConfigError("hopf: give options.locus or params with a det > 0 equilibrium");
  CsvTable t({"z", "p", "eta", "k", "lambda0_breve", "gamma_breve", "D", "theta1", "theta2", "theta3", "theta4",
              "order", "stability", "f1", "L11", "L22"});
  json arr = json::array();
  for (const auto& pt : points) {
    const HopfLocus h = hopf_locus(pt.z, pt.p, pt.eta, pt.k);
    const WeakFocusOrder wf = weak_focus_order(pt.z, pt.p, pt.eta, pt.k);
    const FocalValues& fv = wf.values;
    std::vector<std::string> row = {num(pt.z), num(pt.p), num(pt.eta), num(pt.k), num(h.lambda0_breve),
                                    num(h.gamma_breve), num(fv.D)};
    for (int i = 0; i < 4; ++i) row.push_back(i < static_cast<int>(fv.theta.size()) ? num(fv.theta[i]) : "");
    row.push_back(wf.order ? std::to_string(*wf.order) : "");
    row.push_back(to_string(wf.stability));
    row.push_back(num(fv.f1));
    row.push_back(fv.L11 ? num(*fv.L11) : "");
    row.push_back(fv.L22 ? num(*fv.L22) : "");
    t.add_row(row);
    arr.push_back({{"z", pt.z}, {"theta", fv.theta}, {"order", wf.order ? *wf.order : 0},
                   {"stability", to_string(wf.stability)}});
    log << "z = " << num(pt.z) << ": order " << (wf.order ? std::to_string(*wf.order) : "undetermined") << ", "
        << to_string(wf.stability) << '\n';
  }
  w.csv_file("focal.csv", t);
  result["focal"] = arr;
  return kExitOk;
}

int task_cycles(const ScenarioConfig& cfg, Writer& w, json& result, std::ostream& log) {
  const ModelParams& m = require_params(cfg);
  double z = 0;
  if (cfg.focus_z) {
    z = *cfg.focus_z;
  } else {
    bool found = false;
    for (const auto& e : endemic_equilibria(m))
      if (is_focus(e.kind) && e.trace * e.trace < 4 * e.det) z = e.z, found = true;
    if (!found) throw DomainError("cycles: no focus equilibrium");
  }
  CycleOptions co;
  co.rel_tol = cfg.rel_tol;
  co.r_max = cfg.r_max;
  co.samples = cfg.samples;
  CycleSearch s;
  int status = kExitOk;
  try {
    s = find_limit_cycles(m, z, co);
  } catch (const Inconclusive& x) {
    s = x.partial();
    status = kExitInconclusive;
    result["inconclusive"] = x.what();
  }
  w.csv_file("displacement.csv", displacement_table(s));
  CsvTable ct = cycles_table();
  add_cycle_rows(ct, num(z), s);
  w.csv_file("cycles.csv", ct);
  w.svg_file("cycles.svg", displacement_svg("displacement", {&s}));
  result["cycles"] = cycles_json(s);
  log << s.cycles.size() << " limit cycle(s) around z = " << num(z) << '\n';
  for (const auto& c : s.cycles) log << "  r = " << num(c.radius) << "  " << to_string(c.stability) << '\n';
  return status;
}

int task_simulate(const ScenarioConfig& cfg, Writer& w, json& result, std::ostream& log) {
  const ModelParams& m = require_params(cfg);
  const std::vector<State> starts = cfg.initial.empty() ? fan_starts(m, cfg.seed, 8) : cfg.initial;
  Fan f = phase_fan(m, starts, cfg.t_end, cfg.sample_dt, cfg.rel_tol);
  f.series.push_back(rest_points_series(m, endemic_equilibria(m)));
  w.csv_file("trajectory.csv", f.table);
  w.svg_file("phase.svg", svg_plot("phase portrait", "x", "y", f.series));
  result["trajectories"] = starts.size();
  log << starts.size() << " trajectories to t = " << num(cfg.t_end) << '\n';
  return kExitOk;
}

int task_sweep(const ScenarioConfig& cfg, Writer& w, json& result, std::ostream& log) {
  const ModelParams& m = require_params(cfg);
  if (!cfg.grid) throw ConfigError("options.grid: required for sweep");
  SweepOptions so;
  so.cycles.rel_tol = cfg.rel_tol;
  so.cycles.samples = cfg.samples;
  const SweepResult r = bifurcation_sweep(m, cfg.grid->parameter, cfg.grid->values, so);
  w.csv_file("sweep.csv", sweep_table(r));
  w.csv_file("events.csv", events_table(r));
  w.svg_file("sweep.svg", sweep_svg(r));
  result["sweep"] = sweep_json(r);
  for (const auto& e : r.events)
    log << to_string(e.kind) << " in [" << num(e.a) << ", " << num(e.b) << "] " << e.interpretation << '\n';
  const bool inc = std::any_of(r.points.begin(), r.points.end(), [](const SweepPoint& p) { return p.inconclusive; });
  return inc ? kExitInconclusive : kExitOk;
}

int task_figure(const ScenarioConfig& cfg, Writer& w, json& result, std::ostream& log) {
  if (cfg.figure.empty()) throw ConfigError("options.figure: required for figure");
  const FigureRegistryEntry& e = find_figure(cfg.figure);
  FigureOptions fo;
  fo.rel_tol = cfg.rel_tol;
  const FigureOutcome out = evaluate_figure(e, fo);
  const ModelParams m = figure_params(e);
  result["figure"] = e.id;
  result["params"] = params_json(m);
  result["provenance"] = e.provenance;
  result["verdict"] = to_string(out.verdict);
  result["detail"] = out.detail;

  if (e.pipeline == FigurePipeline::Cycles) {
    CsvTable disp({"focus_z", "r", "P_of_r", "d"});
    CsvTable ct = cycles_table();
    json foci = json::array();
    std::vector<const CycleSearch*> searches;
    std::vector<State> starts = fan_starts(m, cfg.seed, 8);
    for (const auto& f : out.foci) {
      for (std::size_t i = 0; i < f.search.r.size(); ++i)
        disp.add_row({num(f.focus.z), num(f.search.r[i]), num(f.search.P[i]), num(f.search.d[i])});
      add_cycle_rows(ct, num(f.focus.z), f.search);
      foci.push_back(cycles_json(f.search));
      searches.push_back(&f.search);
      for (const auto& c : f.search.cycles)
        starts.push_back({c.anchor.x + c.radius * c.direction[0], c.anchor.y + c.radius * c.direction[1]});
    }
    w.csv_file("displacement.csv", disp);
    w.csv_file("cycles.csv", ct);
    w.svg_file("cycles.svg", displacement_svg("figure " + e.id + " displacement", searches));
    Fan fan = phase_fan(m, starts, cfg.t_end, cfg.sample_dt, cfg.rel_tol);
    fan.series.push_back(rest_points_series(m, out.equilibria));
    w.csv_file("phase.csv", fan.table);
    w.svg_file("phase.svg", svg_plot("figure " + e.id + " phase portrait", "x", "y", fan.series));
    result["foci"] = foci;
    result["cycle_count"] = out.cycle_count;
  } else if (e.pipeline == FigurePipeline::Sweep) {
    w.csv_file("sweep.csv", sweep_table(*out.sweep));
    w.csv_file("events.csv", events_table(*out.sweep));
    w.svg_file("sweep.svg", sweep_svg(*out.sweep));
    result["sweep"] = sweep_json(*out.sweep);
    result["observed"] = out.observed;
  } else {
    w.csv_file("equilibria.csv", equilibria_table(out.equilibria));
    // dynamics here are illustrative only; the verdict comes from the classification
    Fan fan = phase_fan(m, fan_starts(m, cfg.seed, 8), cfg.t_end, cfg.sample_dt, cfg.rel_tol);
    fan.series.push_back(rest_points_series(m, out.equilibria));
    w.csv_file("phase.csv", fan.table);
    w.svg_file("phase.svg", svg_plot("figure " + e.id + " phase portrait", "x", "y", fan.series));
    result["equilibria"] = equilibria_json(m, out.equilibria);
    if (out.degenerate) result["degenerate_kind"] = to_string(*out.degenerate);
  }
  w.file("verdict.txt", std::string(to_string(out.verdict)) + "\n" + out.detail + "\n");
  log << "figure " << e.id << ": " << to_string(out.verdict) << " (" << out.detail << ")\n";
  return out.verdict == Verdict::Inconclusive ? kExitInconclusive : kExitOk;
}

}  // namespace

int run_scenario(const ScenarioConfig& cfg, std::ostream& log) {
  if (!known_task(cfg.task)) throw ConfigError("unknown task '" + cfg.task + "'");
  if (needs_params(cfg.task)) require_params(cfg);
  set_parallel_jobs(cfg.jobs);
  ensure_writable_dir(cfg.out_dir);
  Writer w(cfg);
  json result;
  result["task"] = cfg.task;
  result["seed"] = cfg.seed;
  result["rel_tol"] = cfg.rel_tol;
  if (cfg.params) result["params"] = params_json(*cfg.params);
  std::ostringstream summary;
  int status = kExitOk;
  if (cfg.task == "equilibria") status = task_equilibria(cfg, w, result, summary);
  else if (cfg.task == "classify") status = task_classify(cfg, w, result, summary);
  else if (cfg.task == "hopf") status = task_hopf(cfg, w, result, summary);
  else if (cfg.task == "cycles") status = task_cycles(cfg, w, result, summary);
  else if (cfg.task == "simulate") status = task_simulate(cfg, w, result, summary);
  else if (cfg.task == "sweep") status = task_sweep(cfg, w, result, summary);
  else status = task_figure(cfg, w, result, summary);
  result["status"] = status;
  result["files"] = w.files();
  w.file("result.json", result.dump(2) + "\n");
  w.file("summary.txt", summary.str());
  log << summary.str();
  return status;
}

int run_scenario_status(const ScenarioConfig& cfg, std::ostream& log, std::ostream& err) {
  try {
    return run_scenario(cfg, log);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const UnknownFigure& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const Inconclusive& e) {
    err << "inconclusive: " << e.what() << '\n';
    return kExitInconclusive;
  } catch (const std::exception& e) {
    // convergence failures, ill-conditioned solves, integrator breakdowns
    err << "numerical failure: " << e.what() << '\n';
    return kExitInconclusive;
  }
}

}  // namespace sirs::cli
