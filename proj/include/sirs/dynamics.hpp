#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sirs/equilibria.hpp"
#include "sirs/execution.hpp"
#include "sirs/integrator.hpp"
#include "sirs/model.hpp"

namespace sirs {

inline constexpr double kRegionSlack = 1e-9;

struct Trajectory {
  std::vector<double> t;
  std::vector<State> states;
  IntegratorStats stats;
};

// Called after every accepted step; returning false stops the integration.
using StepHook = std::function<bool(const Dop853&)>;

// Samples every accepted step, or on a uniform grid when sample_dt > 0.
Trajectory integrate(const ModelParams& m, const State& initial, double t_end,
                     double rel_tol = 1e-12, double abs_tol = 1e-14, double sample_dt = 0,
                     const StepHook& hook = {});

// Ray section through a focus.
struct Section {
  State anchor;
  Vec2 direction{1, 0};  // unit vector
  double omega = 0;      // linear rotation rate, sign gives the turning sense
  double linear_period = 0;
  double ray_limit = 0;  // distance along the ray to the boundary of the region
  std::vector<State> rest_points;  // other equilibria, origin included
  std::vector<State> saddles;      // subset used for the homoclinic heuristic
};

Section make_section(const ModelParams& m, double z);

struct ReturnOptions {
  double rel_tol = 1e-12;
  double budget_periods = 1e4;
};

struct ReturnResult {
  double radius = 0;       // P(r)
  double time = 0;         // return time
  double amplitude = 0;    // max |x - z| along the orbit
  double saddle_gap = 0;   // closest approach to a saddle, inf if none
  std::size_t steps = 0;
};

// Throws NoReturn.
ReturnResult poincare_return_detail(const ModelParams& m, const Section& s, double r,
                                    const ReturnOptions& opt = {});
double poincare_return(const ModelParams& m, const Section& s, double r,
                       const ReturnOptions& opt = {});

enum class CycleStability { Attracting, Repelling, NeutralUncertain };
const char* to_string(CycleStability s);

struct LimitCycleRecord {
  State anchor;
  Vec2 direction{1, 0};
  double radius = 0;
  double period = 0;
  double amplitude = 0;
  double slope = 0;              // P'(r)
  double slope_uncertainty = 0;
  CycleStability stability = CycleStability::NeutralUncertain;
  double residual = 0;           // |P(r) - r|
  double saddle_gap = 0;
};

struct CycleOptions {
  double r_max = 0;  // 0 selects 0.95 of the distance to the nearest obstacle
  int samples = 64;
  double rel_tol = 1e-12;
  double cycle_tol = 1e-10;
  double d_floor = 1e-11;
  double budget_periods = 1e4;
  Execution exec = Execution::Parallel;
};

struct CycleSearch {
  Section section;
  double r_max = 0;
  std::vector<double> r, P, d;  // displacement samples, valid prefix only
  std::vector<LimitCycleRecord> cycles;  // ascending radius
  bool alternating = true;
  std::string note;
};

class Inconclusive : public std::runtime_error {
 public:
  Inconclusive(const std::string& what, CycleSearch partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const CycleSearch& partial() const { return partial_; }

 private:
  CycleSearch partial_;
};

CycleSearch find_limit_cycles(const ModelParams& m, double focus_z, const CycleOptions& opt = {});

enum class SweepEventKind { SaddleNode, Hopf, CycleCountChange, SuspectedHomoclinic };
const char* to_string(SweepEventKind k);

struct SweepEvent {
  SweepEventKind kind;
  std::size_t index_a = 0, index_b = 0;  // bracketing grid indices
  double a = 0, b = 0;
  int count_a = 0, count_b = 0;
  std::string interpretation;
};

struct SweepPoint {
  double value = 0;
  std::vector<EquilibriumReport> equilibria;
  int cycles = 0;
  bool inconclusive = false;
  double max_period_ratio = 0;  // cycle period / linearized period
  double min_saddle_gap = 0;
  std::vector<LimitCycleRecord> cycle_records;
  std::string error;
};

struct SweepResult {
  std::string parameter;
  std::vector<double> grid;
  std::vector<SweepPoint> points;
  std::vector<SweepEvent> events;
};

struct SweepOptions {
  CycleOptions cycles;
  bool find_cycles = true;
  double period_blowup = 50;      // in units of the linearized period
  double saddle_proximity = 1e-2; // relative to lambda0
  Execution exec = Execution::Parallel;
};

ModelParams with_parameter(const ModelParams& base, const std::string& name, double value);

SweepResult bifurcation_sweep(const ModelParams& base, const std::string& parameter,
                              const std::vector<double>& grid, const SweepOptions& opt = {});

}  // namespace sirs
