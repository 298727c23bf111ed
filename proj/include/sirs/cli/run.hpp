#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sirs/cli/config.hpp"
#include "sirs/cli/registry.hpp"
#include "sirs/degeneracy.hpp"
#include "sirs/dynamics.hpp"

namespace sirs::cli {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitDomain = 2, kExitInconclusive = 3 };

enum class Verdict { Match, Mismatch, Inconclusive };
const char* to_string(Verdict v);

struct FocusCycles {
  EquilibriumReport focus;
  CycleSearch search;
  bool inconclusive = false;
  std::string note;
};

struct FigureOutcome {
  std::string id;
  Verdict verdict = Verdict::Mismatch;
  std::string detail;
  std::vector<FocusCycles> foci;        // Cycles pipeline
  int cycle_count = 0;
  int sign_changes = 0;                 // largest over the foci
  std::optional<SweepResult> sweep;     // Sweep pipeline
  std::vector<std::string> observed;    // Sweep token sequence
  std::vector<EquilibriumReport> equilibria;
  std::optional<DegenerateKind> degenerate;  // Classification pipeline
};

struct FigureOptions {
  double rel_tol = 1e-12;
  Execution exec = Execution::Parallel;
};

// Runs the registered pipeline in memory and compares with the expectation.
FigureOutcome evaluate_figure(const FigureRegistryEntry& entry, const FigureOptions& opt = {});

// Number of sign changes of d among samples above the resolution floor.
int displacement_sign_changes(const CycleSearch& s, double d_floor = 1e-11);

// Runs one scenario, writing artifacts under cfg.out_dir; throws on errors.
// Returns kExitOk or kExitInconclusive.
int run_scenario(const ScenarioConfig& cfg, std::ostream& log);

// run_scenario with the exception-to-exit-code mapping.
int run_scenario_status(const ScenarioConfig& cfg, std::ostream& log, std::ostream& err);

// Deterministic starts for phase-portrait fans.
std::vector<State> fan_starts(const ModelParams& m, std::uint64_t seed, int count);

}  // namespace sirs::cli
