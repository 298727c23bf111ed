#pragma once

#include <string>
#include <vector>

#include "sirs/model.hpp"

namespace sirs::cli {

enum class FigurePipeline { Cycles, Sweep, Classification };

struct FigureRegistryEntry {
  std::string id;
  FigurePipeline pipeline = FigurePipeline::Cycles;
  double p = 0, lambda0 = 0, gamma = 0, eta = 0, k = 0;  // base parameters
  std::string sweep_parameter;                            // Sweep only
  std::vector<double> grid;
  // Expected outcome.
  int expected_cycles = -1;                  // Cycles
  std::vector<std::string> expected_events;  // Sweep, in order
  std::string expected_kind;                 // Classification
  std::string provenance;
};

const std::vector<FigureRegistryEntry>& figure_registry();
// Throws UnknownFigure.
const FigureRegistryEntry& find_figure(const std::string& id);
ModelParams figure_params(const FigureRegistryEntry& e);

}  // namespace sirs::cli
