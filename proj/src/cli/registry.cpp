#include "sirs/cli/registry.hpp"

#include <cmath>

#include "sirs/errors.hpp"

namespace sirs::cli {

namespace {

std::vector<FigureRegistryEntry> build() {
  std::vector<FigureRegistryEntry> r;
  auto cycles = [&](std::string id, double k, double l, double p, double g, double e, int n, std::string note) {
    FigureRegistryEntry f;
    f.id = std::move(id);
    f.pipeline = FigurePipeline::Cycles;
    f.k = k, f.lambda0 = l, f.p = p, f.gamma = g, f.eta = e;
    f.expected_cycles = n;
    f.provenance = std::move(note);
    r.push_back(std::move(f));
  };
  cycles("w4a", 2, 5.106, 1, 5.24, 2.01, 1, "k=2 panel (a): one cycle from Hopf");
  cycles("w4b", 2, 5.417, 1, 7.195, 0.75, 1, "k=2 panel (b): one cycle from Hopf");
  cycles("w4c", 2, 6.02, 1, 6, 2.01, 1, "k=2 panel (c): one stable cycle");
  cycles("w4d", 2, 1.753, 8, 2.626, 2.5, 2, "k=2 panel (d): two cycles, weak focus of order 2");
  cycles("w5", 3, 4.03906, 1.05, 3.5075, 1.5, 3, "k=3, three cycles on the R_i = 0 branch");
  cycles("w6", 3, 5.06313, 0.4, 4.4746, 0.870547, 3, "k=3, three cycles on the l2 = 0 branch");

  FigureRegistryEntry w2;
  w2.id = "w2";
  w2.pipeline = FigurePipeline::Sweep;
  w2.k = 2, w2.lambda0 = 1.8993, w2.p = 5.7966, w2.eta = 2.3072, w2.gamma = 2.6731;
  w2.sweep_parameter = "gamma";
  // the last panel is printed as 6687; 2.6687 is the value consistent with the sequence
  w2.grid = {2.6731, 2.6717, 2.6712, 2.6708, 2.6706, 2.6687};
  w2.expected_events = {"saddle-node", "hopf", "suspected-homoclinic", "cycle-count-to-zero"};
  w2.provenance = "gamma decreasing: saddle-node, Hopf, homoclinic, double cycle; last gamma printed as 6687";
  r.push_back(std::move(w2));

  FigureRegistryEntry w3;
  w3.id = "w3";
  w3.pipeline = FigurePipeline::Sweep;
  w3.k = 3, w3.lambda0 = 3.1832, w3.p = 0.9331, w3.eta = 0.6355, w3.gamma = 3.0047;
  w3.sweep_parameter = "gamma";
  w3.grid = {3.0047, 3.004, 3.00312, 3.00311, 3.00305, 3.0029};
  w3.expected_events = {"saddle-node", "cycle-count-2", "cycle-count-3", "hopf"};
  w3.provenance = "gamma decreasing: saddle-node, double cycle, three cycles, Hopf";
  r.push_back(std::move(w3));

  FigureRegistryEntry w10;
  w10.id = "w10";
  w10.pipeline = FigurePipeline::Classification;
  w10.k = 2.5, w10.lambda0 = 125.0 / 16, w10.gamma = 7.5, w10.eta = 8.0 / 7;
  w10.p = 192 * std::sqrt(3.0) / (175 * std::sqrt(35.0));
  w10.expected_kind = "NilpotentEllipticCodim4Plus";
  w10.provenance = "k=5/2 elliptic endemic equilibrium of codimension at least 4";
  r.push_back(std::move(w10));

  // every entry must be a valid parameter set
  for (const auto& f : r) figure_params(f);
  return r;
}

}  // namespace

ModelParams figure_params(const FigureRegistryEntry& e) {
  return validate_params(e.p, e.lambda0, e.gamma, e.eta, e.k);
}

const std::vector<FigureRegistryEntry>& figure_registry() {
  static const std::vector<FigureRegistryEntry> reg = build();
  return reg;
}

const FigureRegistryEntry& find_figure(const std::string& id) {
  for (const auto& f : figure_registry())
    if (f.id == id) return f;
  throw UnknownFigure("unknown figure '" + id + "'");
}

}  // namespace sirs::cli
