#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sirs/model.hpp"

namespace sirs {

enum class Regime { KBelowOne, KEqualsOne, KBetweenOneAndTwo, KEqualsTwo, KAboveTwo };

struct CriticalStructure {
  Regime regime = Regime::KEqualsOne;
  std::optional<double> x_bar_c;           // k > 2
  std::optional<double> hprime_at_xbar_c;  // k > 2
  std::optional<double> x01, x02;          // zeros of H' when k > 2
  std::optional<double> x_c;               // zero of H' when 1 < k <= 2
};

enum class EquilibriumKind {
  DiseaseFreeStableNode,
  DiseaseFreeSaddle,
  DiseaseFreeSaddleNode,
  StableNode,
  UnstableNode,
  StableFocus,
  UnstableFocus,
  Saddle,
  WeakFocusCandidate,
  SaddleNode,
  DegenerateNodeStable,
  DegenerateNodeUnstable,
  DegenerateDoubleZero,
  Unclassified,
};

const char* to_string(EquilibriumKind kind);
const char* to_string(Regime regime);

struct EquilibriumReport {
  double z = 0;  // y = eta * z
  double y = 0;
  double trace = 0;
  double det = 0;
  EquilibriumKind kind = EquilibriumKind::Unclassified;
  int multiplicity = 1;
  double res_H = 0;   // |H(z)|
  double res_Hp = 0;  // |H'(z)|
};

struct EquilibriumTolerances {
  double root_tol = 1e-12;
  double tangency_tol = 1e-7;
  double trace_tol = 1e-9;
  double threshold_tol = 1e-9;
  int max_iter = 200;
};

// derivative_order 0, 1 or 2.
double evaluate_H(const ModelParams& m, double x, int derivative_order = 0);

CriticalStructure critical_structure(const ModelParams& m);

// Zeros of H in (0, lambda0/(1+eta)], ascending, with trace/det filled and
// kind left Unclassified.
std::vector<EquilibriumReport> find_endemic_equilibria(const ModelParams& m,
                                                       const EquilibriumTolerances& tol = {});

// Jacobian entries from the field itself, evaluated at (z, eta z).
double jacobian_trace(const ModelParams& m, double z);
double jacobian_det(const ModelParams& m, double z);

// Scale used to make residual and trace tests relative.
double h_scale(const ModelParams& m, double z);
double trace_scale(const ModelParams& m, double z);

EquilibriumKind classify_origin(const ModelParams& m, const EquilibriumTolerances& tol = {});
EquilibriumKind classify_equilibrium(const ModelParams& m, const EquilibriumReport& report,
                                     const EquilibriumTolerances& tol = {});

// find + classify.
std::vector<EquilibriumReport> endemic_equilibria(const ModelParams& m,
                                                  const EquilibriumTolerances& tol = {});

bool is_focus(EquilibriumKind kind);

}  // namespace sirs
