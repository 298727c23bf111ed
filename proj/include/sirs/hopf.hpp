#pragma once

#include <optional>
#include <vector>

#include "sirs/model.hpp"
#include "sirs/precision.hpp"
#include "sirs/series.hpp"

namespace sirs {

struct HopfLocus {
  double z = 0, p = 0, eta = 0, k = 0;
  double lambda0_breve = 0;
  double gamma_breve = 0;
  double D = 0;  // determinant at the weak focus
  bool in_omega_star = false;
  double trace_residual = 0;
};

bool in_omega_star(double z, double p, double eta, double k);
HopfLocus hopf_locus(double z, double p, double eta, double k);
ModelParams hopf_params(const HopfLocus& h);

// Printed closed forms.
double closed_form_f1(double z, double p, double eta, double k);
struct LCoefficients {
  double L11 = 0;
  double L22 = 0;
};
LCoefficients closed_form_L(double z, double p, double eta);
// f1 / (8 eta z^2 D^{3/2}); evaluated in quad precision.
double printed_theta1(double z, double p, double eta, double k);
// k = 2: p z L11 / (4 eta D^{3/2}) and p L22 / (96 eta^3 z D^{7/2}).
double printed_theta1_k2(double z, double p, double eta);
double printed_theta2_k2(double z, double p, double eta);

// Generic formal-series engine for u' = v + P2 + ..., v' = -u + Q2 + ...
// Returns V_1..V_count where dF/dt = sum V_m (u^2+v^2)^{m+1}.
struct LyapunovQuantities {
  std::vector<HighReal> V;
  double min_singular_ratio = 1;  // smallest sigma / largest sigma over all solves
  double max_residual = 0;        // relative residual of the linear solves
};
LyapunovQuantities lyapunov_quantities(const BivariateSeries<HighReal>& P,
                                       const BivariateSeries<HighReal>& Q, int count);

struct FocalValues {
  double z = 0, p = 0, eta = 0, k = 0;
  double D = 0;
  std::vector<double> theta;     // engine values, theta[0] is the first focal value
  std::vector<double> zero_tol;  // per-index zero tolerance
  double theta_printed = 0;  // printed-formula first focal value
  double f1 = 0;
  std::optional<double> L11, L22;  // k = 2 only
  double calibration = 1;          // engine / printed ratio at the reference point
  std::optional<int> order;        // 1-based
  double min_singular_ratio = 1;
  double max_residual = 0;
};

struct FocalOptions {
  int count = 4;
  bool estimate_scale = true;  // neighbour evaluations for zero_tol
};

FocalValues focal_values(double z, double p, double eta, double k, const FocalOptions& opt = {});
// Raw engine values without tolerance estimation (count <= 4).
std::vector<double> engine_focal_values(double z, double p, double eta, double k, int count);

// Engine-to-printed ratio of the first focal value at (z, p, eta, k) = (1, 1, 1, 2),
// computed once per process.
double calibration_constant();

struct HopfFactorValues {
  double R0f = 0, R1f = 0, R2f = 0, R3f = 0;
  double l1 = 0, l2 = 0, l3 = 0, l4 = 0;
  std::optional<double> z_breve;
};
HopfFactorValues factor_values(double z, double p, double eta, double k);

enum class Stability { Stable, Unstable, Undetermined };
const char* to_string(Stability s);

struct WeakFocusOrder {
  std::optional<int> order;
  Stability stability = Stability::Undetermined;
  FocalValues values;
};
WeakFocusOrder weak_focus_order(double z, double p, double eta, double k);

}  // namespace sirs
