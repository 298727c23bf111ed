#pragma once

#include <array>
#include <optional>

#include "sirs/model.hpp"

namespace sirs {

struct SaddleNodeLocus {
  double z = 0, p = 0, eta = 0, k = 0;
  double lambda0_hat = 0;
  double gamma_hat = 0;
  double eta_hat = 0;
  double p_hat = 0;  // only meaningful (positive) for k > 2
  double eta_bar1 = 0;
  double xi20 = 0;
  double xi30 = 0;
  double res_H = 0;   // |H(z)| at (lambda0_hat, gamma_hat)
  double res_Hp = 0;  // |H'(z)|
};

struct DoubleZeroLocus {
  double lambda0_check = 0;
  double gamma_check = 0;
  double eta_hat = 0;
};

struct BTLocus {
  double z = 0, k = 0;
  double p_check = 0;
  double lambda0_tilde = 0;
  double eta_tilde = 0;
  double gamma_tilde = 0;
  double lambda0_check = 0;  // double-zero locus at p = p_check
  double res_trace = 0;
  double res_det = 0;
};

struct CuspCoefficients {
  double z = 0, k = 0, p = 0;  // p is the BT value p_check
  double b20 = 0, b11 = 0;
  double G = 0, G1 = 0, G2 = 0;
  double F = 0, F1 = 0, F2 = 0;
  std::optional<double> z_tilde;
};

enum class NilpotentRegion { Focus, Elliptic, EllipticCodim4Plus };

struct NilpotentFocusCoefficients {
  double x4 = 0, k = 0;
  double M = 0, N = 0;
  double b30 = 0, b11 = 0;
  double discriminant = 0;  // b11^2 + 8 b30
  double lambda0_bar = 0, gamma_bar = 0;
  double p_hat = 0, eta_bar1 = 0;
  double k0 = 0;
  NilpotentRegion region = NilpotentRegion::Focus;
};

enum class DegenerateKind {
  SaddleNodeStableSector,
  SaddleNodeUnstableSector,
  DegenerateNodeStable,
  DegenerateNodeUnstable,
  CuspCodim2,
  CuspCodim3,
  CuspCodim4,
  NilpotentFocusCodim3,
  NilpotentEllipticCodim3,
  NilpotentEllipticCodim4Plus,
  Unresolved,
};

const char* to_string(DegenerateKind kind);

inline constexpr double kK0 = 2.80425;

SaddleNodeLocus saddle_node_locus(double z, double p, double eta, double k);
DoubleZeroLocus double_zero_locus(double z, double p, double k);
BTLocus bogdanov_takens_locus(double z, double k);

double p_check(double z, double k);
double b20_coefficient(double z, double p, double k);
double b11_coefficient(double z, double p, double k);
std::optional<double> z_tilde(double k);
CuspCoefficients cusp_coefficients(double z, double k);

// Lower admissible bound k(sqrt(2k-3)-1)/(4(k-1)) on the nilpotent abscissa.
double nilpotent_lower_bound(double k);
// Abscissa where b11^2 + 8 b30 vanishes.
double nilpotent_discriminant_root(double k);
NilpotentFocusCoefficients nilpotent_focus_analysis(double x4, double k);
// Bisection for the k at which the discriminant root meets the lower bound.
double verify_k0();

// Zero test used by the decision tree.
bool negligible(double value, double natural_scale);

DegenerateKind classify_degenerate(const ModelParams& m, double z);

ModelParams unfolding_probe(const ModelParams& base, const std::array<double, 4>& lambda);
ModelParams bt_params(const BTLocus& bt);

}  // namespace sirs
