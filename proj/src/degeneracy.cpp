#include "sirs/degeneracy.hpp"

#include <cmath>
#include <functional>

#include "sirs/equilibria.hpp"

namespace sirs {

namespace {

double powr(double x, double e) { return std::exp(e * std::log(x)); }

// max |f| over z(1 +- 1e-2): the size the coefficient takes just off its
// zero locus.
double neighbor_scale(const std::function<double(double)>& f, double z) {
  return std::max(std::abs(f(0.99 * z)), std::abs(f(1.01 * z)));
}

}  // namespace

const char* to_string(DegenerateKind kind) {
  switch (kind) {
    case DegenerateKind::SaddleNodeStableSector: return "SaddleNodeStableSector";
    case DegenerateKind::SaddleNodeUnstableSector: return "SaddleNodeUnstableSector";
    case DegenerateKind::DegenerateNodeStable: return "DegenerateNodeStable";
    case DegenerateKind::DegenerateNodeUnstable: return "DegenerateNodeUnstable";
    case DegenerateKind::CuspCodim2: return "CuspCodim2";
    case DegenerateKind::CuspCodim3: return "CuspCodim3";
    case DegenerateKind::CuspCodim4: return "CuspCodim4";
    case DegenerateKind::NilpotentFocusCodim3: return "NilpotentFocusCodim3";
    case DegenerateKind::NilpotentEllipticCodim3: return "NilpotentEllipticCodim3";
    case DegenerateKind::NilpotentEllipticCodim4Plus: return "NilpotentEllipticCodim4Plus";
    case DegenerateKind::Unresolved: return "Unresolved";
  }
  return "Unresolved";
}

bool negligible(double value, double natural_scale) {
  return std::abs(value) <= 1e-9 * std::max(1.0, natural_scale);
}

SaddleNodeLocus saddle_node_locus(double z, double p, double eta, double k) {
  if (!(z > 0) || !(p > 0) || !(eta > 0)) throw DomainError("saddle_node_locus: z, p, eta must be positive");
  if (!(k > 1)) throw DomainError("saddle_node_locus: k must exceed 1");
  SaddleNodeLocus s;
  s.z = z;
  s.p = p;
  s.eta = eta;
  s.k = k;
  const double zk = powr(z, k), zk1 = powr(z, k - 1);
  s.lambda0_hat = (1 + eta) * (z + k * p * zk) / (zk1 * p * (k - 1));
  s.gamma_hat = (1 + eta) * (z + p * zk) * (z + p * zk) / (zk * p * (k - 1));
  if (!(s.gamma_hat > eta)) throw DomainError("saddle_node_locus: gamma_hat <= eta");
  s.eta_hat = 1 / (z + p * zk);
  s.p_hat = (k - 2) / (k * zk1);
  s.eta_bar1 = k / (2 * z * (k - 1));
  const double dd = eta * z + p * eta * zk - 1;
  s.xi20 = -(1 + eta) * (k - 2 - k * p * zk1) / (2 * eta * dd * dd);
  s.xi30 = k * (1 + eta) * (2 * k * p * zk - p * zk - k * z + 2 * z) / (6 * z * z * eta * eta * dd * dd);
  const ModelParams m = validate_params(p, s.lambda0_hat, s.gamma_hat, eta, k);
  s.res_H = std::abs(evaluate_H(m, z, 0));
  s.res_Hp = std::abs(evaluate_H(m, z, 1));
  return s;
}

DoubleZeroLocus double_zero_locus(double z, double p, double k) {
  if (!(z > 0) || !(p > 0) || !(k > 1)) throw DomainError("double_zero_locus: need z, p > 0 and k > 1");
  const double zk = powr(z, k), zk1 = powr(z, k - 1);
  DoubleZeroLocus d;
  d.lambda0_check = (1 + z + p * zk) * (z + k * p * zk) / (p * zk1 * (k - 1) * (z + p * zk));
  d.gamma_check = (1 + z + p * zk) * (z + p * zk) / (p * zk * (k - 1));
  d.eta_hat = 1 / (z + p * zk);
  return d;
}

double p_check(double z, double k) {
  return (std::sqrt(z * (k - z + k * z) * (k - 1)) - z) / (k * powr(z, k));
}

BTLocus bogdanov_takens_locus(double z, double k) {
  if (!(z > 0)) throw DomainError("bogdanov_takens_locus: z must be positive");
  if (!(k > (1 + 2 * z) / (1 + z))) throw DomainError("bogdanov_takens_locus: k <= (1+2z)/(1+z)");
  BTLocus bt;
  bt.z = z;
  bt.k = k;
  const double s = std::sqrt((k - 1) * (k - z + k * z) * z);
  bt.p_check = (s - z) / (k * powr(z, k));
  bt.lambda0_tilde = k * z * (k - z + k * z) / ((k - 1) * (s - z));
  bt.eta_tilde = k / (s - z + k * z);
  bt.gamma_tilde = (k * z - z + s) * (k - z + k * z + s) / ((k - 1) * k * (s - z));
  bt.lambda0_check = double_zero_locus(z, bt.p_check, k).lambda0_check;
  const ModelParams m = bt_params(bt);
  bt.res_trace = std::abs(jacobian_trace(m, z));
  bt.res_det = std::abs(jacobian_det(m, z));
  return bt;
}

ModelParams bt_params(const BTLocus& bt) {
  return validate_params(bt.p_check, bt.lambda0_tilde, bt.gamma_tilde, bt.eta_tilde, bt.k);
}

double b20_coefficient(double z, double p, double k) {
  const double zk = powr(z, k);
  return (1 + z + p * zk) * (k * z - 2 * z - k * p * zk) / (2 * z);
}

double b11_coefficient(double z, double p, double k) {
  const double zk = powr(z, k);
  return ((k - 1) * z + (k - 2) * z * z - k * p * p * zk * zk - 2 * p * zk * z) / z;
}

std::optional<double> z_tilde(double k) {
  const double den = 6 * (k * k * k - 4 * k * k + 5 * k - 2);
  const double arg = 2 - 17 * k + 58 * k * k - 101 * std::pow(k, 3) + 94 * std::pow(k, 4) -
                     44 * std::pow(k, 5) + 8 * std::pow(k, 6);
  if (den == 0 || arg < 0) return std::nullopt;
  const double zt = (2 - 7 * k + 7 * k * k - 2 * k * k * k + std::sqrt(2.0) * std::sqrt(arg)) / den;
  if (!(zt > 0)) return std::nullopt;
  return zt;
}

CuspCoefficients cusp_coefficients(double z, double k) {
  if (!(z > 0)) throw DomainError("cusp_coefficients: z must be positive");
  if (!(k > (1 + 2 * z) / (1 + z))) throw DomainError("cusp_coefficients: k <= (1+2z)/(1+z)");
  CuspCoefficients c;
  c.z = z;
  c.k = k;
  c.p = p_check(z, k);
  c.b20 = b20_coefficient(z, c.p, k);
  c.b11 = b11_coefficient(z, c.p, k);

  const double w = k - z + k * z;
  const double S = z * (k - 1) * w;
  const double s = std::sqrt(S);
  const double q4 = std::sqrt(s);  // S^(1/4)
  const double k2 = k * k, k3 = k2 * k, k4 = k3 * k, k5 = k4 * k;
  const double z2 = z * z;

  c.G1 = (k - 1) * ((2 * z2 - 2) * k3 - (10 * z2 + 5 * z - 1) * k2 + (16 * z2 + 4 * z) * k - 8 * z2);
  c.G2 = s * ((2 * z + 2) * k3 - (10 * z + 1) * k2 + 16 * k * z - 8 * z);
  c.G = -(k - 1) * ((k - 1) * std::sqrt(z) + std::sqrt((k - 1) * w)) * q4 * (c.G1 + c.G2) /
        (3 * std::sqrt(2.0) * k3 * z * (w - s));

  c.F1 = -z * ((26 * z2 + 68 * z + 42) * k5 + (8 * z2 - 79 * z - 71) * k4 -
               (214 * z2 + 59 * z + 35) * k3 + (380 * z2 + 106 * z - 5) * k2 -
               (280 * z2 + 36 * z) * k + 80 * z2);
  c.F2 = s * ((46 * z2 + 62 * z + 16) * k4 - (106 * z2 + 67 * z + 22) * k3 +
              (180 * z2 + 10 * z + 7) * k2 - (200 * z2 - 4 * z) * k + 80 * z2);
  const double a = (k - 1) * z + s;
  const double b = z - k * z + s;
  c.F = -std::pow(k - 1, 3) * a * a * q4 * (c.F1 + c.F2) /
        (36 * std::sqrt(2.0) * k3 * std::pow(z, 1.5) * (w - s) * b * b * b);
  c.z_tilde = z_tilde(k);
  return c;
}

double nilpotent_lower_bound(double k) {
  return k * (std::sqrt(2 * k - 3) - 1) / (4 * (k - 1));
}

double nilpotent_discriminant_root(double k) {
  return (16 * k - 5 * k * k) / (16 * k * k - 48 * k + 32);
}

double verify_k0() {
  // (16k - 5k^2)/(16(k-1)(k-2)) equals the lower bound at k0
  auto f = [](double k) { return nilpotent_discriminant_root(k) - nilpotent_lower_bound(k); };
  double a = 2.5, b = 3.2;
  double fa = f(a);
  for (int i = 0; i < 200 && b - a > 1e-15; ++i) {
    const double c = 0.5 * (a + b);
    const double fc = f(c);
    if ((fc > 0) == (fa > 0)) {
      a = c;
      fa = fc;
    } else {
      b = c;
    }
  }
  return 0.5 * (a + b);
}

NilpotentFocusCoefficients nilpotent_focus_analysis(double x, double k) {
  if (!(k > 2)) throw DomainError("nilpotent_focus_analysis: k must exceed 2");
  if (!(x > nilpotent_lower_bound(k)))
    throw DomainError("nilpotent_focus_analysis: x4 below k(sqrt(2k-3)-1)/(4(k-1))");
  NilpotentFocusCoefficients n;
  n.x4 = x;
  n.k = k;
  const double w = k - 2 * x + 2 * k * x;
  const double k2 = k * k, k3 = k2 * k;
  n.M = -std::sqrt(3.0) * k / std::sqrt((k - 2) * w);
  const double l1 = 10 * k2 * x - 30 * k * x + 20 * x + 2 * k2 - 3 * k;
  n.N = std::sqrt((k - 2) * w) *
        (195 * k3 * x - 665 * k2 * x + 630 * k * x - 160 * x + 44 * k3 - 87 * k2 - 6 * k) /
        (3 * std::sqrt(3.0) * l1 * l1);
  n.b11 = k - 1;
  n.b30 = (k - 1) * (k - 1) * (k - 2) * (2 * x - k - 2 * k * x) / (3 * k2);
  n.discriminant = n.b11 * n.b11 + 8 * n.b30;
  n.lambda0_bar = k * w / (2 * (k - 2) * (k - 1));
  n.gamma_bar = 2 * w / (k * (k - 2));
  n.p_hat = (k - 2) / (k * powr(x, k - 1));
  n.eta_bar1 = k / (2 * x * (k - 1));
  n.k0 = kK0;
  const double scale = (k - 1) * (k - 1) *
                       (16 * k2 * x + 48 * k * x + 32 * x + 5 * k2 + 16 * k) / (3 * k2);
  if (negligible(n.discriminant, scale))
    n.region = NilpotentRegion::EllipticCodim4Plus;
  else
    n.region = n.discriminant < 0 ? NilpotentRegion::Focus : NilpotentRegion::Elliptic;
  return n;
}

namespace {

DegenerateKind degenerate_node_kind(double z, double eta, double k) {
  const double zl = nilpotent_lower_bound(k);
  const double zu = k * (k - 2) / (4 * (k - 1));
  const double eb = k / (2 * z * (k - 1));
  const double q = 4 * z * (k - 1) / (k * k + 4 * z - 4 * k * z - 2 * k);
  const bool stable = (eta < eb && z > zl) || (z < zl && eta < q);
  const bool unstable = (eta > eb && z > zu) || (eb < eta && eta < q && zl < z && z < zu);
  if (stable && !unstable) return DegenerateKind::DegenerateNodeStable;
  if (unstable && !stable) return DegenerateKind::DegenerateNodeUnstable;
  return DegenerateKind::Unresolved;
}

// Move z onto the exact degenerate point: the simple zero of H' near a
// double root, or x_bar_c when H'' vanishes too.
double refine_degenerate_root(const ModelParams& m, double z) {
  const double k = m.k();
  if (k > 2) {
    const double xb = m.lambda0() / (1 + m.eta()) * (k - 2) / k;
    if (std::abs(xb - z) <= 1e-3 * z) {
      const double h2 = evaluate_H(m, z, 2);
      const double h2s = std::max(std::abs(evaluate_H(m, 0.9 * z, 2)), std::abs(evaluate_H(m, 1.1 * z, 2)));
      if (std::abs(h2) <= 1e-2 * h2s) return xb;
    }
  }
  double zr = z;
  for (int i = 0; i < 50; ++i) {
    const double h2 = evaluate_H(m, zr, 2);
    if (h2 == 0) break;
    const double step = evaluate_H(m, zr, 1) / h2;
    if (!std::isfinite(step)) break;
    zr -= step;
    if (std::abs(step) <= 1e-16 * zr) break;
  }
  if (!(zr > 0) || std::abs(zr - z) > 1e-4 * z) return z;
  return zr;
}

}  // namespace

DegenerateKind classify_degenerate(const ModelParams& m, double z) {
  const EquilibriumTolerances tol;
  if (!(z > 0)) throw DomainError("classify_degenerate: z must be positive");
  if (std::abs(evaluate_H(m, z, 0)) > tol.root_tol * h_scale(m, z) ||
      std::abs(evaluate_H(m, z, 1)) > tol.tangency_tol)
    throw DomainError("classify_degenerate: z is not a double zero of H");
  const double zr = refine_degenerate_root(m, z);
  const double p = m.p(), eta = m.eta(), k = m.k();
  const double eta_hat = 1 / (zr + p * powr(zr, k));

  if (!negligible(eta - eta_hat, std::max(eta, eta_hat))) {
    // one zero eigenvalue; xi20 vanishes exactly when p = p_hat
    auto xi_factor = [&](double zz) { return k - 2 - k * p * powr(zz, k - 1); };
    if (!negligible(xi_factor(zr), neighbor_scale(xi_factor, zr)))
      return eta < eta_hat ? DegenerateKind::SaddleNodeStableSector
                           : DegenerateKind::SaddleNodeUnstableSector;
    if (!(k > 2)) return DegenerateKind::Unresolved;
    const double dd = eta * zr + p * eta * powr(zr, k) - 1;
    const double zk = powr(zr, k);
    const double xi30 =
        k * (1 + eta) * (2 * k * p * zk - p * zk - k * zr + 2 * zr) / (6 * zr * zr * eta * eta * dd * dd);
    if (!(xi30 > 0)) return DegenerateKind::Unresolved;
    return degenerate_node_kind(zr, eta, k);
  }

  // double zero eigenvalue
  if (!(k > 1)) return DegenerateKind::Unresolved;
  auto b20f = [&](double zz) { return b20_coefficient(zz, p, k); };
  if (negligible(b20f(zr), neighbor_scale(b20f, zr))) {
    const double eb1 = k / (2 * zr * (k - 1));
    if (!(k > 2) || !negligible(eta - eb1, std::max(eta, eb1))) return DegenerateKind::Unresolved;
    if (!(zr > nilpotent_lower_bound(k))) return DegenerateKind::Unresolved;
    switch (nilpotent_focus_analysis(zr, k).region) {
      case NilpotentRegion::Focus: return DegenerateKind::NilpotentFocusCodim3;
      case NilpotentRegion::Elliptic: return DegenerateKind::NilpotentEllipticCodim3;
      case NilpotentRegion::EllipticCodim4Plus: return DegenerateKind::NilpotentEllipticCodim4Plus;
    }
  }
  auto b11f = [&](double zz) { return b11_coefficient(zz, p, k); };
  if (!negligible(b11f(zr), neighbor_scale(b11f, zr))) return DegenerateKind::CuspCodim2;
  if (!(k > (1 + 2 * zr) / (1 + zr))) return DegenerateKind::Unresolved;
  auto gf = [&](double zz) {
    return k > (1 + 2 * zz) / (1 + zz) ? cusp_coefficients(zz, k).G : 0.0;
  };
  const CuspCoefficients cc = cusp_coefficients(zr, k);
  if (!negligible(cc.G, neighbor_scale(gf, zr))) return DegenerateKind::CuspCodim3;
  if (cc.F < 0) return DegenerateKind::CuspCodim4;
  return DegenerateKind::Unresolved;
}

ModelParams unfolding_probe(const ModelParams& base, const std::array<double, 4>& lambda) {
  const std::array<double, 4> ref{base.p(), base.lambda0(), base.gamma(), base.eta()};
  for (int i = 0; i < 4; ++i)
    if (!std::isfinite(lambda[i]) || std::abs(lambda[i]) > 0.1 * ref[i])
      throw DomainError("unfolding_probe: perturbation exceeds 10% of its base value");
  return validate_params(base.p() + lambda[0], base.lambda0() + lambda[1], base.gamma() + lambda[2],
                         base.eta() + lambda[3], base.k());
}

}  // namespace sirs
