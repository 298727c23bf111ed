#include "sirs/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sirs {

namespace {

double powr(double x, double e) { return std::exp(e * std::log(x)); }

double x_max(const ModelParams& m) { return m.lambda0() / (1.0 + m.eta()); }

int sign_of(double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

// Safeguarded Newton on [a, b] where f changes sign. df may be inaccurate;
// bisection takes over whenever Newton leaves the bracket or stalls.
template <class F, class DF>
double polish(F f, DF df, double a, double b, double width_tol, int max_iter, int* iters = nullptr) {
  double fa = f(a), fb = f(b);
  if (fa == 0) return a;
  if (fb == 0) return b;
  double x = 0.5 * (a + b);
  double prev_width = b - a;
  int it = 0;
  for (; it < max_iter; ++it) {
    const double fx = f(x);
    if (fx == 0) break;
    if (sign_of(fx) == sign_of(fa)) {
      a = x;
      fa = fx;
    } else {
      b = x;
      fb = fx;
    }
    if (b - a <= width_tol) break;
    const double d = df(x);
    double next = (d != 0 && std::isfinite(d)) ? x - fx / d : std::numeric_limits<double>::quiet_NaN();
    const bool newton_ok = std::isfinite(next) && next > a && next < b && (b - a) < 0.75 * prev_width;
    prev_width = b - a;
    if (!newton_ok) next = 0.5 * (a + b);
    if (next == x) break;
    x = next;
  }
  if (iters) *iters = it;
  // best of the three candidates
  const double fx = std::abs(f(x));
  if (std::abs(fa) < fx && std::abs(fa) <= std::abs(fb)) return a;
  if (std::abs(fb) < fx) return b;
  return x;
}

}  // namespace

const char* to_string(EquilibriumKind kind) {
  switch (kind) {
    case EquilibriumKind::DiseaseFreeStableNode: return "DiseaseFreeStableNode";
    case EquilibriumKind::DiseaseFreeSaddle: return "DiseaseFreeSaddle";
    case EquilibriumKind::DiseaseFreeSaddleNode: return "DiseaseFreeSaddleNode";
    case EquilibriumKind::StableNode: return "StableNode";
    case EquilibriumKind::UnstableNode: return "UnstableNode";
    case EquilibriumKind::StableFocus: return "StableFocus";
    case EquilibriumKind::UnstableFocus: return "UnstableFocus";
    case EquilibriumKind::Saddle: return "Saddle";
    case EquilibriumKind::WeakFocusCandidate: return "WeakFocusCandidate";
    case EquilibriumKind::SaddleNode: return "SaddleNode";
    case EquilibriumKind::DegenerateNodeStable: return "DegenerateNodeStable";
    case EquilibriumKind::DegenerateNodeUnstable: return "DegenerateNodeUnstable";
    case EquilibriumKind::DegenerateDoubleZero: return "DegenerateDoubleZero";
    case EquilibriumKind::Unclassified: return "Unclassified";
  }
  return "Unclassified";
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::KBelowOne: return "k<1";
    case Regime::KEqualsOne: return "k=1";
    case Regime::KBetweenOneAndTwo: return "1<k<2";
    case Regime::KEqualsTwo: return "k=2";
    case Regime::KAboveTwo: return "k>2";
  }
  return "?";
}

double evaluate_H(const ModelParams& m, double x, int order) {
  if (!(x > 0)) throw DomainError("evaluate_H: x must be positive");
  const double p = m.p(), k = m.k();
  const double c = (1.0 + m.eta()) / m.lambda0();
  switch (order) {
    case 0: return (1.0 + p * powr(x, k - 1)) * (1.0 - c * x) - m.gamma() / m.lambda0();
    case 1: return p * (k - 1) * powr(x, k - 2) - p * k * c * powr(x, k - 1) - c;
    case 2: return p * (k - 1) * powr(x, k - 3) * (k - 2 - k * c * x);
    default: throw DomainError("evaluate_H: derivative order must be 0, 1 or 2");
  }
}

CriticalStructure critical_structure(const ModelParams& m) {
  CriticalStructure cs;
  const double k = m.k(), p = m.p();
  const double xm = x_max(m);
  const double c = (1.0 + m.eta()) / m.lambda0();
  auto hp = [&](double x) { return evaluate_H(m, x, 1); };
  auto hpp = [&](double x) { return evaluate_H(m, x, 2); };
  const double wtol = 4 * std::numeric_limits<double>::epsilon() * xm;
  if (k < 1) {
    cs.regime = Regime::KBelowOne;
  } else if (k == 1) {
    cs.regime = Regime::KEqualsOne;
  } else if (k < 2) {
    cs.regime = Regime::KBetweenOneAndTwo;
    // H' falls from +inf to a negative value at xm
    double lo = 1e-10 * xm;
    while (hp(lo) <= 0 && lo > 1e-300) lo *= 1e-10;
    if (hp(lo) > 0) cs.x_c = polish(hp, hpp, lo, xm, wtol, 400);
  } else if (k == 2) {
    cs.regime = Regime::KEqualsTwo;
    const double xc = (p - c) / (2 * p * c);
    if (xc > 0 && xc < xm) cs.x_c = xc;
  } else {
    cs.regime = Regime::KAboveTwo;
    const double xb = xm * (k - 2) / k;
    cs.x_bar_c = xb;
    const double hb = p * powr(xb, k - 2) - c;
    cs.hprime_at_xbar_c = hb;
    if (hb > 0) {
      // H' rises on (0, xb) from -c and falls on (xb, xm) to a negative value
      cs.x01 = polish(hp, hpp, 0.0 + 1e-300, xb, wtol, 400);
      cs.x02 = polish(hp, hpp, xb, xm, wtol, 400);
    }
  }
  return cs;
}

double h_scale(const ModelParams& m, double z) {
  return std::max({1.0, 1.0 + m.p() * powr(z, m.k() - 1), m.gamma() / m.lambda0()});
}

double jacobian_trace(const ModelParams& m, double z) {
  const double g = incidence_factor(m.p(), m.k(), z);
  const double gp = 1.0 + m.p() * m.k() * powr(z, m.k() - 1);
  const double j11 = gp * (m.lambda0() - (1.0 + m.eta()) * z) - g - m.gamma();
  return j11 - 1.0;
}

double jacobian_det(const ModelParams& m, double z) {
  const double g = incidence_factor(m.p(), m.k(), z);
  const double gp = 1.0 + m.p() * m.k() * powr(z, m.k() - 1);
  const double j11 = gp * (m.lambda0() - (1.0 + m.eta()) * z) - g - m.gamma();
  return -j11 + m.eta() * g;
}

double trace_scale(const ModelParams& m, double z) {
  const double g = incidence_factor(m.p(), m.k(), z);
  const double gp = 1.0 + m.p() * m.k() * powr(z, m.k() - 1);
  return std::max({1.0, std::abs(gp * (m.lambda0() - (1.0 + m.eta()) * z)), g, m.gamma()});
}

std::vector<EquilibriumReport> find_endemic_equilibria(const ModelParams& m,
                                                       const EquilibriumTolerances& tol) {
  const double xm = x_max(m);
  const CriticalStructure cs = critical_structure(m);
  auto H = [&](double x) { return evaluate_H(m, x, 0); };
  auto Hp = [&](double x) { return evaluate_H(m, x, 1); };

  double x_lo = 1e-10 * xm;
  if (cs.regime == Regime::KBelowOne) {
    // H -> +inf at 0+; walk down until the bracket opens
    while (H(x_lo) <= 0 && x_lo > 1e-290) x_lo *= 1e-10;
  }

  struct Node {
    double x;
    bool critical;
  };
  std::vector<Node> nodes{{x_lo, false}};
  for (const auto& c : {cs.x_c, cs.x01, cs.x02})
    if (c && *c > x_lo && *c < xm) nodes.push_back({*c, true});
  nodes.push_back({xm, false});
  std::sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) { return a.x < b.x; });

  std::vector<int> signs;
  for (const auto& n : nodes) {
    const double h = H(n.x);
    if (n.critical && std::abs(h) <= tol.root_tol * h_scale(m, n.x))
      signs.push_back(0);
    else
      signs.push_back(sign_of(h));
  }

  std::vector<double> roots;
  const double wtol = 2 * std::numeric_limits<double>::epsilon() * xm;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (signs[i] == 0) {
      roots.push_back(nodes[i].x);  // tangency at a critical point
      continue;
    }
    if (i + 1 < nodes.size() && signs[i] * signs[i + 1] < 0) {
      const double a = nodes[i].x, b = nodes[i + 1].x;
      const double z = polish(H, Hp, a, b, wtol, tol.max_iter);
      if (std::abs(H(z)) > tol.root_tol * h_scale(m, z))
        throw ConvergenceError("find_endemic_equilibria: root failed to polish", a, b);
      roots.push_back(z);
    }
  }
  std::sort(roots.begin(), roots.end());

  std::vector<EquilibriumReport> out;
  for (double z : roots) {
    EquilibriumReport r;
    r.z = z;
    r.y = m.eta() * z;
    r.res_H = std::abs(H(z));
    r.res_Hp = std::abs(Hp(z));
    r.multiplicity = r.res_Hp <= tol.tangency_tol ? 2 : 1;
    // neighbouring tangency roots are one double root seen twice
    if (!out.empty() && out.back().multiplicity == 2 && r.multiplicity == 2 &&
        z - out.back().z <= 1e-6 * xm) {
      if (r.res_Hp < out.back().res_Hp) out.back() = r;
      continue;
    }
    out.push_back(r);
  }
  for (auto& r : out) {
    r.trace = jacobian_trace(m, r.z);
    r.det = jacobian_det(m, r.z);
  }
  return out;
}

EquilibriumKind classify_origin(const ModelParams& m, const EquilibriumTolerances& tol) {
  // For k < 1 the incidence term p x^k dominates near x = 0 and pushes x up,
  // whatever R0 is.
  if (m.k() < 1) return EquilibriumKind::DiseaseFreeSaddle;
  const double r0 = m.r0();
  if (std::abs(r0 - 1.0) <= tol.threshold_tol) return EquilibriumKind::DiseaseFreeSaddleNode;
  return r0 < 1 ? EquilibriumKind::DiseaseFreeStableNode : EquilibriumKind::DiseaseFreeSaddle;
}

EquilibriumKind classify_equilibrium(const ModelParams& m, const EquilibriumReport& r,
                                     const EquilibriumTolerances& tol) {
  if (!(r.z > 0)) throw DomainError("classify_equilibrium: z must be positive");
  const double res = std::abs(evaluate_H(m, r.z, 0));
  if (res > tol.root_tol * h_scale(m, r.z))
    throw DomainError("classify_equilibrium: report is not a polished root of H");
  const double tr = jacobian_trace(m, r.z);
  const double det = jacobian_det(m, r.z);
  const double tscale = trace_scale(m, r.z);
  const bool tangent = std::abs(evaluate_H(m, r.z, 1)) <= tol.tangency_tol;
  if (tangent) {
    if (std::abs(tr) <= tol.trace_tol * tscale) return EquilibriumKind::DegenerateDoubleZero;
    // H'' = 0 as well makes the centre-manifold flow cubic
    const double h2 = evaluate_H(m, r.z, 2);
    const double h2_scale = std::max(1.0, m.p() * m.k() * m.k() * powr(r.z, m.k() - 3));
    if (m.k() > 2 && std::abs(h2) <= 1e-6 * h2_scale)
      return tr < 0 ? EquilibriumKind::DegenerateNodeStable : EquilibriumKind::DegenerateNodeUnstable;
    return EquilibriumKind::SaddleNode;
  }
  if (det < 0) return EquilibriumKind::Saddle;
  if (std::abs(tr) <= tol.trace_tol * tscale) return EquilibriumKind::WeakFocusCandidate;
  if (tr * tr - 4 * det >= 0) return tr < 0 ? EquilibriumKind::StableNode : EquilibriumKind::UnstableNode;
  return tr < 0 ? EquilibriumKind::StableFocus : EquilibriumKind::UnstableFocus;
}

std::vector<EquilibriumReport> endemic_equilibria(const ModelParams& m,
                                                  const EquilibriumTolerances& tol) {
  auto reports = find_endemic_equilibria(m, tol);
  for (auto& r : reports) r.kind = classify_equilibrium(m, r, tol);
  return reports;
}

bool is_focus(EquilibriumKind kind) {
  return kind == EquilibriumKind::StableFocus || kind == EquilibriumKind::UnstableFocus ||
         kind == EquilibriumKind::WeakFocusCandidate;
}

}  // namespace sirs
