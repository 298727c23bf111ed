#include "sirs/hopf.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "sirs/equilibria.hpp"

namespace sirs {

namespace {

using boost::multiprecision::abs;
using boost::multiprecision::exp;
using boost::multiprecision::log;
using boost::multiprecision::sqrt;

double powr(double x, double e) { return std::exp(e * std::log(x)); }

template <class T>
T f1_poly(const T& z, const T& p, const T& e, const T& k) {
  using std::exp;
  using std::log;
  const T zk = exp(k * log(z));
  const T z2k = zk * zk, z3k = z2k * zk;
  return (4 - k + 3 * e - 3 * k * e) * k * p * p * z2k * z +
         (2 - k + e - k * e) * (k + 2) * p * zk * z * z +
         (3 - k + e - k * e) * k * p * zk * z +
         (k - k * e + e) * k * p * p * p * z3k +
         (2 * k - 1) * k * p * p * z2k +
         (k - 2 - e + k * e) * (k - 2) * z * z * z -
         (2 - k + e - k * e) * (k - 2) * z * z;
}

template <class T>
T l22_poly(const T& z, const T& p, const T& n) {
  // p^a z^b n^c monomials of the printed polynomial
  struct Term {
    int c, a, b, e;
  };
  static const Term terms[] = {
      {-72, 0, 0, 0},   {-216, 1, 1, 0},  {-36, 1, 2, 0},   {180, 2, 3, 0},   {144, 2, 4, 0},
      {-144, 3, 6, 0},  {-144, 4, 7, 0},  {72, 0, 0, 1},    {284, 0, 1, 1},   {632, 1, 2, 1},
      {-177, 1, 3, 1},  {384, 2, 3, 1},   {-682, 2, 4, 1},  {-152, 2, 5, 1},  {-493, 3, 5, 1},
      {80, 3, 6, 1},    {372, 3, 7, 1},   {232, 4, 7, 1},   {744, 4, 8, 1},   {372, 5, 9, 1},
      {-140, 0, 1, 2},  {-345, 0, 2, 2},  {-96, 1, 2, 2},   {-659, 1, 3, 2},  {485, 1, 4, 2},
      {-527, 2, 4, 2},  {1230, 2, 5, 2},  {-193, 3, 5, 2},  {-230, 2, 6, 2},  {1087, 3, 6, 2},
      {-876, 3, 7, 2},  {342, 4, 7, 2},   {-248, 3, 8, 2},  {-1062, 4, 8, 2}, {-744, 4, 9, 2},
      {-416, 5, 9, 2},  {-744, 5, 10, 2}, {-248, 6, 11, 2}, {65, 0, 2, 3},    {127, 0, 3, 3},
      {69, 1, 3, 3},    {189, 1, 4, 3},   {15, 2, 4, 3},    {-272, 1, 5, 3},  {58, 2, 5, 3},
      {-721, 2, 6, 3},  {-14, 3, 6, 3},   {248, 2, 7, 3},   {-715, 3, 7, 3},  {-10, 4, 7, 3},
      {868, 3, 8, 3},   {-355, 4, 8, 3},  {1116, 4, 9, 3},  {-89, 5, 9, 3},   {620, 5, 10, 3},
      {124, 6, 11, 3},  {3, 0, 3, 4},     {6, 0, 4, 4},     {26, 1, 4, 4},    {53, 1, 5, 4},
      {42, 2, 5, 4},    {137, 2, 6, 4},   {19, 3, 6, 4},    {154, 3, 7, 4},   {79, 4, 8, 4},
      {15, 5, 9, 4},
  };
  T pp[7], zp[12], np[5];
  pp[0] = zp[0] = np[0] = 1;
  for (int i = 1; i < 7; ++i) pp[i] = pp[i - 1] * p;
  for (int i = 1; i < 12; ++i) zp[i] = zp[i - 1] * z;
  for (int i = 1; i < 5; ++i) np[i] = np[i - 1] * n;
  T s = 0;
  for (const auto& t : terms) s += T(t.c) * pp[t.a] * zp[t.b] * np[t.e];
  return s;
}

template <class T>
T l11_poly(const T& z, const T& p, const T& e) {
  return 1 + 3 * p * z + 2 * p * z * z + 2 * p * p * z * z * z - e - 2 * z * e - 3 * p * z * z * e -
         p * p * z * z * z * e;
}

using Hom = std::vector<HighReal>;  // index j <-> u^{deg-j} v^j

Hom hom_part(const BivariateSeries<HighReal>& s, int d) {
  Hom h(d + 1);
  for (int j = 0; j <= d; ++j) h[j] = s.coeff(d - j, j);
  return h;
}

Hom d_du(const Hom& f) {
  const int m = static_cast<int>(f.size()) - 1;
  Hom r(std::max(m, 1));
  if (m == 0) return Hom{HighReal(0)};
  for (int j = 0; j < m; ++j) r[j] = f[j] * HighReal(m - j);
  return r;
}

Hom d_dv(const Hom& f) {
  const int m = static_cast<int>(f.size()) - 1;
  if (m == 0) return Hom{HighReal(0)};
  Hom r(m);
  for (int j = 1; j <= m; ++j) r[j - 1] = f[j] * HighReal(j);
  return r;
}

void add_product(Hom& acc, const Hom& a, const Hom& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) acc[i + j] += a[i] * b[j];
  }
}

struct SolveStats {
  double sv_ratio = 1;
  double residual = 0;
};

// Dense Gaussian elimination with partial pivoting in quad precision.
std::vector<HighReal> solve_dense(std::vector<std::vector<HighReal>> A, std::vector<HighReal> b,
                                  SolveStats& stats) {
  const int n = static_cast<int>(b.size());
  const auto A0 = A;
  const auto b0 = b;
  {
    Eigen::MatrixXd M(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) M(i, j) = static_cast<double>(A[i][j]);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const auto& sv = svd.singularValues();
    stats.sv_ratio = sv(0) > 0 ? sv(n - 1) / sv(0) : 0.0;
  }
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (abs(A[r][c]) > abs(A[piv][c])) piv = r;
    if (A[piv][c] == 0) throw IllConditioned("formal-series system is singular", 0.0);
    std::swap(A[piv], A[c]);
    std::swap(b[piv], b[c]);
    for (int r = c + 1; r < n; ++r) {
      const HighReal f = A[r][c] / A[c][c];
      if (f == 0) continue;
      for (int j = c; j < n; ++j) A[r][j] -= f * A[c][j];
      b[r] -= f * b[c];
    }
  }
  std::vector<HighReal> x(n);
  for (int r = n - 1; r >= 0; --r) {
    HighReal s = b[r];
    for (int j = r + 1; j < n; ++j) s -= A[r][j] * x[j];
    x[r] = s / A[r][r];
  }
  HighReal rmax = 0, anorm = 0, xnorm = 0, bnorm = 0;
  for (int i = 0; i < n; ++i) {
    HighReal s = -b0[i], row = 0;
    for (int j = 0; j < n; ++j) {
      s += A0[i][j] * x[j];
      row += abs(A0[i][j]);
    }
    rmax = std::max(rmax, HighReal(abs(s)));
    anorm = std::max(anorm, row);
    xnorm = std::max(xnorm, HighReal(abs(x[i])));
    bnorm = std::max(bnorm, HighReal(abs(b0[i])));
  }
  const HighReal denom = anorm * xnorm + bnorm;
  stats.residual = denom > 0 ? static_cast<double>(rmax / denom) : 0.0;
  return x;
}

HighReal binom_int(int n, int k) {
  HighReal r = 1;
  for (int i = 0; i < k; ++i) r = r * HighReal(n - i) / HighReal(i + 1);
  return r;
}

struct EngineOut {
  std::vector<HighReal> V;
  double sv_ratio = 1;
  double residual = 0;
};

EngineOut run_engine(double zd, double pd, double ed, double kd, int count) {
  if (count < 1 || count > 4) throw DomainError("focal values: count must lie in [1, 4]");
  const HighReal z = zd, p = pd, e = ed, k = kd;
  const HighReal zk = exp(k * log(z));
  const HighReal zk1 = zk / z;
  const HighReal L = (1 + z + p * zk * (k - e + k * e)) / (p * zk1 * (k - 1));
  const HighReal G = (z * (z + 1) + p * zk * (p * zk + 1) + 2 * p * zk * z) / (p * zk * (k - 1));
  const HighReal D = p * e * zk + e * z - 1;
  if (!(D > 0)) throw DomainError("focal values: determinant must be positive");
  const HighReal sD = sqrt(D);
  const int N = 2 * count + 1;
  auto [f1, f2] = expand_field<HighReal>(p, L, G, e, k, z, e * z, N);
  // X = u/eta + sqrt(D)/eta v, Y = u; time rescaled by sqrt(D)
  const auto F1 = f1.compose_linear(1 / e, sD / e, HighReal(1), HighReal(0));
  const auto F2 = f2.compose_linear(1 / e, sD / e, HighReal(1), HighReal(0));
  const auto P = F2 * (1 / sD);
  const auto Q = (F1 * e - F2) * (1 / D);
  const HighReal lin_err = std::max({abs(P.coeff(0, 0)), abs(Q.coeff(0, 0)), abs(P.coeff(1, 0)),
                                     abs(P.coeff(0, 1) - 1), abs(Q.coeff(1, 0) + 1), abs(Q.coeff(0, 1))});
  if (lin_err > HighReal(1e-20))
    throw IllConditioned("focal values: transformed linear part is not a rotation",
                         static_cast<double>(lin_err));
  const auto lq = lyapunov_quantities(P, Q, count);
  return {lq.V, lq.min_singular_ratio, lq.max_residual};
}

}  // namespace

LyapunovQuantities lyapunov_quantities(const BivariateSeries<HighReal>& P,
                                       const BivariateSeries<HighReal>& Q, int count) {
  const int top = 2 * count + 2;
  if (P.max_degree() < top - 1 || Q.max_degree() < top - 1)
    throw DomainError("lyapunov_quantities: series degree too low for the requested count");
  std::vector<Hom> Pd(top + 1), Qd(top + 1), F(top + 1);
  for (int d = 2; d < top; ++d) {
    Pd[d] = hom_part(P, d);
    Qd[d] = hom_part(Q, d);
  }
  F[2] = Hom{HighReal(1), HighReal(0), HighReal(1)};
  LyapunovQuantities out;
  for (int d = 3; d <= top; ++d) {
    Hom g(d + 1, HighReal(0));
    for (int m = 2; m <= d - 1; ++m) {
      const int n = d - m + 1;
      if (n < 2) continue;
      add_product(g, d_du(F[m]), Pd[n]);
      add_product(g, d_dv(F[m]), Qd[n]);
    }
    const bool even = d % 2 == 0;
    const int n = d + 1 + (even ? 1 : 0);
    std::vector<std::vector<HighReal>> A(n, std::vector<HighReal>(n, HighReal(0)));
    std::vector<HighReal> rhs(n, HighReal(0));
    for (int j = 0; j <= d; ++j) {
      if (d - j > 0) A[j + 1][j] += HighReal(d - j);
      if (j > 0) A[j - 1][j] -= HighReal(j);
      rhs[j] = -g[j];
    }
    if (even) {
      const int h = d / 2;
      for (int i = 0; i <= h; ++i) A[2 * i][d + 1] -= binom_int(h, i);
      A[d + 1][0] = 1;  // fix the free multiple of (u^2+v^2)^h
    }
    SolveStats st;
    const auto sol = solve_dense(std::move(A), std::move(rhs), st);
    out.min_singular_ratio = std::min(out.min_singular_ratio, st.sv_ratio);
    out.max_residual = std::max(out.max_residual, st.residual);
    if (st.residual > 1e-8) throw IllConditioned("formal-series solve residual above 1e-8", st.sv_ratio);
    F[d] = Hom(sol.begin(), sol.begin() + d + 1);
    if (even) out.V.push_back(sol[d + 1]);
  }
  return out;
}

bool in_omega_star(double z, double p, double eta, double k) {
  if (!(z > 0) || !(p > 0) || !(k > 1) || !(eta > 0)) return false;
  const double zk = powr(z, k);
  const double lo = 1 / (z + p * zk);
  const double hi = (z + p * zk) * (1 + z + p * zk) / (p * zk * (k - 1));
  return lo < eta && eta < hi;
}

HopfLocus hopf_locus(double z, double p, double eta, double k) {
  if (!(z > 0) || !(p > 0) || !(eta > 0)) throw DomainError("hopf_locus: z, p, eta must be positive");
  if (!(k > 1)) throw DomainError("hopf_locus: k must exceed 1");
  HopfLocus h;
  h.z = z;
  h.p = p;
  h.eta = eta;
  h.k = k;
  const double zk = powr(z, k), zk1 = powr(z, k - 1);
  h.lambda0_breve = (1 + z + p * zk * (k - eta + k * eta)) / (p * zk1 * (k - 1));
  h.gamma_breve = (z * (z + 1) + p * zk * (p * zk + 1) + 2 * p * zk * z) / (p * zk * (k - 1));
  if (!(h.gamma_breve > eta)) throw DomainError("hopf_locus: gamma_breve <= eta");
  h.D = p * eta * zk + eta * z - 1;
  h.in_omega_star = in_omega_star(z, p, eta, k);
  h.trace_residual = std::abs(jacobian_trace(hopf_params(h), z));
  return h;
}

ModelParams hopf_params(const HopfLocus& h) {
  return validate_params(h.p, h.lambda0_breve, h.gamma_breve, h.eta, h.k);
}

double closed_form_f1(double z, double p, double eta, double k) {
  return static_cast<double>(f1_poly<HighReal>(z, p, eta, k));
}

LCoefficients closed_form_L(double z, double p, double eta) {
  return {static_cast<double>(l11_poly<HighReal>(z, p, eta)),
          static_cast<double>(l22_poly<HighReal>(z, p, eta))};
}

double printed_theta1(double zd, double pd, double ed, double kd) {
  const HighReal z = zd, p = pd, e = ed, k = kd;
  const HighReal D = p * e * exp(k * log(z)) + e * z - 1;
  return static_cast<double>(f1_poly(z, p, e, k) / (8 * e * z * z * D * sqrt(D)));
}

double printed_theta1_k2(double zd, double pd, double ed) {
  const HighReal z = zd, p = pd, e = ed;
  const HighReal D = p * e * z * z + e * z - 1;
  return static_cast<double>(p * z * l11_poly(z, p, e) / (4 * e * D * sqrt(D)));
}

double printed_theta2_k2(double zd, double pd, double ed) {
  const HighReal z = zd, p = pd, e = ed;
  const HighReal D = p * e * z * z + e * z - 1;
  return static_cast<double>(p * l22_poly(z, p, e) / (96 * e * e * e * z * D * D * D * sqrt(D)));
}

std::vector<double> engine_focal_values(double z, double p, double eta, double k, int count) {
  const auto out = run_engine(z, p, eta, k, count);
  std::vector<double> v;
  for (const auto& x : out.V) v.push_back(static_cast<double>(x));
  return v;
}

double calibration_constant() {
  static const double c = [] {
    return engine_focal_values(1, 1, 1, 2, 1)[0] / printed_theta1(1, 1, 1, 2);
  }();
  return c;
}

FocalValues focal_values(double z, double p, double eta, double k, const FocalOptions& opt) {
  if (!in_omega_star(z, p, eta, k)) throw DomainError("focal_values: (z, p, eta, k) outside Omega*");
  FocalValues fv;
  fv.z = z;
  fv.p = p;
  fv.eta = eta;
  fv.k = k;
  fv.D = p * eta * powr(z, k) + eta * z - 1;
  const auto out = run_engine(z, p, eta, k, opt.count);
  for (const auto& x : out.V) fv.theta.push_back(static_cast<double>(x));
  fv.min_singular_ratio = out.sv_ratio;
  fv.max_residual = out.residual;
  fv.f1 = closed_form_f1(z, p, eta, k);
  fv.theta_printed = printed_theta1(z, p, eta, k);
  if (k == 2) {
    const auto L = closed_form_L(z, p, eta);
    fv.L11 = L.L11;
    fv.L22 = L.L22;
  }
  fv.calibration = calibration_constant();

  std::vector<double> scale(fv.theta.size(), 0.0);
  if (opt.estimate_scale) {
    for (double f : {0.99, 1.01}) {
      if (!in_omega_star(z, p * f, eta, k)) continue;
      const auto nb = engine_focal_values(z, p * f, eta, k, opt.count);
      for (std::size_t i = 0; i < nb.size(); ++i) scale[i] = std::max(scale[i], std::abs(nb[i]));
    }
  }
  for (std::size_t i = 0; i < fv.theta.size(); ++i) {
    fv.zero_tol.push_back(1e-9 * std::max(1.0, scale[i]));
    if (!fv.order && std::abs(fv.theta[i]) > fv.zero_tol.back()) fv.order = static_cast<int>(i) + 1;
  }
  return fv;
}

HopfFactorValues factor_values(double z, double /*p*/, double eta, double k) {
  HopfFactorValues f;
  const double e = eta;
  f.R0f = k * e - e - k;
  f.R1f = k * e + k - e - 2;
  f.R2f = 2 * k * e * z - 2 * e * z - k;
  f.R3f = k * e * e * z - e * e * z + 2 * k * e * z - 2 * e * z - k;
  const double k2 = k * k, k3 = k2 * k, z2 = z * z, z3 = z2 * z, z4 = z3 * z;
  f.l1 = 10 * k2 * z - 30 * k * z + 20 * z + 2 * k2 - 3 * k;
  // printed with a dropped '+' and (k-1) in place of (k-2); see README
  f.l2 = 12 * (k - 1) * (k - 1) * (k - 2) * z2 + 4 * (k - 1) * (k - 2) * (2 * k - 1) * z -
         k * (2 * k - 1) * (2 * k - 1);
  f.l3 = 12 * std::pow(k - 1, 4) * z4 + 8 * std::pow(k - 1, 3) * (5 * k + 2) * z3 +
         (k - 1) * (k - 1) * (2 * k - 1) * (23 * k + 18) * z2 +
         2 * k * z * (k - 1) * (2 * k - 1) * (5 * k + 2) + k2 * (k + 1) * (2 * k - 1);
  f.l4 = 300 * (k - 2) * (k - 2) * std::pow(k - 1, 3) * z4 +
         4 * (k - 1) * (k - 1) * (k - 2) * (127 * k2 - 181 * k - 158) * z3 +
         2 * (k - 1) * (k - 1) * (2 * k - 1) * (66 * k2 + 111 * k - 535) * z2 +
         (2 * k - 1) * (2 * k - 1) * (51 * k3 - 60 * k2 - 407 * k + 648) * z +
         (k - 2) * (k + 1) * (2 * k - 1) * (2 * k - 1) * (37 * k - 81);
  if (k > 1.5 && k < 2) f.z_breve = k * (2 * k - 3) / (10 * (k - 1) * (2 - k));
  return f;
}

const char* to_string(Stability s) {
  switch (s) {
    case Stability::Stable: return "stable";
    case Stability::Unstable: return "unstable";
    case Stability::Undetermined: return "undetermined";
  }
  return "undetermined";
}

WeakFocusOrder weak_focus_order(double z, double p, double eta, double k) {
  WeakFocusOrder w;
  w.values = focal_values(z, p, eta, k, {4, true});
  w.order = w.values.order;
  if (w.order) w.stability = w.values.theta[*w.order - 1] < 0 ? Stability::Stable : Stability::Unstable;
  return w;
}

}  // namespace sirs
