#pragma once

#include <array>
#include <cmath>
#include <utility>

#include "sirs/errors.hpp"
#include "sirs/precision.hpp"
#include "sirs/series.hpp"

namespace sirs {

struct OriginalParams {
  double b = 0;        // recruitment
  double d = 0;        // natural death
  double beta = 0;     // transmission
  double delta = 0;    // immunity loss
  double mu = 0;       // recovery
  double upsilon = 0;  // nonlinearity weight
  double k = 0;        // exposure exponent
};

// Parameters of the scaled planar system. Only constructible through
// validate_params, so every instance satisfies p, lambda0 > 0, gamma > eta > 0, k > 0.
class ModelParams {
 public:
  double p() const { return p_; }
  double lambda0() const { return lambda0_; }
  double gamma() const { return gamma_; }
  double eta() const { return eta_; }
  double k() const { return k_; }
  double r0() const { return r0_; }

  friend ModelParams validate_params(double p, double lambda0, double gamma, double eta, double k);
  friend bool operator==(const ModelParams& a, const ModelParams& b) {
    return a.p_ == b.p_ && a.lambda0_ == b.lambda0_ && a.gamma_ == b.gamma_ && a.eta_ == b.eta_ &&
           a.k_ == b.k_;
  }

 private:
  ModelParams(double p, double l, double g, double e, double k)
      : p_(p), lambda0_(l), gamma_(g), eta_(e), k_(k), r0_(l / g) {}
  double p_, lambda0_, gamma_, eta_, k_, r0_;
};

ModelParams validate_params(double p, double lambda0, double gamma, double eta, double k);
ModelParams reduce_original_params(const OriginalParams& orig);
void validate_original(const OriginalParams& orig);

double basic_reproduction_number(const ModelParams& params);

struct State {
  double x = 0;
  double y = 0;
};

// Closed region x >= 0, y >= 0, x + y <= lambda0, optionally relaxed by slack.
bool in_region(const ModelParams& params, const State& s, double slack = 0.0);

using Vec2 = std::array<double, 2>;

// x + p x^k, continuous at x = 0 for k > 0.
inline double incidence_factor(double p, double k, double x) {
  if (x <= 0) return x;
  return x + p * std::exp(k * std::log(x));
}

Vec2 vector_field(const ModelParams& params, const State& s);

// Field series about (x0, y0) in the displacement (X, Y) at arbitrary
// precision. Parameters are passed as raw values so callers can build loci
// in high precision without rounding through double.
template <class T>
std::pair<BivariateSeries<T>, BivariateSeries<T>> expand_field(const T& p, const T& lambda0,
                                                               const T& gamma, const T& eta,
                                                               const T& k, const T& x0,
                                                               const T& y0, int order) {
  using std::exp;
  using std::log;
  if (!(x0 > 0)) throw DomainError("taylor_expand: center x must be positive");
  if (order < 1 || order > 9) throw DomainError("taylor_expand: order must lie in [1, 9]");
  // g(x0 + X) = x0 + X + p x0^k (1 + X/x0)^k
  const T pxk = p * exp(k * log(x0));
  const std::vector<T> bin = binomial_series(k, order);
  BivariateSeries<T> g(order);
  T scale = 1;
  for (int n = 0; n <= order; ++n) {
    g(n, 0) = pxk * bin[n] * scale;
    scale /= x0;
  }
  g(0, 0) += x0;
  if (order >= 1) g(1, 0) += T(1);
  // lambda0 - x - y
  const BivariateSeries<T> rest = BivariateSeries<T>::linear(T(-1), T(-1), lambda0 - x0 - y0, order);
  BivariateSeries<T> f1 = g * rest;
  f1(0, 0) -= gamma * x0;
  f1(1, 0) -= gamma;
  BivariateSeries<T> f2 = BivariateSeries<T>::linear(eta, T(-1), eta * x0 - y0, order);
  return {std::move(f1), std::move(f2)};
}

std::pair<BivariateSeries<HighReal>, BivariateSeries<HighReal>> taylor_expand(
    const ModelParams& params, const State& center, int order = 9);

}  // namespace sirs
