#include "sirs/model.hpp"

#include <string>

namespace sirs {

ModelParams validate_params(double p, double lambda0, double gamma, double eta, double k) {
  if (!std::isfinite(p) || !std::isfinite(lambda0) || !std::isfinite(gamma) ||
      !std::isfinite(eta) || !std::isfinite(k))
    throw DomainError("parameters must be finite");
  if (!(p > 0)) throw DomainError("p <= 0");
  if (!(lambda0 > 0)) throw DomainError("lambda0 <= 0");
  if (!(eta > 0)) throw DomainError("eta <= 0");
  if (!(gamma > eta)) throw DomainError("gamma <= eta");
  if (!(k > 0)) throw DomainError("k <= 0");
  return ModelParams(p, lambda0, gamma, eta, k);
}

void validate_original(const OriginalParams& o) {
  auto need = [](bool ok, const char* what) {
    if (!ok) throw DomainError(what);
  };
  need(std::isfinite(o.b) && std::isfinite(o.d) && std::isfinite(o.beta) &&
           std::isfinite(o.delta) && std::isfinite(o.mu) && std::isfinite(o.upsilon) &&
           std::isfinite(o.k),
       "original parameters must be finite");
  need(o.b > 0, "b <= 0");
  need(o.d > 0, "d <= 0");
  need(o.beta > 0, "beta <= 0");
  need(o.delta >= 0, "delta < 0");
  need(o.mu > 0, "mu <= 0");
  need(o.upsilon > 0, "upsilon <= 0");
  need(o.k > 0, "k <= 0");
}

ModelParams reduce_original_params(const OriginalParams& o) {
  validate_original(o);
  const double s = o.d + o.delta;
  const double p = std::pow(s / o.beta, o.k - 1) * o.upsilon;
  const double lambda0 = o.beta / s * (o.b / o.d);
  const double gamma = (o.d + o.mu) / s;
  const double eta = o.mu / s;
  try {
    return validate_params(p, lambda0, gamma, eta, o.k);
  } catch (const DomainError& e) {
    // gamma - eta = d/(d+delta) > 0 analytically; only rounding can land here
    throw DomainError(std::string("internal: reduced parameters left the admissible set: ") +
                      e.what());
  }
}

double basic_reproduction_number(const ModelParams& params) {
  return params.lambda0() / params.gamma();
}

bool in_region(const ModelParams& params, const State& s, double slack) {
  return s.x >= -slack && s.y >= -slack && s.x + s.y <= params.lambda0() + slack;
}

Vec2 vector_field(const ModelParams& m, const State& s) {
  const double g = incidence_factor(m.p(), m.k(), s.x);
  return {g * (m.lambda0() - s.x - s.y) - m.gamma() * s.x, m.eta() * s.x - s.y};
}

std::pair<BivariateSeries<HighReal>, BivariateSeries<HighReal>> taylor_expand(
    const ModelParams& m, const State& center, int order) {
  if (!(center.x > 0)) throw DomainError("taylor_expand: center x must be positive");
  if (order < 2 || order > 9) throw DomainError("taylor_expand: order must lie in [2, 9]");
  return expand_field<HighReal>(m.p(), m.lambda0(), m.gamma(), m.eta(), m.k(), center.x,
                                center.y, order);
}

}  // namespace sirs
