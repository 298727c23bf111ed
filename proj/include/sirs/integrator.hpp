#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <limits>

namespace sirs {

using Vec2 = std::array<double, 2>;

struct IntegratorOptions {
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;
  double h_max = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 50'000'000;
};

struct IntegratorStats {
  std::size_t steps = 0;
  std::size_t rejected = 0;
  std::size_t evaluations = 0;
  double max_error = 0;  // largest accepted scaled error estimate
};

// Dormand-Prince 8(5,3) with the seventh-order dense output, for planar
// systems. One instance integrates one trajectory.
class Dop853 {
 public:
  using Field = std::function<Vec2(const Vec2&)>;

  Dop853(Field f, IntegratorOptions opt = {});

  void reset(double t0, const Vec2& y0);
  // Take one accepted step without passing t_limit. Returns false when the
  // integration already sits at t_limit.
  bool step(double t_limit);
  // Single step of size h with no error control (for convergence studies).
  void fixed_step(double h);

  double t() const { return t_; }
  double t_prev() const { return t_old_; }
  const Vec2& y() const { return y_; }
  const Vec2& y_prev() const { return y_old_; }
  // Dense output inside the last accepted step.
  Vec2 dense(double t) const;
  const IntegratorStats& stats() const { return stats_; }

 private:
  Vec2 eval(const Vec2& y) {
    ++stats_.evaluations;
    return f_(y);
  }
  void stages(double h, Vec2& out);
  double error_norm(double h, const Vec2& y_new) const;
  void prepare_dense(double h, const Vec2& y_new);
  double initial_step(double t_limit);

  Field f_;
  IntegratorOptions opt_;
  IntegratorStats stats_;
  double t_ = 0, t_old_ = 0, h_ = 0, h_dense_ = 0, fac_old_ = 1e-4;
  bool reject_ = false;
  Vec2 y_{}, y_old_{};
  Vec2 k1_{}, k2_{}, k3_{}, k4_{}, k5_{}, k6_{}, k7_{}, k8_{}, k9_{}, k10_{};
  std::array<Vec2, 8> rc_{};
};

}  // namespace sirs
