#include "sirs/dynamics.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "sirs/errors.hpp"

namespace sirs {

namespace {

int g_jobs = 0;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 2 * std::numbers::pi;

double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }
double cross(const Vec2& a, const Vec2& b) { return a[0] * b[1] - a[1] * b[0]; }
double norm(const Vec2& a) { return std::hypot(a[0], a[1]); }

double distance(const State& a, const State& b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Run fn(i) for i in [0, n), in parallel when requested. Exceptions are
// captured per index and the first one (by index) is rethrown.
template <class Fn>
void for_each_index(std::size_t n, Execution exec, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  const long count = static_cast<long>(n);
  if (exec == Execution::Parallel) {
    const int threads = g_jobs > 0 ? g_jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (long i = 0; i < count; ++i) {
      try {
        fn(static_cast<std::size_t>(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    for (long i = 0; i < count; ++i) {
      try {
        fn(static_cast<std::size_t>(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// Distance from p along unit direction e to the boundary of the region.
double ray_to_boundary(const ModelParams& m, const State& p, const Vec2& e) {
  double t = kInf;
  if (e[0] < 0) t = std::min(t, -p.x / e[0]);
  if (e[1] < 0) t = std::min(t, -p.y / e[1]);
  const double s = e[0] + e[1];
  if (s > 0) t = std::min(t, (m.lambda0() - p.x - p.y) / s);
  return t;
}

}  // namespace

void set_parallel_jobs(int jobs) { g_jobs = std::max(0, jobs); }
int parallel_jobs() { return g_jobs > 0 ? g_jobs : omp_get_max_threads(); }

Trajectory integrate(const ModelParams& m, const State& initial, double t_end, double rel_tol,
                     double abs_tol, double sample_dt, const StepHook& hook) {
  if (!in_region(m, initial, kRegionSlack)) throw DomainError("integrate: initial state outside region");
  if (!(rel_tol >= 1e-13)) throw DomainError("integrate: rel_tol below 1e-13");
  if (!(t_end > 0)) throw DomainError("integrate: t_end must be positive");
  const double box = 10 * m.lambda0();
  Dop853 ig([&m](const Vec2& y) { return vector_field(m, {y[0], y[1]}); },
            IntegratorOptions{rel_tol, abs_tol});
  ig.reset(0, {initial.x, initial.y});
  Trajectory out;
  out.t.push_back(0);
  out.states.push_back(initial);
  double next_sample = sample_dt;
  while (ig.step(t_end)) {
    const Vec2& y = ig.y();
    if (!std::isfinite(y[0]) || !std::isfinite(y[1]) || std::abs(y[0]) > box || std::abs(y[1]) > box)
      throw BlowUp("integrate: state left the bounding box at t = " + std::to_string(ig.t()));
    if (sample_dt > 0) {
      while (next_sample <= ig.t() * (1 + 1e-15)) {
        const Vec2 v = next_sample >= ig.t() ? y : ig.dense(next_sample);
        out.t.push_back(next_sample);
        out.states.push_back({v[0], v[1]});
        next_sample = sample_dt * static_cast<double>(out.t.size());
      }
    } else {
      out.t.push_back(ig.t());
      out.states.push_back({y[0], y[1]});
    }
    if (hook && !hook(ig)) break;
  }
  out.stats = ig.stats();
  return out;
}

Section make_section(const ModelParams& m, double z) {
  const double tr = jacobian_trace(m, z);
  const double det = jacobian_det(m, z);
  if (!(det > 0) || tr * tr >= 4 * det) throw DomainError("make_section: equilibrium is not a focus");
  const double j11 = tr + 1.0;
  const double a = j11 - tr / 2, b = -incidence_factor(m.p(), m.k(), z), c = m.eta();
  // c u^2 - 2 a u v - b v^2 is conserved by the centre part; its major axis
  // is the eigenvector of the smaller eigenvalue.
  double m11 = c, m12 = -a, m22 = -b;
  if (m11 < 0) m11 = -m11, m12 = -m12, m22 = -m22;
  const double mid = (m11 + m22) / 2, rad = std::hypot((m11 - m22) / 2, m12);
  const double lmin = mid - rad;
  Vec2 e = std::abs(m12) > 1e-300 ? Vec2{m12, lmin - m11} : (m11 <= m22 ? Vec2{1, 0} : Vec2{0, 1});
  const double n = norm(e);
  e = {e[0] / n, e[1] / n};

  Section s;
  s.anchor = {z, m.eta() * z};
  const double up = ray_to_boundary(m, s.anchor, e), down = ray_to_boundary(m, s.anchor, {-e[0], -e[1]});
  if (down > up) e = {-e[0], -e[1]};
  s.direction = e;
  s.ray_limit = std::max(up, down);
  s.omega = std::sqrt(det - tr * tr / 4);  // c > 0 so the rotation is counterclockwise
  s.linear_period = kTwoPi / std::sqrt(det);

  s.rest_points.push_back({0, 0});
  const EquilibriumKind origin = classify_origin(m);
  if (origin == EquilibriumKind::DiseaseFreeSaddle || origin == EquilibriumKind::DiseaseFreeSaddleNode)
    s.saddles.push_back({0, 0});
  for (const auto& eq : endemic_equilibria(m)) {
    if (std::abs(eq.z - z) <= 1e-9 * std::max(1.0, z)) continue;
    s.rest_points.push_back({eq.z, eq.y});
    if (eq.kind == EquilibriumKind::Saddle || eq.kind == EquilibriumKind::SaddleNode)
      s.saddles.push_back({eq.z, eq.y});
  }
  return s;
}

ReturnResult poincare_return_detail(const ModelParams& m, const Section& s, double r,
                                    const ReturnOptions& opt) {
  if (!(r > 0) || r >= s.ray_limit) throw DomainError("poincare_return: radius off the section");
  const State a = s.anchor;
  const Vec2 e = s.direction;
  auto field = [&m, a](const Vec2& xi) { return vector_field(m, {a.x + xi[0], a.y + xi[1]}); };
  IntegratorOptions io;
  io.rel_tol = opt.rel_tol;
  io.abs_tol = 1e-2 * opt.rel_tol * r;
  io.h_max = s.linear_period / 12;
  Dop853 ig(field, io);
  ig.reset(0, {r * e[0], r * e[1]});

  const double t_budget = opt.budget_periods * s.linear_period;
  const double scale = std::max(1.0, m.lambda0());
  ReturnResult res;
  res.amplitude = r * std::abs(e[0]);
  res.saddle_gap = kInf;
  double angle = 0;
  auto observe = [&](const Vec2& xi) {
    res.amplitude = std::max(res.amplitude, std::abs(xi[0]));
    for (const State& q : s.saddles) res.saddle_gap = std::min(res.saddle_gap, distance({a.x + xi[0], a.y + xi[1]}, q));
  };
  observe(ig.y());

  while (true) {
    if (!ig.step(t_budget)) throw NoReturn("poincare_return: time budget exhausted");
    const Vec2 xi = ig.y(), prev = ig.y_prev();
    const State st{a.x + xi[0], a.y + xi[1]};
    if (!in_region(m, st, kRegionSlack)) throw NoReturn("poincare_return: orbit left the region");
    for (int j = 1; j < 4; ++j) observe(ig.dense(ig.t_prev() + (ig.t() - ig.t_prev()) * j / 4.0));
    observe(xi);
    for (const State& q : s.rest_points)
      if (distance(st, q) < 1e-8 * scale) throw NoReturn("poincare_return: orbit settled on a rest point");
    if (norm(field(xi)) < 1e-13 * scale) throw NoReturn("poincare_return: orbit stalled");
    angle += std::atan2(cross(prev, xi), dot(prev, xi));
    if (angle < kTwoPi) continue;

    auto g = [&](double t) { return cross(e, ig.dense(t)); };
    const double t0 = ig.t_prev(), t1 = ig.t();
    const double g0 = cross(e, prev), g1 = cross(e, xi);
    double tc;
    if (g0 == 0) {
      tc = t0;
    } else if (g1 == 0) {
      tc = t1;
    } else {
      if (!(g0 < 0 && g1 > 0)) throw NoReturn("poincare_return: section crossing not bracketed");
      std::uintmax_t it = 200;
      auto tol = [](double lo, double hi) { return hi - lo <= 1e-12 * std::max(1.0, std::abs(lo)); };
      const auto br = boost::math::tools::toms748_solve(g, t0, t1, g0, g1, tol, it);
      tc = (br.first + br.second) / 2;
    }
    const Vec2 xc = ig.dense(tc);
    const Vec2 f = field(xc);
    if (!(cross(e, f) > 1e-8 * norm(f))) throw NoReturn("poincare_return: crossing not transversal");
    res.radius = dot(e, xc);
    if (!(res.radius > 0)) throw NoReturn("poincare_return: crossing on the wrong side");
    res.time = tc;
    res.steps = ig.stats().steps;
    return res;
  }
}

double poincare_return(const ModelParams& m, const Section& s, double r, const ReturnOptions& opt) {
  return poincare_return_detail(m, s, r, opt).radius;
}

const char* to_string(CycleStability s) {
  switch (s) {
    case CycleStability::Attracting: return "attracting";
    case CycleStability::Repelling: return "repelling";
    case CycleStability::NeutralUncertain: return "neutral-uncertain";
  }
  return "?";
}

namespace {

class CycleFinder {
 public:
  CycleFinder(const ModelParams& m, double z, const CycleOptions& opt) : m_(m), opt_(opt) {
    out_.section = make_section(m, z);
    ropt_.rel_tol = opt.rel_tol;
    ropt_.budget_periods = opt.budget_periods;
    double rmax = opt.r_max;
    // Obstacles closer than the boundary end the valid prefix through NoReturn.
    if (rmax <= 0) rmax = 0.95 * out_.section.ray_limit;
    out_.r_max = std::min(rmax, out_.section.ray_limit * (1 - 1e-12));
  }

  CycleSearch run() {
    sample();
    analyse();
    return std::move(out_);
  }

 private:
  double d(double r) { return poincare_return(m_, out_.section, r, ropt_) - r; }

  int sign_of(double v) const { return std::abs(v) <= opt_.d_floor ? 0 : (v > 0 ? 1 : -1); }

  [[noreturn]] void inconclusive(const std::string& why) {
    out_.note = why;
    throw Inconclusive("find_limit_cycles: " + why, out_);
  }

  // Displacement where a return is expected to exist; failures inside the
  // valid prefix make the search inconclusive.
  double d_checked(double r) {
    try {
      return d(r);
    } catch (const NoReturn& e) {
      inconclusive(std::string("return failed during refinement: ") + e.what());
    } catch (const StepSizeUnderflow& e) {
      inconclusive(std::string("integrator failed during refinement: ") + e.what());
    }
  }

  void sample() {
    const int n = std::max(opt_.samples, 2);
    const double rmin = 1e-4 * out_.r_max;
    std::vector<double> r(n), P(n, 0);
    std::vector<char> ok(n, 0);
    for (int i = 0; i < n; ++i) r[i] = rmin * std::pow(out_.r_max / rmin, static_cast<double>(i) / (n - 1));
    for_each_index(n, opt_.exec, [&](std::size_t i) {
      try {
        P[i] = poincare_return(m_, out_.section, r[i], ropt_);
        ok[i] = 1;
      } catch (const NoReturn&) {
      } catch (const StepSizeUnderflow&) {
      }
    });
    for (int i = 0; i < n && ok[i]; ++i) {
      out_.r.push_back(r[i]);
      out_.P.push_back(P[i]);
      out_.d.push_back(P[i] - r[i]);
    }
    const std::size_t nv = out_.r.size();
    if (nv == static_cast<std::size_t>(n) || nv == 0) return;
    out_.note = "sampling stopped at first non-returning radius";
    // Bisect the edge of the returning region: cycles often sit just inside
    // a separatrix.
    double lo = r[nv - 1], hi = r[nv];
    for (int it = 0; it < 40 && hi - lo > 1e-9 * hi; ++it) {
      const double mid = std::sqrt(lo * hi);
      try {
        const double pm = poincare_return(m_, out_.section, mid, ropt_);
        out_.r.push_back(mid);
        out_.P.push_back(pm);
        out_.d.push_back(pm - mid);
        lo = mid;
      } catch (const NoReturn&) {
        hi = mid;
      } catch (const StepSizeUnderflow&) {
        hi = mid;
      }
    }
  }

  void add_root(double lo, double hi, double dlo, double dhi) {
    std::uintmax_t it = 200;
    const double tol_r = opt_.cycle_tol;
    auto tol = [tol_r](double a, double b) { return b - a <= tol_r; };
    auto fn = [this](double r) { return d_checked(r); };
    const auto br = boost::math::tools::toms748_solve(fn, lo, hi, dlo, dhi, tol, it);
    double rs = (br.first + br.second) / 2;
    ReturnResult rr = detail(rs);
    // the endpoint with the smaller displacement is the better estimate
    for (double cand : {br.first, br.second}) {
      ReturnResult rc = detail(cand);
      if (std::abs(rc.radius - cand) < std::abs(rr.radius - rs)) rs = cand, rr = rc;
    }
    LimitCycleRecord rec;
    rec.anchor = out_.section.anchor;
    rec.direction = out_.section.direction;
    rec.radius = rs;
    rec.period = rr.time;
    rec.amplitude = rr.amplitude;
    rec.saddle_gap = rr.saddle_gap;
    rec.residual = std::abs(rr.radius - rs);
    const double h = 1e-4 * rs;
    rec.slope = 1.0 + (d_checked(rs + h) - d_checked(rs - h)) / (2 * h);
    rec.slope_uncertainty = 2 * opt_.d_floor / h;
    if (std::abs(rec.slope - 1.0) <= rec.slope_uncertainty)
      rec.stability = CycleStability::NeutralUncertain;
    else
      rec.stability = rec.slope < 1 ? CycleStability::Attracting : CycleStability::Repelling;
    out_.cycles.push_back(rec);
  }

  ReturnResult detail(double r) {
    try {
      return poincare_return_detail(m_, out_.section, r, ropt_);
    } catch (const NoReturn& e) {
      inconclusive(std::string("return failed during refinement: ") + e.what());
    }
  }

  // A same-sign dip of |d| may hide a close pair of cycles.
  void probe_dip(double lo, double hi, int s) {
    auto f = [&](double r) { return s * d_checked(r); };
    std::uintmax_t it = 80;
    const auto mn = boost::math::tools::brent_find_minima(f, lo, hi, 40, it);
    const double dmin = s * mn.second;
    const int sm = sign_of(dmin);
    if (sm == 0) inconclusive("displacement dip below resolution floor");
    if (sm != s) {
      add_root(lo, mn.first, s * std::abs(d_checked(lo)), dmin);
      add_root(mn.first, hi, dmin, s * std::abs(d_checked(hi)));
    }
  }

  void analyse() {
    const std::size_t n = out_.r.size();
    std::vector<std::size_t> det;
    for (std::size_t i = 0; i < n; ++i)
      if (sign_of(out_.d[i]) != 0) det.push_back(i);
    for (std::size_t q = 0; q + 1 < det.size(); ++q) {
      const std::size_t i = det[q], j = det[q + 1];
      const int si = sign_of(out_.d[i]), sj = sign_of(out_.d[j]);
      if (si != sj) {
        add_root(out_.r[i], out_.r[j], out_.d[i], out_.d[j]);
        continue;
      }
      if (j > i + 1) {
        // indeterminate interior run between same-sign samples
        bool resolved = true;
        double prev_r = out_.r[i], prev_d = out_.d[i];
        for (std::size_t t = i; t < j; ++t) {
          const double rm = std::sqrt(out_.r[t] * out_.r[t + 1]);
          const double dm = d_checked(rm);
          const int sm = sign_of(dm);
          if (sm == 0) {
            resolved = false;
            continue;
          }
          if (sm != si) {
            add_root(prev_r, rm, prev_d, dm);
            add_root(rm, out_.r[j], dm, out_.d[j]);
            break;
          }
          prev_r = rm, prev_d = dm;
        }
        if (!resolved) inconclusive("indeterminate displacement between same-sign samples");
      }
    }
    // interior local minima of |d| among adjacent same-sign samples
    for (std::size_t q = 1; q + 1 < det.size(); ++q) {
      const std::size_t i = det[q - 1], j = det[q], k = det[q + 1];
      if (j != i + 1 || k != j + 1) continue;
      const int s = sign_of(out_.d[j]);
      if (sign_of(out_.d[i]) != s || sign_of(out_.d[k]) != s) continue;
      if (std::abs(out_.d[j]) < std::abs(out_.d[i]) && std::abs(out_.d[j]) < std::abs(out_.d[k]))
        probe_dip(out_.r[i], out_.r[k], s);
    }
    std::sort(out_.cycles.begin(), out_.cycles.end(),
              [](const auto& a, const auto& b) { return a.radius < b.radius; });
    CycleStability last = CycleStability::NeutralUncertain;
    for (const auto& c : out_.cycles) {
      if (c.stability == CycleStability::NeutralUncertain) continue;
      if (c.stability == last) out_.alternating = false;
      last = c.stability;
    }
  }

  const ModelParams& m_;
  CycleOptions opt_;
  ReturnOptions ropt_;
  CycleSearch out_;
};

}  // namespace

CycleSearch find_limit_cycles(const ModelParams& m, double focus_z, const CycleOptions& opt) {
  return CycleFinder(m, focus_z, opt).run();
}

const char* to_string(SweepEventKind k) {
  switch (k) {
    case SweepEventKind::SaddleNode: return "saddle-node";
    case SweepEventKind::Hopf: return "hopf";
    case SweepEventKind::CycleCountChange: return "cycle-count-change";
    case SweepEventKind::SuspectedHomoclinic: return "suspected-homoclinic";
  }
  return "?";
}

ModelParams with_parameter(const ModelParams& b, const std::string& name, double v) {
  if (name == "p") return validate_params(v, b.lambda0(), b.gamma(), b.eta(), b.k());
  if (name == "lambda0") return validate_params(b.p(), v, b.gamma(), b.eta(), b.k());
  if (name == "gamma") return validate_params(b.p(), b.lambda0(), v, b.eta(), b.k());
  if (name == "eta") return validate_params(b.p(), b.lambda0(), b.gamma(), v, b.k());
  if (name == "k") return validate_params(b.p(), b.lambda0(), b.gamma(), b.eta(), v);
  throw DomainError("unknown parameter '" + name + "'");
}

namespace {

bool focus_like(EquilibriumKind k) {
  return k == EquilibriumKind::StableFocus || k == EquilibriumKind::UnstableFocus ||
         k == EquilibriumKind::WeakFocusCandidate;
}

void evaluate_point(const ModelParams& base, const std::string& name, const SweepOptions& opt,
                    SweepPoint& pt) {
  pt.min_saddle_gap = kInf;
  try {
    const ModelParams m = with_parameter(base, name, pt.value);
    pt.equilibria = endemic_equilibria(m);
    if (!opt.find_cycles) return;
    for (const auto& eq : pt.equilibria) {
      if (!focus_like(eq.kind) || !(eq.det > 0) || eq.trace * eq.trace >= 4 * eq.det) continue;
      CycleOptions co = opt.cycles;
      co.exec = Execution::Serial;
      CycleSearch cs;
      try {
        cs = find_limit_cycles(m, eq.z, co);
      } catch (const Inconclusive& e) {
        cs = e.partial();
        pt.inconclusive = true;
      }
      pt.cycles += static_cast<int>(cs.cycles.size());
      for (const auto& c : cs.cycles) {
        pt.max_period_ratio = std::max(pt.max_period_ratio, c.period / cs.section.linear_period);
        pt.min_saddle_gap = std::min(pt.min_saddle_gap, c.saddle_gap);
        pt.cycle_records.push_back(c);
      }
    }
  } catch (const std::exception& e) {
    pt.error = e.what();
  }
}

// Trace signs of the det > 0 equilibria, by position.
std::vector<int> trace_signs(const SweepPoint& p) {
  std::vector<int> s;
  for (const auto& eq : p.equilibria)
    s.push_back(eq.det > 0 ? (eq.trace > 0 ? 1 : (eq.trace < 0 ? -1 : 0)) : 2);
  return s;
}

}  // namespace

SweepResult bifurcation_sweep(const ModelParams& base, const std::string& parameter,
                              const std::vector<double>& grid, const SweepOptions& opt) {
  const bool inc = std::is_sorted(grid.begin(), grid.end());
  const bool dec = std::is_sorted(grid.rbegin(), grid.rend());
  if (!inc && !dec) throw DomainError("bifurcation_sweep: grid must be monotone");
  const char* names[] = {"p", "lambda0", "gamma", "eta", "k"};
  if (std::find(std::begin(names), std::end(names), parameter) == std::end(names))
    throw DomainError("unknown parameter '" + parameter + "'");
  SweepResult res;
  res.parameter = parameter;
  res.grid = grid;
  res.points.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) res.points[i].value = grid[i];
  for_each_index(grid.size(), opt.exec,
                 [&](std::size_t i) { evaluate_point(base, parameter, opt, res.points[i]); });

  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const SweepPoint &a = res.points[i], &b = res.points[i + 1];
    if (!a.error.empty() || !b.error.empty()) continue;
    auto make = [&](SweepEventKind k, int ca, int cb, std::string why) {
      res.events.push_back({k, i, i + 1, grid[i], grid[i + 1], ca, cb, std::move(why)});
    };
    const int na = static_cast<int>(a.equilibria.size()), nb = static_cast<int>(b.equilibria.size());
    if (na != nb) make(SweepEventKind::SaddleNode, na, nb, "equilibrium-count");
    bool hopf = false;
    if (na == nb && trace_signs(a) != trace_signs(b)) {
      const auto sa = trace_signs(a), sb = trace_signs(b);
      for (std::size_t q = 0; q < sa.size(); ++q)
        if (sa[q] != 2 && sb[q] != 2 && sa[q] != sb[q]) hopf = true;
      if (hopf) make(SweepEventKind::Hopf, na, nb, "trace-sign");
    }
    if (a.cycles != b.cycles) {
      if (hopf) {
        make(SweepEventKind::CycleCountChange, a.cycles, b.cycles, "hopf");
        continue;
      }
      const double lam = with_parameter(base, parameter, grid[i]).lambda0();
      const bool blow = std::max(a.max_period_ratio, b.max_period_ratio) > opt.period_blowup;
      const bool near = std::min(a.min_saddle_gap, b.min_saddle_gap) < opt.saddle_proximity * lam;
      if (blow || near) {
        make(SweepEventKind::SuspectedHomoclinic, a.cycles, b.cycles, blow ? "period-growth" : "saddle-proximity");
        make(SweepEventKind::CycleCountChange, a.cycles, b.cycles, "suspected-homoclinic");
      } else {
        make(SweepEventKind::CycleCountChange, a.cycles, b.cycles, "saddle-node-of-cycles");
      }
    }
  }
  return res;
}

}  // namespace sirs
