// Acceptance runner. Usage: acceptance NN | all
// Prints one PASS/FAIL line per criterion; exit status is nonzero on failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sirs/cli/config.hpp"
#include "sirs/cli/registry.hpp"
#include "sirs/cli/run.hpp"
#include "sirs/degeneracy.hpp"
#include "sirs/dynamics.hpp"
#include "sirs/equilibria.hpp"
#include "sirs/hopf.hpp"
#include "sirs/integrator.hpp"

using namespace sirs;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// 1
Outcome focal_cross_validation() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(0, 1);
  const double cal = calibration_constant();
  int samples = 0, sign_checked = 0, sign_bad = 0;
  double worst_rel = 0;
  while (samples < 100) {
    const double k = 1 + 4 * (1 - u(rng));  // (1, 5]
    const double z = 0.2 + 2.5 * u(rng), p = 0.1 + 4 * u(rng);
    const double zk = std::pow(z, k);
    const double lo = 1 / (z + p * zk), hi = (z + p * zk) * (1 + z + p * zk) / (p * zk * (k - 1));
    const double eta = lo + (std::min(hi, lo + 20) - lo) * u(rng);
    if (!in_omega_star(z, p, eta, k)) continue;
    ++samples;
    const double engine = engine_focal_values(z, p, eta, k, 1)[0];
    const double printed = printed_theta1(z, p, eta, k);
    const double f1 = closed_form_f1(z, p, eta, k);
    if (std::abs(printed) > 1e-8) {
      ++sign_checked;
      if ((engine > 0) != (f1 > 0)) ++sign_bad;
      worst_rel = std::max(worst_rel, std::abs(engine - cal * printed) / std::abs(cal * printed));
    }
  }
  const double secs = seconds_since(t0);
  std::ostringstream os;
  os << samples << " samples, " << sign_checked << " sign-checked, " << sign_bad << " sign mismatches, worst rel "
     << fmt("%.2e", worst_rel) << ", calibration " << fmt("%.12f", cal) << ", " << fmt("%.1f", secs) << " s";
  return {sign_bad == 0 && worst_rel <= 1e-6 && secs < 30, os.str()};
}

// 2
Outcome k2_identity() {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> u(0, 1);
  int n = 0;
  double worst = 0;
  while (n < 100) {
    const double z = 0.1 + 3 * u(rng), p = 0.1 + 5 * u(rng), eta = 0.05 + 6 * u(rng);
    const double D = p * eta * z * z + eta * z - 1;
    if (!(D > 0.01)) continue;
    ++n;
    const double a = printed_theta1(z, p, eta, 2), b = printed_theta1_k2(z, p, eta);
    worst = std::max(worst, std::abs(a - b) / std::max(std::abs(a), std::abs(b)));
  }
  const double spot = printed_theta1(1, 1, 1, 2);
  std::ostringstream os;
  os << n << " samples, worst rel " << fmt("%.2e", worst) << ", spot " << fmt("%.15g", spot);
  return {worst <= 1e-10 && std::abs(spot - 0.25) <= 1e-14, os.str()};
}

// 3
Outcome order_two_sign() {
  // L11 = a p^2 + b p + c at k = 2; points on its zero set inside the two regions
  auto positive_roots = [](double z, double eta) {
    const double a = z * z * z * (2 - eta), b = 3 * z + 2 * z * z - 3 * z * z * eta, c = 1 - eta - 2 * z * eta;
    std::vector<double> out;
    const double disc = b * b - 4 * a * c;
    if (disc < 0) return out;
    for (double s : {-1.0, 1.0}) {
      const double r = (-b + s * std::sqrt(disc)) / (2 * a);
      if (r > 0) out.push_back(r);
    }
    return out;
  };
  struct Pt {
    double z, eta;
  };
  std::vector<Pt> pts;
  for (double z : {0.6, 1.0, 1.5, 2.5, 4.0}) {
    const double lo = 1 / (1 + 2 * z);
    pts.push_back({z, lo + 0.5 * (2 - lo)});
  }
  for (double z : {0.1, 0.25, 0.4, 0.55, 0.7}) {
    const double hi = (2 * z - 3) / (4 - z) + 2 * std::sqrt(9 + 4 * z) / ((4 - z) * std::sqrt(z));
    pts.push_back({z, 2 + 0.5 * (hi - 2)});
  }
  int ok = 0, total = 0;
  std::ostringstream os;
  for (const auto& q : pts) {
    const auto roots = positive_roots(q.z, q.eta);
    if (roots.empty()) {
      os << "[no root z=" << q.z << "] ";
      ++total;
      continue;
    }
    ++total;
    // in the first region both roots are positive; use the one inside Omega*
    double p = -1;
    for (double r : roots)
      if (in_omega_star(q.z, r, q.eta, 2)) p = r;
    if (p < 0) {
      os << "[outside z=" << q.z << "] ";
      continue;
    }
    const FocalValues fv = focal_values(q.z, p, q.eta, 2);
    const bool first_zero = std::abs(fv.theta[0]) <= fv.zero_tol[0];
    const bool second_pos = fv.theta[1] > fv.zero_tol[1];
    if (first_zero && second_pos) ++ok;
    else
      os << "[z=" << q.z << " theta1=" << fv.theta[0] << " theta2=" << fv.theta[1] << "] ";
  }
  os << ok << "/" << total << " points with theta1 ~ 0 and theta2 > 0";
  return {ok == total && total == 10, os.str()};
}

// 4
double oracle_H(double x, double p, double lambda0, double gamma, double eta, double k) {
  return (1 + p * std::pow(x, k - 1)) * (1 - (1 + eta) / lambda0 * x) - gamma / lambda0;
}

Outcome equilibrium_oracle() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> u(0, 1);
  const int n = 1'000'000;
  int draws = 0, count_bad = 0, loc_bad = 0, max_count = 0, multi = 0;
  double worst = 0;
  const double ks[] = {0.5, 1, 1.5, 2, 3};
  for (int d = 0; d < 1000; ++d) {
    const double k = ks[d % 5];
    const double eta = 0.1 + 3 * u(rng);
    const double lambda0 = 0.5 + 8 * u(rng);
    const double p = std::exp(std::log(0.05) + std::log(200.0) * u(rng));
    const double gamma = eta + 0.01 + lambda0 * 1.5 * u(rng);
    const ModelParams m = validate_params(p, lambda0, gamma, eta, k);
    ++draws;
    const double xm = lambda0 / (1 + eta);
    auto H = [&](double x) { return oracle_H(x, p, lambda0, gamma, eta, k); };
    // log-spaced prefix then a uniform grid of n points
    std::vector<double> xs;
    for (int i = 0; i < 60; ++i) xs.push_back(xm * 1e-12 * std::pow(10.0, i * 6.0 / 60));
    for (int i = 1; i <= n; ++i) xs.push_back(xm * i / n);
    std::vector<double> roots;
    double xa = xs[0], ha = H(xa);
    for (std::size_t i = 1; i < xs.size(); ++i) {
      const double xb = xs[i], hb = H(xb);
      if ((ha < 0) != (hb < 0)) {
        double lo = xa, hi = xb;
        const bool neg_lo = ha < 0;
        for (int it = 0; it < 200 && hi - lo > 4e-16 * hi; ++it) {
          const double mid = 0.5 * (lo + hi);
          if ((H(mid) < 0) == neg_lo) lo = mid;
          else hi = mid;
        }
        roots.push_back(0.5 * (lo + hi));
      }
      xa = xb, ha = hb;
    }
    const auto got = find_endemic_equilibria(m);
    max_count = std::max<int>(max_count, static_cast<int>(got.size()));
    if (got.size() > 1) ++multi;
    if (got.size() != roots.size()) {
      ++count_bad;
      continue;
    }
    for (std::size_t j = 0; j < roots.size(); ++j) {
      const double e = std::abs(got[j].z - roots[j]);
      worst = std::max(worst, e);
      if (e > 1e-8) ++loc_bad;
    }
  }
  const double secs = seconds_since(t0);
  std::ostringstream os;
  os << draws << " draws (" << multi << " with several roots), count mismatches " << count_bad
     << ", location mismatches " << loc_bad << ", worst " << fmt("%.2e", worst) << ", max count " << max_count
     << ", " << fmt("%.1f", secs) << " s";
  return {count_bad == 0 && loc_bad == 0 && max_count <= 3 && secs < 60, os.str()};
}

// 5
Outcome locus_residuals() {
  std::mt19937_64 rng(505);
  std::uniform_real_distribution<double> u(0, 1);
  double sn_h = 0, sn_hp = 0, bt_tr = 0, bt_det = 0, b11 = 0;
  for (int i = 0; i < 200; ++i) {
    const double z = 0.2 + 2 * u(rng), p = 0.1 + 3 * u(rng), eta = 0.1 + 3 * u(rng), k = 1.1 + 3.9 * u(rng);
    const SaddleNodeLocus s = saddle_node_locus(z, p, eta, k);
    const ModelParams m = validate_params(p, s.lambda0_hat, s.gamma_hat, eta, k);
    sn_h = std::max(sn_h, std::abs(evaluate_H(m, z)));
    sn_hp = std::max(sn_hp, std::abs(evaluate_H(m, z, 1)));
  }
  int bt_n = 0, skipped = 0;
  while (bt_n < 200) {
    const double z = 0.2 + 2 * u(rng), k = 1.1 + 3.9 * u(rng);
    if (!(k > (1 + 2 * z) / (1 + z))) continue;
    BTLocus bt;
    try {
      bt = bogdanov_takens_locus(z, k);
    } catch (const DomainError&) {
      ++skipped;  // locus point outside the parameter space
      continue;
    }
    ++bt_n;
    const ModelParams mb = bt_params(bt);
    bt_tr = std::max(bt_tr, std::abs(jacobian_trace(mb, z)));
    bt_det = std::max(bt_det, std::abs(jacobian_det(mb, z)));
    b11 = std::max(b11, std::abs(b11_coefficient(z, bt.p_check, k)));
  }
  std::ostringstream os;
  os << "200 saddle-node loci |H| " << fmt("%.1e", sn_h) << " |H'| " << fmt("%.1e", sn_hp) << "; 200 BT loci ("
     << skipped << " draws outside the parameter space skipped) |Tr| " << fmt("%.1e", bt_tr) << " |Det| "
     << fmt("%.1e", bt_det) << " |b11| " << fmt("%.1e", b11);
  return {sn_h <= 1e-12 && sn_hp <= 1e-12 && bt_tr <= 1e-10 && bt_det <= 1e-10 && b11 <= 1e-10, os.str()};
}

// 6
Outcome cusp_coefficients_check() {
  double worst_g2 = 0;
  for (double z : {0.5, 1.0, 2.0}) {
    const double want = 1 / (2 * std::sqrt(2 * z) * std::pow(z * (2 + z), 0.25));
    worst_g2 = std::max(worst_g2, std::abs(cusp_coefficients(z, 2).G - want) / want);
  }
  bool ok = worst_g2 <= 1e-10;
  std::ostringstream os;
  os << "G(z,2) worst rel " << fmt("%.1e", worst_g2) << ";";
  for (double k : {2.5, 3.0, 4.0, 5.0}) {
    const auto zt = z_tilde(k);
    if (!zt) {
      ok = false;
      os << " k=" << k << " no z_tilde";
      continue;
    }
    const CuspCoefficients c = cusp_coefficients(*zt, k);
    ok = ok && std::abs(c.G) <= 1e-8 && c.F < 0;
    os << " k=" << k << " z~=" << fmt("%.5f", *zt) << " G=" << fmt("%.1e", c.G) << " F=" << fmt("%.3g", c.F);
  }
  return {ok, os.str()};
}

// 7
Outcome four_panel_cycles() {
  const char* ids[] = {"w4a", "w4b", "w4c", "w4d"};
  const int want[] = {1, 1, 1, 2};
  bool ok = true;
  std::ostringstream os;
  for (int i = 0; i < 4; ++i) {
    const auto t0 = Clock::now();
    std::string got;
    try {
      const cli::FigureOutcome o = cli::evaluate_figure(cli::find_figure(ids[i]));
      got = std::to_string(o.cycle_count);
      ok = ok && o.cycle_count == want[i];
    } catch (const std::exception& e) {
      got = std::string("error: ") + e.what();
      ok = false;
    }
    const double secs = seconds_since(t0);
    ok = ok && secs < 120;
    os << ids[i] << "=" << got << " (want " << want[i] << ", " << fmt("%.1f", secs) << " s) ";
  }
  return {ok, os.str()};
}

// 8
Outcome sweep_event_order() {
  const cli::FigureOutcome o = cli::evaluate_figure(cli::find_figure("w2"));
  std::ostringstream os;
  os << "observed:";
  for (const auto& t : o.observed) os << ' ' << t;
  os << "; " << o.detail;
  return {o.verdict == cli::Verdict::Match, os.str()};
}

// 9
Outcome three_nested_cycles() {
  bool ok = true;
  std::ostringstream os;
  for (const char* id : {"w5", "w6"}) {
    const cli::FigureOutcome o = cli::evaluate_figure(cli::find_figure(id));
    const bool full = o.cycle_count == 3;
    const bool partial = o.sign_changes >= 2 && o.verdict == cli::Verdict::Inconclusive;
    ok = ok && (full || partial);
    os << id << ": cycles " << o.cycle_count << ", sign changes " << o.sign_changes << ", verdict "
       << cli::to_string(o.verdict) << "; ";
  }
  return {ok, os.str()};
}

// 10
Outcome nilpotent_routing() {
  struct Case {
    double k, x;
    DegenerateKind want;
    NilpotentRegion region;
  };
  std::vector<Case> cases;
  for (double k : {2.2, 2.5, 2.7}) {
    const double lo = nilpotent_lower_bound(k), root = nilpotent_discriminant_root(k);
    cases.push_back({k, 0.5 * (lo + root), DegenerateKind::NilpotentEllipticCodim3, NilpotentRegion::Elliptic});
    cases.push_back({k, root, DegenerateKind::NilpotentEllipticCodim4Plus, NilpotentRegion::EllipticCodim4Plus});
    cases.push_back({k, 1.5 * root, DegenerateKind::NilpotentFocusCodim3, NilpotentRegion::Focus});
  }
  for (double k : {3.0, 4.0})
    cases.push_back({k, 2 * nilpotent_lower_bound(k), DegenerateKind::NilpotentFocusCodim3, NilpotentRegion::Focus});
  int ok = 0;
  std::ostringstream os;
  for (const auto& c : cases) {
    const NilpotentFocusCoefficients n = nilpotent_focus_analysis(c.x, c.k);
    const bool sign_ok = c.region == NilpotentRegion::Focus       ? n.discriminant < 0
                         : c.region == NilpotentRegion::Elliptic ? n.discriminant > 0
                                                                 : n.region == NilpotentRegion::EllipticCodim4Plus;
    const ModelParams m = validate_params(n.p_hat, n.lambda0_bar, n.gamma_bar, n.eta_bar1, c.k);
    const DegenerateKind got = classify_degenerate(m, c.x);
    if (sign_ok && got == c.want && n.region == c.region) ++ok;
    else os << "[k=" << c.k << " x=" << c.x << " got " << to_string(got) << "] ";
  }
  const double p = 192 * std::sqrt(3.0) / (175 * std::sqrt(35.0));
  const DegenerateKind w10 = classify_degenerate(validate_params(p, 125.0 / 16, 7.5, 8.0 / 7, 2.5), 35.0 / 48);
  os << ok << "/" << cases.size() << " region samples routed; printed nilpotent figure -> " << to_string(w10);
  return {ok == static_cast<int>(cases.size()) && w10 == DegenerateKind::NilpotentEllipticCodim4Plus, os.str()};
}

// 11
Outcome dynamics_properties() {
  std::mt19937_64 rng(1111);
  std::uniform_real_distribution<double> u(0, 1);
  int violations = 0, runs = 0;
  for (int set = 0; set < 20; ++set) {
    const double eta = 0.2 + 2.5 * u(rng);
    const ModelParams m = validate_params(0.1 + 6 * u(rng), 0.5 + 7 * u(rng), eta + 0.05 + 5 * u(rng), eta,
                                          0.5 + 3.5 * u(rng));
    for (int i = 0; i < 100; ++i) {
      const double x = m.lambda0() * u(rng);
      const double y = (m.lambda0() - x) * u(rng);
      const Trajectory tr = integrate(m, {x, y}, 20);
      ++runs;
      for (const auto& s : tr.states)
        if (!in_region(m, s, kRegionSlack)) {
          ++violations;
          break;
        }
    }
  }
  // observed order of the integrator on a smooth nonlinear orbit
  const ModelParams mo = validate_params(1, 5.417, 7.195, 0.75, 2);
  auto f = [&](const Vec2& y) {
    const Vec2 v = vector_field(mo, {y[0], y[1]});
    return Vec2{v[0], v[1]};
  };
  auto endpoint = [&](int n) {
    Dop853 ig(f);
    ig.reset(0, {1.0, 0.5});
    for (int i = 0; i < n; ++i) ig.fixed_step(2.0 / n);
    return ig.y();
  };
  const Vec2 ref = endpoint(2048), a = endpoint(16), b = endpoint(32);
  const double order = std::log2(std::hypot(a[0] - ref[0], a[1] - ref[1]) / std::hypot(b[0] - ref[0], b[1] - ref[1]));
  // fixed-point drift
  double drift = 0;
  for (const auto& e : find_endemic_equilibria(mo)) {
    const Trajectory tr = integrate(mo, {e.z, e.y}, 100);
    for (const auto& s : tr.states) drift = std::max(drift, std::hypot(s.x - e.z, s.y - e.y));
  }
  std::ostringstream os;
  os << runs << " runs with " << violations << " region violations, order " << fmt("%.2f", order) << ", drift "
     << fmt("%.1e", drift);
  return {violations == 0 && order >= 4.5 && drift <= 1e-9, os.str()};
}

// 12
Outcome determinism() {
  const fs::path base = fs::temp_directory_path() / "sirsbif_acceptance_det";
  fs::remove_all(base);
  std::vector<fs::path> dirs{base / "a", base / "b"};
  for (const auto& d : dirs) {
    cli::ScenarioConfig cfg;
    cfg.task = "figure";
    cfg.figure = "w4d";
    cfg.seed = 42;
    cfg.out_dir = d.string();
    std::ostringstream log, err;
    cli::run_scenario_status(cfg, log, err);
  }
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  int files = 0, differ = 0;
  if (fs::exists(dirs[0]))
    for (const auto& e : fs::directory_iterator(dirs[0])) {
      if (e.path().extension() != ".csv") continue;
      ++files;
      if (slurp(e.path()) != slurp(dirs[1] / e.path().filename())) ++differ;
    }
  fs::remove_all(base);
  std::ostringstream os;
  os << files << " CSV files compared, " << differ << " differ";
  return {files > 0 && differ == 0, os.str()};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "focal_cross_validation", focal_cross_validation},
      {2, "k2_identity", k2_identity},
      {3, "order_two_sign", order_two_sign},
      {4, "equilibrium_oracle", equilibrium_oracle},
      {5, "locus_residuals", locus_residuals},
      {6, "cusp_coefficients", cusp_coefficients_check},
      {7, "four_panel_cycles", four_panel_cycles},
      {8, "sweep_event_order", sweep_event_order},
      {9, "three_nested_cycles", three_nested_cycles},
      {10, "nilpotent_routing", nilpotent_routing},
      {11, "dynamics_properties", dynamics_properties},
      {12, "determinism", determinism},
  };
  const std::string which = argc > 1 ? argv[1] : "all";
  int failed = 0, ran = 0;
  for (const auto& c : all) {
    if (which != "all" && std::stoi(which) != c.id) continue;
    ++ran;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %02d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  if (ran == 0) {
    std::fprintf(stderr, "unknown criterion '%s'\n", which.c_str());
    return 2;
  }
  return failed == 0 ? 0 : 1;
}
