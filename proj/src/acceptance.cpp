#include "cornerlab/acceptance.hpp"

#include "cornerlab/analysis.hpp"
#include "cornerlab/errors.hpp"
#include "cornerlab/exact.hpp"
#include "cornerlab/fem.hpp"
#include "cornerlab/mesh.hpp"
#include "cornerlab/norms.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

namespace cornerlab {

namespace {

constexpr double pi = std::numbers::pi;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Least-squares slope of log(err) against log(h).
double rate(const std::vector<double>& h, const std::vector<double>& err) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < h.size(); ++i) mx += std::log(h[i]), my += std::log(err[i]);
  mx /= h.size(), my /= h.size();
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    sxx += (std::log(h[i]) - mx) * (std::log(h[i]) - mx);
    sxy += (std::log(h[i]) - mx) * (std::log(err[i]) - my);
  }
  return sxy / sxx;
}

struct WorkedExample {
  Wedge wedge = make_wedge(-pi / 4, 3 * pi / 4);
  DomainSpec domain = make_domain(wedge, 1.0);
  SeparableSolution<double> exact = build_dirichlet_example(0.8, wedge);
  ProblemSpec spec = make_problem(domain, scalar_jump(exact.a0));
  ExactField field;

  WorkedExample() {
    const auto sol = exact;
    const Wedge w = wedge;
    spec.phi = [sol, w](const Point& x) { return eval_separable(sol, to_wedge_polar(w, x)); };
    field.value = [sol, w](const Point& x, Side) { return eval_separable(sol, to_wedge_polar(w, x)); };
    field.gradient = [sol, w](const Point& x, Side) -> Point { return grad_separable(sol, to_wedge_polar(w, x)); };
  }
};

const std::vector<int> kWorkedLevels = {64, 128, 256};
constexpr double kWorkedMu = 0.8;

CriterionResult c1_coefficients() {
  CriterionResult r;
  const double g = 0.8, tp = 3 * pi / 4, tm = -pi / 4;
  const Wedge w = make_wedge(tm, tp);
  const auto t0 = Clock::now();
  const auto tc = transmission_coeffs(g, w);
  const double elapsed = seconds_since(t0);
  const double direct = std::sin(g * tp) * std::cos(g * tm) / (std::cos(g * tp) * std::sin(g * tm));
  const double golden = 2.0 + std::sqrt(5.0);
  const double err = std::max(std::abs(tc.a0 - direct), std::abs(tc.a0 - golden));
  r.passed = err <= 1e-9 && elapsed < 1e-3;
  r.detail = "a0 = " + fmt("%.12f", tc.a0) + ", |a0 - (2+sqrt5)| and |a0 - direct| <= " + fmt("%.2e", err) +
             ", A = " + fmt("%.6f", tc.A) + ", call took " + fmt("%.2e", elapsed) + " s";
  return r;
}

CriterionResult c2_roundtrip() {
  CriterionResult r;
  const auto t0 = Clock::now();
  const Wedge w4 = make_wedge(-pi / 4, 3 * pi / 4);
  const double a0 = transmission_coeffs(0.8, w4).a0;
  double worst = std::abs(singular_exponent(a0, w4) - 0.8);
  for (double th : {pi / 6, pi / 4, pi / 3}) {
    const Wedge w = make_wedge(-th, th);
    for (double a : {0.5, 2.0, 10.0}) worst = std::max(worst, std::abs(singular_exponent(a, w) - pi / (2 * th)));
  }
  const double elapsed = seconds_since(t0);
  r.passed = worst <= 1e-8 && elapsed < 1e-2;
  r.detail = "max |gamma - expected| = " + fmt("%.2e", worst) + " over 10 cases in " + fmt("%.2e", elapsed) + " s";
  return r;
}

CriterionResult c3_corner_consistency() {
  CriterionResult r;
  std::vector<double> angles;
  for (int k = 1; k <= 9; ++k) angles.push_back(k * pi / 20);
  for (double a : {pi / 6, pi / 4, pi / 3, 5 * pi / 12}) angles.push_back(a);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  double min_gamma = 1e300, max_residual = 0.0, min_det = 1e300;
  int cases = 0;
  for (double tp : angles) {
    for (double tm : angles) {
      const Wedge w = make_wedge(-tm, tp);
      for (double a0 : {0.5, 2.0, 10.0}) {
        min_gamma = std::min(min_gamma, singular_exponent(a0, w));
        min_det = std::min(min_det, std::abs(corrector_determinant(a0, angles_of(w))));
        for (int rep = 0; rep < 3; ++rep) {
          const double cp = unit(rng), cm = unit(rng);
          const auto p = corrector_solve(cp, cm, a0, w);
          max_residual = std::max(max_residual, corrector_residual(p, cp, cm, a0, angles_of(w)));
        }
        ++cases;
      }
    }
  }
  r.passed = min_gamma > 1.0 && min_det > kDegeneracyTol && max_residual <= 1e-12;
  r.detail = std::to_string(cases) + " (theta+, theta-, a0) cases: min gamma = " + fmt("%.6f", min_gamma) +
             ", min |det| = " + fmt("%.3e", min_det) + ", max corrector residual = " + fmt("%.2e", max_residual);
  return r;
}

CriterionResult c4_corner_witness() {
  CriterionResult r;
  const WorkedExample ex;
  std::ostringstream os;
  bool ok = true;
  double prev_linf = 1e300, finest_time = 0.0;
  int finest_unknowns = 0;
  for (int n : kWorkedLevels) {
    const auto t0 = Clock::now();
    const FemSolution fs = solve_problem(ex.spec, 1.0 / n, kWorkedMu);
    finest_time = seconds_since(t0);
    finest_unknowns = fs.num_unknowns();
    const ExponentFit fit = fit_corner_exponent(fs, ex.domain);
    const double linf = error_report(fs, ex.field).linf;
    ok = ok && std::abs(fit.beta - 0.8) <= 0.05 && fit.r_squared >= 0.99 && linf < prev_linf;
    prev_linf = linf;
    os << "h=1/" << n << ": beta " << fmt("%.4f", fit.beta) << " r2 " << fmt("%.6f", fit.r_squared) << " Linf "
       << fmt("%.3e", linf) << "; ";
  }
  ok = ok && finest_time <= 60.0;
  os << "finest " << finest_unknowns << " unknowns solved in " << fmt("%.2f", finest_time) << " s";
  r.passed = ok;
  r.detail = os.str();
  return r;
}

CriterionResult c5_flux() {
  CriterionResult r;
  const WorkedExample ex;
  std::vector<double> mean;
  double control = 0.0;
  for (int n : kWorkedLevels) {
    const FemSolution fs = solve_problem(ex.spec, 1.0 / n, kWorkedMu);
    mean.push_back(interface_flux_jump(fs).mean);
    control = interface_flux_jump(fs, FluxWeighting::MinusOnBoth).mean;
  }
  std::ostringstream os;
  bool ok = true;
  for (std::size_t i = 1; i < mean.size(); ++i) {
    const double q = mean[i - 1] / mean[i];
    ok = ok && q >= 1.5;
    os << "reduction " << fmt("%.3f", q) << "; ";
  }
  ok = ok && control > 10.0 * mean.back();
  os << "mean jump at finest " << fmt("%.3e", mean.back()) << ", mis-weighted control " << fmt("%.3e", control);
  r.passed = ok;
  r.detail = os.str();
  return r;
}

CriterionResult c6_manufactured() {
  CriterionResult r;
  const DomainSpec d = make_domain(make_wedge(-pi / 4, 3 * pi / 4), 1.0);
  ProblemSpec spec = make_problem(d, scalar_jump(1.0));
  spec.phi = [](const Point& x) { return std::sin(x.x()) * std::cos(x.y()); };
  spec.h = [](const Point& x) { return -2.0 * std::sin(x.x()) * std::cos(x.y()); };
  const ExactField exact{[](const Point& x, Side) { return std::sin(x.x()) * std::cos(x.y()); },
                         [](const Point& x, Side) -> Point {
                           return Point(std::cos(x.x()) * std::cos(x.y()), -std::sin(x.x()) * std::sin(x.y()));
                         }};
  std::vector<double> hs, l2, h1;
  for (int n : {16, 32, 64}) {
    const auto e = error_report(solve_problem(spec, 1.0 / n, 1.0), exact);
    hs.push_back(1.0 / n);
    l2.push_back(e.l2);
    h1.push_back(e.broken_h1);
  }
  const double rl2 = rate(hs, l2), rh1 = rate(hs, h1);
  r.passed = rl2 >= 1.8 && rl2 <= 2.2 && rh1 >= 0.8 && rh1 <= 1.2;
  r.detail = "L2 rate " + fmt("%.3f", rl2) + ", broken H1 rate " + fmt("%.3f", rh1) + " over h = 1/16, 1/32, 1/64";
  return r;
}

// sup over t in (0, 1) of t^(alpha - s) (1 - t^s) / (1 - t)^alpha: the weighted
// seminorm of r^s with tau = -s, attained on a single ray.
double power_seminorm_oracle(double s, double alpha) {
  auto q = [&](double t) { return std::pow(t, alpha - s) * (1.0 - std::pow(t, s)) / std::pow(1.0 - t, alpha); };
  double best_t = 0.5, best = 0.0;
  for (int i = 1; i < 20000; ++i) {
    const double t = i / 20000.0;
    if (q(t) > best) best = q(t), best_t = t;
  }
  double lo = std::max(best_t - 1e-4, 1e-9), hi = std::min(best_t + 1e-4, 1 - 1e-9);
  for (int it = 0; it < 100; ++it) {
    const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    if (q(m1) < q(m2)) {
      lo = m1;
    } else {
      hi = m2;
    }
  }
  return std::max(best, q(0.5 * (lo + hi)));
}

SampledField random_sector_cloud(const Wedge& w, std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  SampledField f;
  while (f.size() < n) {
    const double r = std::sqrt(u01(rng));
    const double th = w.theta_minus() + w.opening() * u01(rng);
    if (r == 0.0) continue;
    f.push_back(from_polar({r, th}), th >= 0 ? 1 : -1, 0.0, Point::Zero());
  }
  return f;
}

CriterionResult c7_norm_oracles() {
  CriterionResult r;
  const Wedge w = make_wedge(-pi / 4, 3 * pi / 4);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  double worst_rel = 0.0;
  for (int field = 0; field < 20; ++field) {
    SampledField f = random_sector_cloud(w, 2000, rng);
    const Eigen::Vector3d k1(4 * u01(rng) - 2, 4 * u01(rng) - 2, 6 * u01(rng));
    const Eigen::Vector3d k2(8 * u01(rng) - 4, 8 * u01(rng) - 4, 6 * u01(rng));
    const double s = 0.3 + 1.2 * u01(rng), c = 2 * u01(rng) - 1;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const Point& x = f.points[i];
      const double a1 = k1[0] * x.x() + k1[1] * x.y() + k1[2], a2 = k2[0] * x.x() + k2[1] * x.y() + k2[2];
      const double rr = x.norm();
      f.values[i] = std::sin(a1) + 0.5 * std::cos(a2) + c * std::pow(rr, s);
      f.gradients[i] = std::cos(a1) * Point(k1[0], k1[1]) - 0.5 * std::sin(a2) * Point(k2[0], k2[1]) +
                       c * s * std::pow(rr, s - 2) * x;
    }
    NormParams np;
    np.k = field % 2;
    np.alpha = 0.2 + 0.7 * u01(rng);
    np.tau = -1.5 + 1.8 * u01(rng);
    PairOptions exhaustive, randomized;
    randomized.force_randomized = true;
    randomized.seed = 100 + field;
    const double e = weighted_seminorm_kalpha(f, np, exhaustive).value;
    const double q = weighted_seminorm_kalpha(f, np, randomized).value;
    worst_rel = std::max(worst_rel, std::abs(q - e) / e);
  }

  SampledField pw = random_sector_cloud(w, 10000, rng);
  auto set_power = [&](double s) {
    for (std::size_t i = 0; i < pw.size(); ++i) {
      const double rr = pw.points[i].norm();
      pw.values[i] = std::pow(rr, s);
      pw.gradients[i] = s * std::pow(rr, s - 2) * pw.points[i];
    }
  };
  double worst_power = 0.0;
  std::ostringstream os;
  {
    set_power(0.8);
    NormParams np;
    np.k = 1;
    np.tau = -0.8;
    const double v = weighted_seminorm_k0(pw, np, 1);
    worst_power = std::max(worst_power, std::abs(v - 0.8) / 0.8);
    os << "[r^0.8]_{1,0} " << fmt("%.4f", v) << " vs 0.8; ";
  }
  for (auto [s, alpha] : {std::pair{0.5, 0.7}, std::pair{0.8, 0.9}}) {
    set_power(s);
    NormParams np;
    np.k = 0;
    np.alpha = alpha;
    np.tau = -s;
    const double v = weighted_seminorm_kalpha(pw, np).value;
    const double exact = power_seminorm_oracle(s, alpha);
    worst_power = std::max(worst_power, std::abs(v - exact) / exact);
    os << "[r^" << s << "]_{0," << alpha << "} " << fmt("%.4f", v) << " vs " << fmt("%.4f", exact) << "; ";
  }
  r.passed = worst_rel <= 0.02 && worst_power <= 0.05;
  r.detail = "randomized vs exhaustive max rel. diff " + fmt("%.2e", worst_rel) + " over 20 fields (N = 2000); " +
             os.str() + "max rel. error " + fmt("%.2e", worst_power) + " at 10^4 points";
  return r;
}

CriterionResult c8_estimate_ratios() {
  CriterionResult r;
  const std::vector<int> levels = {8, 16, 32, 64};
  double worst_change = 1.0;
  bool finite = true;
  std::string worst_case;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const RandomInstance inst = make_random_instance(seed);
    EstimateOptions opt;
    opt.instance = inst.id;
    opt.beta = 0.9 * std::min(singular_exponent(inst.a0_corner, inst.spec.domain.wedge), 1.0);
    std::vector<double> prev;
    for (int n : levels) {
      const FemSolution fs = solve_problem(inst.spec, 1.0 / n, 1.0);
      const std::vector<EstimateRatio> rs = {estimate_ratio_interior(fs, inst.spec, opt),
                                             estimate_ratio_corner(fs, inst.spec, opt),
                                             estimate_ratio_global(fs, inst.spec, opt)};
      std::vector<double> cur;
      for (const auto& e : rs) {
        const auto q = e.ratio();
        if (!q || !std::isfinite(*q) || !(*q > 0.0)) finite = false;
        cur.push_back(q.value_or(0.0));
      }
      for (std::size_t k = 0; k < cur.size() && !prev.empty(); ++k) {
        const double change = std::max(cur[k] / prev[k], prev[k] / cur[k]);
        if (change > worst_change) worst_change = change, worst_case = inst.id + " " + rs[k].kind;
      }
      prev = cur;
    }
  }
  bool flagged = true;
  for (std::uint64_t seed : {1001u, 1002u}) {
    const RandomInstance inst = make_random_instance(seed, true);
    const FemSolution fs = solve_problem(inst.spec, 1.0 / 16, 1.0);
    EstimateOptions opt;
    opt.instance = inst.id;
    for (const auto& e : {estimate_ratio_interior(fs, inst.spec, opt), estimate_ratio_corner(fs, inst.spec, opt),
                          estimate_ratio_global(fs, inst.spec, opt)}) {
      flagged = flagged && e.status == RatioStatus::Degenerate && !e.ratio();
    }
  }
  r.passed = finite && worst_change < 2.0 && flagged;
  r.detail = "50 instances x 3 estimates x h = 1/8..1/64: all finite " + std::string(finite ? "yes" : "no") +
             ", worst change per refinement " + fmt("%.3f", worst_change) + " (" + worst_case +
             "); zero-data cases flagged degenerate: " + (flagged ? "yes" : "no");
  return r;
}

CriterionResult c9_comparison() {
  CriterionResult r;
  std::ostringstream os;
  bool ok = true;
  for (const ComparisonCase& c :
       {ComparisonCase{pi / 4, -pi / 4, 2.0, 11}, ComparisonCase{pi / 3, -pi / 6, 0.5, 12},
        ComparisonCase{5 * pi / 12, -pi / 3, 10.0, 13}}) {
    const ComparisonPipeline p = run_comparison_pipeline(c);
    SampledField twice = p.v_boundary;
    for (std::size_t i = 0; i < twice.size(); ++i) twice.values[i] = 2.0 * barrier_eval(p.barrier, to_polar(twice.points[i]));
    bool control_failed = false;
    try {
      comparison_check(twice, p.v_interior, p.barrier);
    } catch (const HypothesisError&) {
      control_failed = true;
    }
    ok = ok && p.result.passed && control_failed;
    os << "gamma " << fmt("%.4f", p.gamma) << ": interior worst |v|/w " << fmt("%.4f", p.result.interior_worst)
       << (control_failed ? ", 2w rejected" : ", 2w NOT rejected") << "; ";
  }
  r.passed = ok;
  r.detail = os.str();
  return r;
}

CriterionResult c10_max_principle() {
  CriterionResult r;
  struct Case {
    double tm, tp, a0;
    std::function<double(const Point&)> phi;
  };
  const std::vector<Case> cases = {
      {-pi / 4, 3 * pi / 4, 2.0 + std::sqrt(5.0),
       [](const Point& x) { return std::sin(3 * x.x()) + x.y() * x.y() - 0.3 * x.x() * x.y(); }},
      {-pi / 3, pi / 3, 0.1, [](const Point& x) { return std::exp(x.x()) * std::cos(2 * x.y()); }},
      {-2 * pi / 3, pi / 3, 10.0, [](const Point& x) { return x.x() * x.x() - 2 * x.y() + 0.5 * x.x() * x.y(); }},
  };
  double worst = 0.0, worst_angle = 0.0;
  for (const Case& c : cases) {
    const DomainSpec d = make_domain(make_wedge(c.tm, c.tp), 1.0);
    ProblemSpec spec = make_problem(d, scalar_jump(c.a0));
    spec.phi = c.phi;
    CgOptions opt;
    opt.tol = 1e-13;
    const FemSolution fs = solve_problem(spec, 1.0 / 32, 1.0, opt, MeshKind::NonObtuse);
    worst_angle = std::max(worst_angle, max_angle(*fs.mesh));
    double lo = 1e300, hi = -1e300;
    for (int v = 0; v < fs.mesh->num_vertices(); ++v) {
      if (!fs.mesh->boundary[v]) continue;
      lo = std::min(lo, fs.values[v]);
      hi = std::max(hi, fs.values[v]);
    }
    worst = std::max({worst, lo - fs.values.minCoeff(), fs.values.maxCoeff() - hi});
  }
  r.passed = worst <= 1e-10 && worst_angle <= pi / 2 + 1e-12;
  r.detail = "3 cases on non-obtuse meshes (max angle " + fmt("%.2f", worst_angle * 180 / pi) +
             " deg): largest excursion outside [min phi, max phi] = " + fmt("%.2e", std::max(worst, 0.0));
  return r;
}

}  // namespace

const std::vector<Criterion>& acceptance_criteria() {
  static const std::vector<Criterion> all = {
      {1, "coefficient reproduction", {"exact", "coefficients"}, c1_coefficients},
      {2, "exponent round trip", {"exact", "gamma"}, c2_roundtrip},
      {3, "C1,alpha corner consistency", {"exact", "corner", "corrector"}, c3_corner_consistency},
      {4, "corner-effect witness", {"fem", "corner", "fit"}, c4_corner_witness},
      {5, "flux continuity", {"fem", "flux"}, c5_flux},
      {6, "manufactured convergence", {"fem", "convergence"}, c6_manufactured},
      {7, "norm estimator oracles", {"norms"}, c7_norm_oracles},
      {8, "estimate-ratio stability", {"estimates", "corner"}, c8_estimate_ratios},
      {9, "comparison principle", {"comparison", "barrier", "corner"}, c9_comparison},
      {10, "maximum principle", {"fem", "maxprinciple"}, c10_max_principle},
  };
  return all;
}

bool criterion_matches(const Criterion& c, const std::string& filter) {
  if (filter.empty()) return true;
  std::istringstream ss(filter);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok.erase(0, tok.find_first_not_of(' '));
    tok.erase(tok.find_last_not_of(' ') + 1);
    if (tok.empty()) continue;
    if (tok == std::to_string(c.id)) return true;
    if (std::find(c.tags.begin(), c.tags.end(), tok) != c.tags.end()) return true;
    if (c.name.find(tok) != std::string::npos) return true;
  }
  return false;
}

std::vector<CriterionResult> run_acceptance(const std::string& filter, int jobs, std::ostream* progress) {
  std::vector<const Criterion*> selected;
  for (const auto& c : acceptance_criteria()) {
    if (criterion_matches(c, filter)) selected.push_back(&c);
  }
  std::vector<CriterionResult> results(selected.size());
  std::atomic<std::size_t> next{0};
  std::mutex out_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < selected.size(); i = next++) {
      const Criterion& c = *selected[i];
      const auto t0 = Clock::now();
      CriterionResult res;
      try {
        res = c.run();
      } catch (const std::exception& e) {
        res.passed = false;
        res.detail = std::string("error: ") + e.what();
      }
      res.id = c.id;
      res.name = c.name;
      res.seconds = seconds_since(t0);
      results[i] = res;
      if (progress) {
        std::lock_guard<std::mutex> lock(out_mutex);
        *progress << format_result(res) << std::endl;
      }
    }
  };
  const int n = std::clamp(jobs, 1, static_cast<int>(std::max<std::size_t>(selected.size(), 1)));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return results;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.passed ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << " (" << fmt("%.2f", r.seconds)
     << " s): " << r.detail;
  return os.str();
}

}  // namespace cornerlab
