#include "cornerlab/analysis.hpp"

#include "cornerlab/errors.hpp"
#include "cornerlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <unordered_map>

namespace cornerlab {

ExponentFit fit_power_law(const std::vector<double>& radii, const std::vector<double>& values) {
  if (radii.size() != values.size()) throw InputError("exponent fit: radii and values differ in length");
  if (radii.size() < 4) throw InputError("exponent fit needs at least 4 radii");
  ExponentFit fit;
  fit.radii = radii;
  fit.sup_values = values;
  fit.r_min = *std::min_element(radii.begin(), radii.end());
  fit.r_max = *std::max_element(radii.begin(), radii.end());
  if (!(fit.r_min > 0.0)) throw InputError("exponent fit: radii must be positive");
  if (fit.r_max < 10.0 * fit.r_min * (1.0 - 1e-12)) {
    throw InputError("exponent fit: radii span less than one decade");
  }
  for (double v : values) {
    if (!(v > 0.0)) throw InputError("exponent fit: zero variation at some radius, exponent undefined");
  }
  const std::size_t n = radii.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(radii[i]);
    my += std::log(values[i]);
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(radii[i]) - mx;
    const double dy = std::log(values[i]) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  fit.beta = sxy / sxx;
  fit.intercept = my - fit.beta * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = std::log(values[i]) - (fit.intercept + fit.beta * std::log(radii[i]));
    ssr += e * e;
  }
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ssr / syy, 0.0, 1.0) : 1.0;
  return fit;
}

std::vector<double> geometric_radii(double r_min, double r_max, int n) {
  if (n < 2 || !(r_min > 0.0) || !(r_max > r_min)) throw InputError("geometric_radii: need 0 < r_min < r_max, n >= 2");
  std::vector<double> r(n);
  const double q = std::log(r_max / r_min) / (n - 1);
  for (int j = 0; j < n; ++j) r[j] = r_min * std::exp(q * j);
  r.back() = r_max;
  return r;
}

std::vector<double> interior_rays(const Wedge& w, int n) {
  if (n < 1) throw InputError("interior_rays: need at least one ray");
  std::vector<double> t(n);
  for (int j = 0; j < n; ++j) t[j] = w.theta_minus() + w.opening() * (j + 1.0) / (n + 1.0);
  return t;
}

namespace {

double fit_or_nan(const std::vector<double>& r, const std::vector<double>& v) {
  try {
    return fit_power_law(r, v).beta;
  } catch (const InputError&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace

ExponentFit fit_corner_exponent(const FieldProbe& u, double u_corner, const std::vector<double>& rays,
                                const std::vector<double>& radii) {
  std::vector<double> used_r, sup;
  std::vector<std::vector<double>> ray_r(rays.size()), ray_v(rays.size());
  for (double r : radii) {
    double m = -1.0;
    for (std::size_t j = 0; j < rays.size(); ++j) {
      const auto val = u(from_polar({r, rays[j]}));
      if (!val) continue;
      const double d = std::abs(*val - u_corner);
      m = std::max(m, d);
      if (d > 0.0) {
        ray_r[j].push_back(r);
        ray_v[j].push_back(d);
      }
    }
    if (m < 0.0) continue;
    used_r.push_back(r);
    sup.push_back(m);
  }
  ExponentFit fit = fit_power_law(used_r, sup);
  fit.rays = rays;
  for (std::size_t j = 0; j < rays.size(); ++j) fit.ray_betas.push_back(fit_or_nan(ray_r[j], ray_v[j]));
  return fit;
}

ExponentFit fit_corner_exponent(const FemSolution& fs, const DomainSpec& d, const FitOptions& opt) {
  const Mesh& m = *fs.mesh;
  const double r_min = opt.r_min > 0.0 ? opt.r_min : 4.0 * corner_mesh_size(m);
  const double r_max = opt.r_max > 0.0 ? opt.r_max : d.radius / 4.0;
  if (!(r_max > r_min)) throw InputError("exponent fit: mesh too coarse for the fitting window");
  int corner = 0;
  for (int v = 1; v < m.num_vertices(); ++v) {
    if (m.vertices[v].norm() < m.vertices[corner].norm()) corner = v;
  }
  const PointLocator loc(m);
  const FieldProbe probe = [&](const Point& p) { return evaluate(fs, loc, p); };
  return fit_corner_exponent(probe, fs.values[corner], interior_rays(d.wedge, opt.num_rays),
                             geometric_radii(r_min, r_max, opt.num_radii));
}

ExponentFit fit_corner_exponent(const SampledField& f, const FitOptions& opt) {
  if (f.size() == 0) throw InputError("exponent fit: empty sample set");
  if (!(opt.r_min > 0.0) || !(opt.r_max > opt.r_min)) {
    throw InputError("exponent fit on samples needs 0 < r_min < r_max");
  }
  std::size_t corner = 0;
  for (std::size_t i = 1; i < f.size(); ++i) {
    if (f.points[i].norm() < f.points[corner].norm()) corner = i;
  }
  const double u0 = f.values[corner];
  const auto radii = geometric_radii(opt.r_min, opt.r_max, opt.num_radii);
  const double half_step = 0.5 * std::log(radii[1] / radii[0]);
  std::vector<double> sup(radii.size(), -1.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double r = f.points[i].norm();
    if (!(r > 0.0)) continue;
    const double pos = (std::log(r / opt.r_min) + half_step) / (2.0 * half_step);
    if (pos < 0.0) continue;
    const auto bin = static_cast<std::size_t>(pos);
    if (bin >= radii.size()) continue;
    sup[bin] = std::max(sup[bin], std::abs(f.values[i] - u0));
  }
  std::vector<double> used_r, used_v;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (sup[k] < 0.0) continue;
    used_r.push_back(radii[k]);
    used_v.push_back(sup[k]);
  }
  return fit_power_law(used_r, used_v);
}

void write_exponent_fit_csv(std::ostream& os, const ExponentFit& fit) {
  os << "r,sup_abs_v\n";
  for (std::size_t i = 0; i < fit.radii.size(); ++i) {
    os << fmt_double(fit.radii[i]) << ',' << fmt_double(fit.sup_values[i]) << '\n';
  }
}

void write_exponent_fit_summary_csv(std::ostream& os, const ExponentFit& fit) {
  os << "beta,intercept,r2\n"
     << fmt_double(fit.beta) << ',' << fmt_double(fit.intercept) << ',' << fmt_double(fit.r_squared) << '\n';
}

FluxJump interface_flux_jump(const FemSolution& fs, FluxWeighting weighting) {
  const Mesh& m = *fs.mesh;
  auto key = [](int a, int b) {
    return (static_cast<std::uint64_t>(std::min(a, b)) << 32) | static_cast<std::uint32_t>(std::max(a, b));
  };
  std::unordered_map<std::uint64_t, std::size_t> index;
  for (std::size_t e = 0; e < m.interface_edges.size(); ++e) {
    index.emplace(key(m.interface_edges[e].first, m.interface_edges[e].second), e);
  }
  std::vector<int> plus(m.interface_edges.size(), -1), minus(m.interface_edges.size(), -1);
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto& tri = m.triangles[t];
    for (int e = 0; e < 3; ++e) {
      const auto it = index.find(key(tri[e], tri[(e + 1) % 3]));
      if (it == index.end()) continue;
      (m.region[t] == Side::Plus ? plus : minus)[it->second] = t;
    }
  }
  FluxJump out;
  double total_length = 0.0;
  for (std::size_t e = 0; e < m.interface_edges.size(); ++e) {
    if (plus[e] < 0 || minus[e] < 0) continue;
    const Point t = m.vertices[m.interface_edges[e].second] - m.vertices[m.interface_edges[e].first];
    const double len = t.norm();
    const Point n(-t.y() / len, t.x() / len);
    const Matrix2& am = fs.element_coeff[minus[e]];
    const Matrix2& ap = weighting == FluxWeighting::Correct ? fs.element_coeff[plus[e]] : am;
    const double jump = std::abs(n.dot(ap * fs.gradients[plus[e]] - am * fs.gradients[minus[e]]));
    out.max = std::max(out.max, jump);
    out.mean += len * jump;
    total_length += len;
    ++out.edges;
  }
  if (total_length > 0.0) out.mean /= total_length;
  return out;
}

std::optional<double> EstimateRatio::ratio() const {
  if (status == RatioStatus::Degenerate) return std::nullopt;
  return lhs / rhs;
}

BallPair default_ball_pair(const DomainSpec& d) {
  const double R = d.radius;
  const double th = std::min({d.wedge.theta_plus(), -d.wedge.theta_minus(), std::numbers::pi / 2});
  return {Point(R / 2, 0.0), std::min(R / 8, 0.5 * R * std::sin(th) / 2.5)};
}

namespace {

using Inside = std::function<bool(const Point&)>;

NormParams norm_params(int k, double alpha, double tau, std::optional<Point> edge) {
  NormParams np;
  np.k = k;
  np.alpha = alpha;
  np.tau = tau;
  np.edge_point = edge;
  return np;
}

double radical_inverse(std::uint64_t i, std::uint64_t base) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

// Up to n Halton points of the box [lo, hi] that satisfy `inside`.
std::vector<Point> halton_points(const Inside& inside, const Point& lo, const Point& hi, int n) {
  std::vector<Point> pts;
  const std::uint64_t cap = 200ull * static_cast<std::uint64_t>(n) + 1000;
  for (std::uint64_t i = 1; i < cap && static_cast<int>(pts.size()) < n; ++i) {
    const Point p(lo.x() + (hi.x() - lo.x()) * radical_inverse(i, 2), lo.y() + (hi.y() - lo.y()) * radical_inverse(i, 3));
    if (inside(p)) pts.push_back(p);
  }
  return pts;
}

Point fd_gradient(const ScalarField& f, const Point& x) {
  const double e = 1e-6;
  return Point((f(x + Point(e, 0)) - f(x - Point(e, 0))) / (2 * e), (f(x + Point(0, e)) - f(x - Point(0, e))) / (2 * e));
}

bool strictly_in_side(const DomainSpec& d, const Point& p, Side s) {
  const Region r = classify_point(d, p);
  return r == (s == Side::Plus ? Region::OmegaPlus : Region::OmegaMinus);
}

struct DataNorms {
  double h_inf = 0.0;
  double g = 0.0;    // max_{i,I} ||g^i||_{0,alpha}
  double phi = 0.0;  // max_I ||phi||_{1,alpha}
};

DataNorms data_norms(const ProblemSpec& spec, const Inside& region, const EstimateOptions& opt) {
  const DomainSpec& d = spec.domain;
  const Point lo(-d.radius, -d.radius), hi(d.radius, d.radius);
  DataNorms out;
  const NormParams plain0 = norm_params(0, opt.alpha, 0.0, std::nullopt);
  const NormParams plain1 = norm_params(1, opt.alpha, 0.0, std::nullopt);
  for (Side s : {Side::Plus, Side::Minus}) {
    const auto pts = halton_points([&](const Point& p) { return region(p) && strictly_in_side(d, p, s); }, lo, hi,
                                   opt.data_samples);
    if (pts.size() < 2) continue;
    SampledField g0, g1, phi;
    for (const Point& p : pts) {
      const Point g = spec.g(p, s);
      g0.push_back(p, static_cast<int>(s), g.x());
      g1.push_back(p, static_cast<int>(s), g.y());
      const Point dphi = spec.phi_gradient ? (*spec.phi_gradient)(p) : fd_gradient(spec.phi, p);
      phi.push_back(p, static_cast<int>(s), spec.phi(p), dphi);
      out.h_inf = std::max(out.h_inf, std::abs(spec.h(p)));
    }
    out.g = std::max({out.g, weighted_norm(g0, plain0, opt.pairs).total, weighted_norm(g1, plain0, opt.pairs).total});
    out.phi = std::max(out.phi, weighted_norm(phi, plain1, opt.pairs).total);
  }
  return out;
}

double nodal_sup(const FemSolution& fs, const Inside& region) {
  double m = 0.0;
  for (int v = 0; v < fs.mesh->num_vertices(); ++v) {
    if (region(fs.mesh->vertices[v])) m = std::max(m, std::abs(fs.values[v]));
  }
  return m;
}

double solution_norm(const FemSolution& fs, const Inside& region, const NormParams& np, const PairOptions& pairs) {
  const SampledField all = barycenter_field(fs);
  double best = 0.0;
  for (int tag : {1, -1}) {
    const SampledField part = restrict_to(restrict_region(all, tag), region);
    if (part.size() < 2) continue;
    best = std::max(best, weighted_norm(part, np, pairs).total);
  }
  return best;
}

double nominal_h(const FemSolution& fs) { return max_edge_length(*fs.mesh); }

EstimateRatio finish(EstimateRatio r, const EstimateOptions& opt) {
  if (!(r.rhs > opt.degenerate_tol)) r.status = RatioStatus::Degenerate;
  return r;
}

}  // namespace

EstimateRatio estimate_ratio_interior(const FemSolution& fs, const ProblemSpec& spec, const EstimateOptions& opt,
                                      std::optional<BallPair> balls) {
  const BallPair b = balls.value_or(default_ball_pair(spec.domain));
  const Inside in_b1 = [b](const Point& p) { return (p - b.center).norm() < b.rho; };
  const Inside in_b2 = [b](const Point& p) { return (p - b.center).norm() < 2.0 * b.rho; };
  const DataNorms dn = data_norms(spec, in_b2, opt);
  EstimateRatio r;
  r.instance = opt.instance;
  r.kind = "interior";
  r.h = nominal_h(fs);
  r.lhs = solution_norm(fs, in_b1, norm_params(1, opt.alpha, 0.0, std::nullopt), opt.pairs);
  r.rhs = nodal_sup(fs, in_b2) + dn.h_inf + dn.g;
  return finish(r, opt);
}

EstimateRatio estimate_ratio_corner(const FemSolution& fs, const ProblemSpec& spec, const EstimateOptions& opt) {
  const double R = spec.domain.radius;
  const Inside in_w1 = [R](const Point& p) { return p.norm() < R / 2; };
  const Inside in_w2 = [R](const Point& p) { return p.norm() <= R; };
  const DataNorms dn = data_norms(spec, in_w2, opt);
  EstimateRatio r;
  r.instance = opt.instance;
  r.kind = "corner";
  r.h = nominal_h(fs);
  r.lhs = solution_norm(fs, in_w1, norm_params(1, opt.alpha, -opt.beta, spec.domain.edge_point()), opt.pairs);
  r.rhs = nodal_sup(fs, in_w2) + dn.phi + dn.h_inf + dn.g;
  return finish(r, opt);
}

EstimateRatio estimate_ratio_global(const FemSolution& fs, const ProblemSpec& spec, const EstimateOptions& opt) {
  const Inside all = [](const Point&) { return true; };
  const DataNorms dn = data_norms(spec, all, opt);
  EstimateRatio r;
  r.instance = opt.instance;
  r.kind = "global";
  r.h = nominal_h(fs);
  // Both ends of the interface are edge points: the origin and its exit through the arc.
  NormParams np = norm_params(1, opt.alpha, -opt.beta, spec.domain.edge_point());
  np.extra_edge_points.push_back(Point(spec.domain.radius, 0.0));
  r.lhs = solution_norm(fs, all, np, opt.pairs);
  r.rhs = dn.phi + dn.h_inf + dn.g;
  return finish(r, opt);
}

void write_ratio_csv(std::ostream& os, const std::vector<EstimateRatio>& ratios) {
  os << "instance,kind,h,lhs,rhs,ratio\n";
  for (const auto& r : ratios) {
    os << r.instance << ',' << r.kind << ',' << fmt_double(r.h) << ',' << fmt_double(r.lhs) << ','
       << fmt_double(r.rhs) << ',';
    const auto q = r.ratio();
    if (q) {
      os << fmt_double(*q);
    } else {
      os << "degenerate";
    }
    os << '\n';
  }
}

ComparisonResult comparison_check(const SampledField& v_boundary, const SampledField& v_interior,
                                  const Barrier<double>& w, double rel_tol) {
  if (v_boundary.size() == 0) throw InputError("comparison check: no boundary samples");
  ComparisonResult res;
  auto scan = [&](const SampledField& f, double& worst, std::size_t& violations) {
    for (std::size_t i = 0; i < f.size(); ++i) {
      const PolarPoint pp = to_polar(f.points[i]);
      const double wv = barrier_eval(w, pp);
      const double v = std::abs(f.values[i]);
      if (v > wv * (1.0 + rel_tol)) ++violations;
      if (wv > 0.0) worst = std::max(worst, v / wv);
    }
  };
  std::size_t boundary_violations = 0;
  scan(v_boundary, res.boundary_worst, boundary_violations);
  if (boundary_violations > 0) {
    std::ostringstream os;
    os << "comparison check: |v| <= w fails at " << boundary_violations << " boundary samples (worst ratio "
       << res.boundary_worst << ")";
    throw HypothesisError(os.str());
  }
  scan(v_interior, res.interior_worst, res.interior_violations);
  res.passed = res.interior_violations == 0;
  return res;
}

ComparisonPipeline run_comparison_pipeline(const ComparisonCase& c) {
  const Wedge w = make_wedge(c.theta_minus, c.theta_plus);
  if (!(c.theta_plus < std::numbers::pi / 2 && c.theta_minus > -std::numbers::pi / 2)) {
    throw HypothesisError("comparison pipeline needs theta_plus < pi/2 and theta_minus > -pi/2");
  }
  ComparisonPipeline out;
  const auto roots = exponent_roots(c.a0, w);
  if (roots.empty()) throw NoSignChangeError("comparison pipeline: no exponent in the default bracket");
  out.gamma = roots.front();

  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double u0 = unit(rng);
  const Corrector<double> plane = corrector_solve(unit(rng), unit(rng), c.a0, w);
  std::vector<SeparableSolution<double>> modes;
  std::vector<double> weights;
  for (std::size_t k = 0; k < std::min<std::size_t>(roots.size(), 2); ++k) {
    modes.push_back(separable_mode(roots[k], c.a0, w));
    const double s = unit(rng);
    weights.push_back(s >= 0.0 ? 0.5 + s : s - 0.5);
  }
  auto u = [&](const Point& x) {
    const PolarPoint pp = to_wedge_polar(w, x);
    const Side s = side_of_angle(pp.theta);
    double val = u0 + plane(x, s);
    for (std::size_t k = 0; k < modes.size(); ++k) val += weights[k] * eval_separable(modes[k], pp);
    return val;
  };
  auto grad_at_corner = [&](Side s) {
    Point g = plane.gradient(s);
    const double th = s == Side::Plus ? w.theta_plus() : w.theta_minus();
    for (std::size_t k = 0; k < modes.size(); ++k) g += weights[k] * grad_separable(modes[k], PolarPoint{0.0, th});
    return g;
  };
  const Point tau_plus(std::cos(w.theta_plus()), std::sin(w.theta_plus()));
  const Point tau_minus(std::cos(w.theta_minus()), std::sin(w.theta_minus()));
  out.corrector = corrector_solve(grad_at_corner(Side::Plus).dot(tau_plus), grad_at_corner(Side::Minus).dot(tau_minus),
                                  c.a0, w);
  const double u_origin = u(Point::Zero());
  auto v = [&](const Point& x) {
    const Side s = side_of_angle(to_wedge_polar(w, x).theta);
    return u(x) - u_origin - out.corrector(x, s);
  };

  const double K = barrier_frequency_bound(w);
  const double alpha = std::min(0.5 * std::min(out.gamma - 1.0, K - 1.0), 0.9);
  const double tau0 = std::min(0.5 * (K - 1.0 - alpha), 0.9);

  auto add = [&](SampledField& f, double r, double th) {
    const Point p = from_polar({r, th});
    f.push_back(p, th > 0 ? 1 : (th < 0 ? -1 : 0), v(p));
  };
  const int nb = c.boundary_samples / 3;
  for (int i = 1; i <= nb; ++i) {
    const double r = static_cast<double>(i) / nb;
    add(out.v_boundary, r, w.theta_plus());
    add(out.v_boundary, r, w.theta_minus());
    add(out.v_boundary, 1.0, w.theta_minus() + w.opening() * (i - 0.5) / nb);
  }
  const auto radii = geometric_radii(1e-4, 1.0 - 1e-9, c.interior_radial);
  for (double r : radii) {
    for (int j = 1; j <= c.interior_angular; ++j) add(out.v_interior, r, w.theta_minus() + w.opening() * j / (c.interior_angular + 1.0));
  }

  const Barrier<double> unit_barrier = make_barrier(1.0, alpha, tau0, w);
  double amplitude = 0.0;
  for (std::size_t i = 0; i < out.v_boundary.size(); ++i) {
    const double wv = barrier_eval(unit_barrier, to_wedge_polar(w, out.v_boundary.points[i]));
    if (wv > 0.0) amplitude = std::max(amplitude, std::abs(out.v_boundary.values[i]) / wv);
  }
  out.barrier = make_barrier(amplitude, alpha, tau0, w);
  out.result = comparison_check(out.v_boundary, out.v_interior, out.barrier);
  return out;
}

RandomInstance make_random_instance(std::uint64_t seed, bool zero_data) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  auto uniform = [&](double a, double b) { return a + (b - a) * 0.5 * (unit(rng) + 1.0); };
  const double pi = std::numbers::pi;
  const Wedge w = make_wedge(uniform(-0.75 * pi, -0.25 * pi), uniform(0.25 * pi, 0.75 * pi));
  const DomainSpec d = make_domain(w, 1.0);

  const double c_plus = std::exp(uniform(std::log(0.25), std::log(4.0)));
  const double c_minus = 1.0;
  const double eps = 0.2;
  const Eigen::Vector3d sp(uniform(-2, 2), uniform(-2, 2), uniform(0, 2 * pi));
  const Eigen::Vector3d sm(uniform(-2, 2), uniform(-2, 2), uniform(0, 2 * pi));
  auto wave = [](const Eigen::Vector3d& k, const Point& x) { return std::sin(k[0] * x.x() + k[1] * x.y() + k[2]); };
  PiecewiseCoefficient coeff;
  coeff.a_plus = [=](const Point& x) -> Matrix2 { return c_plus * (1.0 + eps * wave(sp, x)) * Matrix2::Identity(); };
  coeff.a_minus = [=](const Point& x) -> Matrix2 { return c_minus * (1.0 + eps * wave(sm, x)) * Matrix2::Identity(); };
  coeff.lambda = std::min(c_plus, c_minus) * (1.0 - eps);
  coeff.Lambda = std::max(c_plus, c_minus) * (1.0 + eps);

  RandomInstance inst{"", make_problem(d, coeff), 0.0, zero_data};
  inst.a0_corner = c_plus * (1.0 + eps * wave(sp, Point::Zero())) / (c_minus * (1.0 + eps * wave(sm, Point::Zero())));
  std::ostringstream id;
  id << (zero_data ? "zero-" : "rand-") << seed;
  inst.id = id.str();
  if (zero_data) return inst;

  std::array<double, 6> p;
  for (double& v : p) v = unit(rng);
  inst.spec.phi = [p](const Point& x) {
    return p[0] + p[1] * x.x() + p[2] * x.y() + p[3] * x.x() * x.x() + p[4] * x.x() * x.y() + p[5] * x.y() * x.y();
  };
  inst.spec.phi_gradient = [p](const Point& x) -> Point {
    return Point(p[1] + 2 * p[3] * x.x() + p[4] * x.y(), p[2] + p[4] * x.x() + 2 * p[5] * x.y());
  };
  const Eigen::Vector3d q(unit(rng), unit(rng), unit(rng));
  inst.spec.h = [q](const Point& x) { return q[0] + q[1] * x.x() + q[2] * std::cos(2.0 * x.y()); };
  const Eigen::Vector4d gp(unit(rng), unit(rng), unit(rng), unit(rng));
  const Eigen::Vector4d gm(unit(rng), unit(rng), unit(rng), unit(rng));
  inst.spec.g_plus = [gp](const Point& x) -> Point { return Point(gp[0] + gp[1] * x.y(), gp[2] + gp[3] * x.x()); };
  inst.spec.g_minus = [gm](const Point& x) -> Point { return Point(gm[0] + gm[1] * x.y(), gm[2] + gm[3] * x.x()); };
  return inst;
}

}  // namespace cornerlab
