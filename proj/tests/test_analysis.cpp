#include "cornerlab/analysis.hpp"
#include "cornerlab/errors.hpp"
#include "cornerlab/mesh.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace cornerlab;
constexpr double pi = std::numbers::pi;

TEST(PowerFit, RecoversExponent) {
  const auto radii = geometric_radii(1e-3, 1e-1, 12);
  ASSERT_EQ(radii.size(), 12u);
  EXPECT_NEAR(radii.front(), 1e-3, 1e-18);
  EXPECT_NEAR(radii.back(), 1e-1, 1e-16);
  for (double beta : {0.3, 0.8, 1.7}) {
    std::vector<double> v;
    for (double r : radii) v.push_back(2.5 * std::pow(r, beta));
    const ExponentFit f = fit_power_law(radii, v);
    EXPECT_NEAR(f.beta, beta, 1e-12);
    EXPECT_NEAR(f.intercept, std::log(2.5), 1e-10);
    EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
  }
}

TEST(PowerFit, InputChecks) {
  EXPECT_THROW(fit_power_law({0.1, 0.01, 0.001}, {1, 2, 3}), InputError);
  EXPECT_THROW(fit_power_law({0.1, 0.12, 0.14, 0.16}, {1, 2, 3, 4}), InputError);
  EXPECT_THROW(fit_power_law({1e-3, 1e-2, 1e-1, 1.0}, {1, 0, 3, 4}), InputError);
}

TEST(CornerFit, SeparableFieldProbe) {
  const Wedge w = make_wedge(-pi / 4, 3 * pi / 4);
  const auto s = build_dirichlet_example(0.8, w);
  const FieldProbe probe = [&](const Point& x) -> std::optional<double> {
    return 3.0 + eval_separable(s, to_wedge_polar(w, x));
  };
  const ExponentFit f = fit_corner_exponent(probe, 3.0, interior_rays(w, 9), geometric_radii(1e-4, 1e-1, 10));
  EXPECT_NEAR(f.beta, 0.8, 1e-10);
  for (double b : f.ray_betas) EXPECT_NEAR(b, 0.8, 1e-10);
}

TEST(CornerFit, FemWorkedExample) {
  const Wedge w = make_wedge(-pi / 4, 3 * pi / 4);
  const DomainSpec d = make_domain(w, 1.0);
  const auto s = build_dirichlet_example(0.8, w);
  ProblemSpec spec = make_problem(d, scalar_jump(s.a0));
  spec.phi = [&](const Point& x) { return eval_separable(s, to_wedge_polar(w, x)); };
  const FemSolution sol = solve_problem(spec, 1.0 / 64, 0.8);
  const ExponentFit f = fit_corner_exponent(sol, d);
  EXPECT_NEAR(f.beta, 0.8, 0.05);
  EXPECT_GT(f.r_squared, 0.99);
  std::ostringstream a, b;
  write_exponent_fit_csv(a, f);
  write_exponent_fit_summary_csv(b, f);
  EXPECT_EQ(a.str().substr(0, 12), "r,sup_abs_v\n");
  EXPECT_EQ(b.str().substr(0, 18), "beta,intercept,r2\n");
}

TEST(Flux, PiecewiseLinearHasNoJump) {
  const Wedge w = make_wedge(-pi / 3, pi / 2);
  const DomainSpec d = make_domain(w, 1.0);
  const double a0 = 4.0;
  ProblemSpec spec = make_problem(d, scalar_jump(a0));
  spec.phi = [&](const Point& x) { return 0.3 * x.x() + (x.y() >= 0 ? 1.0 : a0) * x.y(); };
  CgOptions opt;
  opt.tol = 1e-14;
  const FemSolution sol = solve_problem(spec, 1.0 / 8, 1.0, opt);
  const FluxJump j = interface_flux_jump(sol);
  EXPECT_GT(j.edges, 0);
  EXPECT_LT(j.max, 1e-9);
  // Dropping the jump in the flux exposes a0 - 1 times the normal derivative.
  const FluxJump c = interface_flux_jump(sol, FluxWeighting::MinusOnBoth);
  EXPECT_NEAR(c.mean, a0 - 1.0, 1e-8);
}

TEST(Comparison, PipelinePassesAndControlFails) {
  const ComparisonPipeline p = run_comparison_pipeline({pi / 4, -pi / 4, 2.0, 5, 400, 40, 40});
  EXPECT_GT(p.gamma, 1.0);
  EXPECT_TRUE(p.result.passed);
  EXPECT_LE(p.result.boundary_worst, 1.0 + 1e-8);
  SampledField twice = p.v_boundary;
  for (std::size_t i = 0; i < twice.size(); ++i) twice.values[i] = 2.0 * barrier_eval(p.barrier, to_polar(twice.points[i]));
  EXPECT_THROW(comparison_check(twice, p.v_interior, p.barrier), HypothesisError);
}

TEST(Comparison, InteriorViolationsCounted) {
  const Wedge w = make_wedge(-pi / 4, pi / 4);
  const auto b = make_barrier(1.0, 0.3, 0.3, w);
  SampledField bd, in;
  bd.push_back(Point(1.0, 0.0), 0, 0.5);
  in.push_back(Point(0.5, 0.0), 1, 10.0);
  in.push_back(Point(0.5, 0.1), 1, 0.0);
  const ComparisonResult r = comparison_check(bd, in, b);
  EXPECT_FALSE(r.passed);
  EXPECT_EQ(r.interior_violations, 1u);
  EXPECT_NEAR(r.boundary_worst, 0.5, 1e-15);
}

TEST(RandomInstance, Deterministic) {
  const RandomInstance a = make_random_instance(42), b = make_random_instance(42);
  EXPECT_EQ(a.id, b.id);
  EXPECT_EQ(a.spec.domain.wedge.theta_plus(), b.spec.domain.wedge.theta_plus());
  const Point x(0.2, 0.1);
  EXPECT_EQ(a.spec.phi(x), b.spec.phi(x));
  EXPECT_EQ(a.spec.h(x), b.spec.h(x));
  EXPECT_EQ(a.a0_corner, b.a0_corner);
  const RandomInstance z = make_random_instance(7, true);
  EXPECT_EQ(z.spec.phi(x), 0.0);
  EXPECT_EQ(z.spec.h(x), 0.0);
  EXPECT_EQ(z.spec.g_plus(x).norm(), 0.0);
}

TEST(EstimateRatios, DegenerateAndStable) {
  EstimateOptions opt;
  opt.data_samples = 200;
  const RandomInstance z = make_random_instance(1001, true);
  const FemSolution zs = solve_problem(z.spec, 1.0 / 8, 0.9);
  EXPECT_EQ(estimate_ratio_corner(zs, z.spec, opt).status, RatioStatus::Degenerate);
  EXPECT_FALSE(estimate_ratio_global(zs, z.spec, opt).ratio().has_value());

  const RandomInstance inst = make_random_instance(3);
  opt.beta = 0.9 * std::min(singular_exponent(inst.a0_corner, inst.spec.domain.wedge), 1.0);
  std::vector<EstimateRatio> all;
  for (double h : {1.0 / 8, 1.0 / 16}) {
    const FemSolution s = solve_problem(inst.spec, h, 0.9);
    all.push_back(estimate_ratio_interior(s, inst.spec, opt));
    all.push_back(estimate_ratio_corner(s, inst.spec, opt));
    all.push_back(estimate_ratio_global(s, inst.spec, opt));
  }
  for (int k = 0; k < 3; ++k) {
    ASSERT_TRUE(all[k].ratio() && all[k + 3].ratio());
    const double q = *all[k + 3].ratio() / *all[k].ratio();
    EXPECT_LT(q, 2.0) << all[k].kind;
    EXPECT_GT(q, 0.5) << all[k].kind;
  }
  std::ostringstream os;
  write_ratio_csv(os, all);
  EXPECT_EQ(os.str().rfind("instance,kind,h,lhs,rhs,ratio\n", 0), 0u);
}
