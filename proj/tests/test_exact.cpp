#include "cornerlab/errors.hpp"
#include "cornerlab/exact.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace cornerlab;
constexpr double pi = std::numbers::pi;

TEST(Transmission, WorkedExample) {
  const Wedge w = make_wedge(-pi / 4, 3 * pi / 4);
  const auto tc = transmission_coeffs(0.8, w);
  EXPECT_NEAR(tc.a0, 2.0 + std::sqrt(5.0), 1e-12);
  EXPECT_NEAR(tc.A, -std::cos(0.6 * pi) / std::sin(0.6 * pi), 1e-15);
  EXPECT_NEAR(tc.C, tc.a0 * tc.A, 1e-15);
}

TEST(Transmission, LongDoubleAgrees) {
  const Wedge w = make_wedge(-pi / 4, 3 * pi / 4);
  const auto d = transmission_coeffs(0.8, w);
  const auto ld = transmission_coeffs<long double>(0.8L, w);
  EXPECT_NEAR(static_cast<double>(ld.a0), d.a0, 1e-13);
}

TEST(Transmission, Errors) {
  // gamma * theta_plus = pi/2 makes cos vanish.
  EXPECT_THROW(transmission_coeffs(1.0, make_wedge(-pi / 4, pi / 2)), DegenerateError);
  // Both g t+ and -g t- below pi/2: the flux condition needs a0 < 0.
  EXPECT_THROW(transmission_coeffs(1.0, make_wedge(-pi / 4, pi / 4)), SignError);
}

// The separable solution vanishes on both walls, is continuous across theta = 0
// and satisfies a0 du+/dtheta = du-/dtheta there.
TEST(Separable, TransmissionInvariants) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int checked = 0;
  for (int i = 0; i < 400 && checked < 100; ++i) {
    const double tp = 0.1 + U(rng) * 2.0, tm = -(0.1 + U(rng) * 2.0);
    const Wedge w = make_wedge(tm, tp);
    const double gamma = 0.2 + U(rng) * 2.5;
    SeparableSolution<double> s;
    try {
      s = build_dirichlet_example(gamma, w);
    } catch (const Error&) {
      continue;
    }
    ++checked;
    const double scale = std::max({1.0, std::abs(s.A), std::abs(s.C)});
    EXPECT_NEAR(s.angular(tp), 0.0, 1e-12 * scale);
    EXPECT_NEAR(s.angular(tm), 0.0, 1e-12 * scale);
    EXPECT_NEAR(s.angular(0.0), s.angular(-1e-300), 1e-15 * scale);
    EXPECT_NEAR(s.a0 * s.angular_derivative(0.0), s.angular_derivative(-1e-300), 1e-12 * scale * s.a0);
    // gamma is a root of F for the recovered a0.
    EXPECT_NEAR(exponent_function(gamma, s.a0, angles_of(w)), 0.0, 1e-12 * (1 + s.a0));
  }
  EXPECT_GE(checked, 50);
}

TEST(Separable, GradientMatchesFiniteDifference) {
  const Wedge w = make_wedge(-pi / 4, 3 * pi / 4);
  const auto s = build_dirichlet_example(0.8, w);
  for (double th : {-0.5, -0.1, 0.2, 1.0, 2.0}) {
    const double r = 0.37, e = 1e-6;
    const Point x = from_polar({r, th});
    const auto f = [&](const Point& p) { return eval_separable(s, to_wedge_polar(w, p)); };
    const Point fd((f(x + Point(e, 0)) - f(x - Point(e, 0))) / (2 * e), (f(x + Point(0, e)) - f(x - Point(0, e))) / (2 * e));
    const Point g = grad_separable(s, PolarPoint{r, th});
    EXPECT_NEAR((g - fd).norm(), 0.0, 1e-7);
  }
}

TEST(Separable, HomogeneousOfDegreeGamma) {
  const Wedge w = make_wedge(-pi / 4, 3 * pi / 4);
  const auto s = build_dirichlet_example(0.8, w);
  for (double th : {-0.3, 0.5, 1.7}) {
    EXPECT_NEAR(eval_separable(s, 0.5, th), std::pow(0.5, 0.8) * eval_separable(s, 1.0, th), 1e-14);
  }
}

TEST(SeparableMode, CoversZeroOverZero) {
  // Symmetric pi/4 wedge, a0 = 1, gamma = 2: the closed form for a0 is 0/0.
  const Wedge w = make_wedge(-pi / 4, pi / 4);
  const auto s = separable_mode(2.0, 1.0, w);
  EXPECT_NEAR(s.angular(pi / 4), 0.0, 1e-14);
  EXPECT_NEAR(s.angular(-pi / 4), 0.0, 1e-14);
  EXPECT_NEAR(std::max(std::abs(s.A), std::abs(s.B)), 1.0, 1e-15);
}

TEST(Exponent, NoJumpGivesPiOverOpening) {
  for (auto [tm, tp] : {std::pair{-pi / 4, 3 * pi / 4}, {-pi / 3, pi / 6}, {-1.0, 0.4}, {-0.5, 2.5}}) {
    const Wedge w = make_wedge(tm, tp);
    EXPECT_NEAR(singular_exponent(1.0, w), pi / (tp - tm), 1e-12);
  }
}

TEST(Exponent, RoundTrip) {
  const Wedge w = make_wedge(-pi / 4, 3 * pi / 4);
  const double a0 = transmission_coeffs(0.8, w).a0;
  EXPECT_NEAR(singular_exponent(a0, w), 0.8, 1e-12);
  const auto roots = exponent_roots(a0, w);
  for (double g : roots) EXPECT_NEAR(exponent_function(g, a0, angles_of(w)), 0.0, 1e-11);
}

TEST(Exponent, MonotoneInJump) {
  // Larger a0 on the wide plus side lowers the exponent on this wedge.
  const Wedge w = make_wedge(-pi / 4, 3 * pi / 4);
  double last = 10.0;
  for (double a0 : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
    const double g = singular_exponent(a0, w);
    EXPECT_LT(g, last);
    last = g;
  }
}

TEST(Exponent, Errors) {
  const Wedge w = make_wedge(-pi / 4, 3 * pi / 4);
  EXPECT_THROW(singular_exponent(-1.0, w), SignError);
  RootOptions opt;
  opt.bracket = std::make_pair(0.01, 0.2);
  EXPECT_THROW(singular_exponent(4.0, w, opt), NoSignChangeError);
  opt.bracket = std::make_pair(1.0, 0.5);
  EXPECT_THROW(singular_exponent(4.0, w, opt), InputError);
}

TEST(Corrector, TangentialDerivativesReproduced) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double tp = 0.05 + U(rng) * 1.5, tm = -(0.05 + U(rng) * 1.5);
    const Wedge w = make_wedge(tm, tp);
    const double a0 = std::exp(4 * U(rng) - 2);
    if (std::abs(corrector_determinant(a0, angles_of(w))) < 1e-6) continue;
    const double cp = 2 * U(rng) - 1, cm = 2 * U(rng) - 1;
    const auto p = corrector_solve(cp, cm, a0, w);
    EXPECT_LT(corrector_residual(p, cp, cm, a0, angles_of(w)), 1e-12);
    // Derivative along each wall direction.
    const Point ep(std::cos(tp), std::sin(tp)), em(std::cos(tm), std::sin(tm));
    EXPECT_NEAR(p.gradient(Side::Plus).dot(ep), cp, 1e-10 * (1 + std::abs(p.a_star) + std::abs(p.b_plus)));
    EXPECT_NEAR(p.gradient(Side::Minus).dot(em), cm, 1e-10 * (1 + std::abs(p.a_star) + std::abs(p.b_minus)));
    // Continuous on the interface, flux continuous a0 b+ = b-.
    EXPECT_EQ(p(Point(0.7, 0.0), Side::Plus), p(Point(0.7, 0.0), Side::Minus));
    EXPECT_NEAR(a0 * p.b_plus, p.b_minus, 1e-14 * (1 + std::abs(p.b_minus)));
  }
}

TEST(Corrector, Errors) {
  const Wedge w = make_wedge(-pi / 4, pi / 4);
  EXPECT_THROW(corrector_solve(1.0, 1.0, 0.0, w), SignError);
  // At a0 = 1 the determinant is sin(t- - t+), which vanishes for opening pi.
  const Wedge flat = make_wedge(-pi / 2, pi / 2);
  EXPECT_NEAR(corrector_determinant(1.0, angles_of(flat)), 0.0, 1e-15);
  EXPECT_THROW(corrector_solve(1.0, 1.0, 1.0, flat), DegenerateError);
}

TEST(Barrier, HypothesisAndSign) {
  const Wedge w = make_wedge(-pi / 6, pi / 3);
  EXPECT_NEAR(barrier_frequency_bound(w), 1.5, 1e-15);
  const auto b = make_barrier(2.0, 0.2, 0.2, w);
  for (double th = -pi / 6; th <= pi / 3; th += 0.01) {
    EXPECT_GT(barrier_eval(b, 0.5, th), 0.0);
  }
  EXPECT_NEAR(barrier_eval(b, 0.5, 0.0), 2.0 * std::pow(0.5, 1.2), 1e-15);
  EXPECT_THROW(make_barrier(1.0, 0.3, 0.3, w), HypothesisError);
  EXPECT_THROW(make_barrier(-1.0, 0.2, 0.2, w), InputError);
  EXPECT_THROW(make_barrier(1.0, 1.2, 0.2, w), InputError);
}
