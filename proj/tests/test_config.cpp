#include "cornerlab/config.hpp"
#include "cornerlab/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace cornerlab;
constexpr double pi = std::numbers::pi;

namespace {

CaseConfig parse(const std::string& text, bool degrees = false) {
  std::istringstream is(text);
  return parse_config(is, degrees);
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Config, EmptyGivesWorkedExample) {
  const CaseConfig c = parse("");
  EXPECT_DOUBLE_EQ(c.theta_plus, 0.75 * pi);
  EXPECT_DOUBLE_EQ(c.theta_minus, -0.25 * pi);
  const CaseProblem p = build_problem(c);
  ASSERT_TRUE(p.gamma.has_value());
  EXPECT_NEAR(*p.gamma, 0.8, 1e-12);
  ASSERT_TRUE(p.exact.has_value());
  EXPECT_NEAR(p.spec.coeff.Lambda, 2.0 + std::sqrt(5.0), 1e-12);
  // Boundary data equals the exact solution.
  const Point x(0.3, 0.4);
  EXPECT_NEAR(p.spec.phi(x), p.exact->value(x, Side::Plus), 1e-15);
}

TEST(Config, ParsesSectionsAndComments) {
  const CaseConfig c = parse(R"(# a case
[geometry]
theta_plus = 60   # degrees
theta_minus = -30
h = 0.05
mesh = nonobtuse
[coefficient]
a0 = 3
[analysis]
levels = 4
[output]
directory = out/x
svg = no
)",
                             true);
  EXPECT_NEAR(c.theta_plus, pi / 3, 1e-15);
  EXPECT_NEAR(c.theta_minus, -pi / 6, 1e-15);
  EXPECT_EQ(c.mesh, MeshKind::NonObtuse);
  EXPECT_EQ(*c.a0, 3.0);
  EXPECT_EQ(c.levels, 4);
  EXPECT_EQ(c.directory, "out/x");
  EXPECT_FALSE(c.svg);
}

TEST(Config, ErrorsNameTheLine) {
  EXPECT_NE(error_of("[geometry]\nh = 0.1\nbogus = 1\n").find("line 3"), std::string::npos);
  EXPECT_NE(error_of("[nowhere]\n").find("line 1"), std::string::npos);
  EXPECT_NE(error_of("[geometry]\nh = 0.1\nh = 0.2\n").find("line 3"), std::string::npos);
  EXPECT_NE(error_of("[geometry]\nh = abc\n").find("line 2"), std::string::npos);
  EXPECT_NE(error_of("h = 0.1\n"), "");
  EXPECT_NE(error_of("[geometry]\nmu = 1.5\n"), "");
  EXPECT_NE(error_of("[geometry]\ntheta_minus = 0.2\n"), "");
  EXPECT_NE(error_of("[coefficient]\na0 = -1\n"), "");
  EXPECT_NE(error_of("[coefficient]\na_plus = 1 0\n"), "");
  EXPECT_NE(error_of("[data]\nphi = poly\n"), "");
}

TEST(Config, HashIgnoresOrderAndComments) {
  const std::string a = "[geometry]\nh = 0.1\nmu = 0.5\n[coefficient]\na0 = 2\n";
  const std::string b = "# x\n[coefficient]\na0 = 2\n[geometry]\nmu = 0.5\nh = 0.1\n";
  EXPECT_EQ(config_hash(parse(a)), config_hash(parse(b)));
  EXPECT_NE(config_hash(parse(a)), config_hash(parse("[geometry]\nh = 0.1\n")));
  EXPECT_EQ(config_hash(parse(a)).size(), 16u);
}

TEST(Config, ManufacturedHasExactOnlyForIdentity) {
  const CaseProblem p = build_problem(parse("[data]\nphi = manufactured\nh = manufactured\n"));
  ASSERT_TRUE(p.exact.has_value());
  const Point x(0.2, 0.3);
  // h is the Laplacian of phi.
  const double e = 1e-4;
  const double lap = (p.spec.phi(x + Point(e, 0)) + p.spec.phi(x - Point(e, 0)) + p.spec.phi(x + Point(0, e)) +
                      p.spec.phi(x - Point(0, e)) - 4 * p.spec.phi(x)) / (e * e);
  EXPECT_NEAR(lap, p.spec.h(x), 1e-6);
  EXPECT_FALSE(build_problem(parse("[coefficient]\na0 = 2\n[data]\nphi = manufactured\nh = manufactured\n")).exact);
}

TEST(Config, MatrixCoefficient) {
  const CaseProblem p = build_problem(parse(
      "[coefficient]\na_plus = 2 0.5 1\na_minus = 1 0 1\n[data]\nphi = poly\nphi_poly = 0 1 0 0 0 0\n"));
  EXPECT_NEAR(p.spec.coeff(Point(0.1, 0.1), Side::Plus)(0, 1), 0.5, 0.0);
  EXPECT_GT(p.spec.coeff.lambda, 0.0);
  EXPECT_EQ(p.spec.phi(Point(0.3, 0.1)), 0.3);
  EXPECT_THROW(build_problem(parse("[coefficient]\na_plus = 1 2 1\na_minus = 1 0 1\n[data]\nphi = zero\n")),
               ConfigError);
}

TEST(Config, GammaMismatchRejected) {
  EXPECT_THROW(build_problem(parse("[coefficient]\na0 = 2\n[data]\ngamma = 0.8\n")), ConfigError);
}
