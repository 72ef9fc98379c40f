#include "cornerlab/errors.hpp"
#include "cornerlab/geometry.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace cornerlab;
constexpr double pi = std::numbers::pi;

TEST(Wedge, RejectsBadAngles) {
  EXPECT_THROW(make_wedge(0.1, 1.0), GeometryError);
  EXPECT_THROW(make_wedge(-1.0, -0.1), GeometryError);
  EXPECT_THROW(make_wedge(-pi, pi + 0.1), GeometryError);
  EXPECT_NO_THROW(make_wedge(-pi / 4, 3 * pi / 4));
}

TEST(Wedge, OpeningPerSide) {
  const Wedge w = make_wedge(-pi / 4, 3 * pi / 4);
  EXPECT_DOUBLE_EQ(w.opening(), pi);
  EXPECT_DOUBLE_EQ(w.opening(Side::Plus), 3 * pi / 4);
  EXPECT_DOUBLE_EQ(w.opening(Side::Minus), pi / 4);
}

TEST(Polar, RoundTrip) {
  for (double th : {-3.0, -1.0, -0.2, 0.0, 0.4, 2.0, 3.1}) {
    for (double r : {1e-6, 0.3, 1.0, 7.0}) {
      const PolarPoint pp = to_polar(from_polar({r, th}));
      EXPECT_NEAR(pp.r, r, 1e-14 * r);
      EXPECT_NEAR(pp.theta, th, 1e-12);
    }
  }
  EXPECT_EQ(to_polar(Point::Zero()).theta, 0.0);
}

TEST(Polar, WedgeAngleShiftsIntoRange) {
  // Wedge reaching past pi on the plus side.
  const Wedge w = make_wedge(-pi / 2, 5 * pi / 4);
  const PolarPoint pp = to_wedge_polar(w, from_polar({1.0, 1.1 * pi}));
  EXPECT_NEAR(pp.theta, 1.1 * pi, 1e-12);
  EXPECT_NEAR(wedge_angle(w, -0.3), -0.3, 0.0);
}

TEST(Classify, Regions) {
  const DomainSpec d = make_domain(make_wedge(-pi / 4, 3 * pi / 4), 1.0);
  EXPECT_EQ(classify_point(d, Point(0, 0)), Region::Edge);
  EXPECT_EQ(classify_point(d, Point(0.5, 0)), Region::Interface);
  EXPECT_EQ(classify_point(d, Point(0.2, 0.3)), Region::OmegaPlus);
  EXPECT_EQ(classify_point(d, Point(0.5, -0.1)), Region::OmegaMinus);
  EXPECT_EQ(classify_point(d, from_polar({0.5, -pi / 4})), Region::Wall);
  EXPECT_EQ(classify_point(d, from_polar({1.0, 0.3})), Region::Wall);
  EXPECT_EQ(classify_point(d, Point(0.1, -0.5)), Region::Outside);
  EXPECT_EQ(classify_point(d, Point(2.0, 0.1)), Region::Outside);
}

TEST(Classify, ScaleInvariantTolerance) {
  // The default tolerance scales with R, so classification commutes with dilation.
  const Wedge w = make_wedge(-pi / 3, pi / 2);
  for (double R : {1e-3, 1.0, 1e3}) {
    const DomainSpec d = make_domain(w, R);
    EXPECT_EQ(classify_point(d, Point(0.3 * R, 0.1 * R)), Region::OmegaPlus);
    EXPECT_EQ(classify_point(d, Point(0.3 * R, 0.0)), Region::Interface);
  }
}

TEST(Delta, CappedAtOne) {
  EXPECT_DOUBLE_EQ(delta_dist(Point(0.3, 0.4)), 0.5);
  EXPECT_DOUBLE_EQ(delta_dist(Point(3, 4)), 1.0);
  EXPECT_DOUBLE_EQ(delta_dist(Point(1, 1), Point(1, 0.75)), 0.25);
}

TEST(Side, OfAngle) {
  EXPECT_EQ(side_of_angle(0.0), Side::Plus);
  EXPECT_EQ(side_of_angle(-1e-300), Side::Minus);
  EXPECT_EQ(side_char(Side::Minus), '-');
}
