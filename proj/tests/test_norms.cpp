#include "cornerlab/errors.hpp"
#include "cornerlab/norms.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace cornerlab;

namespace {

SampledField cloud(std::size_t n, std::uint64_t seed, const std::function<double(const Point&)>& f,
                   const std::function<Point(const Point&)>& g) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  SampledField s;
  for (std::size_t i = 0; i < n; ++i) {
    const Point p(U(rng), U(rng) - 0.5);
    s.push_back(p, p.y() >= 0 ? 1 : -1, f(p), g(p));
  }
  return s;
}

NormParams params(int k, double alpha, double tau, bool weighted = true) {
  NormParams np;
  np.k = k;
  np.alpha = alpha;
  np.tau = tau;
  if (!weighted) np.edge_point.reset();
  return np;
}

}  // namespace

TEST(Norms, ConstantHasZeroSeminorms) {
  const SampledField f = cloud(300, 1, [](const Point&) { return 4.0; }, [](const Point&) { return Point(0, 0); });
  const NormReport r = weighted_norm(f, params(1, 0.5, 0.0));
  EXPECT_EQ(r.seminorm_kalpha, 0.0);
  EXPECT_NEAR(r.total, 4.0, 1e-15);
}

TEST(Norms, LinearFunctionUnweighted) {
  // [x]_{0,alpha} over pairs is sup |dx| / |d|^alpha, bounded by diam^(1-alpha).
  const SampledField f = cloud(400, 2, [](const Point& p) { return p.x(); }, [](const Point&) { return Point(1, 0); });
  const NormParams np = params(0, 0.5, 0.0, false);
  const HolderEstimate h = weighted_seminorm_kalpha(f, np);
  EXPECT_TRUE(h.exhaustive);
  EXPECT_LE(h.value, std::pow(cloud_diameter(f), 0.5) + 1e-12);
  EXPECT_GT(h.value, 0.8);
  EXPECT_NEAR(weighted_seminorm_k0(f, np, 1), 1.0, 1e-15);
  // Gradient is constant: the first-order seminorm vanishes.
  EXPECT_EQ(weighted_seminorm_kalpha(f, params(1, 0.5, 0.0, false)).value, 0.0);
}

TEST(Norms, HomogeneousInScaling) {
  const auto fn = [](const Point& p) { return std::sin(3 * p.x()) * p.y(); };
  const auto gr = [](const Point& p) { return Point(3 * std::cos(3 * p.x()) * p.y(), std::sin(3 * p.x())); };
  const SampledField f = cloud(500, 3, fn, gr);
  const NormParams np = params(1, 0.4, -0.5);
  const NormReport a = weighted_norm(f, np);
  const NormReport b = weighted_norm(scaled(f, -3.0), np);
  EXPECT_NEAR(b.total, 3.0 * a.total, 1e-12 * a.total);
  EXPECT_NEAR(b.seminorm_kalpha, 3.0 * a.seminorm_kalpha, 1e-12 * a.total);
}

TEST(Norms, RandomizedCloseToExhaustive) {
  const auto fn = [](const Point& p) { return std::pow(p.norm(), 0.7) + p.x() * p.y(); };
  const auto gr = [](const Point& p) { return Point(0, 0); };
  const SampledField f = cloud(1500, 4, fn, gr);
  const NormParams np = params(0, 0.5, -0.7);
  PairOptions ex, rnd;
  rnd.force_randomized = true;
  const HolderEstimate e = weighted_seminorm_kalpha(f, np, ex);
  const HolderEstimate r = weighted_seminorm_kalpha(f, np, rnd);
  EXPECT_TRUE(e.exhaustive);
  EXPECT_FALSE(r.exhaustive);
  // A randomized sup never exceeds the exhaustive one.
  EXPECT_LE(r.value, e.value * (1 + 1e-12));
  EXPECT_GE(r.value, 0.98 * e.value);
}

TEST(Norms, WeightCapsAtOne) {
  // delta = min(|x|, 1): far from the edge the weight is 1 for every tau.
  SampledField f;
  f.push_back(Point(5, 0), 1, 2.0, Point(1, 1));
  for (double tau : {-0.9, 0.0, 0.9}) {
    EXPECT_NEAR(weighted_seminorm_k0(f, params(0, 0.5, tau), 0), 2.0, 1e-15);
    EXPECT_NEAR(weighted_seminorm_k0(f, params(1, 0.5, tau), 1), std::sqrt(2.0), 1e-15);
  }
  // Near the edge a negative total order gives weight 1.
  SampledField g;
  g.push_back(Point(0.01, 0), 1, 2.0);
  EXPECT_NEAR(weighted_seminorm_k0(g, params(0, 0.5, -0.5), 0), 2.0, 1e-15);
  EXPECT_NEAR(weighted_seminorm_k0(g, params(0, 0.5, 0.5), 0), 2.0 * 0.1, 1e-15);
}

TEST(Norms, SameRegionScope) {
  SampledField f;
  f.push_back(Point(0.5, 0.01), 1, 0.0);
  f.push_back(Point(0.5, -0.01), -1, 1.0);
  f.push_back(Point(0.6, 0.01), 1, 0.0);
  PairOptions opt;
  opt.scope = PairScope::SameRegion;
  EXPECT_EQ(weighted_seminorm_kalpha(f, params(0, 0.5, 0.0, false), opt).value, 0.0);
  opt.scope = PairScope::All;
  EXPECT_GT(weighted_seminorm_kalpha(f, params(0, 0.5, 0.0, false), opt).value, 1.0);
}

TEST(Norms, PrimedNormScales) {
  const SampledField f = cloud(300, 5, [](const Point& p) { return p.x() * p.x(); },
                               [](const Point& p) { return Point(2 * p.x(), 0); });
  EXPECT_GT(primed_norm(f, 1, 0.5), 0.0);
  EXPECT_GE(primed_norm(f, 1, 0.5), primed_norm(f, 0, 0.5));
}

TEST(Norms, InputChecks) {
  SampledField f;
  EXPECT_THROW(weighted_norm(f, params(0, 0.5, 0.0)), InputError);
  f.push_back(Point(0.1, 0.1), 1, 1.0);
  f.push_back(Point(0.2, 0.1), 1, 1.0);
  EXPECT_THROW(weighted_norm(f, params(1, 0.5, 0.0)), InputError);
  EXPECT_THROW(weighted_norm(f, params(0, 1.0, 0.0)), InputError);
  EXPECT_THROW(weighted_norm(f, params(2, 0.5, 0.0)), InputError);
}

TEST(YNorm, PowerFunction) {
  // |x|^s on the unit square quadrant: r^(1-s) * r^s * const is increasing in r, max at r = 1.
  const auto in_domain = [](const Point& p) { return p.x() >= 0 && p.x() <= 1 && p.y() >= 0 && p.y() <= 1; };
  SampledField f;
  for (int i = 0; i < 200; ++i) {
    for (int j = 0; j < 200; ++j) {
      const Point p((i + 0.5) / 200, (j + 0.5) / 200);
      f.push_back(p, 1, std::pow(p.norm(), 0.5));
    }
  }
  const YNormResult y = y_norm(f, 0.5, 2.0, dyadic_radii(4), in_domain);
  EXPECT_EQ(y.argmax_radius, 1.0);
  EXPECT_EQ(y.sample_counts.size(), 4u);
  EXPECT_THROW(y_norm(f, 0.5, 1.0, dyadic_radii(2), in_domain), InputError);
  EXPECT_THROW(y_norm(f, 0.5, 2.0, {1.5}, in_domain), InputError);
}

TEST(FieldCsv, RoundTrip) {
  const SampledField f = cloud(20, 6, [](const Point& p) { return p.x() / 3; }, [](const Point& p) { return p; });
  std::stringstream ss;
  write_field_csv(ss, f);
  const SampledField g = read_field_csv(ss);
  ASSERT_EQ(g.size(), f.size());
  ASSERT_TRUE(g.has_gradients());
  for (std::size_t i = 0; i < f.size(); ++i) {
    EXPECT_EQ(g.points[i], f.points[i]);
    EXPECT_EQ(g.values[i], f.values[i]);
    EXPECT_EQ(g.region[i], f.region[i]);
    EXPECT_EQ(g.gradients[i], f.gradients[i]);
  }
  std::istringstream bad("x,y,value\n1,2,3\n");
  EXPECT_THROW(read_field_csv(bad), InputError);
}
