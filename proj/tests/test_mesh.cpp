#include "cornerlab/errors.hpp"
#include "cornerlab/mesh.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace cornerlab;
constexpr double pi = std::numbers::pi;

namespace {

struct MeshCase {
  double tm, tp, h, mu;
};

std::vector<MeshCase> cases() {
  return {{-pi / 4, 3 * pi / 4, 1.0 / 16, 0.8}, {-pi / 4, pi / 4, 1.0 / 8, 1.0}, {-pi / 2, pi / 3, 1.0 / 12, 0.5},
          {-3 * pi / 4, 3 * pi / 4, 1.0 / 10, 0.7}, {-0.1, 0.2, 1.0 / 16, 1.0}, {-pi / 3, 7 * pi / 6, 1.0 / 8, 0.9}};
}

double total_area(const Mesh& m) {
  double a = 0.0;
  for (int t = 0; t < m.num_triangles(); ++t) a += signed_area(m, t);
  return a;
}

}  // namespace

TEST(Mesh, GradedMeshInvariants) {
  for (const auto& c : cases()) {
    const Wedge w = make_wedge(c.tm, c.tp);
    const Mesh m = generate_mesh(make_domain(w, 1.0), c.h, c.mu);
    const MeshCheck chk = check_mesh(m, w);
    EXPECT_TRUE(chk.conforming);
    EXPECT_TRUE(chk.positively_oriented);
    EXPECT_TRUE(chk.interface_fitted);
    EXPECT_TRUE(chk.tags_consistent);
    EXPECT_GT(min_area(m), 0.0);
    // Polygonal approximation of the sector from inside.
    const double sector = 0.5 * w.opening();
    EXPECT_LT(total_area(m), sector);
    EXPECT_GT(total_area(m), sector * (1.0 - c.h * c.h));
    // Outer layers are h / mu thick in the radial direction.
    EXPECT_LE(max_edge_length(m), (1.0 + 1.0 / c.mu) * c.h);
  }
}

TEST(Mesh, LayerRadiiFollowGrading) {
  const Mesh m = generate_mesh(make_domain(make_wedge(-pi / 4, 3 * pi / 4), 2.0), 1.0 / 16, 0.8);
  const int N = static_cast<int>(m.layer_radii.size()) - 1;
  ASSERT_EQ(N, 32);
  for (int i = 0; i <= N; ++i) {
    EXPECT_NEAR(m.layer_radii[i], 2.0 * std::pow(static_cast<double>(i) / N, 1.25), 1e-14);
  }
  EXPECT_NEAR(corner_mesh_size(m), 2.0 * std::pow(1.0 / N, 1.25), 1e-12);
}

TEST(Mesh, InterfaceEdgesOnRayOrderedOutward) {
  const Mesh m = generate_mesh(make_domain(make_wedge(-pi / 3, pi / 2), 1.0), 1.0 / 10, 0.6);
  ASSERT_FALSE(m.interface_edges.empty());
  double last = 0.0;
  for (const auto& [a, b] : m.interface_edges) {
    EXPECT_NEAR(m.vertices[a].y(), 0.0, 1e-15);
    EXPECT_NEAR(m.vertices[b].y(), 0.0, 1e-15);
    EXPECT_GE(m.vertices[a].x(), last - 1e-15);
    last = m.vertices[b].x();
  }
  EXPECT_NEAR(last, 1.0, 1e-14);
}

TEST(Mesh, BoundaryFlags) {
  const Wedge w = make_wedge(-pi / 4, 3 * pi / 4);
  const DomainSpec d = make_domain(w, 1.0);
  const Mesh m = generate_mesh(d, 1.0 / 8, 1.0);
  for (int v = 0; v < m.num_vertices(); ++v) {
    const Region r = classify_point(d, m.vertices[v], 1e-12);
    EXPECT_EQ(m.boundary[v], r == Region::Wall || r == Region::Edge) << v;
  }
}

TEST(Mesh, NonObtuse) {
  for (const auto& c : cases()) {
    if (c.tp - c.tm > pi) continue;
    const Wedge w = make_wedge(c.tm, c.tp);
    const Mesh m = generate_nonobtuse_mesh(make_domain(w, 1.0), c.h);
    const MeshCheck chk = check_mesh(m, w);
    EXPECT_TRUE(chk.conforming && chk.positively_oriented && chk.interface_fitted && chk.tags_consistent);
    EXPECT_LE(max_angle(m), pi / 2 + 1e-12);
  }
}

TEST(Mesh, UniformRefinementQuartersArea) {
  const Wedge w = make_wedge(-pi / 4, pi / 2);
  const Mesh m = generate_mesh(make_domain(w, 1.0), 1.0 / 6, 1.0);
  const Mesh f = refine_uniform(m);
  EXPECT_EQ(f.num_triangles(), 4 * m.num_triangles());
  EXPECT_NEAR(total_area(f), total_area(m), 1e-13);
  const MeshCheck chk = check_mesh(f, w);
  EXPECT_TRUE(chk.conforming && chk.interface_fitted && chk.tags_consistent);
}

TEST(Mesh, WriteReadRoundTrip) {
  const Mesh m = generate_mesh(make_domain(make_wedge(-pi / 4, 3 * pi / 4), 1.0), 1.0 / 8, 0.8);
  std::stringstream ss;
  write_mesh(ss, m);
  const Mesh r = read_mesh(ss);
  ASSERT_EQ(r.num_vertices(), m.num_vertices());
  ASSERT_EQ(r.num_triangles(), m.num_triangles());
  for (int v = 0; v < m.num_vertices(); ++v) {
    EXPECT_EQ(r.vertices[v], m.vertices[v]);
    EXPECT_EQ(r.boundary[v], m.boundary[v]);
  }
  for (int t = 0; t < m.num_triangles(); ++t) {
    EXPECT_EQ(r.triangles[t], m.triangles[t]);
    EXPECT_EQ(r.region[t], m.region[t]);
  }
}

TEST(Mesh, RejectsBadParameters) {
  const DomainSpec d = make_domain(make_wedge(-pi / 4, pi / 4), 1.0);
  EXPECT_THROW(generate_mesh(d, 0.0, 1.0), GeometryError);
  EXPECT_THROW(generate_mesh(d, 1.0, 1.0), GeometryError);
  EXPECT_THROW(generate_mesh(d, 0.1, 1.5), GeometryError);
  EXPECT_THROW(generate_mesh(d, 0.1, 0.0), GeometryError);
  std::istringstream bad("vertices 2\n0 0 1\n");
  EXPECT_THROW(read_mesh(bad), InputError);
}
