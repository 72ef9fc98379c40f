#pragma once

#include "cornerlab/geometry.hpp"

#include <array>
#include <iosfwd>
#include <utility>
#include <vector>

namespace cornerlab {

/// Interface-fitted triangulation of a sector. Immutable once generated.
struct Mesh {
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<Side> region;                    // per triangle
  std::vector<std::pair<int, int>> interface_edges;  // ordered outward along theta = 0
  std::vector<bool> boundary;                  // per vertex
  double grading_mu = 1.0;
  std::vector<double> layer_radii;             // empty for meshes not built in layers

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }
};

/// Layered polar mesh. Node layers sit at r_i = R (i/N)^(1/mu) with N = ceil(R/h);
/// the rays theta_minus, 0 and theta_plus are mesh lines and the arc is replaced
/// by chords no longer than h.
Mesh generate_mesh(const DomainSpec& d, double h, double mu = 1.0);

/// Mesh with no obtuse angles: a fan of isosceles triangles (apex below pi/2)
/// refined uniformly until every edge is at most h. Its boundary polygon is the
/// fan's chords, which are coarser than h.
Mesh generate_nonobtuse_mesh(const DomainSpec& d, double h);

/// Red refinement: each triangle split into four similar ones. Tags, boundary
/// flags and interface edges are carried over; new boundary nodes stay on the
/// parent chord.
Mesh refine_uniform(const Mesh& m);

double signed_area(const Mesh& m, int t);
Point barycenter(const Mesh& m, int t);

/// Largest interior angle over all triangles (radians).
double max_angle(const Mesh& m);
double min_area(const Mesh& m);
/// Longest edge touching the vertex nearest to the origin.
double corner_mesh_size(const Mesh& m);
double max_edge_length(const Mesh& m);

struct MeshCheck {
  bool conforming = true;        // every edge shared by at most two triangles, boundary edges flagged
  bool positively_oriented = true;
  bool interface_fitted = true;  // no triangle has vertices strictly on both sides of theta = 0
  bool tags_consistent = true;   // region tag matches the side of the barycenter
  int boundary_edges = 0;
  int interior_edges = 0;

  bool ok() const { return conforming && positively_oriented && interface_fitted && tags_consistent; }
};

MeshCheck check_mesh(const Mesh& m, const Wedge& w);

/// Plain-text export: `vertices N`, N lines `x y flag`, `triangles M`, M lines `i j k tag`.
void write_mesh(std::ostream& os, const Mesh& m);
Mesh read_mesh(std::istream& is);

}  // namespace cornerlab
