#include "cornerlab/mesh.hpp"

#include "cornerlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

namespace cornerlab {

namespace {

using EdgeKey = std::pair<int, int>;

EdgeKey edge_key(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

std::map<EdgeKey, int> edge_counts(const Mesh& m) {
  std::map<EdgeKey, int> counts;
  for (const auto& t : m.triangles) {
    for (int e = 0; e < 3; ++e) ++counts[edge_key(t[e], t[(e + 1) % 3])];
  }
  return counts;
}

// Layer of vertices at radius r spanning [theta_minus, theta_plus], with the
// interface vertex shared by both sides.
struct Layer {
  int first = 0;    // index of the theta_minus vertex (or the origin for layer 0)
  int n_minus = 0;  // segments on the minus side
  int n_plus = 0;

  int interface_vertex() const { return first + n_minus; }
};

// Triangulate the strip between two polylines that share the same angular
// span. Both are given as vertex ids ordered by increasing angle, with their
// normalized angular positions in [0, 1].
void triangulate_strip(Mesh& m, const std::vector<int>& inner, const std::vector<double>& t_inner,
                       const std::vector<int>& outer, const std::vector<double>& t_outer, Side side) {
  const std::size_t p = inner.size() - 1;
  const std::size_t q = outer.size() - 1;
  std::size_t a = 0;
  std::size_t b = 0;
  auto emit = [&](int i, int j, int k) {
    std::array<int, 3> tri{i, j, k};
    const Point& x0 = m.vertices[i];
    const Point& x1 = m.vertices[j];
    const Point& x2 = m.vertices[k];
    const double cross = (x1 - x0).x() * (x2 - x0).y() - (x1 - x0).y() * (x2 - x0).x();
    if (cross < 0.0) std::swap(tri[1], tri[2]);
    m.triangles.push_back(tri);
    m.region.push_back(side);
  };
  while (a < p || b < q) {
    const bool advance_outer = (a == p) || (b < q && t_outer[b + 1] <= t_inner[a + 1]);
    if (advance_outer) {
      emit(inner[a], outer[b], outer[b + 1]);
      ++b;
    } else {
      emit(inner[a], outer[b], inner[a + 1]);
      ++a;
    }
  }
}

}  // namespace

Mesh generate_mesh(const DomainSpec& d, double h, double mu) {
  const double R = d.radius;
  if (!(h > 0.0) || !(h < R)) throw GeometryError("mesh size h must satisfy 0 < h < R");
  if (!(mu > 0.0) || mu > 1.0) throw GeometryError("grading exponent mu must lie in (0, 1]");
  const int N = static_cast<int>(std::ceil(R / h - 1e-12));
  if (N < 2) throw GeometryError("mesh size too large: fewer than 2 radial layers");

  const Wedge& w = d.wedge;
  Mesh m;
  m.grading_mu = mu;
  m.layer_radii.resize(N + 1);
  for (int i = 0; i <= N; ++i) {
    m.layer_radii[i] = R * std::pow(static_cast<double>(i) / N, 1.0 / mu);
  }
  m.layer_radii[N] = R;

  m.vertices.push_back(Point::Zero());
  m.boundary.push_back(true);

  const double span_minus = w.opening(Side::Minus);
  const double span_plus = w.opening(Side::Plus);
  const double max_apex = std::numbers::pi / 3.0;

  std::vector<Layer> layers(N + 1);
  layers[0] = Layer{0, 0, 0};
  int prev_minus = 0;
  int prev_plus = 0;
  for (int i = 1; i <= N; ++i) {
    const double r = m.layer_radii[i];
    const double dr = r - m.layer_radii[i - 1];
    const double ratio = std::max(r / dr, r / h);
    auto count = [&](double span, int prev) {
      const int base = static_cast<int>(std::ceil(span / max_apex - 1e-12));
      const int fit = static_cast<int>(std::ceil(span * ratio - 1e-9));
      return std::max({base, fit, prev, 1});
    };
    Layer L;
    L.first = m.num_vertices();
    L.n_minus = count(span_minus, prev_minus);
    L.n_plus = count(span_plus, prev_plus);
    prev_minus = L.n_minus;
    prev_plus = L.n_plus;
    for (int j = 0; j <= L.n_minus; ++j) {
      const double theta = w.theta_minus() + span_minus * j / L.n_minus;
      Point p = (j == L.n_minus) ? Point(r, 0.0) : from_polar({r, theta});
      m.vertices.push_back(p);
      m.boundary.push_back(j == 0 || i == N);
    }
    for (int k = 1; k <= L.n_plus; ++k) {
      const double theta = span_plus * k / L.n_plus;
      m.vertices.push_back(from_polar({r, theta}));
      m.boundary.push_back(k == L.n_plus || i == N);
    }
    layers[i] = L;
  }

  auto side_polyline = [&](int i, Side s, std::vector<int>& ids, std::vector<double>& ts) {
    ids.clear();
    ts.clear();
    if (i == 0) {
      ids.push_back(0);
      ts.push_back(0.0);
      ts.push_back(1.0);  // sentinel, never read past p = 0
      return;
    }
    const Layer& L = layers[i];
    const int n = s == Side::Minus ? L.n_minus : L.n_plus;
    const int start = s == Side::Minus ? L.first : L.interface_vertex();
    for (int j = 0; j <= n; ++j) {
      ids.push_back(start + j);
      ts.push_back(static_cast<double>(j) / n);
    }
  };

  std::vector<int> inner, outer;
  std::vector<double> t_inner, t_outer;
  for (int i = 1; i <= N; ++i) {
    for (Side s : {Side::Minus, Side::Plus}) {
      side_polyline(i - 1, s, inner, t_inner);
      side_polyline(i, s, outer, t_outer);
      triangulate_strip(m, inner, t_inner, outer, t_outer, s);
    }
    m.interface_edges.emplace_back(layers[i - 1].interface_vertex(), layers[i].interface_vertex());
  }

  if (min_area(m) <= 1e-14 * R * R) throw GeometryError("mesh generation produced a degenerate triangle");
  return m;
}

Mesh generate_nonobtuse_mesh(const DomainSpec& d, double h) {
  const double R = d.radius;
  if (!(h > 0.0) || !(h < R)) throw GeometryError("mesh size h must satisfy 0 < h < R");
  const Wedge& w = d.wedge;
  const double max_apex = std::numbers::pi / 4.0;

  Mesh m;
  m.vertices.push_back(Point::Zero());
  m.boundary.push_back(true);
  const int n_minus = static_cast<int>(std::ceil(w.opening(Side::Minus) / max_apex - 1e-12));
  const int n_plus = static_cast<int>(std::ceil(w.opening(Side::Plus) / max_apex - 1e-12));
  for (int j = 0; j < n_minus; ++j) {
    m.vertices.push_back(from_polar({R, w.theta_minus() + w.opening(Side::Minus) * j / n_minus}));
    m.boundary.push_back(true);
  }
  const int iface = m.num_vertices();
  m.vertices.push_back(Point(R, 0.0));
  m.boundary.push_back(true);
  for (int k = 1; k <= n_plus; ++k) {
    m.vertices.push_back(from_polar({R, w.opening(Side::Plus) * k / n_plus}));
    m.boundary.push_back(true);
  }
  for (int j = 1; j < m.num_vertices() - 1; ++j) {
    m.triangles.push_back({0, j, j + 1});
    m.region.push_back(j < iface ? Side::Minus : Side::Plus);
  }
  m.interface_edges.emplace_back(0, iface);

  while (max_edge_length(m) > h) m = refine_uniform(m);
  return m;
}

Mesh refine_uniform(const Mesh& m) {
  const auto counts = edge_counts(m);
  Mesh out;
  out.vertices = m.vertices;
  out.boundary = m.boundary;
  out.grading_mu = m.grading_mu;

  std::map<EdgeKey, int> midpoint;
  auto mid = [&](int a, int b) {
    const EdgeKey key = edge_key(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    const int id = out.num_vertices();
    Point p = 0.5 * (m.vertices[a] + m.vertices[b]);
    out.vertices.push_back(p);
    out.boundary.push_back(counts.at(key) == 1);
    midpoint.emplace(key, id);
    return id;
  };

  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto& [a, b, c] = m.triangles[t];
    const int ab = mid(a, b);
    const int bc = mid(b, c);
    const int ca = mid(c, a);
    for (const std::array<int, 3>& child :
         {std::array<int, 3>{a, ab, ca}, std::array<int, 3>{ab, b, bc},
          std::array<int, 3>{ca, bc, c}, std::array<int, 3>{ab, bc, ca}}) {
      out.triangles.push_back(child);
      out.region.push_back(m.region[t]);
    }
  }
  for (const auto& [a, b] : m.interface_edges) {
    const int c = midpoint.at(edge_key(a, b));
    out.vertices[c].y() = 0.0;
    out.interface_edges.emplace_back(a, c);
    out.interface_edges.emplace_back(c, b);
  }
  std::sort(out.interface_edges.begin(), out.interface_edges.end(), [&](const auto& e, const auto& f) {
    return out.vertices[e.first].norm() + out.vertices[e.second].norm() <
           out.vertices[f.first].norm() + out.vertices[f.second].norm();
  });
  return out;
}

double signed_area(const Mesh& m, int t) {
  const auto& [a, b, c] = m.triangles[t];
  const Point e1 = m.vertices[b] - m.vertices[a];
  const Point e2 = m.vertices[c] - m.vertices[a];
  return 0.5 * (e1.x() * e2.y() - e1.y() * e2.x());
}

Point barycenter(const Mesh& m, int t) {
  const auto& [a, b, c] = m.triangles[t];
  return (m.vertices[a] + m.vertices[b] + m.vertices[c]) / 3.0;
}

double max_angle(const Mesh& m) {
  double worst = 0.0;
  for (const auto& tri : m.triangles) {
    for (int k = 0; k < 3; ++k) {
      const Point u = m.vertices[tri[(k + 1) % 3]] - m.vertices[tri[k]];
      const Point v = m.vertices[tri[(k + 2) % 3]] - m.vertices[tri[k]];
      const double c = std::clamp(u.dot(v) / (u.norm() * v.norm()), -1.0, 1.0);
      worst = std::max(worst, std::acos(c));
    }
  }
  return worst;
}

double min_area(const Mesh& m) {
  double a = std::numeric_limits<double>::infinity();
  for (int t = 0; t < m.num_triangles(); ++t) a = std::min(a, signed_area(m, t));
  return a;
}

double max_edge_length(const Mesh& m) {
  double h = 0.0;
  for (const auto& tri : m.triangles) {
    for (int e = 0; e < 3; ++e) {
      h = std::max(h, (m.vertices[tri[e]] - m.vertices[tri[(e + 1) % 3]]).norm());
    }
  }
  return h;
}

double corner_mesh_size(const Mesh& m) {
  int corner = 0;
  for (int v = 1; v < m.num_vertices(); ++v) {
    if (m.vertices[v].norm() < m.vertices[corner].norm()) corner = v;
  }
  double h = 0.0;
  for (const auto& tri : m.triangles) {
    if (tri[0] != corner && tri[1] != corner && tri[2] != corner) continue;
    for (int e = 0; e < 3; ++e) {
      h = std::max(h, (m.vertices[tri[e]] - m.vertices[tri[(e + 1) % 3]]).norm());
    }
  }
  return h;
}

MeshCheck check_mesh(const Mesh& m, const Wedge& w) {
  MeshCheck c;
  for (const auto& [edge, n] : edge_counts(m)) {
    if (n > 2) c.conforming = false;
    if (n == 2) ++c.interior_edges;
    if (n == 1) {
      ++c.boundary_edges;
      if (!m.boundary[edge.first] || !m.boundary[edge.second]) c.conforming = false;
    }
  }
  double scale = 0.0;
  for (const auto& v : m.vertices) scale = std::max(scale, v.norm());
  const double eps = 1e-12 * std::max(scale, 1.0);

  auto vertex_side = [&](const Point& p) {
    if (std::abs(p.y()) <= eps && p.x() >= -eps) return 0;
    return wedge_angle(w, to_polar(p).theta) > 0.0 ? 1 : -1;
  };
  for (int t = 0; t < m.num_triangles(); ++t) {
    if (!(signed_area(m, t) > 0.0)) c.positively_oriented = false;
    bool has_plus = false;
    bool has_minus = false;
    for (int v : m.triangles[t]) {
      const int s = vertex_side(m.vertices[v]);
      has_plus |= s > 0;
      has_minus |= s < 0;
    }
    if (has_plus && has_minus) c.interface_fitted = false;
    const Side expected = side_of_angle(wedge_angle(w, to_polar(barycenter(m, t)).theta));
    if (expected != m.region[t]) c.tags_consistent = false;
  }
  return c;
}

void write_mesh(std::ostream& os, const Mesh& m) {
  const auto old_precision = os.precision(17);
  os << "vertices " << m.num_vertices() << '\n';
  for (int v = 0; v < m.num_vertices(); ++v) {
    os << m.vertices[v].x() << ' ' << m.vertices[v].y() << ' ' << (m.boundary[v] ? 1 : 0) << '\n';
  }
  os << "triangles " << m.num_triangles() << '\n';
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto& tri = m.triangles[t];
    os << tri[0] << ' ' << tri[1] << ' ' << tri[2] << ' ' << side_char(m.region[t]) << '\n';
  }
  os.precision(old_precision);
}

Mesh read_mesh(std::istream& is) {
  Mesh m;
  std::string word;
  int n = 0;
  if (!(is >> word >> n) || word != "vertices" || n < 0) throw InputError("mesh file: expected `vertices N`");
  m.vertices.resize(n);
  m.boundary.resize(n);
  for (int v = 0; v < n; ++v) {
    int flag = 0;
    if (!(is >> m.vertices[v].x() >> m.vertices[v].y() >> flag)) throw InputError("mesh file: bad vertex line");
    m.boundary[v] = flag != 0;
  }
  int nt = 0;
  if (!(is >> word >> nt) || word != "triangles" || nt < 0) throw InputError("mesh file: expected `triangles M`");
  m.triangles.resize(nt);
  m.region.resize(nt);
  for (int t = 0; t < nt; ++t) {
    char tag = 0;
    auto& tri = m.triangles[t];
    if (!(is >> tri[0] >> tri[1] >> tri[2] >> tag) || (tag != '+' && tag != '-')) {
      throw InputError("mesh file: bad triangle line");
    }
    for (int v : tri) {
      if (v < 0 || v >= n) throw InputError("mesh file: vertex index out of range");
    }
    m.region[t] = tag == '+' ? Side::Plus : Side::Minus;
  }
  // Interface edges are recovered from triangles that share an edge across tags.
  std::map<EdgeKey, std::pair<int, int>> owners;
  for (int t = 0; t < nt; ++t) {
    for (int e = 0; e < 3; ++e) {
      auto& o = owners[edge_key(m.triangles[t][e], m.triangles[t][(e + 1) % 3])];
      (m.region[t] == Side::Plus ? o.first : o.second) += 1;
    }
  }
  for (const auto& [edge, o] : owners) {
    if (o.first == 1 && o.second == 1) {
      const bool first_inner = m.vertices[edge.first].norm() <= m.vertices[edge.second].norm();
      m.interface_edges.emplace_back(first_inner ? edge.first : edge.second,
                                     first_inner ? edge.second : edge.first);
    }
  }
  std::sort(m.interface_edges.begin(), m.interface_edges.end(), [&](const auto& e, const auto& f) {
    return m.vertices[e.first].norm() < m.vertices[f.first].norm();
  });
  return m;
}

}  // namespace cornerlab
