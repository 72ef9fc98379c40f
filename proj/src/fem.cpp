#include "cornerlab/fem.hpp"

#include "cornerlab/errors.hpp"
#include "cornerlab/report.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

namespace cornerlab {

PiecewiseCoefficient scalar_jump(double a0) {
  if (!(a0 > 0.0)) throw InputError("coefficient jump a0 must be positive");
  PiecewiseCoefficient c;
  c.a_plus = [a0](const Point&) -> Matrix2 { return a0 * Matrix2::Identity(); };
  c.a_minus = [](const Point&) -> Matrix2 { return Matrix2::Identity(); };
  c.lambda = std::min(a0, 1.0);
  c.Lambda = std::max(a0, 1.0);
  return c;
}

EllipticityReport check_ellipticity(const PiecewiseCoefficient& a, const std::vector<Point>& samples) {
  EllipticityReport rep;
  rep.min_eigenvalue = std::numeric_limits<double>::infinity();
  rep.max_eigenvalue = -std::numeric_limits<double>::infinity();
  for (const Point& x : samples) {
    for (Side s : {Side::Plus, Side::Minus}) {
      const Matrix2 m = a(x, s);
      rep.max_asymmetry = std::max(rep.max_asymmetry, std::abs(m(0, 1) - m(1, 0)));
      const Eigen::Vector2d ev = Eigen::SelfAdjointEigenSolver<Matrix2>(0.5 * (m + m.transpose()),
                                                                        Eigen::EigenvaluesOnly)
                                     .eigenvalues();
      rep.min_eigenvalue = std::min(rep.min_eigenvalue, ev.minCoeff());
      rep.max_eigenvalue = std::max(rep.max_eigenvalue, ev.maxCoeff());
    }
  }
  const double slack = 1e-12 * std::max(1.0, a.Lambda);
  rep.ok = rep.max_asymmetry <= slack && rep.min_eigenvalue >= a.lambda - slack &&
           rep.max_eigenvalue <= a.Lambda + slack;
  return rep;
}

ProblemSpec make_problem(const DomainSpec& d, PiecewiseCoefficient coeff) {
  ProblemSpec spec{d,
                   std::move(coeff),
                   [](const Point&) { return Point::Zero().eval(); },
                   [](const Point&) { return Point::Zero().eval(); },
                   [](const Point&) { return 0.0; },
                   [](const Point&) { return 0.0; },
                   std::nullopt};
  return spec;
}

namespace {

struct ElementGeometry {
  double area;
  std::array<Point, 3> grad;  // gradients of the barycentric coordinates
};

ElementGeometry element_geometry(const Mesh& m, int t) {
  const auto& tri = m.triangles[t];
  const double area = signed_area(m, t);
  ElementGeometry g{area, {}};
  for (int i = 0; i < 3; ++i) {
    const Point& xj = m.vertices[tri[(i + 1) % 3]];
    const Point& xk = m.vertices[tri[(i + 2) % 3]];
    g.grad[i] = Point(xj.y() - xk.y(), xk.x() - xj.x()) / (2.0 * area);
  }
  return g;
}

}  // namespace

SparseSystem assemble(const Mesh& mesh, const ProblemSpec& spec) {
  const int n = mesh.num_vertices();
  SparseSystem sys;
  sys.rhs = Vector::Zero(n);
  sys.element_coeff.resize(mesh.num_triangles());
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(9 * static_cast<std::size_t>(mesh.num_triangles()));

  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Side side = mesh.region[t];
    const ElementGeometry eg = element_geometry(mesh, t);
    if (!(eg.area > 1e-14)) {
      std::ostringstream os;
      os << "degenerate element " << t << " with area " << eg.area;
      throw GeometryError(os.str());
    }
    const Matrix2 a = spec.coeff(barycenter(mesh, t), side);
    sys.element_coeff[t] = a;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        triplets.emplace_back(tri[i], tri[j], eg.area * eg.grad[i].dot(a * eg.grad[j]));
      }
    }
    // Edge midpoints; midpoint e lies opposite vertex e.
    std::array<Point, 3> mid;
    std::array<double, 3> hm;
    Point gsum = Point::Zero();
    for (int e = 0; e < 3; ++e) {
      mid[e] = 0.5 * (mesh.vertices[tri[(e + 1) % 3]] + mesh.vertices[tri[(e + 2) % 3]]);
      hm[e] = spec.h(mid[e]);
      gsum += spec.g(mid[e], side);
    }
    for (int i = 0; i < 3; ++i) {
      // phi_i is 1/2 at the two midpoints adjacent to vertex i and 0 opposite.
      const double h_term = -eg.area / 6.0 * (hm[(i + 1) % 3] + hm[(i + 2) % 3]);
      const double g_term = eg.grad[i].dot(eg.area / 3.0 * gsum);
      sys.rhs[tri[i]] += h_term + g_term;
    }
  }
  sys.matrix.resize(n, n);
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  sys.matrix.makeCompressed();

  for (int v = 0; v < n; ++v) {
    if (!mesh.boundary[v]) continue;
    sys.constrained.push_back(v);
    sys.constrained_values.push_back(spec.phi(mesh.vertices[v]));
  }
  return sys;
}

CgResult solve_cg(const SparseMatrix& A, const Vector& b, const CgOptions& opt) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n || b.size() != n) throw InputError("CG: dimension mismatch");
  if (!(opt.tol > 0.0 && opt.tol < 1.0)) throw InputError("CG tolerance must lie in (0, 1)");
  const int max_iter =
      opt.max_iter > 0 ? opt.max_iter : std::max(100, static_cast<int>(20.0 * std::sqrt(static_cast<double>(n))));

  CgResult res;
  res.x = Vector::Zero(n);
  const double bnorm = b.norm();
  res.residual_history.push_back(bnorm == 0.0 ? 0.0 : 1.0);
  if (opt.record_iterates) res.iterates.push_back(res.x);
  if (bnorm == 0.0) {
    res.converged = true;
    return res;
  }
  Vector inv_diag(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = A.coeff(i, i);
    if (!(d > 0.0)) throw ConvergenceError("CG: matrix has a nonpositive diagonal entry");
    inv_diag[i] = 1.0 / d;
  }
  Vector r = b;
  Vector z = inv_diag.cwiseProduct(r);
  Vector p = z;
  Vector Ap(n);
  double rz = r.dot(z);
  for (int it = 1; it <= max_iter; ++it) {
    Ap.noalias() = A * p;
    const double pAp = p.dot(Ap);
    if (!(pAp > 0.0)) throw ConvergenceError("CG: matrix is not positive definite");
    const double step = rz / pAp;
    res.x.noalias() += step * p;
    r.noalias() -= step * Ap;
    res.iterations = it;
    res.relative_residual = r.norm() / bnorm;
    res.residual_history.push_back(res.relative_residual);
    if (opt.record_iterates) res.iterates.push_back(res.x);
    if (res.relative_residual <= opt.tol) {
      res.converged = true;
      return res;
    }
    z = inv_diag.cwiseProduct(r);
    const double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  std::ostringstream os;
  os << "CG did not converge in " << max_iter << " iterations (relative residual " << res.relative_residual
     << ")";
  throw ConvergenceError(os.str());
}

ReducedSystem eliminate_dirichlet(const SparseSystem& sys) {
  const Eigen::Index n = sys.matrix.rows();
  std::vector<int> index(n, -1);
  Vector known = Vector::Zero(n);
  std::vector<bool> fixed(n, false);
  for (std::size_t k = 0; k < sys.constrained.size(); ++k) {
    fixed[sys.constrained[k]] = true;
    known[sys.constrained[k]] = sys.constrained_values[k];
  }
  ReducedSystem red;
  for (Eigen::Index v = 0; v < n; ++v) {
    if (fixed[v]) continue;
    index[v] = static_cast<int>(red.free_nodes.size());
    red.free_nodes.push_back(static_cast<int>(v));
  }
  const auto nf = static_cast<Eigen::Index>(red.free_nodes.size());
  red.rhs = Vector::Zero(nf);
  std::vector<Eigen::Triplet<double>> triplets;
  for (Eigen::Index row = 0; row < n; ++row) {
    if (fixed[row]) continue;
    const int fr = index[row];
    red.rhs[fr] += sys.rhs[row];
    for (SparseMatrix::InnerIterator it(sys.matrix, row); it; ++it) {
      const auto col = it.col();
      if (fixed[col]) {
        red.rhs[fr] -= it.value() * known[col];
      } else {
        triplets.emplace_back(fr, index[col], it.value());
      }
    }
  }
  red.matrix.resize(nf, nf);
  red.matrix.setFromTriplets(triplets.begin(), triplets.end());
  red.matrix.makeCompressed();
  return red;
}

CgResult solve_cg(const SparseSystem& sys, const CgOptions& opt) {
  const ReducedSystem red = eliminate_dirichlet(sys);
  CgResult inner = solve_cg(red.matrix, red.rhs, opt);
  Vector full = Vector::Zero(sys.matrix.rows());
  for (std::size_t k = 0; k < sys.constrained.size(); ++k) full[sys.constrained[k]] = sys.constrained_values[k];
  for (std::size_t k = 0; k < red.free_nodes.size(); ++k) full[red.free_nodes[k]] = inner.x[static_cast<Eigen::Index>(k)];
  inner.x = std::move(full);
  return inner;
}

int FemSolution::num_unknowns() const {
  return static_cast<int>(std::count(mesh->boundary.begin(), mesh->boundary.end(), false));
}

FemSolution make_solution(std::shared_ptr<const Mesh> mesh, Vector values, std::vector<Matrix2> element_coeff) {
  FemSolution fs;
  fs.mesh = std::move(mesh);
  fs.values = std::move(values);
  fs.element_coeff = std::move(element_coeff);
  const Mesh& m = *fs.mesh;
  fs.gradients.resize(m.num_triangles());
  for (int t = 0; t < m.num_triangles(); ++t) {
    const ElementGeometry eg = element_geometry(m, t);
    Point g = Point::Zero();
    for (int i = 0; i < 3; ++i) g += fs.values[m.triangles[t][i]] * eg.grad[i];
    fs.gradients[t] = g;
  }
  return fs;
}

FemSolution solve_on_mesh(std::shared_ptr<const Mesh> mesh, const ProblemSpec& spec, const CgOptions& opt) {
  SparseSystem sys = assemble(*mesh, spec);
  CgResult cg = solve_cg(sys, opt);
  FemSolution fs = make_solution(std::move(mesh), std::move(cg.x), std::move(sys.element_coeff));
  fs.iterations = cg.iterations;
  fs.residual = cg.relative_residual;
  fs.residual_history = std::move(cg.residual_history);
  return fs;
}

FemSolution solve_problem(const ProblemSpec& spec, double h, double mu, const CgOptions& opt, MeshKind kind) {
  auto mesh = std::make_shared<const Mesh>(kind == MeshKind::Graded ? generate_mesh(spec.domain, h, mu)
                                                                     : generate_nonobtuse_mesh(spec.domain, h));
  return solve_on_mesh(std::move(mesh), spec, opt);
}

ErrorReport error_report(const FemSolution& fs, const ExactField& exact) {
  const Mesh& m = *fs.mesh;
  ErrorReport rep;
  double l2 = 0.0;
  double h1 = 0.0;
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto& tri = m.triangles[t];
    const Side side = m.region[t];
    const double area = signed_area(m, t);
    for (int e = 0; e < 3; ++e) {
      const int a = tri[(e + 1) % 3];
      const int b = tri[(e + 2) % 3];
      const Point mid = 0.5 * (m.vertices[a] + m.vertices[b]);
      const double uh = 0.5 * (fs.values[a] + fs.values[b]);
      const double err = exact.value(mid, side) - uh;
      l2 += area / 3.0 * err * err;
      h1 += area / 3.0 * (exact.gradient(mid, side) - fs.gradients[t]).squaredNorm();
      rep.linf = std::max(rep.linf, std::abs(err));
    }
    for (int v : tri) rep.linf = std::max(rep.linf, std::abs(exact.value(m.vertices[v], side) - fs.values[v]));
  }
  rep.l2 = std::sqrt(l2);
  rep.broken_h1 = std::sqrt(h1);
  return rep;
}

PointLocator::PointLocator(const Mesh& mesh) : mesh_(&mesh) {
  Point lo = Point::Constant(std::numeric_limits<double>::infinity());
  Point hi = -lo;
  for (const Point& v : mesh.vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  const Point ext = (hi - lo).cwiseMax(Point::Constant(1e-12));
  const double cells = std::max(1.0, static_cast<double>(mesh.num_triangles()));
  cell_ = std::sqrt(ext.x() * ext.y() / cells);
  nx_ = std::max(1, static_cast<int>(std::ceil(ext.x() / cell_)));
  ny_ = std::max(1, static_cast<int>(std::ceil(ext.y() / cell_)));
  lo_ = lo;
  buckets_.resize(static_cast<std::size_t>(nx_) * ny_);
  auto clampi = [](int v, int n) { return std::clamp(v, 0, n - 1); };
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    Point tlo = mesh.vertices[mesh.triangles[t][0]];
    Point thi = tlo;
    for (int v : mesh.triangles[t]) {
      tlo = tlo.cwiseMin(mesh.vertices[v]);
      thi = thi.cwiseMax(mesh.vertices[v]);
    }
    const int i0 = clampi(static_cast<int>(std::floor((tlo.x() - lo_.x()) / cell_)), nx_);
    const int i1 = clampi(static_cast<int>(std::floor((thi.x() - lo_.x()) / cell_)), nx_);
    const int j0 = clampi(static_cast<int>(std::floor((tlo.y() - lo_.y()) / cell_)), ny_);
    const int j1 = clampi(static_cast<int>(std::floor((thi.y() - lo_.y()) / cell_)), ny_);
    for (int i = i0; i <= i1; ++i) {
      for (int j = j0; j <= j1; ++j) buckets_[static_cast<std::size_t>(j) * nx_ + i].push_back(t);
    }
  }
}

std::optional<std::pair<int, Eigen::Vector3d>> PointLocator::locate(const Point& p) const {
  const int i = static_cast<int>(std::floor((p.x() - lo_.x()) / cell_));
  const int j = static_cast<int>(std::floor((p.y() - lo_.y()) / cell_));
  if (i < -1 || j < -1 || i > nx_ || j > ny_) return std::nullopt;
  int best = -1;
  double best_min = -std::numeric_limits<double>::infinity();
  Eigen::Vector3d best_bary = Eigen::Vector3d::Zero();
  const int ci = std::clamp(i, 0, nx_ - 1);
  const int cj = std::clamp(j, 0, ny_ - 1);
  for (int t : buckets_[static_cast<std::size_t>(cj) * nx_ + ci]) {
    const auto& tri = mesh_->triangles[t];
    const Point& a = mesh_->vertices[tri[0]];
    const Point& b = mesh_->vertices[tri[1]];
    const Point& c = mesh_->vertices[tri[2]];
    const double det = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
    const Point d = p - a;
    const double l1 = (d.x() * (c - a).y() - d.y() * (c - a).x()) / det;
    const double l2 = ((b - a).x() * d.y() - (b - a).y() * d.x()) / det;
    const Eigen::Vector3d bary(1.0 - l1 - l2, l1, l2);
    const double mn = bary.minCoeff();
    if (mn > best_min) {
      best_min = mn;
      best = t;
      best_bary = bary;
    }
  }
  if (best < 0 || best_min < -1e-10) return std::nullopt;
  return std::make_pair(best, best_bary);
}

std::optional<double> evaluate(const FemSolution& fs, const PointLocator& loc, const Point& p) {
  const auto hit = loc.locate(p);
  if (!hit) return std::nullopt;
  const auto& tri = fs.mesh->triangles[hit->first];
  const Eigen::Vector3d& w = hit->second;
  return w[0] * fs.values[tri[0]] + w[1] * fs.values[tri[1]] + w[2] * fs.values[tri[2]];
}

SampledField barycenter_field(const FemSolution& fs) {
  const Mesh& m = *fs.mesh;
  SampledField f;
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto& tri = m.triangles[t];
    const double v = (fs.values[tri[0]] + fs.values[tri[1]] + fs.values[tri[2]]) / 3.0;
    f.push_back(barycenter(m, t), m.region[t] == Side::Plus ? 1 : -1, v, fs.gradients[t]);
  }
  return f;
}

SampledField nodal_field(const FemSolution& fs) {
  const Mesh& m = *fs.mesh;
  std::vector<int> mask(m.num_vertices(), 0);
  for (int t = 0; t < m.num_triangles(); ++t) {
    const int bit = m.region[t] == Side::Plus ? 1 : 2;
    for (int v : m.triangles[t]) mask[v] |= bit;
  }
  SampledField f;
  for (int v = 0; v < m.num_vertices(); ++v) {
    const int tag = mask[v] == 1 ? 1 : (mask[v] == 2 ? -1 : 0);
    f.push_back(m.vertices[v], tag, fs.values[v]);
  }
  return f;
}

void write_solution_csv(std::ostream& os, const FemSolution& fs) { write_field_csv(os, barycenter_field(fs), "u"); }

}  // namespace cornerlab
