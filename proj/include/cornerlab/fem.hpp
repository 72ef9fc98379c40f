#pragma once

#include "cornerlab/geometry.hpp"
#include "cornerlab/mesh.hpp"
#include "cornerlab/norms.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

namespace cornerlab {

using Matrix2 = Eigen::Matrix2d;
using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

using MatrixField = std::function<Matrix2(const Point&)>;
using VectorField = std::function<Point(const Point&)>;
using ScalarField = std::function<double(const Point&)>;

/// a(x) = a_plus(x) on the plus side, a_minus(x) on the minus side, with
/// lambda |xi|^2 <= xi^T a xi <= Lambda |xi|^2.
struct PiecewiseCoefficient {
  MatrixField a_plus;
  MatrixField a_minus;
  double lambda = 1.0;
  double Lambda = 1.0;

  Matrix2 operator()(const Point& x, Side s) const { return s == Side::Plus ? a_plus(x) : a_minus(x); }
};

/// a0 I on the plus side and I on the minus side.
PiecewiseCoefficient scalar_jump(double a0);

struct EllipticityReport {
  bool ok = true;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  double max_asymmetry = 0.0;
};

/// Checks symmetry and the eigenvalue bounds of a at every sample point on both sides.
EllipticityReport check_ellipticity(const PiecewiseCoefficient& a, const std::vector<Point>& samples);

/// Data of d_i(a^{ij} d_j u) = h + d_i g^i in the sector, u = phi on the boundary.
struct ProblemSpec {
  DomainSpec domain;
  PiecewiseCoefficient coeff;
  VectorField g_plus;
  VectorField g_minus;
  ScalarField h;
  ScalarField phi;
  std::optional<VectorField> phi_gradient;  // used by data norms; finite differences otherwise

  Point g(const Point& x, Side s) const { return s == Side::Plus ? g_plus(x) : g_minus(x); }
};

/// Zero data everywhere; fields are then overwritten as needed.
ProblemSpec make_problem(const DomainSpec& d, PiecewiseCoefficient coeff);

/// Global matrix and load before constraints, plus the Dirichlet nodes.
struct SparseSystem {
  SparseMatrix matrix;
  Vector rhs;
  std::vector<int> constrained;
  std::vector<double> constrained_values;
  std::vector<Matrix2> element_coeff;  // coefficient at each barycenter
};

/// P1 assembly of  int a grad u . grad v = -int h v + int g . grad v. The
/// coefficient is sampled at barycenters, loads use the edge-midpoint rule and
/// each element uses its own side's branch of a and g.
SparseSystem assemble(const Mesh& mesh, const ProblemSpec& spec);

struct CgOptions {
  double tol = 1e-10;  // relative residual
  int max_iter = 0;    // 0: 20 sqrt(n), at least 100
  bool record_iterates = false;
};

struct CgResult {
  Vector x;
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
  std::vector<double> residual_history;  // relative residual per iteration, starting with iteration 0
  std::vector<Vector> iterates;          // only with record_iterates
};

/// Jacobi-preconditioned conjugate gradients for an SPD matrix. Throws
/// ConvergenceError when max_iter is reached.
CgResult solve_cg(const SparseMatrix& A, const Vector& b, const CgOptions& opt = {});

/// Free-node system A_ff x = b_f - A_fc u_c after eliminating Dirichlet nodes.
struct ReducedSystem {
  SparseMatrix matrix;
  Vector rhs;
  std::vector<int> free_nodes;
};

ReducedSystem eliminate_dirichlet(const SparseSystem& sys);

/// Solves the constrained system; returns nodal values for every vertex.
CgResult solve_cg(const SparseSystem& sys, const CgOptions& opt = {});

struct FemSolution {
  std::shared_ptr<const Mesh> mesh;
  Vector values;                     // per vertex
  std::vector<Point> gradients;      // per element
  std::vector<Matrix2> element_coeff;
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> residual_history;

  int num_unknowns() const;
};

/// Element gradients and bookkeeping for given nodal values.
FemSolution make_solution(std::shared_ptr<const Mesh> mesh, Vector values, std::vector<Matrix2> element_coeff);

enum class MeshKind { Graded, NonObtuse };

/// generate_mesh -> assemble -> nodal Dirichlet data -> solve_cg.
FemSolution solve_problem(const ProblemSpec& spec, double h, double mu, const CgOptions& opt = {},
                          MeshKind kind = MeshKind::Graded);
FemSolution solve_on_mesh(std::shared_ptr<const Mesh> mesh, const ProblemSpec& spec, const CgOptions& opt = {});

struct ExactField {
  std::function<double(const Point&, Side)> value;
  std::function<Point(const Point&, Side)> gradient;
};

struct ErrorReport {
  double l2 = 0.0;
  double broken_h1 = 0.0;  // gradient error, summed per side
  double linf = 0.0;       // over vertices and edge midpoints
};

ErrorReport error_report(const FemSolution& fs, const ExactField& exact);

/// Point location over a mesh with a uniform bucket grid.
class PointLocator {
 public:
  explicit PointLocator(const Mesh& mesh);
  /// Triangle containing p (with a small tolerance) and its barycentric coordinates.
  std::optional<std::pair<int, Eigen::Vector3d>> locate(const Point& p) const;

 private:
  const Mesh* mesh_;
  Point lo_;
  double cell_ = 1.0;
  int nx_ = 1, ny_ = 1;
  std::vector<std::vector<int>> buckets_;
};

/// Piecewise-linear interpolant of the nodal values at p, if p is in the mesh.
std::optional<double> evaluate(const FemSolution& fs, const PointLocator& loc, const Point& p);

/// Element-barycenter samples: interpolated value and element gradient.
SampledField barycenter_field(const FemSolution& fs);
/// Vertex samples without gradients; vertices on theta = 0 get region 0.
SampledField nodal_field(const FemSolution& fs);

/// `x,y,region,u,gx,gy` per element barycenter.
void write_solution_csv(std::ostream& os, const FemSolution& fs);

}  // namespace cornerlab
