#pragma once

#include "cornerlab/exact.hpp"
#include "cornerlab/fem.hpp"
#include "cornerlab/norms.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cornerlab {

/// Least-squares fit of log sup|u - u(corner)| = beta log r + intercept.
struct ExponentFit {
  double beta = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double r_min = 0.0;
  double r_max = 0.0;
  std::vector<double> radii;
  std::vector<double> sup_values;
  std::vector<double> rays;       // empty for binned fits
  std::vector<double> ray_betas;  // NaN where a ray had too few usable radii
};

/// Regression on (radii, values). Throws InputError with fewer than 4 radii,
/// nonpositive values or a span below one decade.
ExponentFit fit_power_law(const std::vector<double>& radii, const std::vector<double>& values);

/// r_min * q^j, j = 0..n-1, ending at r_max.
std::vector<double> geometric_radii(double r_min, double r_max, int n);
/// n angles evenly spread over the open wedge (theta = 0 included when n is odd
/// and the wedge is symmetric).
std::vector<double> interior_rays(const Wedge& w, int n);

/// A probe returns nothing where the field is undefined (outside a mesh).
using FieldProbe = std::function<std::optional<double>(const Point&)>;

ExponentFit fit_corner_exponent(const FieldProbe& u, double u_corner, const std::vector<double>& rays,
                                const std::vector<double>& radii);

struct FitOptions {
  int num_rays = 16;
  int num_radii = 16;
  double r_min = 0.0;  // 0: four corner element sizes (FEM) / required for clouds
  double r_max = 0.0;  // 0: R/4 (FEM) / required for clouds
};

/// Probes the FEM interpolant along rays; u(corner) is the value at the corner vertex.
ExponentFit fit_corner_exponent(const FemSolution& fs, const DomainSpec& d, const FitOptions& opt = {});

/// Cloud version: sup over geometric radial bins around each radius; u(corner)
/// is the value of the sample closest to the origin.
ExponentFit fit_corner_exponent(const SampledField& f, const FitOptions& opt);

void write_exponent_fit_csv(std::ostream& os, const ExponentFit& fit);
void write_exponent_fit_summary_csv(std::ostream& os, const ExponentFit& fit);

enum class FluxWeighting {
  Correct,       // a+ on the plus element, a- on the minus element
  MinusOnBoth,  // negative control
};

struct FluxJump {
  double max = 0.0;
  double mean = 0.0;  // weighted by interface edge length
  int edges = 0;
};

/// |a+ grad u+ . n - a- grad u- . n| over the element pairs sharing each interface edge.
FluxJump interface_flux_jump(const FemSolution& fs, FluxWeighting weighting = FluxWeighting::Correct);

enum class RatioStatus { Ok, Degenerate };

struct EstimateRatio {
  std::string instance;
  std::string kind;  // interior, corner or global
  double h = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  RatioStatus status = RatioStatus::Ok;

  /// lhs / rhs, or nothing for a degenerate instance.
  std::optional<double> ratio() const;
};

struct EstimateOptions {
  double alpha = 0.5;
  double beta = 0.8;          // corner and global weights use tau = -beta
  int data_samples = 800;     // per side, for the data norms
  double degenerate_tol = 1e-14;
  PairOptions pairs;
  std::string instance = "case";
};

/// Ball B1 = B(c, rho) inside B2 = B(c, 2 rho), c on the interface.
struct BallPair {
  Point center;
  double rho;
};
BallPair default_ball_pair(const DomainSpec& d);

/// max_I ||u||_{1,alpha;B1^I} against ||u||_{0,0;B2} + ||h||_inf + max ||g^i||_{0,alpha;B2^I}.
EstimateRatio estimate_ratio_interior(const FemSolution& fs, const ProblemSpec& spec, const EstimateOptions& opt,
                                      std::optional<BallPair> balls = std::nullopt);
/// Weighted norm with tau = -beta on W1 = W ∩ B_{R/2} against the data on W2 = W ∩ B_R.
EstimateRatio estimate_ratio_corner(const FemSolution& fs, const ProblemSpec& spec, const EstimateOptions& opt);
/// Weighted norm on the whole sector against phi, h and g norms only.
EstimateRatio estimate_ratio_global(const FemSolution& fs, const ProblemSpec& spec, const EstimateOptions& opt);

/// `instance,kind,h,lhs,rhs,ratio` with ratio `degenerate` when flagged.
void write_ratio_csv(std::ostream& os, const std::vector<EstimateRatio>& ratios);

struct ComparisonResult {
  bool passed = false;
  double boundary_worst = 0.0;  // max |v| / w on the boundary samples
  double interior_worst = 0.0;  // max |v| / w on the interior samples
  std::size_t interior_violations = 0;
};

/// Requires |v| <= w (1 + 1e-8) on every boundary sample (HypothesisError
/// otherwise) and then reports whether the same holds on the interior samples.
ComparisonResult comparison_check(const SampledField& v_boundary, const SampledField& v_interior,
                                  const Barrier<double>& w, double rel_tol = 1e-8);

/// The barrier argument for theta_plus in (0, pi/2), theta_minus in (-pi/2, 0).
struct ComparisonCase {
  double theta_plus;
  double theta_minus;
  double a0;
  std::uint64_t seed = 1;
  int boundary_samples = 2000;
  int interior_radial = 120;
  int interior_angular = 120;
};

struct ComparisonPipeline {
  double gamma = 0.0;
  Corrector<double> corrector;
  Barrier<double> barrier;
  SampledField v_boundary;
  SampledField v_interior;
  ComparisonResult result;
};

/// Builds u = u0 + (plane solution) + two separable modes, recovers the
/// corrector from the tangential derivatives at the corner, calibrates the
/// barrier constant on the boundary and runs comparison_check on v = u - u(0) - p.
ComparisonPipeline run_comparison_pipeline(const ComparisonCase& c);

/// A randomized Dirichlet problem with smooth data and a coefficient
/// c_I (1 + eps s_I(x)) I on each side.
struct RandomInstance {
  std::string id;
  ProblemSpec spec;
  double a0_corner = 1.0;  // c_plus / c_minus at the corner
  bool zero_data = false;
};

RandomInstance make_random_instance(std::uint64_t seed, bool zero_data = false);

}  // namespace cornerlab
