#pragma once

#include "cornerlab/exact.hpp"
#include "cornerlab/fem.hpp"

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cornerlab {

/// A case file: `[section]` headers and `key = value` lines, `#` comments.
/// Every key is listed in README.md; unknown sections or keys are errors.
struct CaseConfig {
  // [geometry]
  double theta_plus = 0.75 * std::numbers::pi;
  double theta_minus = -0.25 * std::numbers::pi;
  double radius = 1.0;
  double h = 1.0 / 64;
  double mu = 0.8;
  MeshKind mesh = MeshKind::Graded;

  // [coefficient]: either a0 or per-side constant matrices (a11 a12 a22)
  std::optional<double> a0;
  std::optional<std::array<double, 3>> a_plus;
  std::optional<std::array<double, 3>> a_minus;
  std::optional<double> lambda;
  std::optional<double> Lambda;

  // [data]
  std::string phi = "exact";  // zero, exact, manufactured, poly
  std::string h_data = "zero";  // zero, manufactured, poly
  std::string g = "zero";     // zero, poly
  std::vector<double> phi_poly;  // c0 + c1 x + c2 y + c3 x^2 + c4 x y + c5 y^2
  std::vector<double> h_poly;
  std::vector<double> g_plus;   // gx0 gx1 gx2 gy0 gy1 gy2: g = (gx0 + gx1 x + gx2 y, gy0 + ...)
  std::vector<double> g_minus;
  std::optional<double> gamma;  // exponent of the exact solution

  // [analysis]
  double alpha = 0.5;
  double beta = 0.8;
  int fit_rays = 16;
  int fit_radii = 16;
  double fit_r_min = 0.0;
  double fit_r_max = 0.0;
  int levels = 3;
  double cg_tol = 1e-10;

  // [output]
  std::string directory = "cornerlab-out";
  bool csv = true;
  bool svg = true;

  /// Parsed entries as `section.key = value`, sorted; input of the config hash.
  std::map<std::string, std::string> entries;

  Wedge wedge() const { return make_wedge(theta_minus, theta_plus); }
  DomainSpec domain() const { return make_domain(wedge(), radius); }
};

/// Throws ConfigError naming the line for syntax errors, unknown keys and
/// out-of-range values. With `degrees`, angles are read in degrees.
CaseConfig parse_config(std::istream& is, bool degrees = false);
CaseConfig load_config(const std::filesystem::path& path, bool degrees = false);

/// Hex FNV-1a of the sorted entries.
std::string config_hash(const CaseConfig& c);

/// Problem data for a case, plus the exact solution when the data presets
/// determine one (phi = exact with zero h and g, or the manufactured case).
struct CaseProblem {
  ProblemSpec spec;
  std::optional<ExactField> exact;
  std::optional<double> gamma;  // exponent of the exact solution
};

CaseProblem build_problem(const CaseConfig& c);

}  // namespace cornerlab
