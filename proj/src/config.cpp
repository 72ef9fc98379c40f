#include "cornerlab/config.hpp"

#include "cornerlab/errors.hpp"
#include "cornerlab/report.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <numbers>
#include <sstream>

namespace cornerlab {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Entry {
  std::string value;
  int line;
};

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

double number(const Entry& e) {
  try {
    return parse_double(e.value);
  } catch (const InputError&) {
    fail(e.line, "expected a number, got `" + e.value + "`");
  }
}

int integer(const Entry& e) {
  const double v = number(e);
  if (v != std::floor(v) || std::abs(v) > 1e9) fail(e.line, "expected an integer, got `" + e.value + "`");
  return static_cast<int>(v);
}

std::vector<double> numbers_list(const Entry& e) {
  std::string s = e.value;
  for (char& ch : s) {
    if (ch == ',') ch = ' ';
  }
  std::istringstream ss(s);
  std::vector<double> out;
  std::string tok;
  while (ss >> tok) out.push_back(number({tok, e.line}));
  return out;
}

bool boolean(const Entry& e) {
  if (e.value == "true" || e.value == "yes" || e.value == "1") return true;
  if (e.value == "false" || e.value == "no" || e.value == "0") return false;
  fail(e.line, "expected true or false, got `" + e.value + "`");
}

std::string choice(const Entry& e, std::initializer_list<const char*> allowed) {
  std::string list;
  for (const char* a : allowed) {
    if (e.value == a) return e.value;
    list += std::string(list.empty() ? "" : ", ") + a;
  }
  fail(e.line, "`" + e.value + "` is not one of: " + list);
}

using Setter = std::function<void(CaseConfig&, const Entry&)>;

std::map<std::string, Setter> setters(bool degrees) {
  const double angle_scale = degrees ? std::numbers::pi / 180.0 : 1.0;
  std::map<std::string, Setter> s;
  s["geometry.theta_plus"] = [=](CaseConfig& c, const Entry& e) { c.theta_plus = number(e) * angle_scale; };
  s["geometry.theta_minus"] = [=](CaseConfig& c, const Entry& e) { c.theta_minus = number(e) * angle_scale; };
  s["geometry.radius"] = [](CaseConfig& c, const Entry& e) { c.radius = number(e); };
  s["geometry.h"] = [](CaseConfig& c, const Entry& e) { c.h = number(e); };
  s["geometry.mu"] = [](CaseConfig& c, const Entry& e) { c.mu = number(e); };
  s["geometry.mesh"] = [](CaseConfig& c, const Entry& e) {
    c.mesh = choice(e, {"graded", "nonobtuse"}) == "graded" ? MeshKind::Graded : MeshKind::NonObtuse;
  };
  auto matrix = [](const Entry& e) {
    const auto v = numbers_list(e);
    if (v.size() != 3) fail(e.line, "expected three entries a11 a12 a22");
    return std::array<double, 3>{v[0], v[1], v[2]};
  };
  s["coefficient.a0"] = [](CaseConfig& c, const Entry& e) { c.a0 = number(e); };
  s["coefficient.a_plus"] = [=](CaseConfig& c, const Entry& e) { c.a_plus = matrix(e); };
  s["coefficient.a_minus"] = [=](CaseConfig& c, const Entry& e) { c.a_minus = matrix(e); };
  s["coefficient.lambda"] = [](CaseConfig& c, const Entry& e) { c.lambda = number(e); };
  s["coefficient.Lambda"] = [](CaseConfig& c, const Entry& e) { c.Lambda = number(e); };
  s["data.phi"] = [](CaseConfig& c, const Entry& e) { c.phi = choice(e, {"zero", "exact", "manufactured", "poly"}); };
  s["data.h"] = [](CaseConfig& c, const Entry& e) { c.h_data = choice(e, {"zero", "manufactured", "poly"}); };
  s["data.g"] = [](CaseConfig& c, const Entry& e) { c.g = choice(e, {"zero", "poly"}); };
  s["data.phi_poly"] = [](CaseConfig& c, const Entry& e) { c.phi_poly = numbers_list(e); };
  s["data.h_poly"] = [](CaseConfig& c, const Entry& e) { c.h_poly = numbers_list(e); };
  s["data.g_plus"] = [](CaseConfig& c, const Entry& e) { c.g_plus = numbers_list(e); };
  s["data.g_minus"] = [](CaseConfig& c, const Entry& e) { c.g_minus = numbers_list(e); };
  s["data.gamma"] = [](CaseConfig& c, const Entry& e) { c.gamma = number(e); };
  s["analysis.alpha"] = [](CaseConfig& c, const Entry& e) { c.alpha = number(e); };
  s["analysis.beta"] = [](CaseConfig& c, const Entry& e) { c.beta = number(e); };
  s["analysis.fit_rays"] = [](CaseConfig& c, const Entry& e) { c.fit_rays = integer(e); };
  s["analysis.fit_radii"] = [](CaseConfig& c, const Entry& e) { c.fit_radii = integer(e); };
  s["analysis.fit_r_min"] = [](CaseConfig& c, const Entry& e) { c.fit_r_min = number(e); };
  s["analysis.fit_r_max"] = [](CaseConfig& c, const Entry& e) { c.fit_r_max = number(e); };
  s["analysis.levels"] = [](CaseConfig& c, const Entry& e) { c.levels = integer(e); };
  s["analysis.cg_tol"] = [](CaseConfig& c, const Entry& e) { c.cg_tol = number(e); };
  s["output.directory"] = [](CaseConfig& c, const Entry& e) { c.directory = e.value; };
  s["output.csv"] = [](CaseConfig& c, const Entry& e) { c.csv = boolean(e); };
  s["output.svg"] = [](CaseConfig& c, const Entry& e) { c.svg = boolean(e); };
  return s;
}

void validate(const CaseConfig& c, const std::map<std::string, Entry>& raw) {
  auto line_of = [&](const std::string& key) {
    const auto it = raw.find(key);
    return it == raw.end() ? 0 : it->second.line;
  };
  auto check = [&](bool ok, const std::string& key, const std::string& msg) {
    if (!ok) fail(line_of(key), key + ": " + msg);
  };
  try {
    (void)c.wedge();
  } catch (const GeometryError& e) {
    fail(line_of("geometry.theta_plus"), e.what());
  }
  check(c.radius > 0.0, "geometry.radius", "must be positive");
  check(c.h > 0.0 && c.h < c.radius, "geometry.h", "must lie in (0, radius)");
  check(c.mu > 0.0 && c.mu <= 1.0, "geometry.mu", "must lie in (0, 1]");
  check(!c.a0 || *c.a0 > 0.0, "coefficient.a0", "must be positive");
  check(!(c.a0 && (c.a_plus || c.a_minus)), "coefficient.a0", "give either a0 or a_plus/a_minus, not both");
  check(c.a_plus.has_value() == c.a_minus.has_value(), "coefficient.a_plus", "a_plus and a_minus go together");
  check(!c.lambda || *c.lambda > 0.0, "coefficient.lambda", "must be positive");
  check(!c.Lambda || !c.lambda || *c.Lambda >= *c.lambda, "coefficient.Lambda", "must be at least lambda");
  check(c.phi != "poly" || c.phi_poly.size() == 6, "data.phi_poly", "phi = poly needs six coefficients");
  check(c.h_data != "poly" || c.h_poly.size() == 6, "data.h_poly", "h = poly needs six coefficients");
  check(c.g != "poly" || (c.g_plus.size() == 6 && c.g_minus.size() == 6), "data.g_plus",
        "g = poly needs six coefficients for each side");
  check(!c.gamma || *c.gamma > 0.0, "data.gamma", "must be positive");
  check(c.phi != "exact" || !c.a_plus, "data.phi", "phi = exact needs a scalar jump a0");
  check(c.alpha > 0.0 && c.alpha < 1.0, "analysis.alpha", "must lie in (0, 1)");
  check(c.beta > 0.0, "analysis.beta", "must be positive");
  check(c.fit_rays >= 1, "analysis.fit_rays", "must be at least 1");
  check(c.fit_radii >= 4, "analysis.fit_radii", "must be at least 4");
  check(c.fit_r_min >= 0.0 && c.fit_r_max >= 0.0, "analysis.fit_r_min", "must be nonnegative");
  check(c.levels >= 1 && c.levels <= 8, "analysis.levels", "must lie in [1, 8]");
  check(c.cg_tol > 0.0 && c.cg_tol < 1.0, "analysis.cg_tol", "must lie in (0, 1)");
  check(!c.directory.empty(), "output.directory", "must not be empty");
}

}  // namespace

CaseConfig parse_config(std::istream& is, bool degrees) {
  const auto table = setters(degrees);
  std::map<std::string, Entry> raw;
  std::string section;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(lineno, "malformed section header `" + line + "`");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "geometry" && section != "coefficient" && section != "data" && section != "analysis" &&
          section != "output") {
        fail(lineno, "unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(lineno, "expected `key = value`, got `" + line + "`");
    if (section.empty()) fail(lineno, "key outside of any [section]");
    const std::string key = section + "." + trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!table.count(key)) fail(lineno, "unknown key `" + key + "`");
    if (value.empty()) fail(lineno, "empty value for `" + key + "`");
    if (raw.count(key)) fail(lineno, "duplicate key `" + key + "`");
    raw.emplace(key, Entry{value, lineno});
  }
  CaseConfig c;
  for (const auto& [key, entry] : raw) {
    table.at(key)(c, entry);
    c.entries[key] = entry.value;
  }
  if (degrees) c.entries["geometry.angle_unit"] = "degrees";
  validate(c, raw);
  return c;
}

CaseConfig load_config(const std::filesystem::path& path, bool degrees) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  return parse_config(in, degrees);
}

std::string config_hash(const CaseConfig& c) {
  std::string canon;
  for (const auto& [k, v] : c.entries) canon += k + "=" + v + "\n";
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(canon)));
  return buf;
}

namespace {

double poly6(const std::vector<double>& p, const Point& x) {
  return p[0] + p[1] * x.x() + p[2] * x.y() + p[3] * x.x() * x.x() + p[4] * x.x() * x.y() + p[5] * x.y() * x.y();
}

Point poly6_gradient(const std::vector<double>& p, const Point& x) {
  return Point(p[1] + 2 * p[3] * x.x() + p[4] * x.y(), p[2] + p[4] * x.x() + 2 * p[5] * x.y());
}

VectorField linear_vector(const std::vector<double>& g) {
  return [g](const Point& x) -> Point {
    return Point(g[0] + g[1] * x.x() + g[2] * x.y(), g[3] + g[4] * x.x() + g[5] * x.y());
  };
}

Matrix2 sym(const std::array<double, 3>& a) {
  Matrix2 m;
  m << a[0], a[1], a[1], a[2];
  return m;
}

}  // namespace

CaseProblem build_problem(const CaseConfig& c) {
  const DomainSpec d = c.domain();
  const Wedge w = d.wedge;

  // Scalar jump resolved from a0, or from gamma when the exact preset asks for it.
  std::optional<double> a0 = c.a0;
  std::optional<double> gamma = c.gamma;
  if (c.phi == "exact") {
    if (!a0) a0 = transmission_coeffs(gamma.value_or(0.8), w).a0;
    if (!gamma) gamma = singular_exponent(*a0, w);
  }
  PiecewiseCoefficient coeff;
  if (c.a_plus) {
    const Matrix2 ap = sym(*c.a_plus), am = sym(*c.a_minus);
    coeff.a_plus = [ap](const Point&) { return ap; };
    coeff.a_minus = [am](const Point&) { return am; };
    const Eigen::Vector2d ep = Eigen::SelfAdjointEigenSolver<Matrix2>(ap).eigenvalues();
    const Eigen::Vector2d em = Eigen::SelfAdjointEigenSolver<Matrix2>(am).eigenvalues();
    coeff.lambda = std::min(ep.minCoeff(), em.minCoeff());
    coeff.Lambda = std::max(ep.maxCoeff(), em.maxCoeff());
    if (!(coeff.lambda > 0.0)) throw ConfigError("coefficient matrices must be positive definite");
  } else {
    coeff = scalar_jump(a0.value_or(1.0));
  }
  if (c.lambda || c.Lambda) {
    PiecewiseCoefficient claimed = coeff;
    claimed.lambda = c.lambda.value_or(coeff.lambda);
    claimed.Lambda = c.Lambda.value_or(coeff.Lambda);
    if (!check_ellipticity(claimed, {Point::Zero()}).ok) {
      throw ConfigError("coefficient violates the declared ellipticity bounds lambda, Lambda");
    }
    coeff = claimed;
  }

  CaseProblem out{make_problem(d, coeff), std::nullopt, std::nullopt};
  ProblemSpec& spec = out.spec;
  const bool identity = c.a_plus ? (sym(*c.a_plus).isIdentity() && sym(*c.a_minus).isIdentity())
                                 : a0.value_or(1.0) == 1.0;

  if (c.h_data == "manufactured") {
    spec.h = [](const Point& x) { return -2.0 * std::sin(x.x()) * std::cos(x.y()); };
  } else if (c.h_data == "poly") {
    spec.h = [p = c.h_poly](const Point& x) { return poly6(p, x); };
  }
  if (c.g == "poly") {
    spec.g_plus = linear_vector(c.g_plus);
    spec.g_minus = linear_vector(c.g_minus);
  }

  if (c.phi == "exact") {
    SeparableSolution<double> sol{};
    const double F = exponent_function(*gamma, *a0, angles_of(w));
    if (std::abs(F) > 1e-8 * (1.0 + *a0)) {
      throw ConfigError("data.gamma is not an exponent for coefficient a0 on this wedge");
    }
    try {
      sol = build_dirichlet_example(*gamma, w);
      if (std::abs(sol.a0 - *a0) > 1e-8 * *a0) sol = separable_mode(*gamma, *a0, w);
    } catch (const Error&) {
      sol = separable_mode(*gamma, *a0, w);
    }
    auto value = [sol, w](const Point& x) { return eval_separable(sol, to_wedge_polar(w, x)); };
    spec.phi = value;
    spec.phi_gradient = [sol, w](const Point& x) -> Point {
      const PolarPoint pp = to_wedge_polar(w, x);
      if (pp.r == 0.0) return Point::Zero();
      return grad_separable(sol, pp);
    };
    out.gamma = *gamma;
    if (c.h_data == "zero" && c.g == "zero") {
      out.exact = ExactField{[value](const Point& x, Side) { return value(x); },
                             [sol, w](const Point& x, Side) -> Point { return grad_separable(sol, to_wedge_polar(w, x)); }};
    }
  } else if (c.phi == "manufactured") {
    spec.phi = [](const Point& x) { return std::sin(x.x()) * std::cos(x.y()); };
    spec.phi_gradient = [](const Point& x) -> Point {
      return Point(std::cos(x.x()) * std::cos(x.y()), -std::sin(x.x()) * std::sin(x.y()));
    };
    if (identity && c.h_data == "manufactured" && c.g == "zero") {
      out.exact = ExactField{[](const Point& x, Side) { return std::sin(x.x()) * std::cos(x.y()); },
                             [](const Point& x, Side) -> Point {
                               return Point(std::cos(x.x()) * std::cos(x.y()), -std::sin(x.x()) * std::sin(x.y()));
                             }};
    }
  } else if (c.phi == "poly") {
    spec.phi = [p = c.phi_poly](const Point& x) { return poly6(p, x); };
    spec.phi_gradient = [p = c.phi_poly](const Point& x) { return poly6_gradient(p, x); };
  }
  return out;
}

}  // namespace cornerlab
