#include "cornerlab/geometry.hpp"

#include "cornerlab/errors.hpp"

#include <cmath>
#include <sstream>

namespace cornerlab {

Wedge make_wedge(double theta_minus, double theta_plus) {
  if (!std::isfinite(theta_minus) || !std::isfinite(theta_plus)) {
    throw GeometryError("wedge angles must be finite");
  }
  if (!(theta_minus < 0.0 && 0.0 < theta_plus)) {
    std::ostringstream os;
    os << "wedge requires theta_minus < 0 < theta_plus, got (" << theta_minus << ", " << theta_plus
       << ")";
    throw GeometryError(os.str());
  }
  if (!(theta_plus - theta_minus < 2.0 * std::numbers::pi)) {
    std::ostringstream os;
    os << "wedge opening " << theta_plus - theta_minus << " must be below 2*pi";
    throw GeometryError(os.str());
  }
  return Wedge(theta_minus, theta_plus);
}

DomainSpec make_domain(const Wedge& wedge, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw GeometryError("sector radius must be positive");
  }
  return DomainSpec{wedge, radius};
}

PolarPoint to_polar(const Point& p) {
  const double r = p.norm();
  if (r == 0.0) return {0.0, 0.0};
  return {r, std::atan2(p.y(), p.x())};
}

Point from_polar(const PolarPoint& pp) {
  return {pp.r * std::cos(pp.theta), pp.r * std::sin(pp.theta)};
}

double wedge_angle(const Wedge& w, double theta) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  if (theta > w.theta_plus() && theta - two_pi >= w.theta_minus()) return theta - two_pi;
  if (theta < w.theta_minus() && theta + two_pi <= w.theta_plus()) return theta + two_pi;
  return theta;
}

PolarPoint to_wedge_polar(const Wedge& w, const Point& p) {
  PolarPoint pp = to_polar(p);
  pp.theta = wedge_angle(w, pp.theta);
  return pp;
}

std::string_view to_string(Region r) {
  switch (r) {
    case Region::OmegaPlus:
      return "OmegaPlus";
    case Region::OmegaMinus:
      return "OmegaMinus";
    case Region::Interface:
      return "Interface";
    case Region::Wall:
      return "Wall";
    case Region::Edge:
      return "Edge";
    case Region::Outside:
      return "Outside";
  }
  return "?";
}

namespace {

// Distance from p to the closed ray {t * (cos a, sin a), t >= 0}.
double distance_to_ray(const Point& p, double angle) {
  const Point dir(std::cos(angle), std::sin(angle));
  const double t = p.dot(dir);
  if (t <= 0.0) return p.norm();
  return (p - t * dir).norm();
}

}  // namespace

Region classify_point(const DomainSpec& d, const Point& p, double tol) {
  if (tol < 0.0) tol = 1e-12 * d.radius;
  const Wedge& w = d.wedge;
  const PolarPoint pp = to_wedge_polar(w, p);

  if (pp.r <= tol) return Region::Edge;
  if (pp.r > d.radius + tol) return Region::Outside;

  const bool inside_angle = pp.theta >= w.theta_minus() && pp.theta <= w.theta_plus();
  const double wall_dist =
      std::min(distance_to_ray(p, w.theta_minus()), distance_to_ray(p, w.theta_plus()));
  if (!inside_angle && wall_dist > tol) return Region::Outside;

  if (wall_dist <= tol || std::abs(pp.r - d.radius) <= tol) return Region::Wall;
  if (distance_to_ray(p, 0.0) <= tol) return Region::Interface;
  return pp.theta > 0.0 ? Region::OmegaPlus : Region::OmegaMinus;
}

double delta_dist(const Point& p, const Point& edge) { return std::min((p - edge).norm(), 1.0); }

}  // namespace cornerlab
