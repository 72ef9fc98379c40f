#pragma once

#include <Eigen/Core>

#include <numbers>
#include <string_view>

namespace cornerlab {

using Point = Eigen::Vector2d;

/// Which side of the interface ray theta = 0 an element or sample belongs to.
enum class Side : int { Minus = -1, Plus = 1 };

/// Planar wedge {r > 0, theta_minus < theta < theta_plus}. The interface is
/// the ray theta = 0 and the edge is the origin.
class Wedge {
 public:
  double theta_minus() const { return theta_minus_; }
  double theta_plus() const { return theta_plus_; }
  double opening() const { return theta_plus_ - theta_minus_; }
  double opening(Side s) const { return s == Side::Plus ? theta_plus_ : -theta_minus_; }

  friend Wedge make_wedge(double theta_minus, double theta_plus);

 private:
  Wedge(double tm, double tp) : theta_minus_(tm), theta_plus_(tp) {}
  double theta_minus_;
  double theta_plus_;
};

/// Throws GeometryError unless theta_minus < 0 < theta_plus and the opening is below 2*pi.
Wedge make_wedge(double theta_minus, double theta_plus);

/// Sector W ∩ B_R with the edge point at the origin.
struct DomainSpec {
  Wedge wedge;
  double radius = 1.0;

  Point edge_point() const { return Point::Zero(); }
};

DomainSpec make_domain(const Wedge& wedge, double radius);

struct PolarPoint {
  double r = 0.0;
  double theta = 0.0;
};

/// theta in (-pi, pi]; the origin maps to theta = 0.
PolarPoint to_polar(const Point& p);
Point from_polar(const PolarPoint& pp);

/// Shift an angle from (-pi, pi] by 2*pi when that places it inside the wedge.
double wedge_angle(const Wedge& w, double theta);

/// Polar coordinates with the angle mapped into the wedge range where possible.
PolarPoint to_wedge_polar(const Wedge& w, const Point& p);

enum class Region { OmegaPlus, OmegaMinus, Interface, Wall, Edge, Outside };

std::string_view to_string(Region r);

/// Classify p against the sector. `tol` is a length; a negative value selects
/// the default 1e-12 * R. The arc r = R counts as Wall.
Region classify_point(const DomainSpec& d, const Point& p, double tol = -1.0);

/// min(|p - edge|, 1).
double delta_dist(const Point& p, const Point& edge = Point::Zero());

inline Side side_of_angle(double theta) { return theta >= 0.0 ? Side::Plus : Side::Minus; }

inline char side_char(Side s) { return s == Side::Plus ? '+' : '-'; }

}  // namespace cornerlab
