#pragma once

// Closed-form solutions of div(a grad u) = 0 in a wedge with a = a0 on the
// plus side and a = 1 on the minus side: separable singular solutions, the
// transmission relation between the exponent and the jump, piecewise-linear
// correctors and barrier functions. Everything is templated on the scalar so
// the same formulas can be evaluated in extended precision.

#include "cornerlab/errors.hpp"
#include "cornerlab/geometry.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

namespace cornerlab {

template <typename Scalar>
struct WedgeAngles {
  Scalar theta_minus;
  Scalar theta_plus;
};

template <typename Scalar = double>
WedgeAngles<Scalar> angles_of(const Wedge& w) {
  return {Scalar(w.theta_minus()), Scalar(w.theta_plus())};
}

inline constexpr double kDegeneracyTol = 1e-14;

/// u+ = r^g (A sin g t + B cos g t),  u- = r^g (C sin g t + D cos g t).
template <typename Scalar = double>
struct SeparableSolution {
  Scalar gamma;
  Scalar A, B, C, D;
  Scalar a0;  // coefficient on the plus side; C = a0 A
  WedgeAngles<Scalar> wedge;

  Scalar angular(Scalar theta) const {
    using std::cos;
    using std::sin;
    const Scalar gt = gamma * theta;
    return theta >= Scalar(0) ? A * sin(gt) + B * cos(gt) : C * sin(gt) + D * cos(gt);
  }
  Scalar angular_derivative(Scalar theta) const {
    using std::cos;
    using std::sin;
    const Scalar gt = gamma * theta;
    return theta >= Scalar(0) ? gamma * (A * cos(gt) - B * sin(gt))
                              : gamma * (C * cos(gt) - D * sin(gt));
  }
};

template <typename Scalar = double>
struct TransmissionCoeffs {
  Scalar A;
  Scalar a0;
  Scalar C;  // a0 * A; B = D = 1
};

/// Coefficients that make the separable solution vanish on both walls while
/// satisfying continuity and flux continuity a0 du+/dt = du-/dt at theta = 0.
template <typename Scalar>
TransmissionCoeffs<Scalar> transmission_coeffs(Scalar gamma, const WedgeAngles<Scalar>& w) {
  using std::abs;
  using std::cos;
  using std::sin;
  const Scalar sp = sin(gamma * w.theta_plus);
  const Scalar cp = cos(gamma * w.theta_plus);
  const Scalar sm = sin(gamma * w.theta_minus);
  const Scalar cm = cos(gamma * w.theta_minus);
  if (abs(sp) < Scalar(kDegeneracyTol) || abs(cp) < Scalar(kDegeneracyTol) ||
      abs(sm) < Scalar(kDegeneracyTol)) {
    std::ostringstream os;
    os << "degenerate angle configuration for gamma = " << static_cast<double>(gamma)
       << ": sin(g t+) = " << static_cast<double>(sp) << ", cos(g t+) = " << static_cast<double>(cp)
       << ", sin(g t-) = " << static_cast<double>(sm);
    throw DegenerateError(os.str());
  }
  const Scalar A = -cp / sp;
  const Scalar a0 = sp * cm / (cp * sm);
  if (!(a0 > Scalar(0))) {
    std::ostringstream os;
    os << "gamma = " << static_cast<double>(gamma) << " requires a0 = " << static_cast<double>(a0)
       << " <= 0; no elliptic coefficient realizes it";
    throw SignError(os.str());
  }
  return {A, a0, a0 * A};
}

template <typename Scalar = double>
TransmissionCoeffs<Scalar> transmission_coeffs(Scalar gamma, const Wedge& w) {
  return transmission_coeffs(gamma, angles_of<Scalar>(w));
}

/// The wall-vanishing solution with B = D = 1.
template <typename Scalar = double>
SeparableSolution<Scalar> build_dirichlet_example(Scalar gamma, const Wedge& w) {
  const auto angles = angles_of<Scalar>(w);
  const auto tc = transmission_coeffs(gamma, angles);
  return {gamma, tc.A, Scalar(1), tc.C, Scalar(1), tc.a0, angles};
}

/// Wall-vanishing mode for a root gamma of F at a given a0, normalized to
/// max(|A|, |B|) = 1. Unlike build_dirichlet_example it also covers modes with
/// B = 0 or A = 0, where the a0 formula is 0/0.
template <typename Scalar = double>
SeparableSolution<Scalar> separable_mode(Scalar gamma, Scalar a0, const Wedge& w) {
  using std::abs;
  using std::cos;
  using std::max;
  using std::sin;
  const auto angles = angles_of<Scalar>(w);
  // Null vector of [[sin g t+, cos g t+], [a0 sin g t-, cos g t-]] acting on (A, B).
  const Scalar sp = sin(gamma * angles.theta_plus), cp = cos(gamma * angles.theta_plus);
  const Scalar sm = sin(gamma * angles.theta_minus), cm = cos(gamma * angles.theta_minus);
  Scalar A = cp, B = -sp;
  if (abs(cm) + abs(a0 * sm) > abs(cp) + abs(sp)) A = cm, B = -a0 * sm;
  const Scalar scale = max(abs(A), abs(B));
  if (!(scale > Scalar(kDegeneracyTol))) throw DegenerateError("separable_mode: no nontrivial mode");
  A /= scale;
  B /= scale;
  return {gamma, A, B, a0 * A, B, a0, angles};
}

/// F(g) = a0 cos(g t+) sin(g t-) - sin(g t+) cos(g t-); its positive roots are
/// the exponents of wall-vanishing separable solutions for the jump a0.
template <typename Scalar>
Scalar exponent_function(Scalar gamma, Scalar a0, const WedgeAngles<Scalar>& w) {
  using std::cos;
  using std::sin;
  return a0 * cos(gamma * w.theta_plus) * sin(gamma * w.theta_minus) -
         sin(gamma * w.theta_plus) * cos(gamma * w.theta_minus);
}

struct RootOptions {
  std::optional<std::pair<double, double>> bracket;  // default (1e-3, min(pi/t+, -pi/t-) - 1e-3)
  double tol = 1e-13;
  int scan_intervals = 1024;
  int max_iter = 200;
};

inline std::pair<double, double> default_exponent_bracket(const Wedge& w) {
  const double hi = std::min(std::numbers::pi / w.theta_plus(), -std::numbers::pi / w.theta_minus());
  return {1e-3, hi - 1e-3};
}

namespace detail {

template <typename Scalar, typename Fn>
Scalar refine_root(Fn&& f, Scalar lo, Scalar hi, Scalar flo, const RootOptions& opt) {
  using std::abs;
  int it = 0;
  // Bisection until the bracket is small, then secant steps kept inside it.
  while (hi - lo > Scalar(1e-6) * std::max(Scalar(1), abs(lo))) {
    if (++it > opt.max_iter) throw ConvergenceError("exponent bisection did not converge");
    const Scalar mid = (lo + hi) / Scalar(2);
    const Scalar fm = f(mid);
    if (fm == Scalar(0)) return mid;
    if ((fm < Scalar(0)) == (flo < Scalar(0))) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  Scalar fhi = f(hi);
  for (; it <= opt.max_iter; ++it) {
    if (hi - lo <= Scalar(opt.tol)) return (lo + hi) / Scalar(2);
    Scalar x = hi - fhi * (hi - lo) / (fhi - flo);
    if (!(x > lo && x < hi)) x = (lo + hi) / Scalar(2);
    const Scalar fx = f(x);
    if (fx == Scalar(0)) return x;
    // Shrink toward x from both sides so the bracket collapses even when the
    // secant approaches from one side only.
    const Scalar step = Scalar(opt.tol) / Scalar(2);
    if ((fx < Scalar(0)) == (flo < Scalar(0))) {
      lo = x;
      flo = fx;
      const Scalar y = std::min(hi, x + step);
      const Scalar fy = f(y);
      if ((fy < Scalar(0)) != (flo < Scalar(0))) {
        hi = y;
        fhi = fy;
      }
    } else {
      hi = x;
      fhi = fx;
      const Scalar y = std::max(lo, x - step);
      const Scalar fy = f(y);
      if ((fy < Scalar(0)) == (flo < Scalar(0))) {
        lo = y;
        flo = fy;
      }
    }
  }
  throw ConvergenceError("exponent root polish did not converge");
}

}  // namespace detail

/// Every sign change of F found on the scan grid over the bracket, in
/// increasing order.
template <typename Scalar = double>
std::vector<Scalar> exponent_roots(Scalar a0, const Wedge& w, const RootOptions& opt = {}) {
  if (!(a0 > Scalar(0))) throw SignError("coefficient jump a0 must be positive");
  const auto angles = angles_of<Scalar>(w);
  const auto [blo, bhi] = opt.bracket.value_or(default_exponent_bracket(w));
  if (!(blo < bhi)) throw InputError("exponent bracket must satisfy lo < hi");
  auto f = [&](Scalar g) { return exponent_function(g, a0, angles); };

  std::vector<Scalar> roots;
  const int n = std::max(opt.scan_intervals, 1);
  Scalar x0 = Scalar(blo);
  Scalar f0 = f(x0);
  for (int i = 1; i <= n; ++i) {
    const Scalar x1 = Scalar(blo) + (Scalar(bhi) - Scalar(blo)) * Scalar(i) / Scalar(n);
    const Scalar f1 = f(x1);
    if (f0 == Scalar(0)) {
      if (roots.empty() || roots.back() != x0) roots.push_back(x0);
    } else if (f1 != Scalar(0) && (f0 < Scalar(0)) != (f1 < Scalar(0))) {
      roots.push_back(detail::refine_root(f, x0, x1, f0, opt));
    }
    x0 = x1;
    f0 = f1;
  }
  if (f0 == Scalar(0) && (roots.empty() || roots.back() != x0)) roots.push_back(x0);
  return roots;
}

/// Smallest root of F in the bracket: the exponent that governs regularity.
template <typename Scalar = double>
Scalar singular_exponent(Scalar a0, const Wedge& w, const RootOptions& opt = {}) {
  const auto roots = exponent_roots(a0, w, opt);
  if (roots.empty()) {
    const auto [lo, hi] = opt.bracket.value_or(default_exponent_bracket(w));
    std::ostringstream os;
    os << "no sign change of the exponent function on [" << lo << ", " << hi << "]";
    throw NoSignChangeError(os.str());
  }
  return roots.front();
}

template <typename Scalar>
Scalar eval_separable(const SeparableSolution<Scalar>& s, Scalar r, Scalar theta) {
  using std::pow;
  if (r == Scalar(0)) return Scalar(0);
  return pow(r, s.gamma) * s.angular(theta);
}

template <typename Scalar = double>
Scalar eval_separable(const SeparableSolution<Scalar>& s, const PolarPoint& p) {
  return eval_separable(s, Scalar(p.r), Scalar(p.theta));
}

/// Cartesian gradient from d_r u and r^{-1} d_theta u. At r = 0 the gradient is
/// unbounded for gamma < 1 (error), zero for gamma > 1, and the directional
/// limit along theta for gamma = 1.
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 1> grad_separable(const SeparableSolution<Scalar>& s, Scalar r, Scalar theta) {
  using std::cos;
  using std::pow;
  using std::sin;
  if (r == Scalar(0)) {
    if (s.gamma < Scalar(1)) throw DegenerateError("gradient of r^gamma is unbounded at the corner for gamma < 1");
    if (s.gamma > Scalar(1)) return Eigen::Matrix<Scalar, 2, 1>::Zero();
    r = Scalar(1);  // gamma == 1: homogeneous of degree 0
  }
  const Scalar scale = s.gamma * pow(r, s.gamma - Scalar(1));
  const Scalar dr = scale * s.angular(theta);
  const Scalar dt = pow(r, s.gamma - Scalar(1)) * s.angular_derivative(theta);
  const Scalar c = cos(theta);
  const Scalar sn = sin(theta);
  return {dr * c - dt * sn, dr * sn + dt * c};
}

template <typename Scalar = double>
Eigen::Matrix<Scalar, 2, 1> grad_separable(const SeparableSolution<Scalar>& s, const PolarPoint& p) {
  return grad_separable(s, Scalar(p.r), Scalar(p.theta));
}

/// p(x) = a* x1 + b+ x2 on the plus side, a* x1 + b- x2 on the minus side.
template <typename Scalar = double>
struct Corrector {
  Scalar a_star;
  Scalar b_plus;
  Scalar b_minus;

  Scalar operator()(const Eigen::Matrix<Scalar, 2, 1>& x, Side side) const {
    return a_star * x.x() + (side == Side::Plus ? b_plus : b_minus) * x.y();
  }
  Eigen::Matrix<Scalar, 2, 1> gradient(Side side) const {
    return {a_star, side == Side::Plus ? b_plus : b_minus};
  }
};

/// a0 cos t+ sin t- - sin t+ cos t-; the corrector system is solvable iff nonzero.
template <typename Scalar>
Scalar corrector_determinant(Scalar a0, const WedgeAngles<Scalar>& w) {
  using std::cos;
  using std::sin;
  return a0 * cos(w.theta_plus) * sin(w.theta_minus) - sin(w.theta_plus) * cos(w.theta_minus);
}

/// Residuals of the three corrector equations, relative to the data scale.
template <typename Scalar>
Scalar corrector_residual(const Corrector<Scalar>& p, Scalar c_plus, Scalar c_minus, Scalar a0,
                          const WedgeAngles<Scalar>& w) {
  using std::abs;
  using std::cos;
  using std::max;
  using std::sin;
  const Scalar r1 = cos(w.theta_plus) * p.a_star + sin(w.theta_plus) * p.b_plus - c_plus;
  const Scalar r2 = cos(w.theta_minus) * p.a_star + sin(w.theta_minus) * p.b_minus - c_minus;
  const Scalar r3 = a0 * p.b_plus - p.b_minus;
  const Scalar scale = max({abs(c_plus), abs(c_minus), abs(p.a_star), abs(a0 * p.b_plus),
                            abs(p.b_minus), Scalar(1e-300)});
  return max({abs(r1), abs(r2), abs(r3)}) / scale;
}

/// Piecewise-linear solution whose tangential derivatives along the two walls
/// at the corner equal c_plus and c_minus.
template <typename Scalar>
Corrector<Scalar> corrector_solve(Scalar c_plus, Scalar c_minus, Scalar a0, const WedgeAngles<Scalar>& w) {
  using std::abs;
  using std::cos;
  using std::sin;
  if (!(a0 > Scalar(0))) throw SignError("coefficient jump a0 must be positive");
  const Scalar det = corrector_determinant(a0, w);
  if (abs(det) < Scalar(kDegeneracyTol)) {
    throw DegenerateError("corrector system is singular: a0 cos t+ sin t- - sin t+ cos t- = 0");
  }
  // Eliminate b- = a0 b+, leaving a 2x2 system in (a*, b+):
  //   cos t+ a* + sin t+ b+ = c+
  //   cos t- a* + a0 sin t- b+ = c-
  // whose determinant is det itself.
  const Scalar cp = cos(w.theta_plus), sp = sin(w.theta_plus);
  const Scalar cm = cos(w.theta_minus), sm = sin(w.theta_minus);
  const Scalar d2 = cp * a0 * sm - sp * cm;
  const Scalar a_star = (c_plus * a0 * sm - sp * c_minus) / d2;
  const Scalar b_plus = (cp * c_minus - cm * c_plus) / d2;
  return {a_star, b_plus, a0 * b_plus};
}

template <typename Scalar = double>
Corrector<Scalar> corrector_solve(Scalar c_plus, Scalar c_minus, Scalar a0, const Wedge& w) {
  return corrector_solve(c_plus, c_minus, a0, angles_of<Scalar>(w));
}

/// w(x) = C r^(1+alpha) cos((1 + alpha + tau0) theta).
template <typename Scalar = double>
struct Barrier {
  Scalar amplitude;
  Scalar alpha;
  Scalar tau0;
  WedgeAngles<Scalar> wedge;

  Scalar frequency() const { return Scalar(1) + alpha + tau0; }
};

/// Upper bound min{pi/(2 t+), -pi/(2 t-)} on 1 + alpha + tau0.
inline double barrier_frequency_bound(const Wedge& w) {
  return std::min(std::numbers::pi / (2.0 * w.theta_plus()), -std::numbers::pi / (2.0 * w.theta_minus()));
}

template <typename Scalar = double>
Barrier<Scalar> make_barrier(Scalar amplitude, Scalar alpha, Scalar tau0, const Wedge& w) {
  if (!(amplitude > Scalar(0))) throw InputError("barrier amplitude must be positive");
  if (!(alpha > Scalar(0) && alpha < Scalar(1))) throw InputError("barrier alpha must lie in (0, 1)");
  if (!(tau0 > Scalar(0) && tau0 < Scalar(1))) throw InputError("barrier tau0 must lie in (0, 1)");
  const double bound = barrier_frequency_bound(w);
  const Scalar k = Scalar(1) + alpha + tau0;
  if (!(k < Scalar(bound))) {
    std::ostringstream os;
    os << "no barrier: 1 + alpha + tau0 = " << static_cast<double>(k)
       << " must be below min{pi/(2 t+), -pi/(2 t-)} = " << bound;
    throw HypothesisError(os.str());
  }
  return {amplitude, alpha, tau0, angles_of<Scalar>(w)};
}

template <typename Scalar>
Scalar barrier_eval(const Barrier<Scalar>& b, Scalar r, Scalar theta) {
  using std::cos;
  using std::pow;
  return b.amplitude * pow(r, Scalar(1) + b.alpha) * cos(b.frequency() * theta);
}

template <typename Scalar = double>
Scalar barrier_eval(const Barrier<Scalar>& b, const PolarPoint& p) {
  return barrier_eval(b, Scalar(p.r), Scalar(p.theta));
}

}  // namespace cornerlab
