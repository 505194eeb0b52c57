#pragma once

// Paths in the complex plane, contour integration, and argument-principle
// order detection for meromorphic expressions.

#include <functional>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "ribfront/mexpr.hpp"

namespace ribfront::mexpr {

struct LineSegment {
  Cplx from;
  Cplx to;
};

/// Arc center + radius * exp(i theta) for theta running from theta_from to theta_to.
struct ArcSegment {
  Cplx center;
  double radius = 1.0;
  double theta_from = 0.0;
  double theta_to = 0.0;
};

using Segment = std::variant<LineSegment, ArcSegment>;

Cplx point_on(const Segment& s, double t);    // t in [0, 1]
Cplx tangent_of(const Segment& s, double t);  // dz/dt

/// Piecewise path; consecutive segments share endpoints.
class PathSpec {
public:
  std::vector<Segment> segments;
  double tolerance = 1e-13;

  static PathSpec line(Cplx from, Cplx to);
  /// Full circle starting (and ending) at angle start_angle.
  static PathSpec circle(Cplx center, double radius, int orientation, double start_angle);

  PathSpec& line_to(Cplx to);
  PathSpec& arc_to(Cplx center, double theta_to);

  bool empty() const { return segments.empty(); }
  Cplx start() const;
  Cplx end() const;
  PathSpec reversed() const;
  PathSpec then(const PathSpec& next) const;

  /// Minimum distance from the path to any of the points, sampled densely.
  double clearance(std::span<const Cplx> points) const;
};

struct LoopSpec {
  Cplx center;
  double radius = 0.1;
  int orientation = 1;

  /// Circle starting at angle -pi so a principal-branch cut through the center is crossed only at the ends.
  PathSpec path() const;
};

class IntegrationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Integral of f(z) dz along the path by adaptive 15-point Gauss-Legendre panels.
/// PoleError from the integrand propagates.
Cplx integrate(const PathSpec& path, const std::function<Cplx(Cplx)>& f);

/// A 1-form evaluated on a tangent: form(z, dz) is linear over the reals in dz.
using OneForm = std::function<Cplx(Cplx z, Cplx dz)>;
Cplx integrate_form(const PathSpec& path, const OneForm& form);

Cplx integrate_path(const Expr& e, const PathSpec& path);
Cplx loop_integral(const Expr& e, const LoopSpec& loop);

class OrderError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Order of the zero (> 0) or pole (< 0) of e at z0, from (1/2 pi i) of the loop integral of e'/e.
/// Starts at `radius` and halves until two consecutive radii give the same integer.
int local_order(const Expr& e, Cplx z0, double radius = 1e-2);

/// Zeros of e inside the disk |z - center| < radius, found by seeded Newton
/// iteration and confirmed with local_order. Deterministic order.
std::vector<Cplx> find_zeros(const Expr& e, Cplx center, double radius);
std::vector<Cplx> find_poles(const Expr& e, Cplx center, double radius);

/// Path from `from` to `to` that keeps at least `clearance` away from the obstacles when possible.
/// Preferred shape is radial-then-circular about the obstacle nearest to `to`.
PathSpec plan_path(Cplx from, Cplx to, std::span<const Cplx> obstacles, double clearance);

/// Adds p to pts unless an entry within tol already exists.
void add_unique(std::vector<Cplx>& pts, Cplx p, double tol = 1e-7);

}  // namespace ribfront::mexpr
