#include "ribfront/contour.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

namespace ribfront::mexpr {

using std::numbers::pi;

Cplx point_on(const Segment& s, double t) {
  if (const auto* l = std::get_if<LineSegment>(&s)) return l->from + t * (l->to - l->from);
  const auto& a = std::get<ArcSegment>(s);
  const double th = a.theta_from + t * (a.theta_to - a.theta_from);
  return a.center + std::polar(a.radius, th);
}

Cplx tangent_of(const Segment& s, double t) {
  if (const auto* l = std::get_if<LineSegment>(&s)) return l->to - l->from;
  const auto& a = std::get<ArcSegment>(s);
  const double dth = a.theta_to - a.theta_from;
  const double th = a.theta_from + t * dth;
  return Cplx(0.0, dth) * std::polar(a.radius, th);
}

PathSpec PathSpec::line(Cplx from, Cplx to) {
  PathSpec p;
  p.segments.push_back(LineSegment{from, to});
  return p;
}

PathSpec PathSpec::circle(Cplx center, double radius, int orientation, double start_angle) {
  PathSpec p;
  const double sweep = orientation >= 0 ? 2.0 * pi : -2.0 * pi;
  p.segments.push_back(ArcSegment{center, radius, start_angle, start_angle + sweep});
  return p;
}

PathSpec& PathSpec::line_to(Cplx to) {
  segments.push_back(LineSegment{end(), to});
  return *this;
}

PathSpec& PathSpec::arc_to(Cplx center, double theta_to) {
  const Cplx e = end() - center;
  segments.push_back(ArcSegment{center, std::abs(e), std::arg(e), theta_to});
  return *this;
}

Cplx PathSpec::start() const { return segments.empty() ? Cplx{} : point_on(segments.front(), 0.0); }
Cplx PathSpec::end() const { return segments.empty() ? Cplx{} : point_on(segments.back(), 1.0); }

PathSpec PathSpec::reversed() const {
  PathSpec r;
  r.tolerance = tolerance;
  for (auto it = segments.rbegin(); it != segments.rend(); ++it) {
    if (const auto* l = std::get_if<LineSegment>(&*it)) {
      r.segments.push_back(LineSegment{l->to, l->from});
    } else {
      const auto& a = std::get<ArcSegment>(*it);
      r.segments.push_back(ArcSegment{a.center, a.radius, a.theta_to, a.theta_from});
    }
  }
  return r;
}

PathSpec PathSpec::then(const PathSpec& next) const {
  PathSpec r = *this;
  r.segments.insert(r.segments.end(), next.segments.begin(), next.segments.end());
  return r;
}

double PathSpec::clearance(std::span<const Cplx> points) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : segments) {
    if (const auto* l = std::get_if<LineSegment>(&s)) {
      const Cplx d = l->to - l->from;
      const double len2 = std::norm(d);
      for (const Cplx p : points) {
        double t = len2 > 0.0 ? ((p - l->from) * std::conj(d)).real() / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        best = std::min(best, std::abs(p - (l->from + t * d)));
      }
    } else {
      constexpr int n = 256;
      for (int i = 0; i <= n; ++i) {
        const Cplx q = point_on(s, static_cast<double>(i) / n);
        for (const Cplx p : points) best = std::min(best, std::abs(p - q));
      }
    }
  }
  return best;
}

PathSpec LoopSpec::path() const { return PathSpec::circle(center, radius, orientation, -pi); }

// ---------------------------------------------------------------------------
// Quadrature

namespace {

constexpr int kNodes = 15;

struct GaussTable {
  std::array<double, kNodes> x{};
  std::array<double, kNodes> w{};

  GaussTable() {
    for (int i = 0; i < kNodes; ++i) {
      double r = std::cos(pi * (i + 0.75) / (kNodes + 0.5));
      for (int it = 0; it < 100; ++it) {
        const double p = std::legendre(kNodes, r);
        const double dp = kNodes * (r * p - std::legendre(kNodes - 1, r)) / (r * r - 1.0);
        const double dr = p / dp;
        r -= dr;
        if (std::abs(dr) < 1e-16) break;
      }
      const double dp = kNodes * (r * std::legendre(kNodes, r) - std::legendre(kNodes - 1, r)) / (r * r - 1.0);
      x[static_cast<std::size_t>(i)] = r;
      w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - r * r) * dp * dp);
    }
  }
};

const GaussTable& gauss() {
  static const GaussTable table;
  return table;
}

class Panels {
public:
  Panels(const Segment& seg, const OneForm& f, double tol)
      : seg_(seg), f_(f), tol_(tol) {}

  Cplx run() { return refine(0.0, 1.0, rule(0.0, 1.0), 0); }

private:
  static constexpr int kMaxDepth = 40;
  static constexpr long kMaxPanels = 200000;

  const Segment& seg_;
  const OneForm& f_;
  double tol_;
  long panels_ = 0;

  Cplx rule(double a, double b) {
    const auto& g = gauss();
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    Cplx sum = 0.0;
    for (int i = 0; i < kNodes; ++i) {
      const double t = mid + half * g.x[static_cast<std::size_t>(i)];
      sum += g.w[static_cast<std::size_t>(i)] * f_(point_on(seg_, t), tangent_of(seg_, t));
    }
    ++panels_;
    return half * sum;
  }

  Cplx refine(double a, double b, Cplx whole, int depth) {
    const double m = 0.5 * (a + b);
    const Cplx left = rule(a, m);
    const Cplx right = rule(m, b);
    const Cplx both = left + right;
    if (std::abs(both - whole) <= tol_ * std::max(1.0, std::abs(both))) return both;
    if (depth >= kMaxDepth || panels_ > kMaxPanels)
      throw IntegrationError("quadrature tolerance not reached after maximum subdivisions");
    return refine(a, m, left, depth + 1) + refine(m, b, right, depth + 1);
  }
};

}  // namespace

Cplx integrate_form(const PathSpec& path, const OneForm& form) {
  Cplx total = 0.0;
  for (const auto& s : path.segments) total += Panels(s, form, path.tolerance).run();
  return total;
}

Cplx integrate(const PathSpec& path, const std::function<Cplx(Cplx)>& f) {
  return integrate_form(path, [&](Cplx z, Cplx dz) { return f(z) * dz; });
}

Cplx integrate_path(const Expr& e, const PathSpec& path) {
  return integrate(path, [&](Cplx z) { return evaluate(e, z); });
}

Cplx loop_integral(const Expr& e, const LoopSpec& loop) { return integrate_path(e, loop.path()); }

// ---------------------------------------------------------------------------
// Orders

namespace {

std::optional<double> winding(const Expr& e, const Expr& de, Cplx z0, double r) {
  PathSpec loop = LoopSpec{z0, r, 1}.path();
  loop.tolerance = 1e-10;
  try {
    const Cplx v = integrate(loop, [&](Cplx z) {
      const Cplx num = evaluate(de, z);
      const Cplx den = evaluate(e, z);
      if (den == 0.0) throw PoleError(z, "zero on circle");
      return num / den;
    });
    return (v / Cplx(0.0, 2.0 * pi)).real();
  } catch (const PoleError&) {
    return std::nullopt;
  } catch (const IntegrationError&) {
    return std::nullopt;
  }
}

}  // namespace

int local_order(const Expr& e, Cplx z0, double radius) {
  const Expr de = derivative(e);
  long previous = 0;
  bool have_previous = false;
  double worst = 0.0;
  double r = radius;
  for (int i = 0; i < 30; ++i, r *= 0.5) {
    const auto w = winding(e, de, z0, r);
    if (!w) {
      have_previous = false;
      continue;
    }
    const long n = std::lround(*w);
    const double residual = std::abs(*w - static_cast<double>(n));
    worst = std::max(worst, residual);
    if (residual > 0.1) {
      have_previous = false;
      continue;
    }
    if (have_previous && previous == n) return static_cast<int>(n);
    previous = n;
    have_previous = true;
  }
  throw OrderError("non-integral winding near (" + std::to_string(z0.real()) + ", " +
                   std::to_string(z0.imag()) + "): branch point or bad radius (residual " +
                   std::to_string(worst) + ")");
}

void add_unique(std::vector<Cplx>& pts, Cplx p, double tol) {
  for (const Cplx q : pts)
    if (std::abs(p - q) < tol * (1.0 + std::abs(p))) return;
  pts.push_back(p);
}

namespace {

// Newton iteration for a zero (sign = 1) or, applied to e itself, a pole (sign = -1: the step
// z + m e/e' is Newton's method for 1/e). Evaluation fails numerically right at a pole; a small
// previous step then means z has converged.
std::optional<Cplx> newton(const Expr& e, const Expr& de, Cplx z, double multiplicity, int max_iter, double sign) {
  double last_step = std::numeric_limits<double>::infinity();
  for (int it = 0; it < max_iter; ++it) {
    const bool converged = last_step < 1e-6 * (1.0 + std::abs(z));
    const auto v = try_evaluate(e, z);
    if (!v) return converged ? std::optional<Cplx>(z) : std::nullopt;
    if (*v == 0.0) return sign > 0 ? std::optional<Cplx>(z) : std::nullopt;
    const auto dv = try_evaluate(de, z);
    if (!dv) return converged ? std::optional<Cplx>(z) : std::nullopt;
    if (*dv == 0.0) return std::nullopt;
    const Cplx step = sign * multiplicity * *v / *dv;
    last_step = std::abs(step);
    z -= step;
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || std::abs(z) > 1e8) return std::nullopt;
    if (std::abs(step) < 1e-14 * (1.0 + std::abs(z))) return z;
  }
  return std::nullopt;
}

double nearest_other(const std::vector<Cplx>& pts, std::size_t i) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < pts.size(); ++j)
    if (j != i) d = std::min(d, std::abs(pts[i] - pts[j]));
  return d;
}

}  // namespace

namespace {

std::vector<Cplx> find_roots(const Expr& e, Cplx center, double radius, double sign) {
  const Expr de = derivative(e);
  std::vector<Cplx> candidates;
  auto try_seed = [&](Cplx seed) {
    const auto z = newton(e, de, seed, 1.0, 200, sign);
    if (z && std::abs(*z - center) < radius) add_unique(candidates, *z, 1e-6);
  };
  try_seed(center);
  constexpr int rings = 8;
  constexpr int spokes = 24;
  for (int i = 1; i <= rings; ++i) {
    const double r = radius * i / rings;
    for (int j = 0; j < spokes; ++j) try_seed(center + std::polar(r, 2.0 * pi * (j + 0.5 * (i % 2)) / spokes));
  }

  std::vector<Cplx> roots;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double probe = std::min(1e-2, 0.3 * nearest_other(candidates, i));
    int order = 0;
    try {
      order = local_order(e, candidates[i], probe);
    } catch (const OrderError&) {
      continue;
    }
    if (sign * order <= 0) continue;
    Cplx z = candidates[i];
    if (const auto polished = newton(e, de, z, std::abs(order), 20, sign)) {
      if (std::abs(*polished - z) < probe) z = *polished;
    }
    add_unique(roots, z, 1e-6);
  }
  std::sort(roots.begin(), roots.end(), [](Cplx a, Cplx b) {
    if (std::abs(a.real() - b.real()) > 1e-9) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return roots;
}

}  // namespace

std::vector<Cplx> find_zeros(const Expr& e, Cplx center, double radius) { return find_roots(e, center, radius, 1.0); }

std::vector<Cplx> find_poles(const Expr& e, Cplx center, double radius) { return find_roots(e, center, radius, -1.0); }

// ---------------------------------------------------------------------------
// Path planning

namespace {

double principal_angle(double a) {
  a = std::remainder(a, 2.0 * pi);
  return a;
}

std::optional<PathSpec> log_polar(Cplx from, Cplx to, Cplx c, bool long_way) {
  const Cplx a = from - c;
  const Cplx b = to - c;
  if (std::abs(a) == 0.0 || std::abs(b) == 0.0) return std::nullopt;
  PathSpec p;
  const double th0 = std::arg(a);
  const Cplx corner = c + std::polar(std::abs(b), th0);
  if (std::abs(corner - from) > 0.0) p.segments.push_back(LineSegment{from, corner});
  double dth = principal_angle(std::arg(b) - th0);
  if (long_way) dth = dth > 0.0 ? dth - 2.0 * pi : dth + 2.0 * pi;
  if (dth != 0.0) p.segments.push_back(ArcSegment{c, std::abs(b), th0, th0 + dth});
  if (p.segments.empty()) p.segments.push_back(LineSegment{from, to});
  // Snap the endpoint so the path ends exactly at `to`.
  if (auto* arc = std::get_if<ArcSegment>(&p.segments.back())) {
    if (std::abs(p.end() - to) > 0.0) p.segments.push_back(LineSegment{p.end(), to});
    (void)arc;
  }
  return p;
}

}  // namespace

PathSpec plan_path(Cplx from, Cplx to, std::span<const Cplx> obstacles, double clearance) {
  if (from == to) return PathSpec{};
  std::vector<PathSpec> candidates;
  if (!obstacles.empty()) {
    std::vector<Cplx> by_distance(obstacles.begin(), obstacles.end());
    std::stable_sort(by_distance.begin(), by_distance.end(),
                     [&](Cplx a, Cplx b) { return std::abs(a - to) < std::abs(b - to); });
    for (const Cplx c : by_distance) {
      if (auto p = log_polar(from, to, c, false)) candidates.push_back(*p);
      if (auto p = log_polar(from, to, c, true)) candidates.push_back(*p);
    }
  }
  candidates.push_back(PathSpec::line(from, to));
  if (auto p = log_polar(from, to, 0.0, false)) candidates.push_back(*p);
  if (auto p = log_polar(from, to, 0.0, true)) candidates.push_back(*p);

  std::size_t best = 0;
  double best_clear = -1.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double c = candidates[i].clearance(obstacles);
    if (c >= clearance) return candidates[i];
    if (c > best_clear) {
      best_clear = c;
      best = i;
    }
  }
  return candidates[best];
}

}  // namespace ribfront::mexpr
