#include "ribfront/weierstrass.hpp"

#include <algorithm>
#include <limits>

namespace ribfront {

using mexpr::evaluate;

WeierstrassData WeierstrassData::scaled(double s) const {
  WeierstrassData out = *this;
  out.f = Cplx(s) * f;
  out.base_value = s * base_value;
  return out;
}

std::vector<Cplx> WeierstrassData::obstacles() const {
  std::vector<Cplx> out = punctures;
  for (const Cplx a : avoid) mexpr::add_unique(out, a);
  return out;
}

PhiForms phi_forms(const WeierstrassData& w) {
  const Expr g2 = w.g * w.g;
  return {Cplx(0.5) * (Cplx(1.0) - g2) * w.f, Cplx(0.0, 0.5) * (Cplx(1.0) + g2) * w.f, w.f * w.g};
}

PathSpec default_path(std::span<const Cplx> obstacles, Cplx from, Cplx to) {
  double gap = std::numeric_limits<double>::infinity();
  for (const Cplx p : obstacles) gap = std::min({gap, std::abs(p - from), std::abs(p - to)});
  const double clearance = std::isfinite(gap) ? 0.5 * gap : 0.0;
  return mexpr::plan_path(from, to, obstacles, clearance);
}

R3Vec immersion_increment(const PhiForms& phi, const PathSpec& path) {
  if (path.empty()) return {};
  const Cplx a = mexpr::integrate_path(phi.phi1, path);
  const Cplx b = mexpr::integrate_path(phi.phi2, path);
  const Cplx c = mexpr::integrate_path(phi.phi3, path);
  return {a.real(), b.real(), c.real()};
}

R3Vec immerse(const WeierstrassData& w, const PathSpec& path) {
  return w.base_value + immersion_increment(phi_forms(w), path);
}

R3Vec immerse(const WeierstrassData& w, Cplx z) {
  const auto obs = w.obstacles();
  return immerse(w, default_path(obs, w.base_point, z));
}

R3Vec gauss_normal(const WeierstrassData& w, Cplx z) {
  const auto g = mexpr::try_evaluate(w.g, z);
  if (!g) return {0.0, 0.0, 1.0};
  return inverse_stereographic(*g);
}

double metric_factor(const WeierstrassData& w, Cplx z) {
  const double s = 1.0 + std::norm(evaluate(w.g, z));
  return 0.25 * s * s * std::norm(evaluate(w.f, z));
}

double gauss_curv(const WeierstrassData& w, Cplx z) {
  const Cplx dg = evaluate(mexpr::derivative(w.g), z);
  const Cplx f = evaluate(w.f, z);
  const double s = 1.0 + std::norm(evaluate(w.g, z));
  return -16.0 * std::norm(dg / f) / (s * s * s * s);
}

}  // namespace ribfront
