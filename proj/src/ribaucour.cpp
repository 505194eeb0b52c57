#include "ribfront/ribaucour.hpp"

#include <numbers>
#include <stdexcept>

namespace ribfront {

using mexpr::evaluate;

namespace {

void require_valid(const Expr& h, double k) {
  if (k == 0.0) throw std::invalid_argument("k must be nonzero");
  if (mexpr::is_constant_expr(h) && evaluate(h, 0.0) == 0.0) throw std::invalid_argument("h is identically zero");
}

double tau_at(const Expr& g, const Expr& h, Cplx z) {
  const Cplx gv = evaluate(g, z);
  const Cplx hv = evaluate(h, z);
  return -(1.0 + std::norm(gv)) * (1.0 + std::norm(gv + hv)) / std::norm(hv);
}

}  // namespace

WeierstrassData transform(const WeierstrassData& w, const Expr& h, double k, const TransformOptions& opts) {
  require_valid(h, k);
  WeierstrassData out;
  out.f = mexpr::derivative(w.g) / (Cplx(k) * h * h);
  out.g = w.g + h;
  out.punctures = w.punctures;
  for (const Cplx z : mexpr::find_zeros(h, opts.search_center, opts.search_radius)) mexpr::add_unique(out.punctures, z);
  out.puncture_at_infinity = w.puncture_at_infinity;
  out.avoid = w.avoid;
  for (const Cplx z : mexpr::find_poles(h, opts.search_center, opts.search_radius)) mexpr::add_unique(out.avoid, z);
  out.base_point = w.base_point;
  const Cplx zb = w.base_point;
  const R3Vec n = inverse_stereographic(evaluate(w.g, zb));
  const R3Vec nt = inverse_stereographic(evaluate(out.g, zb));
  out.base_value = w.base_value + (tau_at(w.g, h, zb) / (4.0 * k)) * (n - nt);
  return out;
}

WeierstrassData inverse_transform(const WeierstrassData& wt, const Expr& h, double k, const TransformOptions& opts) {
  return transform(wt, -h, k, opts);
}

RibaucourPair RibaucourPair::build(const WeierstrassData& w, const Expr& h, double k, const TransformOptions& opts) {
  RibaucourPair p;
  p.W = w;
  p.h = h;
  p.k = k;
  p.Wt = transform(w, h, k, opts);
  p.h_zeros = mexpr::find_zeros(h, opts.search_center, opts.search_radius);
  p.h_poles = mexpr::find_poles(h, opts.search_center, opts.search_radius);
  return p;
}

std::vector<Cplx> RibaucourPair::obstacles() const {
  std::vector<Cplx> out = Wt.obstacles();
  for (const Cplx z : W.obstacles()) mexpr::add_unique(out, z);
  for (const Cplx z : h_poles) mexpr::add_unique(out, z);
  return out;
}

PathSpec RibaucourPair::path_to(Cplx z) const {
  const auto obs = obstacles();
  return default_path(obs, W.base_point, z);
}

FlatFrontData RibaucourPair::front() const {
  std::vector<Cplx> avoid = h_poles;
  for (const Cplx z : W.avoid) mexpr::add_unique(avoid, z);
  return FlatFrontData::normalized(W.g, Wt.g, W.base_point, Wt.punctures, avoid);
}

RibaucourData ribaucour_data(const RibaucourPair& pair, Cplx z, const PathSpec& path) {
  const XiNorms xi = xi_norms(pair.front(), z, path);
  const double a = 1.0 + std::norm(evaluate(pair.W.g, z));
  const double b = 1.0 + std::norm(evaluate(pair.Wt.g, z));
  return {-xi.plus / a, -b / xi.minus};
}

RibaucourData ribaucour_data(const RibaucourPair& pair, Cplx z) { return ribaucour_data(pair, z, pair.path_to(z)); }

double tau(const RibaucourPair& pair, Cplx z) { return tau_at(pair.W.g, pair.h, z); }

R3Vec associated_frontal(const RibaucourPair& pair, Cplx z, const PathSpec& path) {
  const R3Vec n = gauss_normal(pair.W, z);
  const R3Vec nt = gauss_normal(pair.Wt, z);
  if (norm2(n - nt) == 0.0) throw FrontError("N = N~: associated frontal undefined at a zero of h");
  const RibaucourData d = ribaucour_data(pair, z, path);
  return (0.5 * d.phi) * (n - nt);
}

R3Vec associated_frontal(const RibaucourPair& pair, Cplx z) { return associated_frontal(pair, z, pair.path_to(z)); }

std::pair<R3Vec, R3Vec> pair_points(const RibaucourPair& pair, const PathSpec& path) {
  const double s = pair.scale();
  return {s * immerse(pair.W, path), s * immerse(pair.Wt, path)};
}

Sphere sphere_congruence(const RibaucourPair& pair, Cplx z, const PathSpec& path) {
  const RibaucourData d = ribaucour_data(pair, z, path);
  if (d.rho == 0.0) throw FrontError("rho = 0: sphere congruence degenerates");
  const double t = -d.phi / d.rho;
  const R3Vec Z = pair.scale() * immerse(pair.W, path);
  return {Z + t * gauss_normal(pair.W, z), std::abs(t), t};
}

Sphere sphere_congruence(const RibaucourPair& pair, Cplx z) { return sphere_congruence(pair, z, pair.path_to(z)); }

std::string to_string(EndTag tag) {
  switch (tag) {
    case EndTag::PlanarEmbedded: return "planar_embedded";
    case EndTag::PlanarNonembedded: return "planar_nonembedded";
    case EndTag::CatenoidType: return "catenoid_type";
    case EndTag::ExtendsRegularly: return "extends_regularly";
    case EndTag::Unclassified: return "unclassified";
  }
  return "unclassified";
}

EndTag classify_orders(int of, int og, int oh) {
  if (of == 0) {
    if (oh == 0) return EndTag::ExtendsRegularly;
    if (og == 1 && oh == 1) return EndTag::PlanarEmbedded;
    if (og >= 2 && oh == og) return EndTag::PlanarNonembedded;
    return EndTag::Unclassified;
  }
  if (of == -2 && og == 1) return EndTag::CatenoidType;
  if (of <= -2) {
    // Planar end of W: ord f = -2 - q, ord g = p + 1 with p >= q + 1; ord h = m + 1.
    const int q = -2 - of;
    const int p = og - 1;
    const int m = oh - 1;
    if (p >= q + 1) {
      if (p == m) return EndTag::PlanarNonembedded;
      if (m == q) {
        const int P = 2 * m + 2 - p;
        if (P >= 3) return EndTag::PlanarNonembedded;
        if (P == 2) return EndTag::PlanarEmbedded;
        if (P <= 0) return EndTag::ExtendsRegularly;
      }
    }
  }
  return EndTag::Unclassified;
}

EndClass classify_local(const Expr& f, const Expr& g, const Expr& h, Cplx z0) {
  const Expr one = Expr::constant(1.0);
  Expr F;
  Expr G;
  Expr H;
  if (mexpr::local_order(g, z0) < 0) {
    // Rotate the pole of g to 0: g -> -1/g.
    F = f * g * g;
    G = -one / g;
    H = h / (g * (g + h));
  } else {
    // Value of g at z0 as the mean over a small circle (exact for holomorphic g).
    const double r = 1e-3;
    const Cplx g0 = mexpr::integrate(mexpr::LoopSpec{z0, r, 1}.path(),
                                     [&](Cplx z) { return evaluate(g, z) / (z - z0); }) /
                    Cplx(0.0, 2.0 * std::numbers::pi);
    const Cplx cg0 = std::conj(g0);
    auto R = [&](const Expr& x) { return (x - g0) / (one + cg0 * x); };
    const Expr s = one + cg0 * g;
    F = f * s * s / Cplx(1.0 + std::norm(g0));
    G = R(g);
    H = R(g + h) - G;
  }
  EndClass out;
  out.point = z0;
  out.ord_f = mexpr::local_order(F, z0);
  out.ord_g = mexpr::local_order(G, z0);
  out.ord_h = mexpr::local_order(H, z0);
  out.tag = classify_orders(out.ord_f, out.ord_g, out.ord_h);
  return out;
}

EndClass classify_end(const RibaucourPair& pair, Cplx z0) {
  return classify_local(pair.W.f, pair.W.g, pair.h, z0);
}

EndClass classify_end_at_infinity(const RibaucourPair& pair) {
  const Expr w = Expr::variable();
  const Expr inv = Expr::constant(1.0) / w;
  const Expr fw = -mexpr::substitute(pair.W.f, inv) / (w * w);
  const Expr gw = mexpr::substitute(pair.W.g, inv);
  const Expr hw = mexpr::substitute(pair.h, inv);
  EndClass out = classify_local(fw, gw, hw, 0.0);
  out.at_infinity = true;
  return out;
}

std::vector<EndClass> classify_all(const RibaucourPair& pair) {
  std::vector<EndClass> out;
  for (const Cplx z : pair.Wt.punctures) out.push_back(classify_end(pair, z));
  if (pair.W.puncture_at_infinity) out.push_back(classify_end_at_infinity(pair));
  return out;
}

}  // namespace ribfront
