#include "ribfront/hfront.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>

#include "ribfront/weierstrass.hpp"

namespace ribfront {

using mexpr::evaluate;

SmoothMap SmoothMap::holomorphic(const Expr& e) {
  const Expr de = mexpr::derivative(e);
  return {[e](Cplx z) { return evaluate(e, z); }, [de](Cplx z) { return evaluate(de, z); },
          [](Cplx) { return Cplx(0.0); }};
}

SmoothMap SmoothMap::from_function(std::function<Cplx(Cplx)> v, double step) {
  auto fx = [v, step](Cplx z) { return (v(z + step) - v(z - step)) / (2.0 * step); };
  auto fy = [v, step](Cplx z) { return (v(z + Cplx(0.0, step)) - v(z - Cplx(0.0, step))) / (2.0 * step); };
  return {v, [fx, fy](Cplx z) { return 0.5 * (fx(z) - Cplx(0.0, 1.0) * fy(z)); },
          [fx, fy](Cplx z) { return 0.5 * (fx(z) + Cplx(0.0, 1.0) * fy(z)); }};
}

FlatFrontData FlatFrontData::normalized(Expr gp, Expr gm, Cplx zb, std::vector<Cplx> punctures,
                                        std::vector<Cplx> avoid) {
  FlatFrontData ff;
  ff.c1 = evaluate(gp, zb) - evaluate(gm, zb);
  if (ff.c1 == 0.0) throw FrontError("G+ = G- at the base point");
  ff.gp = std::move(gp);
  ff.gm = std::move(gm);
  ff.zb = zb;
  ff.c0 = 1.0;
  ff.punctures = std::move(punctures);
  ff.avoid = std::move(avoid);
  return ff;
}

std::vector<Cplx> FlatFrontData::obstacles() const {
  std::vector<Cplx> out = punctures;
  for (const Cplx a : avoid) mexpr::add_unique(out, a);
  return out;
}

PathSpec FlatFrontData::path_to(Cplx z) const {
  const auto obs = obstacles();
  return default_path(obs, zb, z);
}

XiLogs xi_log_increment(const SmoothMap& gp, const SmoothMap& gm, const PathSpec& path) {
  if (path.empty()) return {};
  // Real parts of the two integrals are packed into one complex integrand.
  const Cplx v = mexpr::integrate_form(path, [&](Cplx z, Cplx dz) {
    const Cplx d = gp.value(z) - gm.value(z);
    if (d == 0.0) throw mexpr::PoleError(z, "G+ = G- on the integration path");
    const Cplx dp = gp.dz(z) * dz + gp.dzbar(z) * std::conj(dz);
    const Cplx dm = gm.dz(z) * dz + gm.dzbar(z) * std::conj(dz);
    return Cplx((dp / d).real(), (-dm / d).real());
  });
  return {2.0 * v.real(), 2.0 * v.imag()};
}

XiNorms xi_norms_from_logs(Cplx c0, Cplx c1, const XiLogs& logs) {
  return {std::norm(c1) * std::exp(logs.plus), std::norm(c0) * std::exp(logs.minus)};
}

XiNorms xi_norms(const FlatFrontData& ff, Cplx z, const PathSpec& path) {
  (void)z;
  const auto logs = xi_log_increment(SmoothMap::holomorphic(ff.gp), SmoothMap::holomorphic(ff.gm), path);
  return xi_norms_from_logs(ff.c0, ff.c1, logs);
}

XiNorms xi_norms(const FlatFrontData& ff, Cplx z) { return xi_norms(ff, z, ff.path_to(z)); }

namespace {

LorentzVec4 lift(Cplx G, double xi2) {
  const double a = 1.0 + std::norm(G);
  return (a / (2.0 * xi2)) * LorentzVec4::from(1.0, inverse_stereographic(G));
}

bool finite(Cplx c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

}  // namespace

FrontalSample frontal_point(Cplx gp, Cplx gm, const XiNorms& xi, Cplx z) {
  if (!finite(gp) || !finite(gm)) throw FrontError("Gauss map not finite at sample point");
  if (gp == gm) throw FrontError("G+ = G- at sample point (antipodal-free condition fails)");
  if (!(xi.plus > 0.0) || !(xi.minus > 0.0) || !std::isfinite(xi.plus) || !std::isfinite(xi.minus))
    throw FrontError("degenerate |xi|^2 at sample point");
  const LorentzVec4 p = lift(gp, xi.plus);
  const LorentzVec4 m = lift(gm, xi.minus);
  return {p + m, p - m, z, false};
}

FrontalSample frontal_from_gauss(const SmoothMap& gp, const SmoothMap& gm, Cplx c0, Cplx c1, Cplx zb, Cplx z,
                                 const PathSpec& path) {
  (void)zb;
  const auto logs = xi_log_increment(gp, gm, path);
  return frontal_point(gp.value(z), gm.value(z), xi_norms_from_logs(c0, c1, logs), z);
}

FrontalSample flat_front_point(const FlatFrontData& ff, Cplx z, const PathSpec& path) {
  return frontal_from_gauss(SmoothMap::holomorphic(ff.gp), SmoothMap::holomorphic(ff.gm), ff.c0, ff.c1, ff.zb, z,
                            path);
}

FrontalSample flat_front_point(const FlatFrontData& ff, Cplx z) { return flat_front_point(ff, z, ff.path_to(z)); }

Cplx existence_period(const SmoothMap& gp, const SmoothMap& gm, const LoopSpec& loop) {
  return mexpr::integrate_form(loop.path(), [&](Cplx z, Cplx dz) {
    const Cplx d = gp.value(z) - gm.value(z);
    if (d == 0.0) throw mexpr::PoleError(z, "G+ = G- on the loop");
    return (gp.dz(z) * dz + gp.dzbar(z) * std::conj(dz)) / d;
  });
}

LocalFront::LocalFront(const FlatFrontData& ff, Cplx anchor)
    : ff_(ff), gp_(SmoothMap::holomorphic(ff.gp)), gm_(SmoothMap::holomorphic(ff.gm)), anchor_(anchor) {
  logs_ = xi_log_increment(gp_, gm_, ff_.path_to(anchor));
}

FrontalSample LocalFront::operator()(Cplx z) const {
  XiLogs logs = logs_;
  if (z != anchor_) {
    const XiLogs inc = xi_log_increment(gp_, gm_, PathSpec::line(anchor_, z));
    logs.plus += inc.plus;
    logs.minus += inc.minus;
  }
  return frontal_point(gp_.value(z), gm_.value(z), xi_norms_from_logs(ff_.c0, ff_.c1, logs), z);
}

Envelopes envelopes(const LorentzVec4& X, const LorentzVec4& N) {
  const double r = X.x0;
  const double s = N.x0;
  const R3Vec x = X.spatial();
  const R3Vec n = N.spatial();
  const double scale = 1e-14 * (1.0 + std::abs(r) + std::abs(s));
  if (std::abs(r + s) < scale || std::abs(r - s) < scale) throw FrontError("degenerate sphere: r^2 = s^2");
  const R3Vec Np = (x + n) / (r + s);
  const R3Vec Nm = (x - n) / (r - s);
  return {x - r * Np, Np, x - r * Nm, Nm};
}

std::pair<LorentzVec4, LorentzVec4> recover_from_envelopes(const Envelopes& e) {
  if (norm2(e.Np - e.Nm) == 0.0) throw FrontError("N+ = N-: envelopes do not determine a frontal");
  const double rp = dot(e.Xp, e.Np);
  const double rm = dot(e.Xm, e.Nm);
  if (rp == 0.0 || rm == 0.0) throw FrontError("vanishing support function");
  const LorentzVec4 a = (-0.5 / rp) * LorentzVec4::from(1.0, e.Np);
  const LorentzVec4 b = (-0.5 / rm) * LorentzVec4::from(1.0, e.Nm);
  return {a + b, a - b};
}

R3Vec to_ball(const LorentzVec4& v) { return v.spatial() / (1.0 + v.x0); }

// ---------------------------------------------------------------------------
// Finite-difference form identities

namespace {

double edot(const LorentzVec4& a, const LorentzVec4& b) {
  return a.x0 * b.x0 + a.x1 * b.x1 + a.x2 * b.x2 + a.x3 * b.x3;
}

double singular_ratio(const LorentzVec4& xu, const LorentzVec4& xv) {
  const double a = edot(xu, xu);
  const double b = edot(xu, xv);
  const double c = edot(xv, xv);
  const double m = 0.5 * (a + c);
  const double d = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
  const double hi = m + d;
  const double lo = std::max(0.0, m - d);
  if (hi <= 0.0) return 0.0;
  return std::sqrt(lo / hi);
}

// Symmetric 2x2 form (E, F, G).
struct Form {
  double e = 0.0;
  double f = 0.0;
  double g = 0.0;
  Form operator+(const Form& o) const { return {e + o.e, f + o.f, g + o.g}; }
  Form operator-(const Form& o) const { return {e - o.e, f - o.f, g - o.g}; }
  Form operator*(double s) const { return {e * s, f * s, g * s}; }
  double maxabs() const { return std::max({std::abs(e), std::abs(f), std::abs(g)}); }
  double det() const { return e * g - f * f; }
};

Form operator*(double s, const Form& a) { return a * s; }

template <class V, class Dot>
Form pairing(const V& au, const V& av, const V& bu, const V& bv, Dot dotf) {
  return {dotf(au, bu), 0.5 * (dotf(au, bv) + dotf(av, bu)), dotf(av, bv)};
}

struct Curvatures {
  double H = 0.0;
  double K = 0.0;
};

Curvatures curvatures(const Form& I, const Form& II) {
  const double d = I.det();
  return {(I.e * II.g - 2.0 * I.f * II.f + I.g * II.e) / (2.0 * d), II.det() / d};
}

double relative(const Form& diff, std::initializer_list<Form> terms) {
  double scale = 0.0;
  for (const auto& t : terms) scale = std::max(scale, t.maxabs());
  return diff.maxabs() / std::max(scale, std::numeric_limits<double>::min());
}

// Brioschi formula from the metric and its derivatives at one point.
double brioschi(const Form& c, double Eu, double Ev, double Fu, double Fv, double Gu, double Gv, double Evv,
                double Fuv, double Guu) {
  auto det3 = [](const std::array<std::array<double, 3>, 3>& a) {
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  };
  const double d1 = det3({{{-0.5 * Evv + Fuv - 0.5 * Guu, 0.5 * Eu, Fu - 0.5 * Ev},
                           {Fv - 0.5 * Gu, c.e, c.f},
                           {0.5 * Gv, c.f, c.g}}});
  const double d2 = det3({{{0.0, 0.5 * Ev, 0.5 * Gu}, {0.5 * Ev, c.e, c.f}, {0.5 * Gu, c.f, c.g}}});
  const double det = c.det();
  return (d1 - d2) / (det * det);
}

// Fourth-order central differences on an integer lattice of spacing h.
template <class F>
auto d1(F f, double h) {
  return (f(-2) - 8.0 * f(-1) + 8.0 * f(1) - f(2)) * (1.0 / (12.0 * h));
}

template <class F>
auto d2(F f, double h) {
  return (-1.0 * f(-2) + 16.0 * f(-1) - 30.0 * f(0) + 16.0 * f(1) - f(2)) * (1.0 / (12.0 * h * h));
}

// Lazily evaluated samples on the lattice center + h (p + i q), |p|, |q| <= 4.
class Lattice {
public:
  static constexpr int R = 4;

  Lattice(const FrontEvaluator& eval, Cplx center, double h) : eval_(eval), center_(center), h_(h) {}

  const FrontalSample& sample(int p, int q) {
    auto& slot = cells_[idx(p, q)];
    if (!slot) {
      const FrontalSample s = eval_(center_ + h_ * Cplx(p, q));
      slot = Cell{s, envelopes(s.X, s.N)};
    }
    return slot->s;
  }
  const Envelopes& env(int p, int q) {
    sample(p, q);
    return cells_[idx(p, q)]->e;
  }

private:
  struct Cell {
    FrontalSample s;
    Envelopes e;
  };
  static std::size_t idx(int p, int q) {
    if (std::abs(p) > R || std::abs(q) > R) throw std::out_of_range("stencil offset outside lattice");
    return static_cast<std::size_t>((p + R) * (2 * R + 1) + (q + R));
  }
  const FrontEvaluator& eval_;
  Cplx center_;
  double h_;
  std::array<std::optional<Cell>, (2 * R + 1) * (2 * R + 1)> cells_;
};

}  // namespace

bool is_singular(const FrontEvaluator& eval, Cplx z, double step) {
  const LorentzVec4 xu = (eval(z + step).X - eval(z - step).X) / (2 * step);
  const LorentzVec4 xv = (eval(z + Cplx(0, step)).X - eval(z - Cplx(0, step)).X) / (2 * step);
  return singular_ratio(xu, xv) < kSingularRatio;
}

double area_density(const FrontEvaluator& eval, Cplx z, double step) {
  const FrontalSample s = eval(z);
  const LorentzVec4 xu = (eval(z + step).X - eval(z - step).X) / (2 * step);
  const LorentzVec4 xv = (eval(z + Cplx(0, step)).X - eval(z - Cplx(0, step)).X) / (2 * step);
  const std::array<std::array<double, 4>, 4> m{{{s.X.x0, s.X.x1, s.X.x2, s.X.x3},
                                                {xu.x0, xu.x1, xu.x2, xu.x3},
                                                {xv.x0, xv.x1, xv.x2, xv.x3},
                                                {s.N.x0, s.N.x1, s.N.x2, s.N.x3}}};
  // Laplace expansion along the first row.
  double det = 0.0;
  for (int c = 0; c < 4; ++c) {
    std::array<double, 9> a{};
    int k = 0;
    for (int i = 1; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (j != c) a[static_cast<std::size_t>(k++)] = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    const double minor = a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
                         a[2] * (a[3] * a[7] - a[4] * a[6]);
    det += (c % 2 ? -1.0 : 1.0) * m[0][static_cast<std::size_t>(c)] * minor;
  }
  return det;
}

FormReport form_relations_check(const std::function<FrontEvaluator(Cplx)>& local, std::span<const Cplx> centers,
                                double step, const std::vector<bool>& near_singular) {
  if (!near_singular.empty() && near_singular.size() != centers.size())
    throw std::invalid_argument("near_singular flags must match the centers");
  FormReport rep;
  const double h = step;
  for (std::size_t ci = 0; ci < centers.size(); ++ci) {
    const Cplx c = centers[ci];
    const bool skip_curvature = !near_singular.empty() && near_singular[ci];
    const FrontEvaluator eval = local(c);
    Lattice L(eval, c, h);
    try {
      // Derivatives of a lattice function at offset (p, q).
      auto Xu = [&](int p, int q) { return d1([&](int a) { return L.sample(p + a, q).X; }, h); };
      auto Xv = [&](int p, int q) { return d1([&](int a) { return L.sample(p, q + a).X; }, h); };
      auto Nu = [&](int p, int q) { return d1([&](int a) { return L.sample(p + a, q).N; }, h); };
      auto Nv = [&](int p, int q) { return d1([&](int a) { return L.sample(p, q + a).N; }, h); };

      const LorentzVec4 xu = Xu(0, 0), xv = Xv(0, 0);
      const double ratio = singular_ratio(xu, xv);
      if (ratio < kSingularRatio) {
        ++rep.singular;
        continue;
      }

      const Form I = pairing(xu, xv, xu, xv, minkowski);
      const Form II = pairing(xu, xv, Nu(0, 0), Nv(0, 0), minkowski) * -1.0;
      const Form III = pairing(Nu(0, 0), Nv(0, 0), Nu(0, 0), Nv(0, 0), minkowski);
      const double r = L.sample(0, 0).X.x0;
      const double s = L.sample(0, 0).N.x0;
      const Curvatures cx = curvatures(I, II);
      auto edot3 = [](const R3Vec& a, const R3Vec& b) { return dot(a, b); };

      double eq7 = 0.0;
      double h1k1 = 0.0;
      for (int sign : {1, -1}) {
        auto Xe = [&](int p, int q) { return sign > 0 ? L.env(p, q).Xp : L.env(p, q).Xm; };
        auto Ne = [&](int p, int q) { return sign > 0 ? L.env(p, q).Np : L.env(p, q).Nm; };
        const R3Vec Au = d1([&](int a) { return Xe(a, 0); }, h), Av = d1([&](int a) { return Xe(0, a); }, h);
        const R3Vec Bu = d1([&](int a) { return Ne(a, 0); }, h), Bv = d1([&](int a) { return Ne(0, a); }, h);
        const Form Ie = pairing(Au, Av, Au, Av, edot3);
        const Form IIe = pairing(Au, Av, Bu, Bv, edot3) * -1.0;
        const Form IIIe = pairing(Bu, Bv, Bu, Bv, edot3);
        const double sg = sign;

        const Form rI = Ie + IIe * (-2.0 * r) + IIIe * (r * r);
        const Form rIII = Ie + IIe * (2.0 * sg * s) + IIIe * (s * s);
        const Form rII = Ie * sg + IIe * (s - sg * r) + IIIe * (-r * s);
        eq7 = std::max({eq7, relative(I - rI, {I, Ie, IIe * r, IIIe * (r * r)}),
                        relative(III - rIII, {III, Ie, IIe * s, IIIe * (s * s)}),
                        relative(II - rII, {II, Ie, IIe * s, IIe * r, IIIe * (r * s)})});

        const Curvatures ce = curvatures(Ie, IIe);
        const double denom = s * s + 2.0 * cx.H * r * s + cx.K * r * r;
        const double K_pred = (1.0 - sg * 2.0 * cx.H + cx.K) / denom;
        const double H_pred = (cx.H * (s - sg * r) + r * cx.K - sg * s) / denom;
        h1k1 = std::max({h1k1, std::abs(ce.K - K_pred) / std::max(1.0, std::abs(ce.K)),
                         std::abs(ce.H - H_pred) / std::max(1.0, std::abs(ce.H))});
      }

      if (skip_curvature) {
        ++rep.near_singular;
      } else {
        // Theta from the support function of the plus envelope in the metric III+ (conformal in z).
        auto rho = [&](int p, int q) { return dot(L.env(p, q).Xp, L.env(p, q).Np); };
        const R3Vec Npu = d1([&](int a) { return L.env(a, 0).Np; }, h);
        const R3Vec Npv = d1([&](int a) { return L.env(0, a).Np; }, h);
        const double lambda = 0.5 * (norm2(Npu) + norm2(Npv));
        const double r0 = rho(0, 0);
        const double ru = d1([&](int a) { return rho(a, 0); }, h);
        const double rv = d1([&](int a) { return rho(0, a); }, h);
        const double lap =
            (d2([&](int a) { return rho(a, 0); }, h) + d2([&](int a) { return rho(0, a); }, h)) / lambda;
        const double grad2 = (ru * ru + rv * rv) / lambda;
        const double theta = r0 * r0 + r0 * lap - grad2;
        const double theta_rel = std::abs(theta) / (r0 * r0 + std::abs(r0 * lap) + grad2);

        // Brioschi curvature of I; the metric at lattice points comes from differences of X.
        auto metric = [&](int p, int q) {
          const LorentzVec4 a = Xu(p, q), b = Xv(p, q);
          return pairing(a, b, a, b, minkowski);
        };
        const Form mu = d1([&](int a) { return metric(a, 0); }, h);
        const Form mv = d1([&](int a) { return metric(0, a); }, h);
        const Form muu = d2([&](int a) { return metric(a, 0); }, h);
        const Form mvv = d2([&](int a) { return metric(0, a); }, h);
        const Form muv = d1([&](int a) { return d1([&](int b) { return metric(a, b); }, h); }, h);
        const double K = brioschi(I, mu.e, mv.e, mu.f, mv.f, mu.g, mv.g, mvv.e, muv.f, muu.g);
        rep.theta = std::max(rep.theta, theta_rel);
        rep.brioschi = std::max(rep.brioschi, std::abs(K));
      }

      rep.eq7 = std::max(rep.eq7, eq7);
      rep.h1k1 = std::max(rep.h1k1, h1k1);
      rep.min_ratio = std::min(rep.min_ratio, ratio);
      ++rep.points;
    } catch (const std::exception&) {
      ++rep.failures;
    }
  }
  return rep;
}

}  // namespace ribfront
