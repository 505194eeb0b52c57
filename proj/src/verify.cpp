#include "ribfront/verify.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <random>

namespace ribfront {

using mexpr::evaluate;

nlohmann::json CheckReport::to_json() const {
  return {{"name", name},
          {"max_residual", max_residual},
          {"tolerance", tolerance},
          {"points_tested", points_tested},
          {"failures", failures},
          {"pass", pass}};
}

nlohmann::json reports_json(const std::vector<CheckReport>& reports) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : reports) out.push_back(r.to_json());
  return out;
}

namespace {

// Accumulates pointwise residuals; evaluation failures are tolerated below 1% of points.
class Tally {
public:
  Tally(std::string name, double tolerance) { r_.name = std::move(name), r_.tolerance = tolerance; }

  template <class F>
  void at(F&& residual) {
    ++r_.points_tested;
    try {
      const double v = residual();
      if (!std::isfinite(v)) throw std::runtime_error("non-finite residual");
      r_.max_residual = std::max(r_.max_residual, v);
    } catch (const std::exception&) {
      ++r_.failures;
    }
  }

  void add(double v) { r_.max_residual = std::max(r_.max_residual, v); }

  CheckReport finish() {
    const bool few_failures = 100 * r_.failures < r_.points_tested || r_.failures == 0;
    r_.pass = r_.points_tested > r_.failures && r_.max_residual < r_.tolerance && few_failures;
    return r_;
  }

private:
  CheckReport r_;
};

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1p-53; }

double rel(double err, double scale) { return err / std::max(1.0, scale); }

std::shared_ptr<LocalFront> local_front(const FlatFrontData& ff, Cplx c) { return std::make_shared<LocalFront>(ff, c); }

FrontEvaluator local_evaluator(const FlatFrontData& ff, Cplx c) {
  auto lf = local_front(ff, c);
  return [lf](Cplx z) { return (*lf)(z); };
}

}  // namespace

SampleRegion SampleRegion::from_domain(const DomainSpec& d) {
  SampleRegion r;
  r.center = d.center;
  r.r_in = d.kind == DomainKind::Annulus ? d.r_in : d.exclusion_radius;
  r.r_out = d.r_out;
  r.rect = d.kind == DomainKind::Rect;
  r.z_min = d.z_min;
  r.z_max = d.z_max;
  r.avoid = d.punctures;
  r.clearance = d.exclusion_radius;
  return r;
}

std::vector<Cplx> sample_points(const SampleRegion& region, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Cplx> out;
  const double a2 = region.r_in * region.r_in;
  const double b2 = region.r_out * region.r_out;
  const long max_draws = 1000L * std::max(n, 1);
  for (long draws = 0; static_cast<int>(out.size()) < n && draws < max_draws; ++draws) {
    Cplx z;
    if (region.rect) {
      const double x = region.z_min.real() + (region.z_max.real() - region.z_min.real()) * unit(rng);
      const double y = region.z_min.imag() + (region.z_max.imag() - region.z_min.imag()) * unit(rng);
      z = Cplx(x, y);
    } else {
      const double r = std::sqrt(a2 + (b2 - a2) * unit(rng));
      const double t = 2.0 * std::numbers::pi * unit(rng);
      z = region.center + std::polar(r, t);
    }
    const bool clear = std::none_of(region.avoid.begin(), region.avoid.end(),
                                    [&](Cplx p) { return std::abs(z - p) < region.clearance; });
    if (clear) out.push_back(z);
  }
  return out;
}

CheckReport check_riccati(const WeierstrassData& w, double k, const Expr& h, std::span<const Cplx> pts,
                          double tol_scale) {
  Tally t("riccati", tier::algebraic * tol_scale);
  const Expr dh = mexpr::derivative(h);
  const Expr dg = mexpr::derivative(w.g);
  for (const Cplx z : pts) {
    t.at([&] {
      const Cplx hv = evaluate(h, z);
      const Cplx quad = k * hv * hv * evaluate(w.f, z);
      const Cplx gp = evaluate(dg, z);
      return rel(std::abs(evaluate(dh, z) - quad + gp), std::abs(quad) + std::abs(gp));
    });
  }
  return t.finish();
}

CheckReport check_riccati_numeric(const WeierstrassData& w, double k, Cplx z0, Cplx h0, const PathSpec& path,
                                  double tol_scale, RiccatiSolution* out) {
  Tally t("riccati_numeric", tier::quadrature * tol_scale);
  t.at([&] {
    SolveOptions coarse;
    SolveOptions fine;
    fine.tol = coarse.tol / 2.0;
    const RiccatiSolution a = solve_along(w, k, z0, h0, path, coarse);
    const Cplx b = solve_along(w, k, z0, h0, path, fine).back().h();
    if (out) *out = a;
    return rel(std::abs(a.back().h() - b), std::abs(b));
  });
  return t.finish();
}

CheckReport check_riccati_against(const WeierstrassData& w, const ClosedForm& cf, Cplx z0, const PathSpec& path,
                                  double tol_scale, RiccatiSolution* out) {
  Tally t("riccati_vs_closed_form", tier::quadrature * tol_scale);
  RiccatiSolution sol;
  try {
    sol = solve_along(w, cf.k, z0, evaluate(cf.h, z0), path);
  } catch (const std::exception&) {
    t.at([]() -> double { throw std::runtime_error("solver failed"); });
    return t.finish();
  }
  for (const RiccatiSample& s : sol.samples) {
    t.at([&] {
      const Cplx exact = evaluate(cf.h, s.z);
      const Cplx v = s.chart == Chart::H ? exact : 1.0 / exact;
      return std::abs(s.value - v) / std::max(1.0, std::abs(v));
    });
  }
  if (out) *out = std::move(sol);
  return t.finish();
}

CheckReport check_hopf(const RibaucourPair& pair, std::span<const Cplx> pts, double tol_scale) {
  Tally t("hopf", tier::algebraic * tol_scale);
  const Expr dg = mexpr::derivative(pair.W.g);
  const Expr dgt = mexpr::derivative(pair.Wt.g);
  for (const Cplx z : pts) {
    t.at([&] {
      const Cplx a = evaluate(pair.W.f, z) * evaluate(dg, z);
      const Cplx b = evaluate(pair.Wt.f, z) * evaluate(dgt, z);
      return rel(std::abs(a - b), std::abs(a));
    });
  }
  return t.finish();
}

CheckReport check_minimal(const WeierstrassData& w, std::span<const Cplx> pts, double tol_scale) {
  // Residual normalized so that 1 marks the harmonicity (1e-4) or conformality (1e-6 relative) bound.
  constexpr double harmonic_bound = 1e-4;
  constexpr double conformal_bound = 1e-6;
  Tally t("minimal", 1.0 * tol_scale);
  const PhiForms phi = phi_forms(w);
  const double e = tier::fd_step;
  for (const Cplx z : pts) {
    t.at([&] {
      auto D = [&](Cplx d) { return immersion_increment(phi, PathSpec::line(z, z + d)); };
      const R3Vec xp = D(e), xm = D(-e), yp = D(Cplx(0, e)), ym = D(Cplx(0, -e));
      const R3Vec xp2 = D(2.0 * e), xm2 = D(-2.0 * e), yp2 = D(Cplx(0, 2.0 * e)), ym2 = D(Cplx(0, -2.0 * e));
      // Fourth-order cross stencils; D(0) = 0.
      const R3Vec lap = (1.0 / (12.0 * e * e)) * (16.0 * (xp + xm + yp + ym) - (xp2 + xm2 + yp2 + ym2));
      const R3Vec zu = (1.0 / (12.0 * e)) * (8.0 * (xp - xm) - (xp2 - xm2));
      const R3Vec zv = (1.0 / (12.0 * e)) * (8.0 * (yp - ym) - (yp2 - ym2));
      const double lambda = metric_factor(w, z);
      const double conf = std::max(std::abs(norm2(zu) - norm2(zv)), std::abs(dot(zu, zv))) / lambda;
      return std::max(norm(lap) / harmonic_bound, conf / conformal_bound);
    });
  }
  return t.finish();
}

CheckReport check_sphere_congruence(const RibaucourPair& pair, std::span<const Cplx> pts, double tol_scale) {
  Tally t("sphere_congruence", tier::quadrature * tol_scale);
  for (const Cplx z : pts) {
    t.at([&] {
      const PathSpec path = pair.path_to(z);
      const Sphere s = sphere_congruence(pair, z, path);
      const auto [Z, Zt] = pair_points(pair, path);
      // Both surfaces touch the sphere: Z~ + tau N~ is the same center.
      const R3Vec c2 = Zt + s.tau * gauss_normal(pair.Wt, z);
      const double scale = std::max(std::abs(s.tau), norm(Z));
      return std::max(rel(std::abs(norm(Zt - s.center) - s.radius), scale), rel(norm(c2 - s.center), scale));
    });
  }
  return t.finish();
}

CheckReport check_ribaucour_data(const RibaucourPair& pair, std::span<const Cplx> pts, double tol_scale) {
  Tally t("ribaucour_data", tier::quadrature * tol_scale);
  for (const Cplx z : pts) {
    t.at([&] {
      const PathSpec path = pair.path_to(z);
      const RibaucourData d = ribaucour_data(pair, z, path);
      const R3Vec xz = associated_frontal(pair, z, path);
      const double tau_ratio = rel(std::abs(-d.phi / d.rho - tau(pair, z)), std::abs(tau(pair, z)));
      const double pr = d.rho * d.phi;
      return std::max(tau_ratio, rel(std::abs(norm2(xz) - pr), std::abs(pr)));
    });
  }
  return t.finish();
}

FormReport grid_form_report(const FlatFrontData& ff, const DomainSpec& domain, double step) {
  const Grid grid = sample_grid(domain);
  std::vector<double> density(grid.points.size(), 0.0);
  for (std::size_t n = 0; n < grid.points.size(); ++n) {
    if (!grid.kept[n]) continue;
    try {
      density[n] = area_density(local_evaluator(ff, grid.points[n]), grid.points[n]);
    } catch (const std::exception&) {
      density[n] = 0.0;  // the form check records the failure
    }
  }
  const std::vector<bool> flags = sign_change_flags(grid, density);
  std::vector<Cplx> centers;
  std::vector<bool> near;
  for (std::size_t n = 0; n < grid.points.size(); ++n) {
    if (!grid.kept[n]) continue;
    centers.push_back(grid.points[n]);
    near.push_back(flags[n]);
  }
  return form_relations_check([&](Cplx c) { return local_evaluator(ff, c); }, centers, step, near);
}

namespace {

CheckReport form_tally(const std::string& name, double tolerance, const FormReport& rep, double residual) {
  Tally t(name, tolerance);
  for (int i = 0; i < rep.points; ++i) t.at([] { return 0.0; });
  for (int i = 0; i < rep.failures; ++i) t.at([]() -> double { throw std::runtime_error("evaluation failed"); });
  t.add(residual);
  return t.finish();
}

}  // namespace

CheckReport flatness_report(const FormReport& rep, double tol_scale) {
  return form_tally("flatness", tier::finite_difference * tol_scale, rep, std::max(rep.theta, rep.brioschi));
}

CheckReport form_relations_report(const FormReport& rep, double tol_scale) {
  // Criterion bound for the form identities at step 1e-3.
  return form_tally("form_relations", 1e-4 * tol_scale, rep, std::max(rep.eq7, rep.h1k1));
}

CheckReport check_flatness(const FlatFrontData& ff, const DomainSpec& domain, double tol_scale) {
  return flatness_report(grid_form_report(ff, domain), tol_scale);
}

CheckReport check_form_relations(const FlatFrontData& ff, const DomainSpec& domain, double tol_scale) {
  return form_relations_report(grid_form_report(ff, domain), tol_scale);
}

CheckReport check_hyperboloid(const FlatFrontData& ff, std::span<const Cplx> pts, double tol_scale) {
  Tally t("hyperboloid", tier::algebraic * tol_scale);
  for (const Cplx z : pts) {
    t.at([&] {
      const FrontalSample s = flat_front_point(ff, z);
      const double x0 = std::abs(s.X.x0);
      const double n0 = std::abs(s.N.x0);
      return std::max({rel(std::abs(minkowski(s.X, s.X) + 1.0), x0 * x0),
                       rel(std::abs(minkowski(s.N, s.N) - 1.0), n0 * n0),
                       rel(std::abs(minkowski(s.X, s.N)), x0 * n0)});
    });
  }
  return t.finish();
}

CheckReport check_symmetry(const FlatFrontData& ff, std::span<const Cplx> pts, double tol_scale) {
  Tally t("symmetry", tier::algebraic * tol_scale);
  for (const Cplx z : pts) {
    t.at([&] {
      const FrontalSample s = flat_front_point(ff, z);
      const Envelopes e = envelopes(s.X, s.N);
      const double q = norm2(e.Xp);
      return rel(norm(q * e.Xm + e.Xp), q * norm(e.Xm) + norm(e.Xp));
    });
  }
  return t.finish();
}

CheckReport check_envelope_roundtrip(const FlatFrontData& ff, std::span<const Cplx> pts, double tol_scale) {
  Tally t("envelope_roundtrip", tier::algebraic * tol_scale);
  for (const Cplx z : pts) {
    t.at([&] {
      const FrontalSample s = flat_front_point(ff, z);
      const auto [X, N] = recover_from_envelopes(envelopes(s.X, s.N));
      const LorentzVec4 dx = X - s.X;
      const LorentzVec4 dn = N - s.N;
      auto mag = [](const LorentzVec4& v) { return std::sqrt(v.x0 * v.x0 + norm2(v.spatial())); };
      return std::max(rel(mag(dx), mag(s.X)), rel(mag(dn), mag(s.N)));
    });
  }
  return t.finish();
}

CheckReport check_periods(const RibaucourPair& pair, std::span<const LoopSpec> loops, double tol_scale) {
  Tally t("periods", tier::quadrature * tol_scale);
  for (const LoopSpec& l : loops) t.at([&] { return std::abs(period_real(pair.W, pair.h, l)); });
  return t.finish();
}

CheckReport check_periods(const FlatFrontData& ff, std::span<const LoopSpec> loops, double tol_scale) {
  Tally t("front_periods", tier::quadrature * tol_scale);
  const SmoothMap gp = SmoothMap::holomorphic(ff.gp);
  const SmoothMap gm = SmoothMap::holomorphic(ff.gm);
  for (const LoopSpec& l : loops) t.at([&] { return std::abs(existence_period(gp, gm, l).real()); });
  return t.finish();
}

std::vector<CheckReport> run_suite(const RibaucourPair& pair, std::span<const LoopSpec> loops,
                                   const SampleRegion& region, const DomainSpec& domain,
                                   const VerifyOptions& opts) {
  SampleRegion r = region;
  for (const Cplx z : pair.obstacles()) mexpr::add_unique(r.avoid, z);
  const auto pts = sample_points(r, opts.points, opts.seed);
  const auto path_pts = sample_points(r, opts.path_points, opts.seed + 1);
  const auto fd_pts = sample_points(r, opts.path_points, opts.seed + 2);
  const FlatFrontData ff = pair.front();
  const double s = opts.tol_scale;

  std::vector<CheckReport> out;
  out.push_back(check_riccati(pair.W, pair.k, pair.h, pts, s));
  out.push_back(check_hopf(pair, pts, s));
  out.push_back(check_minimal(pair.Wt, fd_pts, s));
  out.push_back(check_sphere_congruence(pair, path_pts, s));
  out.push_back(check_ribaucour_data(pair, path_pts, s));
  out.push_back(check_hyperboloid(ff, path_pts, s));
  out.push_back(check_symmetry(ff, path_pts, s));
  out.push_back(check_envelope_roundtrip(ff, path_pts, s));
  DomainSpec grid = domain;
  for (const Cplx z : pair.obstacles()) mexpr::add_unique(grid.punctures, z);
  const FormReport forms = grid_form_report(ff, grid);
  out.push_back(flatness_report(forms, s));
  out.push_back(form_relations_report(forms, s));
  out.push_back(check_periods(pair, loops, s));
  out.push_back(check_periods(ff, loops, s));
  std::sort(out.begin(), out.end(), [](const CheckReport& a, const CheckReport& b) { return a.name < b.name; });
  return out;
}

}  // namespace ribfront
