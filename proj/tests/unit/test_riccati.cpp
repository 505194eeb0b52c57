#include "doctest.h"
#include "fixtures.hpp"

using namespace ribfront;
using mexpr::evaluate;
using mexpr::parse;

namespace {

// Error against the closed form in the sample's own chart.
double chart_error(const RiccatiSample& s, const mexpr::Expr& h) {
  const Cplx hc = evaluate(h, s.z);
  if (s.chart == Chart::H) return std::abs(s.value - hc) / std::max(1.0, std::abs(hc));
  const Cplx mu = 1.0 / hc;
  return std::abs(s.value - mu) / std::max(1.0, std::abs(mu));
}

double worst_error(const RiccatiSolution& sol, const mexpr::Expr& h) {
  double worst = 0.0;
  for (const auto& s : sol.samples) worst = std::max(worst, chart_error(s, h));
  return worst;
}

}  // namespace

TEST_CASE("closed forms") {
  const ClosedForm cf = catenoid_closed_form(3, 2.0);
  CHECK(cf.k == 2.0);
  const auto ref = parse("z*(2-z^3)/(2*(z^3+1))");
  for (Cplx z : fx::annulus_points(200, 6, {-1.0, std::polar(1.0, std::numbers::pi / 3), std::polar(1.0, -std::numbers::pi / 3)}))
    CHECK(std::abs(evaluate(cf.h, z) - evaluate(ref, z)) < 1e-12 * (1.0 + std::abs(evaluate(ref, z))));
  CHECK_THROWS(catenoid_closed_form(1, 0.0));
  CHECK_THROWS(catenoid_closed_form(-2, 1.0));
  const ClosedForm c0 = catenoid_closed_form(3, 0.0);
  CHECK(c0.k == 2.0);
  CHECK(std::abs(evaluate(c0.h, Cplx(0.7, 0.3)) + Cplx(0.35, 0.15)) < 1e-15);

  const ClosedForm tri = trinoid_closed_form();
  CHECK(tri.k == 5.0);
  CHECK(std::abs(evaluate(tri.h, 0.0)) == 0.0);
  CHECK(mexpr::local_order(tri.h, 0.0) == 2);
}

TEST_CASE("residuals of the closed forms") {
  const WeierstrassData cat = fx::catenoid();
  const ClosedForm cf = catenoid_closed_form(3, 2.0);
  const mexpr::Expr r = residual(cat, cf.k, cf.h);
  double worst = 0.0;
  for (Cplx z : fx::annulus_points(1000, 7, fx::cube_roots(-1.0), 0.3, 3.0)) worst = std::max(worst, std::abs(evaluate(r, z)));
  CHECK(worst < 1e-9);

  const WeierstrassData tri = fx::trinoid();
  const ClosedForm tf = trinoid_closed_form();
  const mexpr::Expr rt = residual(tri, tf.k, tf.h);
  worst = 0.0;
  for (Cplx z : fx::annulus_points(1000, 8, fx::cube_roots(1.0), 0.3, 3.0)) worst = std::max(worst, std::abs(evaluate(rt, z)));
  CHECK(worst < 1e-9);

  const mexpr::Expr r0 = residual(cat, 2.0, parse("0"));
  CHECK(std::abs(evaluate(r0, Cplx(0.4, 1.1)) - 1.0) < 1e-15);
}

TEST_CASE("numeric solution against the catenoid closed form") {
  const WeierstrassData cat = fx::catenoid();
  const ClosedForm cf = catenoid_closed_form(3, 2.0);
  const auto sol = solve_along(cat, cf.k, 0.5, evaluate(cf.h, 0.5), PathSpec::line(0.5, 1.5));
  CHECK(sol.samples.size() > 2);
  CHECK(std::abs(sol.back().z - 1.5) < 1e-14);
  CHECK(worst_error(sol, cf.h) < 1e-6);
}

TEST_CASE("separable case") {
  WeierstrassData w;
  w.f = parse("1");
  w.g = parse("0");
  const Cplx h0 = 0.5;
  const auto sol = solve_along(w, 1.0, 0.0, h0, PathSpec::line(0.0, Cplx(1.0, 0.5)));
  for (const auto& s : sol.samples) {
    const Cplx exact = h0 / (1.0 - h0 * s.z);
    CHECK(std::abs(s.h() - exact) < 1e-8 * std::abs(exact));
  }
}

TEST_CASE("trinoid numeric solution") {
  const WeierstrassData tri = fx::trinoid();
  const ClosedForm tf = trinoid_closed_form();
  const Cplx z0(0.5, 0.5);
  PathSpec p = PathSpec::line(z0, Cplx(0.2, 0.3));
  p.line_to(Cplx(-0.5, 0.3));
  const auto sol = solve_along(tri, tf.k, z0, evaluate(tf.h, z0), p);
  CHECK(worst_error(sol, tf.h) < 1e-6);
}

TEST_CASE("chart switching near a pole of h") {
  const WeierstrassData cat = fx::catenoid();
  const ClosedForm cf = catenoid_closed_form(3, 2.0);
  PathSpec p = PathSpec::line(0.5, 1.5);
  p.line_to(Cplx(1.5, 1.0)).line_to(Cplx(0.53, 0.866));
  const auto sol = solve_along(cat, cf.k, 0.5, evaluate(cf.h, 0.5), p);
  CHECK(sol.switches >= 1);
  CHECK(sol.back().chart == Chart::Mu);
  CHECK(worst_error(sol, cf.h) < 1e-6);
  // h mu = 1 across each switch
  for (std::size_t i = 1; i < sol.samples.size(); ++i) {
    const auto& a = sol.samples[i - 1];
    const auto& b = sol.samples[i];
    if (a.chart != b.chart && a.z == b.z) CHECK(std::abs(a.value * b.value - 1.0) < 1e-10);
  }
}

TEST_CASE("self-convergence") {
  const WeierstrassData cat = fx::catenoid();
  const ClosedForm cf = catenoid_closed_form(3, 2.0);
  const auto rep = check_riccati_numeric(cat, cf.k, 0.5, evaluate(cf.h, 0.5), PathSpec::line(0.5, Cplx(1.5, 1.0)));
  CHECK(rep.pass);
}

TEST_CASE("periods") {
  const WeierstrassData cat = fx::catenoid();
  const ClosedForm cf = catenoid_closed_form(3, 2.0);
  for (Cplx c : fx::cube_roots(2.0)) CHECK(std::abs(period_real(cat, cf.h, LoopSpec{c, 0.1, 1})) < 1e-8);
  CHECK(std::abs(period_real(cat, cf.h, LoopSpec{0.0, 0.1, 1})) < 1e-8);
  CHECK(std::abs(period(cat, cf.h, LoopSpec{Cplx(0.3, 1.7), 0.1, 1})) < 1e-12);

  const LoopSpec loop{fx::cube_roots(2.0)[0], 0.1, 1};
  const Cplx start = loop.path().start();
  const Cplx num = period_numeric(cat, cf.k, evaluate(cf.h, start), loop);
  CHECK(std::abs(num - period(cat, cf.h, loop)) < 1e-6);
}

TEST_CASE("indicial roots") {
  const auto a = singular_indices(2.0);
  CHECK(a.plus == doctest::Approx(2.0));
  CHECK(a.minus == doctest::Approx(-1.0));
  const auto b = singular_indices(0.0);
  CHECK(b.plus == 1.0);
  CHECK(b.minus == 0.0);
  std::mt19937_64 rng(9);
  for (int i = 0; i < 20; ++i) {
    const double k = std::uniform_real_distribution<double>(-0.25, 10.0)(rng);
    const auto p = singular_indices(k);
    CHECK(std::abs(p.plus - p.minus - std::sqrt(1 + 4 * k)) < 1e-14);
  }
}
