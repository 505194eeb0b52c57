#include "doctest.h"
#include "fixtures.hpp"

using namespace ribfront;
using mexpr::evaluate;

namespace {

DomainSpec small_domain(const RibaucourPair& pair) {
  DomainSpec d;
  d.nu = 25;
  d.nv = 25;
  d.punctures = pair.obstacles();
  return d;
}

std::vector<LoopSpec> loops_around(const std::vector<Cplx>& pts) {
  std::vector<LoopSpec> out;
  for (Cplx c : pts) out.push_back({c, 0.1, 1});
  return out;
}

void check_all_pass(const std::vector<CheckReport>& reports) {
  CHECK(reports.size() >= 10);
  for (std::size_t i = 1; i < reports.size(); ++i) CHECK(reports[i - 1].name < reports[i].name);
  for (const auto& r : reports) {
    INFO(r.name, " residual ", r.max_residual, " tolerance ", r.tolerance);
    CHECK(r.pass);
    CHECK(r.pass == (r.max_residual < r.tolerance));
  }
}

}  // namespace

TEST_CASE("sampling is seeded and respects the region") {
  SampleRegion r;
  r.avoid = fx::cube_roots(2.0);
  r.clearance = 0.1;
  const auto a = sample_points(r, 500, kDefaultSeed);
  CHECK(a == sample_points(r, 500, kDefaultSeed));
  CHECK(a != sample_points(r, 500, kDefaultSeed + 1));
  for (Cplx z : a) {
    CHECK(std::abs(z) >= 0.5);
    CHECK(std::abs(z) <= 2.0);
    for (Cplx c : r.avoid) CHECK(std::abs(z - c) >= 0.1);
  }
}

TEST_CASE("catenoid full suite") {
  const ClosedForm cf = catenoid_closed_form(3, 2.0);
  const RibaucourPair pair = RibaucourPair::build(fx::catenoid(), cf.h, cf.k);
  std::vector<Cplx> centers{0.0};
  for (Cplx c : fx::cube_roots(2.0)) centers.push_back(c);
  const DomainSpec d = small_domain(pair);
  const auto reports = run_suite(pair, loops_around(centers), SampleRegion::from_domain(d), d);
  check_all_pass(reports);

  const auto again = run_suite(pair, loops_around(centers), SampleRegion::from_domain(d), d);
  REQUIRE(again.size() == reports.size());
  for (std::size_t i = 0; i < reports.size(); ++i) CHECK(again[i].max_residual == reports[i].max_residual);
}

TEST_CASE("trinoid full suite") {
  const ClosedForm tf = trinoid_closed_form();
  const RibaucourPair pair = RibaucourPair::build(fx::trinoid(), tf.h, tf.k);
  std::vector<Cplx> centers{0.0};
  for (Cplx c : fx::cube_roots(1.0)) centers.push_back(c);
  const DomainSpec d = small_domain(pair);
  check_all_pass(run_suite(pair, loops_around(centers), SampleRegion::from_domain(d), d));
}

TEST_CASE("a corrupted solution fails the Riccati check") {
  const WeierstrassData w = fx::catenoid();
  const ClosedForm cf = catenoid_closed_form(3, 2.0);
  SampleRegion r;
  r.avoid = fx::cube_roots(-1.0);
  const auto pts = sample_points(r, 1000, kDefaultSeed);
  CHECK(check_riccati(w, cf.k, cf.h, pts).pass);

  const mexpr::Expr bad = cf.h + Cplx(0.01);
  const CheckReport rep = check_riccati(w, cf.k, bad, pts);
  CHECK_FALSE(rep.pass);
  CHECK(rep.max_residual > 1e3 * rep.tolerance);

  // the raw residual is of the size of the injected first-order term
  const mexpr::Expr res = residual(w, cf.k, bad);
  const Cplx z(1.1, 0.7);
  const double expected = 2.0 * 0.01 * cf.k * std::abs(evaluate(cf.h, z) * evaluate(w.f, z));
  const double got = std::abs(evaluate(res, z));
  CHECK(got > 0.5 * expected);
  CHECK(got < 2.0 * expected);
}

TEST_CASE("tolerance scaling and JSON") {
  const WeierstrassData w = fx::catenoid();
  const ClosedForm cf = catenoid_closed_form(3, 2.0);
  SampleRegion r;
  r.avoid = fx::cube_roots(-1.0);
  const auto pts = sample_points(r, 100, 1);
  const CheckReport a = check_riccati(w, cf.k, cf.h, pts);
  const CheckReport b = check_riccati(w, cf.k, cf.h, pts, 10.0);
  CHECK(a.tolerance == tier::algebraic);
  CHECK(b.tolerance == doctest::Approx(10.0 * tier::algebraic));
  CHECK(a.points_tested == 100);
  const auto j = a.to_json();
  CHECK(j["name"] == a.name);
  CHECK(j["pass"] == a.pass);
  CHECK(j.contains("max_residual"));
  CHECK(j.contains("tolerance"));
  CHECK(j.contains("points_tested"));
  CHECK(reports_json({a, b}).size() == 2);
}

TEST_CASE("period checks for the pair and the front") {
  const ClosedForm cf = catenoid_closed_form(3, 2.0);
  const RibaucourPair pair = RibaucourPair::build(fx::catenoid(), cf.h, cf.k);
  const auto loops = loops_around(fx::cube_roots(2.0));
  CHECK(check_periods(pair, loops).pass);
  CHECK(check_periods(pair.front(), loops).pass);
}
