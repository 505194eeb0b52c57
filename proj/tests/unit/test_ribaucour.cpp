#include "doctest.h"
#include "fixtures.hpp"

using namespace ribfront;
using mexpr::evaluate;
using mexpr::parse;

namespace {

RibaucourPair catenoid_pair(Cplx C = 2.0) {
  const ClosedForm cf = catenoid_closed_form(3, C);
  return RibaucourPair::build(fx::catenoid(), cf.h, cf.k);
}

RibaucourPair trinoid_pair() {
  const ClosedForm tf = trinoid_closed_form();
  return RibaucourPair::build(fx::trinoid(), tf.h, tf.k);
}

bool contains(const std::vector<Cplx>& v, Cplx p) {
  for (Cplx q : v)
    if (std::abs(q - p) < 1e-8) return true;
  return false;
}

std::vector<Cplx> catenoid_points(int n, std::uint64_t seed) {
  auto avoid = fx::cube_roots(2.0);
  for (Cplx c : fx::cube_roots(-1.0)) avoid.push_back(c);
  return fx::annulus_points(n, seed, avoid, 0.5, 2.0, 0.1);
}

}  // namespace

TEST_CASE("transformed Weierstrass data") {
  const ClosedForm c0 = catenoid_closed_form(3, 0.0);
  const WeierstrassData t0 = transform(fx::catenoid(), c0.h, c0.k);
  for (Cplx z : {Cplx(0.8, 0.3), Cplx(-1.2, 0.6)}) {
    CHECK(std::abs(evaluate(t0.g, z) - z / 2.0) < 1e-14);
    CHECK(std::abs(evaluate(t0.f, z) - 2.0 / (z * z)) < 1e-13);
  }

  const RibaucourPair cat = catenoid_pair();
  CHECK(contains(cat.Wt.punctures, 0.0));
  for (Cplx c : fx::cube_roots(2.0)) CHECK(contains(cat.Wt.punctures, c));

  const RibaucourPair tri = trinoid_pair();
  for (Cplx z : {Cplx(0.4, 0.3), Cplx(-0.9, 1.4)}) {
    const Cplx z3 = z * z * z;
    CHECK(std::abs(evaluate(tri.Wt.g, z) - std::pow(z, 5)) < 1e-12 * std::abs(std::pow(z, 5)));
    const Cplx ft = 2.0 * z / (5.0 * std::pow(z, 4) * (z3 - 1.0) * (z3 - 1.0));
    CHECK(std::abs(evaluate(tri.Wt.f, z) - ft) < 1e-12 * std::abs(ft));
  }

  CHECK_THROWS(transform(fx::catenoid(), parse("z"), 0.0));
  CHECK_THROWS(transform(fx::catenoid(), parse("0"), 2.0));
}

TEST_CASE("involution and Hopf preservation") {
  for (const RibaucourPair& pair : {catenoid_pair(), catenoid_pair(0.0), trinoid_pair()}) {
    const WeierstrassData back = inverse_transform(pair.Wt, pair.h, pair.k);
    const auto pts = fx::annulus_points(500, 10, pair.obstacles(), 0.5, 2.0, 0.05);
    const mexpr::Expr dg = mexpr::derivative(pair.W.g), dgt = mexpr::derivative(pair.Wt.g);
    double inv = 0.0, hopf = 0.0;
    for (Cplx z : pts) {
      const Cplx f = evaluate(pair.W.f, z), g = evaluate(pair.W.g, z);
      inv = std::max(inv, std::abs(evaluate(back.f, z) - f) / (1.0 + std::abs(f)));
      inv = std::max(inv, std::abs(evaluate(back.g, z) - g) / (1.0 + std::abs(g)));
      const Cplx q = f * evaluate(dg, z);
      hopf = std::max(hopf, std::abs(evaluate(pair.Wt.f, z) * evaluate(dgt, z) - q) / (1.0 + std::abs(q)));
    }
    CHECK(inv < 1e-12);
    CHECK(hopf < 1e-10);
  }
  // -h twice is the identity
  const RibaucourPair cat = catenoid_pair();
  const mexpr::Expr hh = -(-cat.h);
  CHECK(evaluate(hh, Cplx(0.3, 0.9)) == evaluate(cat.h, Cplx(0.3, 0.9)));
}

TEST_CASE("Ribaucour data") {
  const RibaucourPair pair = catenoid_pair();
  const double s2 = pair.scale() * pair.scale();
  for (Cplx z : catenoid_points(60, 11)) {
    const RibaucourData d = ribaucour_data(pair, z);
    CHECK(d.rho * d.phi > 0.0);

    // normalized-pair identity with the gradient in the metric of W at the normalized scale
    const double e = 1e-4;
    auto phi = [&](Cplx w) { return ribaucour_data(pair, w).phi; };
    const double pu = (phi(z + e) - phi(z - e)) / (2 * e);
    const double pv = (phi(z + Cplx(0, e)) - phi(z - Cplx(0, e))) / (2 * e);
    const double lhs = (pu * pu + pv * pv) / (s2 * metric_factor(pair.W, z)) + d.rho * d.rho;
    CHECK(std::abs(lhs - d.rho * d.phi) < 1e-6 * std::max(1.0, d.rho * d.phi));

    CHECK(std::abs(tau(pair, z) + d.phi / d.rho) < 1e-10 * std::abs(tau(pair, z)));
  }
}

TEST_CASE("associated frontal") {
  const RibaucourPair pair = catenoid_pair();
  for (Cplx z : catenoid_points(100, 12)) {
    const RibaucourData d = ribaucour_data(pair, z);
    const R3Vec X = associated_frontal(pair, z);
    const R3Vec N = gauss_normal(pair.W, z), Nt = gauss_normal(pair.Wt, z);
    const double scale = std::max(1.0, std::abs(d.rho * d.phi));
    CHECK(std::abs(dot(X, N) - d.rho) < 1e-8 * std::max(1.0, std::abs(d.rho)));
    CHECK(std::abs(norm2(X) - d.rho * d.phi) < 1e-8 * scale);
    CHECK(fx::max_abs_diff(N - (2.0 * d.rho / norm2(X)) * X, Nt) < 1e-10);
  }
}

TEST_CASE("rescaled data give the same transform") {
  const RibaucourPair pair = catenoid_pair();
  for (Cplx z : catenoid_points(40, 13)) {
    const PathSpec path = pair.path_to(z);
    const auto [Z, Zt] = pair_points(pair, path);
    const R3Vec X = associated_frontal(pair, z, path);
    const double phi = ribaucour_data(pair, z, path).phi;
    const double mag = std::max(1.0, norm(Zt));
    for (double k : {1.0, 3.0, 0.25}) {
      const R3Vec Xk = k * X;
      const R3Vec rebuilt = Z - (2.0 * k * phi / norm2(Xk)) * Xk;
      CHECK(fx::max_abs_diff(rebuilt, Zt) < 1e-10 * mag);
    }
  }
}

TEST_CASE("sphere congruence") {
  for (const RibaucourPair& pair : {catenoid_pair(), trinoid_pair()}) {
    for (Cplx z : fx::annulus_points(100, 14, pair.obstacles(), 0.5, 2.0, 0.1)) {
      const PathSpec path = pair.path_to(z);
      const Sphere s = sphere_congruence(pair, z, path);
      const R3Vec Zt = pair_points(pair, path).second;
      const double mag = std::max(1.0, std::abs(s.tau));
      CHECK(std::abs(norm(Zt - s.center) - s.radius) < 1e-8 * mag);
      CHECK(std::abs(dot(Zt - s.center, gauss_normal(pair.Wt, z)) + s.tau) < 1e-8 * mag);
    }
  }
  // the centers sweep a surface
  const RibaucourPair pair = catenoid_pair();
  const Cplx z(1.1, 0.45);
  const double e = 1e-5;
  const R3Vec cu = (sphere_congruence(pair, z + e).center - sphere_congruence(pair, z - e).center) / (2 * e);
  const R3Vec cv =
      (sphere_congruence(pair, z + Cplx(0, e)).center - sphere_congruence(pair, z - Cplx(0, e)).center) / (2 * e);
  CHECK(norm(cross(cu, cv)) > 1e-3 * norm(cu) * norm(cv));
}

TEST_CASE("end classification") {
  const RibaucourPair cat = catenoid_pair();
  for (Cplx c : fx::cube_roots(2.0)) CHECK(classify_end(cat, c).tag == EndTag::PlanarEmbedded);
  CHECK(classify_end(cat, 0.0).tag == EndTag::CatenoidType);
  CHECK(classify_end_at_infinity(cat).tag == EndTag::CatenoidType);
  const auto all = classify_all(cat);
  CHECK(all.size() == 5);

  const RibaucourPair tri = trinoid_pair();
  CHECK(classify_end(tri, 0.0).tag == EndTag::PlanarNonembedded);
  for (Cplx c : fx::cube_roots(1.0)) CHECK(classify_end(tri, c).tag == EndTag::CatenoidType);
  CHECK(classify_all(tri).size() == 4);

  CHECK(to_string(EndTag::PlanarEmbedded) == "planar_embedded");
  CHECK(to_string(EndTag::CatenoidType) == "catenoid_type");
}
