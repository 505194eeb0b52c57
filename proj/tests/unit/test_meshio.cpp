#include <set>

#include "doctest.h"
#include "fixtures.hpp"

using namespace ribfront;

namespace {

int euler_characteristic(const SurfaceMesh& m) {
  std::set<std::pair<int, int>> edges;
  for (const auto& f : m.faces)
    for (int i = 0; i < 3; ++i) edges.insert(std::minmax(f[i], f[(i + 1) % 3]));
  return static_cast<int>(m.vertices.size()) - static_cast<int>(edges.size()) + static_cast<int>(m.faces.size());
}

VertexEvaluator immersion_of(const WeierstrassData& w) {
  return [w](Cplx z) { return VertexEval{immerse(w, z)}; };
}

}  // namespace

TEST_CASE("grid sampling") {
  DomainSpec a;
  a.r_in = 1.0;
  a.r_out = std::exp(1.0);
  a.nu = 2;
  a.nv = 4;
  a.punctures = {};
  const auto pts = sample_domain(a);
  CHECK(pts.size() == 8);
  int inner = 0, outer = 0;
  for (Cplx z : pts) {
    if (std::abs(std::abs(z) - 1.0) < 1e-14) ++inner;
    if (std::abs(std::abs(z) - std::exp(1.0)) < 1e-14) ++outer;
  }
  CHECK(inner == 4);
  CHECK(outer == 4);

  DomainSpec d;
  d.kind = DomainKind::Disk;
  d.r_out = 1.0;
  d.punctures = {0.0};
  d.exclusion_radius = 0.1;
  for (Cplx z : sample_domain(d)) CHECK(std::abs(z) >= 0.1);

  DomainSpec bad;
  bad.r_in = 3.0;
  CHECK_THROWS(bad.validate());
}

TEST_CASE("grid CSV is deterministic") {
  auto table = [] {
    DomainSpec d;
    d.punctures = fx::cube_roots(2.0);
    CsvTable t{{"re", "im"}, {}};
    for (Cplx z : sample_domain(d)) t.rows.push_back({format_real(z.real()), format_real(z.imag())});
    return csv_text(t);
  };
  const std::string a = table();
  CHECK(a == table());
  CHECK(a.rfind("re,im\n", 0) == 0);
}

TEST_CASE("catenoid mesh is a closed strip") {
  DomainSpec d;
  d.nu = 20;
  d.nv = 24;
  d.punctures = {0.0};
  const SurfaceMesh m = build_mesh(immersion_of(fx::catenoid()), sample_grid(d));
  CHECK(m.vertices.size() == 480);
  CHECK(m.failed == 0);
  CHECK(euler_characteristic(m) == 0);
  for (const auto& f : m.faces)
    for (int i : f) CHECK((i >= 0 && i < static_cast<int>(m.vertices.size())));
}

TEST_CASE("transformed catenoid mesh has holes at the planar ends") {
  const ClosedForm cf = catenoid_closed_form(3, 2.0);
  const RibaucourPair pair = RibaucourPair::build(fx::catenoid(), cf.h, cf.k);
  DomainSpec d;
  d.punctures = pair.Wt.punctures;
  d.exclusion_radius = 0.1;
  const Grid g = sample_grid(d);
  const WeierstrassData wt = pair.Wt.scaled(pair.scale());
  const SurfaceMesh m = build_mesh(immersion_of(wt), g);
  for (Cplx c : fx::cube_roots(2.0)) {
    int dropped = 0;
    for (std::size_t i = 0; i < g.points.size(); ++i)
      if (!g.kept[i] && std::abs(g.points[i] - c) < 0.1) ++dropped;
    CHECK(dropped > 0);
    for (Cplx p : m.params) CHECK(std::abs(p - c) >= 0.1);
  }
  CHECK(euler_characteristic(m) == -3);
}

TEST_CASE("flat front meshed in the ball") {
  const ClosedForm cf = catenoid_closed_form(3, 2.0);
  const FlatFrontData ff = RibaucourPair::build(fx::catenoid(), cf.h, cf.k).front();
  DomainSpec d;
  d.nu = 15;
  d.nv = 15;
  d.punctures = ff.obstacles();
  const SurfaceMesh m = build_mesh([&](Cplx z) { return VertexEval{to_ball(flat_front_point(ff, z).X)}; }, sample_grid(d));
  CHECK(!m.vertices.empty());
  for (const R3Vec& v : m.vertices) CHECK(norm(v) < 1.0);
}

TEST_CASE("failed vertices and singular flags") {
  DomainSpec d;
  d.kind = DomainKind::Rect;
  d.nu = 6;
  d.nv = 6;
  d.punctures = {};
  const Grid g = sample_grid(d);
  const SurfaceMesh m = build_mesh(
      [](Cplx z) {
        if (z.real() > 0.5 && z.imag() > 0.5) throw std::runtime_error("no value");
        return VertexEval{R3Vec{z.real(), z.imag(), 0.0}, false, z.real() < 0 ? -1.0 : 1.0};
      },
      g);
  CHECK(m.failed > 0);
  for (const auto& f : m.faces)
    for (int i : f) CHECK_FALSE((m.params[i].real() > 0.5 && m.params[i].imag() > 0.5));
  int singular = 0;
  for (std::size_t i = 0; i < m.params.size(); ++i)
    if (m.singular[i]) {
      ++singular;
      CHECK(std::abs(m.params[i].real()) < 0.5);
    }
  CHECK(singular > 0);

  CHECK_THROWS_AS(build_mesh([](Cplx z) -> VertexEval {
                    if (z.real() > -0.5) throw std::runtime_error("no value");
                    return {};
                  }, g),
                  MeshError);
}

TEST_CASE("OBJ export") {
  SurfaceMesh empty;
  const std::string e = obj_text(empty);
  CHECK(e.find("\nv ") == std::string::npos);
  CHECK(e.rfind("v ", 0) == std::string::npos);
  CHECK(parse_obj_vertices(e).empty());

  SurfaceMesh one;
  one.vertices = {R3Vec{1, 2, 3}};
  one.singular = {false};
  one.params = {0.0};
  const std::string t = obj_text(one);
  CHECK(t.find("v 1 2 3\n") != std::string::npos);

  CHECK(format_real(0.1) == "0.10000000000000001");

  SurfaceMesh many;
  std::mt19937_64 rng(31);
  std::normal_distribution<double> nd(0.0, 1e3);
  for (int i = 0; i < 300; ++i) {
    many.vertices.push_back({nd(rng), nd(rng) * 1e-9, nd(rng)});
    many.singular.push_back(false);
    many.params.push_back(0.0);
  }
  many.faces = {{0, 1, 2}, {2, 3, 4}};
  const auto back = parse_obj_vertices(obj_text(many));
  REQUIRE(back.size() == many.vertices.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].x == many.vertices[i].x);
    CHECK(back[i].y == many.vertices[i].y);
    CHECK(back[i].z == many.vertices[i].z);
  }
  CHECK(obj_text(many).find("f 1 2 3\n") != std::string::npos);
}
