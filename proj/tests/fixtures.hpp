#pragma once

// Shared surfaces and sampling helpers for the tests.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "ribfront/verify.hpp"

namespace fx {

using namespace ribfront;

inline WeierstrassData catenoid() {
  WeierstrassData w;
  w.f = mexpr::parse("z^(-2)");
  w.g = mexpr::parse("z");
  w.punctures = {0.0};
  w.puncture_at_infinity = true;
  w.base_point = 1.0;
  return w;
}

inline std::vector<Cplx> cube_roots(double r) {
  std::vector<Cplx> out;
  for (int j = 0; j < 3; ++j) out.push_back(std::polar(std::cbrt(r), 2.0 * std::numbers::pi * j / 3.0));
  return out;
}

inline WeierstrassData trinoid() {
  WeierstrassData w;
  w.f = mexpr::parse("1/(z^3-1)^2");
  w.g = mexpr::parse("z^2");
  w.punctures = cube_roots(1.0);
  w.base_point = Cplx(0.5, 0.5);
  return w;
}

/// Seeded points in r_in <= |z| <= r_out away from `avoid`.
inline std::vector<Cplx> annulus_points(int n, std::uint64_t seed, std::vector<Cplx> avoid = {}, double r_in = 0.5,
                                        double r_out = 2.0, double clearance = 0.05) {
  SampleRegion r;
  r.r_in = r_in;
  r.r_out = r_out;
  r.avoid = std::move(avoid);
  r.clearance = clearance;
  return sample_points(r, n, seed);
}

inline double max_abs_diff(const R3Vec& a, const R3Vec& b) {
  return std::max({std::abs(a.x - b.x), std::abs(a.y - b.y), std::abs(a.z - b.z)});
}

inline double max_abs_diff(const LorentzVec4& a, const LorentzVec4& b) {
  return std::max({std::abs(a.x0 - b.x0), std::abs(a.x1 - b.x1), std::abs(a.x2 - b.x2), std::abs(a.x3 - b.x3)});
}

}  // namespace fx
