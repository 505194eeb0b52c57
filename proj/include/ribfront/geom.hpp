#pragma once

#include <cmath>
#include <complex>

namespace ribfront {

using Cplx = std::complex<double>;

struct R3Vec {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  R3Vec& operator+=(const R3Vec& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  R3Vec& operator-=(const R3Vec& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  R3Vec& operator*=(double s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }
};

inline R3Vec operator+(R3Vec a, const R3Vec& b) { return a += b; }
inline R3Vec operator-(R3Vec a, const R3Vec& b) { return a -= b; }
inline R3Vec operator-(const R3Vec& a) { return {-a.x, -a.y, -a.z}; }
inline R3Vec operator*(double s, R3Vec a) { return a *= s; }
inline R3Vec operator*(R3Vec a, double s) { return a *= s; }
inline R3Vec operator/(R3Vec a, double s) { return a *= 1.0 / s; }

inline double dot(const R3Vec& a, const R3Vec& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm2(const R3Vec& a) { return dot(a, a); }
inline double norm(const R3Vec& a) { return std::sqrt(norm2(a)); }
inline R3Vec cross(const R3Vec& a, const R3Vec& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

/// Point of Lorentz-Minkowski 4-space, signature (-,+,+,+). x0 is the time component.
struct LorentzVec4 {
  double x0 = 0.0;
  double x1 = 0.0;
  double x2 = 0.0;
  double x3 = 0.0;

  static LorentzVec4 from(double t, const R3Vec& s) { return {t, s.x, s.y, s.z}; }
  R3Vec spatial() const { return {x1, x2, x3}; }

  LorentzVec4& operator+=(const LorentzVec4& o) {
    x0 += o.x0;
    x1 += o.x1;
    x2 += o.x2;
    x3 += o.x3;
    return *this;
  }
  LorentzVec4& operator-=(const LorentzVec4& o) {
    x0 -= o.x0;
    x1 -= o.x1;
    x2 -= o.x2;
    x3 -= o.x3;
    return *this;
  }
  LorentzVec4& operator*=(double s) {
    x0 *= s;
    x1 *= s;
    x2 *= s;
    x3 *= s;
    return *this;
  }
};

inline LorentzVec4 operator+(LorentzVec4 a, const LorentzVec4& b) { return a += b; }
inline LorentzVec4 operator-(LorentzVec4 a, const LorentzVec4& b) { return a -= b; }
inline LorentzVec4 operator*(double s, LorentzVec4 a) { return a *= s; }
inline LorentzVec4 operator*(LorentzVec4 a, double s) { return a *= s; }
inline LorentzVec4 operator/(LorentzVec4 a, double s) { return a *= 1.0 / s; }

inline double minkowski(const LorentzVec4& a, const LorentzVec4& b) {
  return -a.x0 * b.x0 + a.x1 * b.x1 + a.x2 * b.x2 + a.x3 * b.x3;
}

// Stereographic projection from the north pole: Pi(n) = (n1 + i n2) / (1 - n3).
// Every Gauss map in the library goes through this pair of functions.

/// Inverse stereographic projection. Stable for large |w|; infinity maps to (0,0,1).
inline R3Vec inverse_stereographic(Cplx w) {
  if (std::isinf(w.real()) || std::isinf(w.imag())) return {0.0, 0.0, 1.0};
  const double a = std::norm(w);
  if (a <= 1.0) {
    const double d = 1.0 + a;
    return {2.0 * w.real() / d, 2.0 * w.imag() / d, (a - 1.0) / d};
  }
  const Cplx u = 1.0 / w;  // w = 1/u, rewritten to avoid overflow
  const double b = std::norm(u);
  const double d = 1.0 + b;
  return {2.0 * u.real() / d, -2.0 * u.imag() / d, (1.0 - b) / d};
}

inline Cplx stereographic(const R3Vec& n) { return Cplx(n.x, n.y) / (1.0 - n.z); }

}  // namespace ribfront
