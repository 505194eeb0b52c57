#pragma once

// Ribaucour transforms of minimal surfaces driven by a Riccati solution h,
// the Ribaucour data of the resulting pair, and end classification.

#include <string>
#include <vector>

#include "ribfront/hfront.hpp"
#include "ribfront/riccati.hpp"
#include "ribfront/weierstrass.hpp"

namespace ribfront {

struct TransformOptions {
  Cplx search_center{0.0, 0.0};
  double search_radius = 5.0;  // disk searched for zeros and poles of h
};

/// f~ = g'/(k h^2), g~ = g + h; punctures gain the zeros of h.
/// The base value is placed so the pair envelopes one sphere congruence at the normalized scale.
WeierstrassData transform(const WeierstrassData& w, const Expr& h, double k, const TransformOptions& opts = {});

/// transform(w~, -h, k).
WeierstrassData inverse_transform(const WeierstrassData& wt, const Expr& h, double k,
                                  const TransformOptions& opts = {});

struct RibaucourPair {
  WeierstrassData W;
  WeierstrassData Wt;
  Expr h;
  double k = 0.0;
  std::vector<Cplx> h_zeros;
  std::vector<Cplx> h_poles;

  static RibaucourPair build(const WeierstrassData& w, const Expr& h, double k, const TransformOptions& opts = {});

  /// Homothety factor 4k under which the pair is normalized (|X_Z|^2 = rho phi).
  double scale() const { return 4.0 * k; }

  /// Flat front with G+ = g, G- = g + h.
  FlatFrontData front() const;

  std::vector<Cplx> obstacles() const;
  PathSpec path_to(Cplx z) const;
};

struct RibaucourData {
  double rho = 0.0;
  double phi = 0.0;
};

/// rho = -|xi+|^2/(1+|g|^2), phi = -(1+|g~|^2)/|xi-|^2.
RibaucourData ribaucour_data(const RibaucourPair& pair, Cplx z, const PathSpec& path);
RibaucourData ribaucour_data(const RibaucourPair& pair, Cplx z);

/// -phi/rho = -(1+|g|^2)(1+|g~|^2)/|h|^2, evaluated pointwise.
double tau(const RibaucourPair& pair, Cplx z);

/// X_Z = (phi/2)(N - N~).
R3Vec associated_frontal(const RibaucourPair& pair, Cplx z, const PathSpec& path);
R3Vec associated_frontal(const RibaucourPair& pair, Cplx z);

struct Sphere {
  R3Vec center;
  double radius = 0.0;
  double tau = 0.0;
};

/// Center Z + tau N and radius |tau|, with Z at the normalized scale.
Sphere sphere_congruence(const RibaucourPair& pair, Cplx z, const PathSpec& path);
Sphere sphere_congruence(const RibaucourPair& pair, Cplx z);

/// Immersions of both surfaces at the normalized scale along one path.
std::pair<R3Vec, R3Vec> pair_points(const RibaucourPair& pair, const PathSpec& path);

enum class EndTag { PlanarEmbedded, PlanarNonembedded, CatenoidType, ExtendsRegularly, Unclassified };

std::string to_string(EndTag tag);

struct EndClass {
  EndTag tag = EndTag::Unclassified;
  int ord_f = 0;
  int ord_g = 0;
  int ord_h = 0;
  Cplx point;
  bool at_infinity = false;
};

/// Orders of (f, g, h) after rotating the sphere so that g(z0) = 0, then the decision table.
EndClass classify_local(const Expr& f, const Expr& g, const Expr& h, Cplx z0);
EndTag classify_orders(int ord_f, int ord_g, int ord_h);

EndClass classify_end(const RibaucourPair& pair, Cplx z0);
EndClass classify_end_at_infinity(const RibaucourPair& pair);

/// Every finite puncture of W~, then infinity when W declares it.
std::vector<EndClass> classify_all(const RibaucourPair& pair);

}  // namespace ribfront
