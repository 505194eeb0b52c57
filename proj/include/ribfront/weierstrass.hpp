#pragma once

// Minimal immersions from Weierstrass data (omega = f dz, Gauss map g).

#include <vector>

#include "ribfront/contour.hpp"
#include "ribfront/geom.hpp"
#include "ribfront/mexpr.hpp"

namespace ribfront {

using mexpr::Expr;
using mexpr::LoopSpec;
using mexpr::PathSpec;

struct WeierstrassData {
  Expr f;
  Expr g;
  std::vector<Cplx> punctures;        // finite punctures of the domain
  bool puncture_at_infinity = false;  // domain omits infinity
  std::vector<Cplx> avoid;            // further points paths keep away from (poles of g, ...)
  Cplx base_point{1.0, 0.0};
  R3Vec base_value{};

  /// Homothety by s: the immersion is multiplied by s.
  WeierstrassData scaled(double s) const;

  /// Punctures followed by the avoid list.
  std::vector<Cplx> obstacles() const;
};

struct PhiForms {
  Expr phi1;
  Expr phi2;
  Expr phi3;
};

/// (1/2 (1 - g^2) f, i/2 (1 + g^2) f, f g).
PhiForms phi_forms(const WeierstrassData& w);

/// Default integration path from the base point to z (see mexpr::plan_path).
PathSpec default_path(std::span<const Cplx> obstacles, Cplx from, Cplx to);

/// base_value + Re of the integral of Phi along the path.
R3Vec immerse(const WeierstrassData& w, const PathSpec& path);
R3Vec immerse(const WeierstrassData& w, Cplx z);

/// Re of the integral of Phi along the path (no base value).
R3Vec immersion_increment(const PhiForms& phi, const PathSpec& path);

/// Inverse stereographic image of g(z); a pole of g maps to (0,0,1).
R3Vec gauss_normal(const WeierstrassData& w, Cplx z);

/// 1/4 (1 + |g|^2)^2 |f|^2.
double metric_factor(const WeierstrassData& w, Cplx z);

/// -16 |g'/f|^2 / (1 + |g|^2)^4.
double gauss_curv(const WeierstrassData& w, Cplx z);

}  // namespace ribfront
