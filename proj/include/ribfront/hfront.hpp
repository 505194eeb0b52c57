#pragma once

// Frontals and flat fronts in hyperbolic 3-space (hyperboloid model in L^4)
// built from a pair of hyperbolic Gauss maps, and their envelope surfaces in R^3.

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "ribfront/contour.hpp"
#include "ribfront/geom.hpp"
#include "ribfront/mexpr.hpp"

namespace ribfront {

using mexpr::Expr;
using mexpr::LoopSpec;
using mexpr::PathSpec;

class FrontError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct FrontalSample {
  LorentzVec4 X;
  LorentzVec4 N;
  Cplx z;
  bool singular = false;
};

/// Smooth (not necessarily holomorphic) complex function with its Wirtinger derivatives.
struct SmoothMap {
  std::function<Cplx(Cplx)> value;
  std::function<Cplx(Cplx)> dz;
  std::function<Cplx(Cplx)> dzbar;

  static SmoothMap holomorphic(const Expr& e);
  /// Wirtinger derivatives by central differences with the given step.
  static SmoothMap from_function(std::function<Cplx(Cplx)> v, double step = 1e-6);
};

struct FlatFrontData {
  Expr gp;  // G+
  Expr gm;  // G-
  Cplx zb{1.0, 0.0};
  Cplx c0{1.0, 0.0};  // scales xi-
  Cplx c1{1.0, 0.0};  // scales xi+
  std::vector<Cplx> punctures;
  std::vector<Cplx> avoid;

  /// c0 = 1 and c1 = G+(zb) - G-(zb), so that xi+ xi- = G+ - G- at zb.
  static FlatFrontData normalized(Expr gp, Expr gm, Cplx zb, std::vector<Cplx> punctures = {},
                                  std::vector<Cplx> avoid = {});

  std::vector<Cplx> obstacles() const;
  PathSpec path_to(Cplx z) const;
};

/// 2 Re of the integrals of dG+/(G+ - G-) and dG-/(G- - G+).
struct XiLogs {
  double plus = 0.0;
  double minus = 0.0;
};

/// |xi+|^2 and |xi-|^2.
struct XiNorms {
  double plus = 0.0;
  double minus = 0.0;
};

XiLogs xi_log_increment(const SmoothMap& gp, const SmoothMap& gm, const PathSpec& path);
XiNorms xi_norms_from_logs(Cplx c0, Cplx c1, const XiLogs& logs);

XiNorms xi_norms(const FlatFrontData& ff, Cplx z, const PathSpec& path);
XiNorms xi_norms(const FlatFrontData& ff, Cplx z);

/// X = sum over +- of (1 + |G|^2)/(2 |xi|^2) (1, Pi^-1 G); N has a minus sign on the G- term.
FrontalSample frontal_point(Cplx gp, Cplx gm, const XiNorms& xi, Cplx z);

FrontalSample flat_front_point(const FlatFrontData& ff, Cplx z, const PathSpec& path);
FrontalSample flat_front_point(const FlatFrontData& ff, Cplx z);

/// General frontal from smooth Gauss maps, with xi+ = c1 exp(...), xi- = c0 exp(...).
FrontalSample frontal_from_gauss(const SmoothMap& gp, const SmoothMap& gm, Cplx c0, Cplx c1, Cplx zb, Cplx z,
                                 const PathSpec& path);

/// Loop integral of dG+/(G+ - G-); its real part must vanish for the frontal to exist.
Cplx existence_period(const SmoothMap& gp, const SmoothMap& gm, const LoopSpec& loop);

/// Evaluator of the flat front near a fixed anchor point: the xi integrals are
/// continued from the anchor along straight segments, so nearby samples share one long path.
class LocalFront {
public:
  LocalFront(const FlatFrontData& ff, Cplx anchor);
  FrontalSample operator()(Cplx z) const;
  const XiLogs& anchor_logs() const { return logs_; }

private:
  FlatFrontData ff_;
  SmoothMap gp_;
  SmoothMap gm_;
  Cplx anchor_;
  XiLogs logs_;
};

struct Envelopes {
  R3Vec Xp;
  R3Vec Np;
  R3Vec Xm;
  R3Vec Nm;
};

/// With X = (r, x), N = (s, n): X+- = x - r (x +- n)/(r +- s), N+- = (x +- n)/(r +- s).
Envelopes envelopes(const LorentzVec4& X, const LorentzVec4& N);

/// X = -(1/2 rho+)(1, N+) - (1/2 rho-)(1, N-), N likewise with the second sign flipped, rho+- = <X+-, N+->.
std::pair<LorentzVec4, LorentzVec4> recover_from_envelopes(const Envelopes& e);

/// Hyperboloid to Poincare ball: (x1, x2, x3)/(1 + x0).
R3Vec to_ball(const LorentzVec4& v);

/// Singular-value ratio of the 4x2 Jacobian [X_u X_v] below which a point is singular.
inline constexpr double kSingularRatio = 1e-6;

using FrontEvaluator = std::function<FrontalSample(Cplx)>;

/// Flags the sample singular when the finite-difference Jacobian of X has rank below 2.
bool is_singular(const FrontEvaluator& eval, Cplx z, double step = 1e-5);

/// det[X, X_u, X_v, N] by central differences; changes sign across the singular curve.
double area_density(const FrontEvaluator& eval, Cplx z, double step = 1e-5);

struct FormReport {
  double eq7 = 0.0;       // max relative residual of the three form identities, both envelopes
  double h1k1 = 0.0;      // max relative residual of the curvature identities, both envelopes
  double theta = 0.0;     // max |Theta| relative to the magnitude of its terms
  double brioschi = 0.0;  // max |K_I|
  int points = 0;
  int singular = 0;  // centers skipped because the Jacobian rank drops
  int near_singular = 0;  // flagged centers where Theta and Brioschi were skipped
  int failures = 0;  // centers where evaluation failed
  double min_ratio = 1.0;  // smallest Jacobian singular-value ratio seen at evaluated centers
};

/// `local(center)` returns an evaluator accurate near center. Central differences with the given step.
/// Centers marked in `near_singular` (same length as centers, or empty) skip Theta and Brioschi,
/// which divide by quantities that vanish on the singular curve.
FormReport form_relations_check(const std::function<FrontEvaluator(Cplx)>& local, std::span<const Cplx> centers,
                                double step, const std::vector<bool>& near_singular = {});

}  // namespace ribfront
