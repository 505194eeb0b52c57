#pragma once

// The Riccati equation h' = k h^2 f - g' attached to Weierstrass data (f, g),
// its closed-form catalog, and the loop condition Re of the integral of dg/h.

#include <optional>
#include <stdexcept>
#include <vector>

#include "ribfront/weierstrass.hpp"

namespace ribfront {

/// Which unknown is integrated: h itself or mu = 1/h (which solves mu' = g' mu^2 - k f).
enum class Chart { H, Mu };

struct RiccatiSample {
  Cplx z;
  Cplx value;  // h in the H chart, mu in the Mu chart
  Chart chart = Chart::H;
  Cplx period;  // running integral of g'/h dz (only when tracked)

  Cplx h() const;
};

struct SolveOptions {
  double tol = 1e-10;
  double switch_threshold = 10.0;
  double hysteresis = 0.9;  // a switch lands with |value| in [hysteresis * threshold, threshold]
  int max_switches = 100;
  bool track_period = false;
};

class RiccatiError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct RiccatiSolution {
  double k = 0.0;
  std::optional<Expr> closed_form;
  std::vector<RiccatiSample> samples;
  int switches = 0;

  bool is_closed_form() const { return closed_form.has_value(); }
  const RiccatiSample& back() const { return samples.back(); }
};

/// Adaptive Dormand-Prince 5(4) integration along the path with chart switching.
RiccatiSolution solve_along(const WeierstrassData& w, double k, Cplx z0, Cplx h0, const PathSpec& path,
                            const SolveOptions& opts = {});

struct ClosedForm {
  Expr h;
  double k = 0.0;
};

/// h = 2z(C - z^m) / ((m+1) z^m + (m-1) C), k = (m^2 - 1)/4, solving the equation for f = z^-2, g = z.
ClosedForm catenoid_closed_form(double m, Cplx C);

/// h = z^2 (z^3 - 1), k = 5, solving the equation for f = 1/(z^3-1)^2, g = z^2.
ClosedForm trinoid_closed_form();

/// h' - k h^2 f + g'.
Expr residual(const WeierstrassData& w, double k, const Expr& h);

/// Loop integral of g'/h dz.
Cplx period(const WeierstrassData& w, const Expr& h, const LoopSpec& loop);
double period_real(const WeierstrassData& w, const Expr& h, const LoopSpec& loop);

/// Same loop integral for a numerically continued solution, started from h0 at the loop's start point.
Cplx period_numeric(const WeierstrassData& w, double k, Cplx h0, const LoopSpec& loop, const SolveOptions& opts = {});

struct IndicialPair {
  double plus = 0.0;
  double minus = 0.0;
};

/// (1 +- sqrt(1 + 4k)) / 2.
IndicialPair singular_indices(double k);

}  // namespace ribfront
