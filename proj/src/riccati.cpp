#include "ribfront/riccati.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace ribfront {

using mexpr::evaluate;

Cplx RiccatiSample::h() const {
  if (chart == Chart::H) return value;
  if (value == 0.0) return Cplx(std::numeric_limits<double>::infinity(), 0.0);
  return 1.0 / value;
}

namespace {

using State = std::array<Cplx, 2>;  // chart value, running period integral

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695, e4 = b4 - 393.0 / 640,
                 e5 = b5 - -92097.0 / 339200, e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;

State axpy(const State& y, double h, std::initializer_list<std::pair<double, const State*>> terms) {
  State out = y;
  for (const auto& [c, k] : terms)
    for (std::size_t i = 0; i < 2; ++i) out[i] += h * c * (*k)[i];
  return out;
}

class Stepper {
public:
  Stepper(const WeierstrassData& w, double k, const mexpr::Segment& seg, const SolveOptions& opts)
      : f_(w.f), dg_(mexpr::derivative(w.g)), k_(k), seg_(seg), opts_(opts) {}

  Chart chart = Chart::H;

  State rhs(double t, const State& y) const {
    const Cplx z = mexpr::point_on(seg_, t);
    const Cplx dz = mexpr::tangent_of(seg_, t);
    const Cplx f = evaluate(f_, z);
    const Cplx dg = evaluate(dg_, z);
    const Cplx v = y[0];
    State out{};
    if (chart == Chart::H) {
      out[0] = (k_ * v * v * f - dg) * dz;
      if (opts_.track_period) out[1] = dg / v * dz;
    } else {
      out[0] = (dg * v * v - k_ * f) * dz;
      if (opts_.track_period) out[1] = dg * v * dz;
    }
    return out;
  }

  // One DP45 step; returns the new state and the scaled error norm.
  std::pair<State, double> step(double t, const State& y, double h) const {
    const State k1 = rhs(t, y);
    const State k2 = rhs(t + c2 * h, axpy(y, h, {{a21, &k1}}));
    const State k3 = rhs(t + c3 * h, axpy(y, h, {{a31, &k1}, {a32, &k2}}));
    const State k4 = rhs(t + c4 * h, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const State k5 = rhs(t + c5 * h, axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const State k6 = rhs(t + h, axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    const State y5 = axpy(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const State k7 = rhs(t + h, y5);
    const State err = axpy(State{}, h, {{e1, &k1}, {e3, &k3}, {e4, &k4}, {e5, &k5}, {e6, &k6}, {e7, &k7}});
    double norm = 0.0;
    const std::size_t n = opts_.track_period ? 2 : 1;
    for (std::size_t i = 0; i < n; ++i)
      norm = std::max(norm, std::abs(err[i]) / (opts_.tol * (1.0 + std::max(std::abs(y[i]), std::abs(y5[i])))));
    return {y5, norm};
  }

  std::pair<State, double> safe_step(double t, const State& y, double h) const {
    try {
      auto r = step(t, y, h);
      if (!std::isfinite(r.second)) r.second = std::numeric_limits<double>::infinity();
      return r;
    } catch (const mexpr::PoleError&) {
      return {y, std::numeric_limits<double>::infinity()};
    }
  }

private:
  Expr f_;
  Expr dg_;
  double k_;
  const mexpr::Segment& seg_;
  const SolveOptions& opts_;
};

}  // namespace

RiccatiSolution solve_along(const WeierstrassData& w, double k, Cplx z0, Cplx h0, const PathSpec& path,
                            const SolveOptions& opts) {
  if (k == 0.0) throw RiccatiError("k must be nonzero");
  RiccatiSolution sol;
  sol.k = k;
  Chart chart = Chart::H;
  State y{h0, 0.0};
  if (std::abs(h0) > opts.switch_threshold) {
    chart = Chart::Mu;
    y[0] = 1.0 / h0;
  }
  if (!path.empty() && std::abs(path.start() - z0) > 1e-12 * (1.0 + std::abs(z0)))
    throw RiccatiError("path does not start at z0");
  sol.samples.push_back({z0, y[0], chart, y[1]});

  const double T = opts.switch_threshold;
  for (const auto& seg : path.segments) {
    Stepper st(w, k, seg, opts);
    st.chart = chart;
    double t = 0.0;
    double dt = 0.01;
    while (t < 1.0) {
      dt = std::min(dt, 1.0 - t);
      if (dt < 1e-14) throw RiccatiError("step size underflow (essential singularity or pole on path)");
      auto [ynew, err] = st.safe_step(t, y, dt);
      if (!(err <= 1.0)) {
        dt *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.5);
        continue;
      }
      double taken = dt;
      bool do_switch = false;
      if (std::abs(ynew[0]) > T) {
        // Shrink the step so the switch happens with |value| in [hysteresis*T, T].
        double lo = 0.0;
        double hi = dt;
        State best = ynew;
        double best_dt = dt;
        for (int it = 0; it < 80; ++it) {
          const double mid = 0.5 * (lo + hi);
          auto [ym, em] = st.safe_step(t, y, mid);
          const double a = std::abs(ym[0]);
          if (!(em <= 1.0) || a > T) {
            hi = mid;
          } else if (a < opts.hysteresis * T) {
            lo = mid;
            best = ym;
            best_dt = mid;
          } else {
            best = ym;
            best_dt = mid;
            break;
          }
          if (hi - lo < 1e-15) break;
        }
        ynew = best;
        taken = best_dt;
        do_switch = std::abs(ynew[0]) >= opts.hysteresis * T;
      }
      t += taken;
      if (1.0 - t < 1e-13) t = 1.0;
      y = ynew;
      const Cplx z = mexpr::point_on(seg, t);
      sol.samples.push_back({z, y[0], chart, y[1]});
      if (do_switch) {
        if (++sol.switches > opts.max_switches) throw RiccatiError("chart thrash: too many chart switches");
        chart = chart == Chart::H ? Chart::Mu : Chart::H;
        st.chart = chart;
        y[0] = 1.0 / y[0];
        sol.samples.push_back({z, y[0], chart, y[1]});
      }
      if (err > 0.0) dt = taken * std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      else dt = taken * 5.0;
    }
  }
  return sol;
}

ClosedForm catenoid_closed_form(double m, Cplx C) {
  if (!(m > 0.0)) throw std::invalid_argument("catenoid closed form requires m > 0");
  const double k = (m * m - 1.0) / 4.0;
  if (k == 0.0) throw std::invalid_argument("catenoid closed form with m = 1 gives k = 0, which is not allowed");
  const Expr z = Expr::variable();
  const Expr zm = pow(z, m);
  const Expr h = Cplx(2.0) * z * (C - zm) / (Cplx(m + 1.0) * zm + Cplx(m - 1.0) * C);
  return {h, k};
}

ClosedForm trinoid_closed_form() {
  const Expr z = Expr::variable();
  return {pow(z, 2) * (pow(z, 3) - Cplx(1.0)), 5.0};
}

Expr residual(const WeierstrassData& w, double k, const Expr& h) {
  return mexpr::derivative(h) - Cplx(k) * h * h * w.f + mexpr::derivative(w.g);
}

Cplx period(const WeierstrassData& w, const Expr& h, const LoopSpec& loop) {
  return mexpr::loop_integral(mexpr::derivative(w.g) / h, loop);
}

double period_real(const WeierstrassData& w, const Expr& h, const LoopSpec& loop) {
  return period(w, h, loop).real();
}

Cplx period_numeric(const WeierstrassData& w, double k, Cplx h0, const LoopSpec& loop, const SolveOptions& opts) {
  SolveOptions o = opts;
  o.track_period = true;
  const PathSpec p = loop.path();
  return solve_along(w, k, p.start(), h0, p, o).back().period;
}

IndicialPair singular_indices(double k) {
  const double d = 1.0 + 4.0 * k;
  if (d < 0.0) throw std::invalid_argument("indicial roots require 1 + 4k >= 0");
  const double s = std::sqrt(d);
  return {(1.0 + s) / 2.0, (1.0 - s) / 2.0};
}

}  // namespace ribfront
